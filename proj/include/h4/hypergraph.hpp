#pragma once

#include <array>
#include <cstdint>
#include <unordered_set>
#include <vector>

#include "h4/bitset.hpp"
#include "h4/errors.hpp"

namespace h4 {

// Exact binomial coefficient for small k; overflow-safe for n <= 100000, k <= 4.
std::uint64_t choose(std::uint64_t n, unsigned k);

// An edge is a sorted quadruple of distinct vertex ids.
using Edge4 = std::array<std::uint16_t, 4>;

std::uint64_t edge_key(const Edge4& e);
// Sorts and validates distinctness (throws DegenerateEdge). Range is checked
// by Hypergraph4::build, which knows the vertex count.
Edge4 make_edge(int a, int b, int c, int d);

// 4-uniform hypergraph on vertices 0..N-1 with a triple -> neighborhood index.
// Immutable after build; safe to share across threads read-only.
class Hypergraph4 {
 public:
  // Above this vertex count the flat triple table (C(N,3) rows) is not
  // materialized and neighborhoods are assembled per query.
  static constexpr int kEagerLimit = 256;

  static Hypergraph4 build(int vertex_count,
                           const std::vector<std::array<int, 4>>& quads);
  // Generator path: quadruples already sorted strictly ascending.
  static Hypergraph4 from_edges(int vertex_count, std::vector<Edge4> edges);

  int vertex_count() const { return n_; }
  std::size_t edge_count() const { return edges_.size(); }
  const std::vector<Edge4>& edges() const { return edges_; }

  bool has_edge(int a, int b, int c, int d) const;
  bool has_edge(const Edge4& e) const { return keys_.count(edge_key(e)) > 0; }

  // N_H(T) as a bitset over vertices (copies out of the flat table).
  DynBitset neighborhood(int a, int b, int c) const;
  int codegree(int a, int b, int c) const;
  int min_codegree() const;

  std::size_t triple_count() const { return choose(std::uint64_t(n_), 3); }
  // Colex rank of a sorted triple i < j < k; callers use it for side tables.
  std::size_t triple_rank(int i, int j, int k) const {
    return std::size_t(choose(std::uint64_t(k), 3) +
                       choose(std::uint64_t(j), 2) + std::uint64_t(i));
  }

 private:
  int n_ = 0;
  std::vector<Edge4> edges_;
  std::unordered_set<std::uint64_t> keys_;
  bool eager_ = false;
  std::size_t words_ = 0;
  std::vector<std::uint64_t> nbr_;  // triple_count() rows of words_ words

  void order_triple(int& a, int& b, int& c) const;
};

// Ordered bipartition (A, B) of 0..N-1. Disjointness and coverage are
// enforced; balance is a queryable property, not an invariant, because the
// anarchist transfer deliberately unbalances sides.
class Partition {
 public:
  Partition() = default;
  Partition(int n, const std::vector<int>& a_side);
  Partition(DynBitset a, DynBitset b);
  // A = first ceil(n/2) vertex ids.
  static Partition front_half(int n);

  int n() const { return int(a_.size()); }
  const DynBitset& a() const { return a_; }
  const DynBitset& b() const { return b_; }
  bool in_a(int v) const { return a_.test(std::size_t(v)); }
  int a_size() const { return na_; }
  int b_size() const { return nb_; }
  bool is_balanced() const { return na_ >= nb_ && na_ - nb_ <= 1; }
  Partition with_moved(int v) const;
  Partition swapped() const { return Partition(b_, a_); }

 private:
  DynBitset a_, b_;
  int na_ = 0, nb_ = 0;
};

// Number of the edge's vertices inside the given side.
inline int side_mass(const DynBitset& side, const Edge4& e) {
  int m = 0;
  for (auto v : e) m += side.test(v) ? 1 : 0;
  return m;
}

}  // namespace h4
