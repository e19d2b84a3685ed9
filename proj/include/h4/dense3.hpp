#pragma once

#include <cstdint>
#include <vector>

#include "h4/hypergraph.hpp"

namespace h4 {

// 3-uniform graph on vertex ids 0..m-1. Pair rows hold the joint
// neighborhood of {u,v} as a bitset, so tight-path extension is one row
// lookup. Sized for the auxiliary graphs of the sequencing machinery
// (at most a few hundred vertices).
class Graph3 {
 public:
  explicit Graph3(int m);
  int vertex_count() const { return m_; }
  std::uint64_t edge_count() const { return edges_; }
  void add_edge(int x, int y, int z);
  bool has_edge(int x, int y, int z) const;
  // Joint neighborhood of {u,v}.
  const DynBitset& row(int u, int v) const;
  std::uint64_t degree(int v) const { return deg_[std::size_t(v)]; }
  std::uint64_t min_degree() const;

 private:
  std::size_t at(int u, int v) const;
  int m_ = 0;
  std::uint64_t edges_ = 0;
  std::vector<DynBitset> rows_;
  std::vector<std::uint64_t> deg_;
};

// Tight path by randomized greedy extension with bounded backtracking.
// Requires |E| >= density * C(m,3); returns a path on at least
// floor(density * m / 3) vertices (usually far more on dense inputs).
std::vector<int> greedy_dense_path(const Graph3& g, double density,
                                   std::uint64_t rng_seed = 1);

// Tight Hamiltonian cycle, returned as a vertex order read cyclically.
// Requires delta1(g) > (2/3) * C(m-1, 2); under that bound the cycle
// exists, so exhausting the search budget is reported as a hard failure.
// Exact search below 13 vertices, randomized extension with restarts above.
std::vector<int> dense3_hamiltonian_cycle(const Graph3& g,
                                          std::uint64_t rng_seed = 1);

// Kuhn's augmenting-path maximum matching. adj[l] holds the right-side
// candidates of left vertex l over ids 0..nr-1. Returns the right partner
// per left vertex, -1 where unmatched.
std::vector<int> kuhn_matching(const std::vector<DynBitset>& adj, int nr);

}  // namespace h4
