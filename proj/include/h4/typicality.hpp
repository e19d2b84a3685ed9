#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "h4/hypergraph.hpp"
#include "h4/params.hpp"

namespace h4 {

// Triples in a vertex link, split by how many of the three lie in A.
struct LinkProfile {
  std::uint64_t l_aaa = 0;
  std::uint64_t l_aab = 0;
  std::uint64_t l_abb = 0;
  std::uint64_t l_bbb = 0;
  std::uint64_t degree() const { return l_aaa + l_aab + l_abb + l_bbb; }
};

// Pairs completing a fixed vertex pair to an edge, split by side pattern.
struct PairProfile {
  std::uint64_t l_aa = 0;
  std::uint64_t l_ab = 0;
  std::uint64_t l_bb = 0;
  std::uint64_t degree() const { return l_aa + l_ab + l_bb; }
};

// Neighborhood of a triple, split by side.
struct TripleProfile {
  int d_a = 0;
  int d_b = 0;
  int degree() const { return d_a + d_b; }
};

enum class VertexKind { typical, medium, anarchist };

const char* vertex_kind_name(VertexKind k);

struct VertexClass {
  VertexKind kind = VertexKind::typical;
  double eps = 0.0;
  // On tiny instances the typical and anarchist tests can hold at once;
  // anarchist wins and the collision is flagged here.
  bool ambiguous = false;
};

LinkProfile link_profile(const Hypergraph4& h, const Partition& part, int v);
PairProfile pair_profile(const Hypergraph4& h, const Partition& part, int u,
                         int v);
TripleProfile triple_profile(const Hypergraph4& h, const Partition& part,
                             int x, int y, int z);

VertexClass classify_vertex(const Hypergraph4& h, const Partition& part, int v,
                            double eps);
// True when the pair's cross link is small for its pattern.
bool classify_pair(const Hypergraph4& h, const Partition& part, int u, int v,
                   double eps);
// True when the triple's neighborhood is lopsided the right way.
bool classify_triple(const Hypergraph4& h, const Partition& part, int x, int y,
                     int z, double eps);
// Composite test at three scales: every vertex passes the typical test at
// eps1, every pair at eps2, and the triple itself at eps3.
bool typical_triple(const Hypergraph4& h, const Partition& part, int x, int y,
                    int z, const SolverParams& params);

// Pair patterns index atypical_pairs; triple patterns index atypical_triples.
enum : int { kPairAA = 0, kPairAB = 1, kPairBB = 2 };
enum : int { kTripleAAA = 0, kTripleAAB = 1, kTripleABB = 2, kTripleBBB = 3 };

// Batched profiles filled by one sweep over the edges: per-vertex links,
// per-pair cross counts, per-triple side codegrees. The sequencing and
// assembly machinery classifies thousands of triples per solve; per-call
// edge scans would dominate everything, these lookups are O(1).
struct TypicalityTables {
  const Hypergraph4* h = nullptr;
  const Partition* part = nullptr;
  int n = 0;
  std::vector<LinkProfile> links;
  std::vector<std::uint32_t> pair_aa, pair_ab, pair_bb;  // u*n+v slots, u < v
  std::vector<std::uint16_t> trip_da, trip_db;           // triple_rank slots

  std::size_t pair_at(int u, int v) const {
    if (u > v) std::swap(u, v);
    return std::size_t(u) * std::size_t(n) + std::size_t(v);
  }
  VertexClass vertex_class(int v, double eps) const;
  // Typical test alone: matches the vertex criterion of typical_triple.
  bool vertex_passes(int v, double eps) const;
  bool pair_typical(int u, int v, double eps) const;
  bool triple_typical(int x, int y, int z, double eps) const;
  // Composite window test: vertices at e1, pairs at e2, the triple at e3.
  bool window_typical(int x, int y, int z, double e1, double e2,
                      double e3) const;
};

TypicalityTables build_tables(const Hypergraph4& h, const Partition& part);

struct TypicalityReport {
  double eps_vertex = 0.0;
  double eps_pair = 0.0;
  double eps_triple = 0.0;
  std::vector<VertexClass> vclass;
  std::vector<LinkProfile> links;
  // l_aab - l_abb per vertex; the move gain bookkeeping reuses it.
  std::vector<long long> imbalance;
  int typical_count = 0;
  int medium_count = 0;
  int anarchist_count = 0;
  std::uint64_t atypical_pairs[3] = {0, 0, 0};
  std::uint64_t atypical_triples[4] = {0, 0, 0, 0};
  // One "vclass <v> <kind>" line per vertex.
  void write(std::ostream& os) const;
};

TypicalityReport classify_all(const Hypergraph4& h, const Partition& part,
                              const SolverParams& params);

struct ClaimRow {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  bool pass = false;
};

struct ClaimReport {
  std::vector<ClaimRow> rows;
  bool all_pass() const;
  const ClaimRow* find(const std::string& name) const;
  // One "claim <name> <lhs> <rhs> <pass>" line per row.
  void write(std::ostream& os) const;
};

// Crossing quadruples missing from H, against the (c1+4c)/3 budget.
ClaimRow check_claim_edges(const Hypergraph4& h, const Partition& part,
                           double c, double c1,
                           const SolverParams& params = SolverParams::desk());

// An anarchist on one side forces 3*eps-typicality of the whole other side,
// up to slack_c2*n^2. Requires the partition to attain the minimum split
// count; vacuously true without anarchists.
bool check_fact1(const Hypergraph4& h, const Partition& part, double eps,
                 const SolverParams& params = SolverParams::desk());

// Atypicality counting bounds: few atypical vertices overall, few atypical
// pairs through any typical vertex, few atypical triples through any typical
// vertex or pair, and almost all triples fully typical.
ClaimReport check_counting_claims(const Hypergraph4& h, const Partition& part,
                                  const SolverParams& params);

// Lower bounds a typical item inherits from the codegree floor. item holds
// 1, 2 or 3 distinct vertex ids.
ClaimReport derived_bounds(const Hypergraph4& h, const Partition& part,
                           const std::vector<int>& item, double eps);

}  // namespace h4
