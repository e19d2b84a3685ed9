#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "h4/certificates.hpp"
#include "h4/dense3.hpp"
#include "h4/hypergraph.hpp"
#include "h4/params.hpp"
#include "h4/typicality.hpp"

namespace h4 {

// (3*|S cap A| - |S cap B|) mod 8, reduced to [0,8). Duplicates count once.
int side_difference(const Partition& part, const std::vector<int>& seq);

// Widens the classification scales until the instance's own link-density
// median fits under them: eps1 -> clamp(3*median_ratio, eps1, 0.45), then
// eps2, eps3, eps5 are raised to keep the ladder monotone. eps0 and eps4
// are left alone. No-op when params.auto_scale is false.
SolverParams effective_params(const Hypergraph4& h, const Partition& part,
                              const SolverParams& params);

// Window scale used inside sequencing and path completion, derived from the
// relaxed budget: vertices at min(1, 4*eps5), pairs at eps5^0.75, triples
// at eps5^0.5.
std::array<double, 3> seq_scale(const SolverParams& params);

// End shape of the two-word completion for leftover counts m1 <= m2 on the
// top and bottom side: t insertion slots in the top word, e kept vertices
// of its far triple, tau trailing bottom vertices after the last bottom
// slot. Unique solution of 3*m1 - m2 == 8t - 6 + 3e - tau with minimal t
// and e, tau in {0,1,2}. Throws EnvelopeViolated when 3*m1 - m2 < 2.
struct EndingShape {
  int t = 0;
  int e = 0;
  int tau = 0;
};
EndingShape ending_shape(int m1, int m2);

// Random search for a triple inside pool whose window is typical at the
// given scales. Falls back to exhaustive enumeration for small pools.
// Throws ConstructionFailed when no such triple exists or the budget runs
// out.
std::array<int, 3> find_typical_triple(const Hypergraph4& h,
                                       const TypicalityTables& tables,
                                       const DynBitset& pool, double e1,
                                       double e2, double e3,
                                       std::mt19937_64& rng);

// Vertices of pool that can be spliced into word directly after position
// `after` (0-based): every window of the extended word that touches the new
// vertex must be an edge of h. Windows clipped at the word ends are simply
// absent, so splicing after the final position only constrains the last
// realized window.
DynBitset insertion_candidates(const Hypergraph4& h,
                               const std::vector<int>& word, int after,
                               const DynBitset& pool);

struct Sequencing {
  // t_from, then X in the discovered order, then t_to. Every consecutive
  // triple is window-typical at seq_scale.
  std::vector<int> order;
};

// Core sequencing engine: no minimum-size gate, interior may be empty.
// Orders X between the boundary triples so that every window of the full
// word is typical at scale (e1,e2,e3). t_from is read outermost-first (its
// last entry touches X), t_to innermost-first (its first entry touches X).
// Small interiors are brute-forced; larger ones go through the dense
// auxiliary 3-graph. Throws SearchExhausted / HypothesisViolated.
std::vector<int> sequence_vertices(const Hypergraph4& h,
                                   const TypicalityTables& tables,
                                   const std::array<int, 3>& t_from,
                                   const std::array<int, 3>& t_to,
                                   const std::vector<int>& interior,
                                   double e1, double e2, double e3,
                                   std::mt19937_64& rng);

// Public wrapper with the hypotheses of the underlying lemma: interior all
// on one side, |X| >= seq_c * (N/2), boundary triples typical, everything
// disjoint. Records the constant c in the trace.
Sequencing sequence_through(const Hypergraph4& h, const Partition& part,
                            const SolverParams& params,
                            const std::array<int, 3>& t_from,
                            const std::array<int, 3>& t_to,
                            const std::vector<int>& interior);

struct Bridge {
  TightPath path;                // all-A end first, all-B end last
  std::array<int, 3> end_aaa{};  // path front triple, in path order
  std::array<int, 3> end_bbb{};  // path back triple, in path order
  int difference = 0;            // side_difference of the whole path
  bool z_branch = false;         // built through a shared-neighborhood vertex
};

struct BridgeOptions {
  std::vector<int> avoid;      // no construction vertex may land here
  int required_interior = -1;  // vertex that must appear inside, -1 = none
};

// Crossing path from a typical all-A triple to a typical all-B triple,
// at most 25 vertices, avoiding K. Tries the direct quadruple first, then
// routes through a common-neighborhood vertex; ends are extended to typical
// triples with connect_triples when the raw ends do not already qualify.
Bridge build_bridge(const Hypergraph4& h, const Partition& part,
                    const SolverParams& params, const BridgeOptions& opt,
                    std::mt19937_64& rng);
Bridge build_bridge(const Hypergraph4& h, const Partition& part,
                    const SolverParams& params, const std::vector<int>& K,
                    std::mt19937_64& rng);

// Two vertex-disjoint bridges; the second is built with the first's vertex
// set in its avoid list. Requires N >= params.min_solver_n.
std::pair<Bridge, Bridge> build_disjoint_bridges(const Hypergraph4& h,
                                                 const Partition& part,
                                                 const SolverParams& params,
                                                 std::mt19937_64& rng);

struct AbsorberPath {
  TightPath path;           // Q: all-A end first, all-B end last
  Bridge bridge;            // contained bridge, vertex order preserved
  std::vector<int> mediums; // absorbed medium vertices, all inside path
  std::vector<std::array<int, 7>> absorbers;  // one 7-vertex unit per medium
};

// Wraps the bridge into a path that swallows every relaxed-scale medium
// vertex: each medium rides at the center of a 7-vertex absorber whose
// window edges all lie in its typical sub-link; A-side absorbers chain onto
// the front, B-side onto the back, and the ends are finished with typical
// all-A / all-B triples. `exempt` lists mediums some other construction
// already contains (empty in the path pipeline).
AbsorberPath absorb_medium(const Hypergraph4& h, const Partition& part,
                           const SolverParams& params, const Bridge& m,
                           const std::vector<int>& exempt,
                           std::mt19937_64& rng);
AbsorberPath absorb_medium(const Hypergraph4& h, const Partition& part,
                           const SolverParams& params, const Bridge& m,
                           std::mt19937_64& rng);

// Moves every relaxed-scale anarchist to the other side, then re-checks the
// whole vertex set at scale min(1, 4*eps5). Residual failures are tolerated
// only for vertices that were already mediums (they live inside Q by then);
// anything else raises ReclassificationFailed. Side sizes must stay within
// the 5*eps0*n drift envelope.
Partition transfer_anarchists(const Hypergraph4& h, const Partition& part,
                              const SolverParams& params);

// Exact randomized backtracking: extends `start` at both ends using exactly
// the vertices of `leftover`, edge-checked, until all are placed (and the
// wrap windows close when close_cycle). Returns empty when the node budget
// runs out without success.
std::vector<int> extend_exhaustive(const Hypergraph4& h,
                                   const std::vector<int>& start,
                                   const std::vector<int>& leftover,
                                   bool close_cycle, long long node_budget,
                                   std::mt19937_64& rng);

// Extends Q to a Hamiltonian tight path: sequences the leftover B-side,
// measures insertion degrees, sequences the low-degree A-side leftovers,
// matches top insertion slots against the tail of the B-word, and closes
// the remainder with a second matching. Small remainders go through
// extend_exhaustive directly. The output is certificate-verified and spans
// V(H) exactly.
TightPath complete_path(const Hypergraph4& h, const Partition& part,
                        const SolverParams& params, const AbsorberPath& q);

// Full pipeline: threshold check, split search, scale fitting,
// classification, bridge, absorption, transfer, completion. Failures carry
// the first failing stage in their message.
TightPath solve_ham_path(const Hypergraph4& h, const SolverParams& params);

}  // namespace h4
