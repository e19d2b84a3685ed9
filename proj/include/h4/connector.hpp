#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <vector>

#include "h4/certificates.hpp"
#include "h4/hypergraph.hpp"
#include "h4/params.hpp"

namespace h4 {

// Asks for a short tight path from one ordered triple to another, touching
// none of the avoid set. The ends appear verbatim: the path's first three
// vertices are triple_from and its last three are triple_to.
struct ConnectorRequest {
  std::array<int, 3> triple_from{};
  std::array<int, 3> triple_to{};
  std::vector<int> avoid;
  SolverParams params = SolverParams::desk();
};

// Random vertex pool whose union with either end triple carries every
// crossing quadruple of the split reference graph. At least 5 vertices per
// side, disjoint from the avoid set and both triples.
struct ConnectorSet {
  std::vector<int> members;  // sorted ascending
};

// True when both triples sit majority-A or both sit majority-B; those are
// the pairs the split reference graph can join.
bool is_h0_connected(const Partition& part, const std::array<int, 3>& t1,
                     const std::array<int, 3>& t2);

// True when every odd-crossing quadruple inside s is an edge of h.
// Duplicates in s are ignored; fewer than 4 distinct vertices is vacuous.
bool is_h0_complete(const Hypergraph4& h, const Partition& part,
                    const std::vector<int>& s);

// Draws a pool by independent per-vertex coins at rate
// sample_rate_numerator / (N/2), capped at 1, and keeps the first draw that
// is complete in union with both end triples and large enough on both sides.
// The coin stream never depends on the avoid set, so enlarging it only
// filters the same draws. Throws HypothesisViolated on a bad request and
// BudgetExhausted (with per-cause tallies) when every attempt fails; a rate
// at or above 1 makes the draw deterministic, so only one attempt runs.
ConnectorSet sample_connector_set(const Hypergraph4& h, const Partition& part,
                                  const ConnectorRequest& req,
                                  std::mt19937_64& rng);

// Builds the path: at most 12 vertices, avoid-set disjoint, every window an
// edge with exactly one minority-side vertex. A deterministic backtracking
// search over the fixed side word runs first; if the instance defeats it,
// a sampled pool supplies the interior instead.
TightPath connect_triples(const Hypergraph4& h, const Partition& part,
                          const ConnectorRequest& req, std::mt19937_64& rng);

}  // namespace h4
