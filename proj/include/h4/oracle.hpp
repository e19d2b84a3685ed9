#pragma once

#include <optional>
#include <vector>

#include "h4/certificates.hpp"
#include "h4/extremal.hpp"

namespace h4 {

// Exact decisions by subset dynamic programming over (visited set, ordered
// last triple) states. Hard cap N <= 16. A cheap randomized greedy search
// runs first so dense yes-instances return without touching the table.
std::optional<TightPath> exact_ham_path(const Hypergraph4& h);
std::optional<TightCycle> exact_ham_cycle(const Hypergraph4& h);

// Exact minimum atypical-edge count over balanced bipartitions, N <= 20.
// Written as an independent enumeration, deliberately sharing nothing with
// compute_b so the two can cross-check each other.
BApproximation exhaustive_b(const Hypergraph4& h);

enum class ScanFamily { split, split_prime, complete };

struct ThresholdRow {
  int total_vertices = 0;
  int delta3 = 0;
  std::uint64_t b_value = 0;
  bool hamiltonian = false;
};

// Tightness table over a generated family, one row per requested size.
// cycle=false asks the path question. Sizes capped at 14.
std::vector<ThresholdRow> threshold_scan(ScanFamily family, bool cycle,
                                         const std::vector<int>& sizes);

}  // namespace h4
