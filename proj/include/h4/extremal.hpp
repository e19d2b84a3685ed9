#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "h4/hypergraph.hpp"

namespace h4 {

// Split construction: A = first a_size ids, B = the rest; edges are the
// quadruples meeting A in 1 or 3 vertices, optionally plus the all-A and
// all-B quadruples.
Hypergraph4 build_h0(int a_size, int b_size, bool include_neutral);

// Split construction plus one universal vertex (id a_size + b_size) joined
// to every triple.
Hypergraph4 build_h0_prime(int a_size, int b_size);

struct InstanceRecipe {
  int half_size = 20;   // n: nominal side size, N = 2n or 2n+1
  bool odd_total = false;
  bool include_neutral = true;
  int medium_seeds = 0;  // s: size of the planted sets S_A, S_B
  int anarchists = 0;    // t: A-vertices generated under the swapped side
  double deletion_rate = 0.0;
  // When set, generation fails unless delta3 >= floor((N-1)/2) holds and
  // survives the deletions.
  bool demand_cycle_threshold = true;
  std::uint64_t rng_seed = 1;

  int total_vertices() const { return 2 * half_size + (odd_total ? 1 : 0); }
  int demanded_delta3() const { return (total_vertices() - 1) / 2; }
  void validate() const;
  std::vector<std::string> comment_block() const;  // key=value lines
};

enum class PlantedClass { typical, medium, anarchist };

struct BenchmarkInstance {
  Hypergraph4 graph;
  Partition part;  // nominal: A = first ceil(N/2) ids
  std::vector<PlantedClass> planted;
  int delta3 = 0;
  std::uint64_t aabb = 0;  // against the nominal partition
  InstanceRecipe recipe;   // as executed (neutral auto-enable recorded)
};

BenchmarkInstance build_benchmark(const InstanceRecipe& recipe);

// Split construction plus, for every same-side pair, a random perfect
// matching on the opposite side contributing one atypical quadruple per
// matched pair. Keeps delta3 = n-1 with every vertex, pair, and triple
// typical, so seed-rich structure exists without planted mediums. n even.
Hypergraph4 build_matching_fill(int n, std::uint64_t rng_seed);

std::uint64_t count_aabb(const Hypergraph4& h, const Partition& p);

struct BApproximation {
  std::uint64_t value = 0;
  Partition partition;
  bool exact = false;
};

// Exhaustive over balanced bipartitions up to exact_threshold vertices,
// batched steepest-descent swap search with restarts above it. The returned
// value always equals count_aabb at the returned partition.
BApproximation compute_b(const Hypergraph4& h, int exact_threshold = 20,
                         std::uint64_t rng_seed = 1);

}  // namespace h4
