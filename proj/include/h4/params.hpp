#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace h4 {

// Accumulates solver trace lines; optionally tees to a stream.
struct TraceLog {
  std::ostream* stream = nullptr;
  std::vector<std::string> lines;
  void emit(const std::string& s);
  bool contains(const std::string& needle) const;
};

// The epsilon profile plus every tunable the pipeline consults. The default
// construction is the desk profile; paper(eps) installs the cascading scales
// used by the asymptotic analysis.
struct SolverParams {
  double eps0 = 0.05;
  double eps1 = 0.1;
  double eps2 = 0.1;
  double eps3 = 0.1;
  double eps4 = 0.15;
  double eps5 = 0.2;
  int sample_rate_numerator = 60;  // connector inclusion probability = this/n
  int connector_retry_budget = 64;
  double slack_c2 = 8.0;  // explicit quadratic slack replacing O(n^2) terms
  double slack_c3 = 1.0;  // cubic slack replacing O(n^3) terms
  int exact_threshold = 20;  // exhaustive bipartition search up to this N
  int min_solver_n = 16;
  double b_gate = 0.2;      // pipeline requires count_aabb <= b_gate * n^4
  double q_cap_frac = 1.0;  // absorber path length cap as a fraction of N
  double seq_c = 0.05;      // minimum |X| / n accepted by sequencing
  // Completion tolerates |m2 - m1| up to this fraction of n; the asymptotic
  // analysis would use 2*eps1*n.
  double envelope_frac = 0.5;
  bool auto_scale = true;   // widen classification scales to fit the instance
  bool force_case3 = false;
  std::uint64_t rng_seed = 1;
  TraceLog* trace = nullptr;

  static SolverParams desk();
  static SolverParams paper(double eps);
  void validate() const;
};

}  // namespace h4
