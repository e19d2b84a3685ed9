#include "h4/params.hpp"

#include <ostream>

#include "h4/errors.hpp"

namespace h4 {

void TraceLog::emit(const std::string& s) {
  lines.push_back(s);
  if (stream) (*stream) << s << '\n';
}

bool TraceLog::contains(const std::string& needle) const {
  for (const auto& l : lines)
    if (l.find(needle) != std::string::npos) return true;
  return false;
}

SolverParams SolverParams::desk() { return SolverParams{}; }

SolverParams SolverParams::paper(double eps) {
  if (!(eps > 0.0 && eps < 1.0 / 120.0))
    fail(Err::out_of_range,
         "cascading profile needs eps in (0, 1/120), got " +
             std::to_string(eps));
  SolverParams p;
  p.eps0 = eps * eps * eps * eps;
  p.eps1 = eps * eps * eps;
  p.eps2 = eps * eps;
  p.eps3 = eps;
  p.eps4 = 40.0 * eps;
  p.eps5 = 120.0 * eps;
  p.q_cap_frac = p.eps1 / 2.0;  // eps^3 * n out of N = 2n vertices
  p.envelope_frac = 2.0 * p.eps1;
  return p;
}

void SolverParams::validate() const {
  const double e[6] = {eps0, eps1, eps2, eps3, eps4, eps5};
  for (int i = 0; i < 6; ++i)
    if (!(e[i] > 0.0 && e[i] < 1.0))
      fail(Err::out_of_range,
           "eps" + std::to_string(i) + " must lie in (0,1), got " +
               std::to_string(e[i]));
  if (sample_rate_numerator < 1)
    fail(Err::out_of_range, "sample_rate_numerator must be positive");
  if (connector_retry_budget < 1)
    fail(Err::out_of_range, "connector_retry_budget must be positive");
  if (slack_c2 < 0.0 || slack_c3 < 0.0)
    fail(Err::out_of_range, "slack constants must be non-negative");
  if (exact_threshold < 4)
    fail(Err::out_of_range, "exact_threshold must be at least 4");
  if (min_solver_n < 8)
    fail(Err::out_of_range, "min_solver_n must be at least 8");
  if (!(b_gate > 0.0))
    fail(Err::out_of_range, "b_gate must be positive");
  if (!(q_cap_frac > 0.0 && q_cap_frac <= 1.0))
    fail(Err::out_of_range, "q_cap_frac must lie in (0,1]");
  if (!(seq_c > 0.0 && seq_c < 1.0))
    fail(Err::out_of_range, "seq_c must lie in (0,1)");
  if (envelope_frac < 0.0)
    fail(Err::out_of_range, "envelope_frac must be non-negative");
}

}  // namespace h4
