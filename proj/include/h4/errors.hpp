#pragma once

#include <stdexcept>
#include <string>

namespace h4 {

enum class Err {
  out_of_range,
  degenerate_edge,
  too_few_vertices,
  too_short,
  too_large,
  parse,
  hypothesis_violated,
  threshold_not_met,
  threshold_unreachable,
  budget_exhausted,
  budget_exceeded,
  construction_failed,
  too_many_mediums,
  density_too_low,
  search_exhausted,
  matching_failed,
  envelope_violated,
  not_integral,
  reclassification_failed,
  case_exhausted,
};

inline const char* err_name(Err e) {
  switch (e) {
    case Err::out_of_range: return "OutOfRange";
    case Err::degenerate_edge: return "DegenerateEdge";
    case Err::too_few_vertices: return "TooFewVertices";
    case Err::too_short: return "TooShort";
    case Err::too_large: return "TooLarge";
    case Err::parse: return "ParseError";
    case Err::hypothesis_violated: return "HypothesisViolated";
    case Err::threshold_not_met: return "ThresholdNotMet";
    case Err::threshold_unreachable: return "ThresholdUnreachable";
    case Err::budget_exhausted: return "BudgetExhausted";
    case Err::budget_exceeded: return "BudgetExceeded";
    case Err::construction_failed: return "ConstructionFailed";
    case Err::too_many_mediums: return "TooManyMediums";
    case Err::density_too_low: return "DensityTooLow";
    case Err::search_exhausted: return "SearchExhausted";
    case Err::matching_failed: return "MatchingFailed";
    case Err::envelope_violated: return "EnvelopeViolated";
    case Err::not_integral: return "NotIntegral";
    case Err::reclassification_failed: return "ReclassificationFailed";
    case Err::case_exhausted: return "CaseExhausted";
  }
  return "UnknownError";
}

class Error : public std::runtime_error {
 public:
  Error(Err code, const std::string& what)
      : std::runtime_error(std::string(err_name(code)) + ": " + what),
        code_(code) {}
  Err code() const { return code_; }

 private:
  Err code_;
};

[[noreturn]] inline void fail(Err code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace h4
