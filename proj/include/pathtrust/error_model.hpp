#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

#include "pathtrust/types.hpp"

namespace pathtrust {

// Below this many covering reports a node's deduction is considered
// unsupported and gets the penalty value instead of a residual bound.
inline constexpr std::uint32_t coverage_penalty_threshold = 3;

inline double predicted_pdr(const PdrReport& r, const std::vector<double>& d) {
  double p = 1.0;
  for (NodeId x : r.transit) p *= d.at(x);
  return p;
}

struct ErrorEstimate {
  double e = 0.0;
  bool penalized = false;
  std::uint32_t coverage = 0;
};

// Worst disagreement, in pdr space, between what the deduced behaviors
// predict and what the reports covering this node actually said. The same
// floor used on the solve side clamps the observation so both views match.
inline ErrorEstimate estimate_error(NodeId x, const ReportRefs& reports,
                                    const std::vector<double>& d, double penalty,
                                    double pdr_floor) {
  ErrorEstimate est;
  double worst = 0.0;
  for (const PdrReport* r : reports) {
    if (!r->contains(x)) continue;
    ++est.coverage;
    const double observed = std::max(r->pdr, pdr_floor);
    worst = std::max(worst, std::abs(observed - predicted_pdr(*r, d)));
  }
  if (est.coverage <= coverage_penalty_threshold) {
    est.penalized = true;
    est.e = penalty;
  } else {
    est.e = worst;
  }
  return est;
}

inline double total_error(const ReportRefs& reports, const std::vector<double>& d,
                          double penalty, std::uint32_t node_count, double pdr_floor) {
  double total = 0.0;
  for (NodeId x = 0; x < node_count; ++x)
    total += estimate_error(x, reports, d, penalty, pdr_floor).e;
  return total;
}

inline std::pair<double, double> confidence_interval(double d, double e) {
  return {std::max(0.0, d - e), std::min(1.0, d + e)};
}

} // namespace pathtrust
