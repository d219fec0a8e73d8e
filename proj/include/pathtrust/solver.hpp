#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "pathtrust/linear_system.hpp"
#include "pathtrust/nnls.hpp"
#include "pathtrust/types.hpp"

namespace pathtrust {

// Solution in the log domain, still carrying per-node coverage so callers
// can tell a deduced perfect forwarder from a node no report ever touched.
struct LogBehavior {
  Eigen::VectorXd gtilde; // nonnegative
  std::vector<std::uint32_t> coverage;
  double base = 0.0;
};

inline constexpr double ridge_scale = 1e-9;

// Least squares under the constraint that behaviors stay in [0,1], i.e. the
// log-domain unknowns stay nonnegative. A tiny trace-scaled ridge keeps the
// normal equations solvable when the report set leaves nodes entangled.
inline LogBehavior solve_constrained(const IncidenceSystem& sys) {
  if (sys.matrix.rows() != sys.rhs.size())
    throw std::invalid_argument("solve_constrained: matrix/rhs dimension mismatch");

  const Eigen::Index n = sys.matrix.cols();
  Eigen::MatrixXd gram = sys.matrix.transpose() * sys.matrix;
  const Eigen::VectorXd atb = sys.matrix.transpose() * sys.rhs;

  if (n > 0) {
    const double ridge = ridge_scale * gram.trace() / static_cast<double>(n);
    if (ridge > 0.0) gram.diagonal().array() += ridge;
  }

  LogBehavior out;
  out.gtilde = nnls_solve_normal(gram, atb);
  out.coverage = sys.coverage;
  out.base = sys.base;
  return out;
}

// Back out of the log domain: uncovered nodes sit at gtilde 0 and therefore
// read as behavior 1 until some report says otherwise.
inline std::vector<double> to_behavior(const LogBehavior& lb) {
  if (!(lb.base > 1.0)) throw std::invalid_argument("to_behavior: bad log base");
  const double ln_base = std::log(lb.base);
  std::vector<double> d(static_cast<std::size_t>(lb.gtilde.size()));
  for (Eigen::Index i = 0; i < lb.gtilde.size(); ++i)
    d[static_cast<std::size_t>(i)] = std::exp(-lb.gtilde(i) * ln_base);
  return d;
}

inline std::vector<double> deduce_behavior(const ReportRefs& reports, std::uint32_t node_count,
                                           double base, double pdr_floor) {
  return to_behavior(solve_constrained(build_system(reports, node_count, base, pdr_floor)));
}

} // namespace pathtrust
