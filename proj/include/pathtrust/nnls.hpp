#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace pathtrust {

// Nonnegative least squares on the normal equations, active-set style: grow
// a passive set one coordinate at a time by the most violated dual, solve the
// free subproblem, and step back along the segment whenever a coordinate
// would leave the feasible orthant. The caller folds any ridge term into the
// Gram matrix, which also keeps every principal submatrix well posed.
inline Eigen::VectorXd nnls_solve_normal(const Eigen::MatrixXd& gram, const Eigen::VectorXd& rhs) {
  const Eigen::Index n = gram.rows();
  if (gram.cols() != n || rhs.size() != n)
    throw std::invalid_argument("nnls: gram/rhs dimension mismatch");

  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  if (n == 0) return x;

  std::vector<bool> passive(static_cast<std::size_t>(n), false);
  Eigen::VectorXd w = rhs; // dual: rhs - gram * x, with x = 0

  const double scale = rhs.cwiseAbs().maxCoeff();
  if (scale <= 0.0) return x;
  const double dual_tol = 1e-11 * scale;

  const auto solve_passive = [&](const std::vector<Eigen::Index>& idx) {
    const Eigen::Index m = static_cast<Eigen::Index>(idx.size());
    Eigen::MatrixXd sub(m, m);
    Eigen::VectorXd sub_rhs(m);
    for (Eigen::Index i = 0; i < m; ++i) {
      sub_rhs(i) = rhs(idx[static_cast<std::size_t>(i)]);
      for (Eigen::Index j = 0; j < m; ++j)
        sub(i, j) = gram(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(j)]);
    }
    return Eigen::VectorXd(sub.ldlt().solve(sub_rhs));
  };

  const auto passive_indices = [&] {
    std::vector<Eigen::Index> idx;
    for (Eigen::Index j = 0; j < n; ++j)
      if (passive[static_cast<std::size_t>(j)]) idx.push_back(j);
    return idx;
  };

  const int max_outer = static_cast<int>(3 * n + 12);
  for (int outer = 0; outer < max_outer; ++outer) {
    // most violated dual among the clamped coordinates (first wins on ties)
    Eigen::Index enter = -1;
    double best = dual_tol;
    for (Eigen::Index j = 0; j < n; ++j)
      if (!passive[static_cast<std::size_t>(j)] && w(j) > best) {
        best = w(j);
        enter = j;
      }
    if (enter < 0) break;
    passive[static_cast<std::size_t>(enter)] = true;

    for (int inner = 0; inner < max_outer; ++inner) {
      const auto idx = passive_indices();
      const Eigen::VectorXd z = solve_passive(idx);

      double min_z = 1.0;
      for (Eigen::Index i = 0; i < z.size(); ++i) min_z = std::min(min_z, z(i));
      if (min_z > 0.0) {
        x.setZero();
        for (std::size_t i = 0; i < idx.size(); ++i) x(idx[i]) = z(static_cast<Eigen::Index>(i));
        break;
      }

      // longest feasible step toward z
      double alpha = 1.0;
      for (std::size_t i = 0; i < idx.size(); ++i) {
        const double zi = z(static_cast<Eigen::Index>(i));
        if (zi <= 0.0) {
          const double xi = x(idx[i]);
          const double denom = xi - zi;
          if (denom > 0.0) alpha = std::min(alpha, xi / denom);
        }
      }
      for (std::size_t i = 0; i < idx.size(); ++i) {
        const Eigen::Index j = idx[i];
        x(j) += alpha * (z(static_cast<Eigen::Index>(i)) - x(j));
      }
      bool any_clamped = false;
      for (std::size_t i = 0; i < idx.size(); ++i) {
        const Eigen::Index j = idx[i];
        if (x(j) <= 1e-14 * scale) {
          x(j) = 0.0;
          passive[static_cast<std::size_t>(j)] = false;
          any_clamped = true;
        }
      }
      if (!any_clamped) {
        // numerical guard: accept the projected point rather than loop
        for (Eigen::Index j = 0; j < n; ++j) x(j) = std::max(x(j), 0.0);
        break;
      }
    }

    w = rhs - gram * x;
  }

  return x;
}

} // namespace pathtrust
