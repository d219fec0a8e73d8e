#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "pathtrust/types.hpp"

namespace pathtrust {

// Path delivery is multiplicative in the per-node behaviors, so a negated
// log maps it onto a linear system: each report contributes one row with a
// 1 for every transit node and the transformed (floored) pdr on the right.
inline double log_transform(double pdr, double base, double pdr_floor) {
  if (!(base > 1.0)) throw std::invalid_argument("log base must exceed 1");
  if (!(pdr_floor > 0.0)) throw std::invalid_argument("pdr floor must be positive");
  const double p = std::max(pdr, pdr_floor);
  return -std::log(p) / std::log(base);
}

struct IncidenceSystem {
  Eigen::MatrixXd matrix; // rows x nodes, binary
  Eigen::VectorXd rhs;    // transformed pdr per row
  double base = 0.0;
  double pdr_floor = 0.0;
  std::vector<std::uint32_t> coverage; // rows touching each node
};

// Reports with empty transit sets carry no constraint and contribute no row.
inline IncidenceSystem build_system(const ReportRefs& reports, std::uint32_t node_count,
                                    double base, double pdr_floor) {
  std::size_t rows = 0;
  for (const PdrReport* r : reports)
    if (!r->transit.empty()) ++rows;

  IncidenceSystem sys;
  sys.base = base;
  sys.pdr_floor = pdr_floor;
  sys.matrix = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(rows), node_count);
  sys.rhs = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(rows));
  sys.coverage.assign(node_count, 0);

  Eigen::Index row = 0;
  for (const PdrReport* r : reports) {
    if (r->transit.empty()) continue;
    for (NodeId x : r->transit) {
      if (x >= node_count) throw std::out_of_range("transit node outside system");
      sys.matrix(row, x) = 1.0;
      ++sys.coverage[x];
    }
    sys.rhs(row) = log_transform(r->pdr, base, pdr_floor);
    ++row;
  }
  return sys;
}

} // namespace pathtrust
