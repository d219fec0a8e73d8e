#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace pathtrust {

using NodeId = std::uint32_t;

// One end-to-end delivery observation: the fraction of packets that made it
// across a path, together with the interior (transit) nodes of that path.
struct PdrReport {
  std::uint64_t seq = 0;
  double pdr = 1.0;
  std::uint32_t packets_sent = 1;
  std::vector<NodeId> transit; // sorted, unique, excludes the endpoints

  bool contains(NodeId x) const {
    return std::binary_search(transit.begin(), transit.end(), x);
  }
};

inline PdrReport make_report(std::uint64_t seq, double pdr, std::uint32_t packets,
                             std::vector<NodeId> transit) {
  if (!(pdr >= 0.0 && pdr <= 1.0)) throw std::invalid_argument("report pdr outside [0,1]");
  if (packets == 0) throw std::invalid_argument("report packet count must be positive");
  std::sort(transit.begin(), transit.end());
  transit.erase(std::unique(transit.begin(), transit.end()), transit.end());
  return PdrReport{seq, pdr, packets, std::move(transit)};
}

// Intrinsic per-node forwarding behavior, one value in [0,1] per node.
struct GroundTruth {
  std::vector<double> g;

  std::size_t node_count() const { return g.size(); }
};

// Probability that a packet survives every transit node of a path; an empty
// transit set means the path imposes no forwarding loss at all.
inline double expected_pdr(std::span<const NodeId> transit, const GroundTruth& truth) {
  double p = 1.0;
  for (NodeId x : transit) {
    if (x >= truth.g.size()) throw std::out_of_range("transit node outside ground truth");
    p *= truth.g[x];
  }
  return p;
}

// What a deduction pass reports for every node.
struct DeductionSnapshot {
  std::vector<double> d;                          // deduced behavior
  std::vector<double> e;                          // error estimate
  std::vector<std::pair<double, double>> interval; // [lo, hi] clamped to [0,1]
  std::vector<std::uint32_t> covered;             // reports mentioning the node

  std::size_t node_count() const { return d.size(); }
};

// Non-owning view over a set of reports; analysis routines take this so
// callers can carve subsets without copying report payloads.
using ReportRefs = std::vector<const PdrReport*>;

inline ReportRefs make_refs(std::span<const PdrReport> reports) {
  ReportRefs refs;
  refs.reserve(reports.size());
  for (const auto& r : reports) refs.push_back(&r);
  return refs;
}

} // namespace pathtrust
