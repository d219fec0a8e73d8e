#pragma once

#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

#include "pathtrust/types.hpp"

namespace pathtrust {

// Bounded, seq-ordered history of accepted reports. Appending past capacity
// evicts the oldest entries; targeted removal drops every report that
// mentions a given node.
class ReportLedger {
public:
  static constexpr std::size_t unbounded = std::numeric_limits<std::size_t>::max();

  explicit ReportLedger(std::size_t capacity) : capacity_(capacity) {
    if (capacity_ == 0) throw std::invalid_argument("ledger capacity must be positive");
  }

  void append(PdrReport report) {
    if (!reports_.empty() && report.seq <= reports_.back().seq)
      throw std::invalid_argument("report seq must be strictly increasing");
    reports_.push_back(std::move(report));
    if (reports_.size() > capacity_)
      reports_.erase(reports_.begin(),
                     reports_.begin() + static_cast<std::ptrdiff_t>(reports_.size() - capacity_));
  }

  std::size_t remove_containing(NodeId x) {
    const std::size_t before = reports_.size();
    std::erase_if(reports_, [x](const PdrReport& r) { return r.contains(x); });
    return before - reports_.size();
  }

  std::uint32_t coverage(NodeId x) const {
    std::uint32_t n = 0;
    for (const auto& r : reports_)
      if (r.contains(x)) ++n;
    return n;
  }

  const std::vector<PdrReport>& reports() const { return reports_; }
  std::size_t size() const { return reports_.size(); }
  bool empty() const { return reports_.empty(); }
  std::size_t capacity() const { return capacity_; }

  ReportRefs refs() const { return make_refs(reports_); }

private:
  std::vector<PdrReport> reports_;
  std::size_t capacity_;
};

} // namespace pathtrust
