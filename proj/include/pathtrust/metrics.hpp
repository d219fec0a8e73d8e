#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "pathtrust/engine.hpp"
#include "pathtrust/simulator.hpp"
#include "pathtrust/types.hpp"

namespace pathtrust {

// Deduction quality after one report, judged against the behavior vector
// that was actually in force for that session.
struct AccuracyRecord {
  std::uint64_t report_seq = 0;
  double avg_abs_acc = 0.0; // mean |g - d| over nodes
  double max_abs_acc = 0.0; // worst node
  double avg_e = 0.0;       // mean reported error estimate
  std::uint64_t removals_cumulative = 0;
};

inline AccuracyRecord score_snapshot(std::uint64_t seq, const DeductionSnapshot& snap,
                                     const std::vector<double>& truth,
                                     std::uint64_t removals_so_far) {
  if (snap.d.size() != truth.size())
    throw std::invalid_argument("score_snapshot: node count mismatch");
  AccuracyRecord rec;
  rec.report_seq = seq;
  rec.removals_cumulative = removals_so_far;
  double sum_acc = 0.0, sum_e = 0.0;
  for (std::size_t x = 0; x < truth.size(); ++x) {
    const double err = std::abs(truth[x] - snap.d[x]);
    sum_acc += err;
    rec.max_abs_acc = std::max(rec.max_abs_acc, err);
    sum_e += snap.e[x];
  }
  rec.avg_abs_acc = sum_acc / truth.size();
  rec.avg_e = sum_e / truth.size();
  return rec;
}

// Replays a recorded session stream through a fresh engine of the given
// variant and scores every snapshot against the per-session truth.
inline std::vector<AccuracyRecord> evaluate_run(const std::vector<SessionRecord>& records,
                                                std::uint32_t node_count,
                                                const EngineConfig& config, Variant variant) {
  DeductionEngine engine(node_count, config, variant);
  std::vector<AccuracyRecord> out;
  out.reserve(records.size());
  for (const auto& rec : records) {
    const DeductionSnapshot& snap = engine.process(rec.report);
    out.push_back(score_snapshot(rec.report.seq, snap, rec.truth, engine.removals().size()));
  }
  return out;
}

// Mean avg_abs_acc over the trailing window (default: second half), i.e.
// performance once the ledger has warmed up.
inline double steady_state_mean(const std::vector<AccuracyRecord>& records,
                                double tail_fraction = 0.5) {
  if (records.empty()) throw std::invalid_argument("steady_state_mean: empty record set");
  if (!(tail_fraction > 0.0 && tail_fraction <= 1.0))
    throw std::invalid_argument("steady_state_mean: tail fraction outside (0,1]");
  const std::size_t start =
      records.size() - std::max<std::size_t>(1, static_cast<std::size_t>(records.size() * tail_fraction));
  double sum = 0.0;
  for (std::size_t i = start; i < records.size(); ++i) sum += records[i].avg_abs_acc;
  return sum / static_cast<double>(records.size() - start);
}

} // namespace pathtrust
