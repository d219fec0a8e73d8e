#pragma once

#include <cstdint>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "pathtrust/csv.hpp"
#include "pathtrust/error_model.hpp"
#include "pathtrust/ledger.hpp"
#include "pathtrust/solver.hpp"
#include "pathtrust/types.hpp"

namespace pathtrust {

struct EngineConfig {
  double decision_penalty = 0.85; // weight of an unsupported node while judging removals
  std::size_t history = 325;      // ledger capacity for the reactive variant
  double base = std::numbers::e;  // log base; deductions are invariant to it
  double pdr_floor = 1e-4;        // keeps zero-delivery reports finite in the log domain

  void validate() const {
    if (!(decision_penalty >= 0.0 && decision_penalty <= 1.0))
      throw std::invalid_argument("decision penalty outside [0,1]");
    if (history == 0) throw std::invalid_argument("history must be positive");
    if (!(base > 1.0)) throw std::invalid_argument("log base must exceed 1");
    if (!(pdr_floor > 0.0)) throw std::invalid_argument("pdr floor must be positive");
  }
};

// Total-error differences below solver precision are ties, and ties accept the
// report rather than evict history. Without this guard, exactly-consistent
// streams would let ~1e-12 numerical noise decide removals.
inline constexpr double removal_margin = 1e-9;

enum class Variant { reactive, plain };

inline const char* variant_name(Variant v) {
  return v == Variant::reactive ? "reactive" : "plain";
}

struct RemovalEvent {
  std::uint64_t trigger_seq = 0; // report whose arrival forced the removal
  NodeId node = 0;
  std::size_t reports_removed = 0;
};

// Turns a stream of path reports into per-node behavior deductions.
//
// The reactive variant distrusts its own history: before accepting a report
// it checks, for every node the report crossed, whether dropping that node's
// past reports would explain the data strictly better, and keeps removing
// the most suspect node's history until no removal helps. The plain variant
// just accumulates everything.
class DeductionEngine {
public:
  DeductionEngine(std::uint32_t node_count, EngineConfig config,
                  Variant variant = Variant::reactive)
      : node_count_(node_count),
        config_(config),
        variant_(variant),
        ledger_(variant == Variant::plain ? ReportLedger::unbounded : config.history) {
    if (node_count_ == 0) throw std::invalid_argument("node count must be positive");
    config_.validate();
  }

  const DeductionSnapshot& process(const PdrReport& report) {
    if (!ledger_.empty() && report.seq <= ledger_.reports().back().seq)
      throw std::invalid_argument("report seq must be strictly increasing");
    return variant_ == Variant::plain ? process_plain(report) : process_reactive(report);
  }

  const DeductionSnapshot& last_snapshot() const { return snapshot_; }
  const ReportLedger& ledger() const { return ledger_; }
  const std::vector<RemovalEvent>& removals() const { return removals_; }
  Variant variant() const { return variant_; }
  const EngineConfig& config() const { return config_; }
  std::uint32_t node_count() const { return node_count_; }

private:
  const DeductionSnapshot& process_plain(const PdrReport& report) {
    ledger_.append(report);
    const ReportRefs refs = ledger_.refs();
    finalize_snapshot(refs, deduce_behavior(refs, node_count_, config_.base, config_.pdr_floor));
    return snapshot_;
  }

  const DeductionSnapshot& process_reactive(const PdrReport& report) {
    while (true) {
      ReportRefs analyzed = ledger_.refs();
      analyzed.push_back(&report);

      const std::vector<double> orig_d =
          deduce_behavior(analyzed, node_count_, config_.base, config_.pdr_floor);
      const double orig_total = total_error(analyzed, orig_d, config_.decision_penalty,
                                            node_count_, config_.pdr_floor);

      // Candidate removals: one per transit node of the triggering report
      // that actually has history to drop. The report itself always stays.
      bool have_best = false;
      NodeId best_node = 0;
      double best_total = 0.0;
      for (NodeId x : report.transit) {
        ReportRefs kept;
        kept.reserve(analyzed.size());
        bool any_removed = false;
        for (const PdrReport& past : ledger_.reports()) {
          if (past.contains(x)) {
            any_removed = true;
            continue;
          }
          kept.push_back(&past);
        }
        if (!any_removed) continue;
        kept.push_back(&report);

        const std::vector<double> cand_d =
            deduce_behavior(kept, node_count_, config_.base, config_.pdr_floor);
        const double cand_total = total_error(kept, cand_d, config_.decision_penalty,
                                              node_count_, config_.pdr_floor);
        if (!have_best || cand_total < best_total) { // ties keep the lower node id
          have_best = true;
          best_node = x;
          best_total = cand_total;
        }
      }

      if (!have_best || best_total >= orig_total - removal_margin) {
        // No removal strictly improves the explanation: accept. The final
        // error estimate always reports unsupported nodes at full weight.
        finalize_snapshot(analyzed, orig_d);
        ledger_.append(report);
        return snapshot_;
      }

      const std::size_t removed = ledger_.remove_containing(best_node);
      removals_.push_back({report.seq, best_node, removed});
    }
  }

  void finalize_snapshot(const ReportRefs& refs, std::vector<double> d) {
    snapshot_.d = std::move(d);
    snapshot_.e.assign(node_count_, 0.0);
    snapshot_.interval.assign(node_count_, {0.0, 1.0});
    snapshot_.covered.assign(node_count_, 0);
    for (NodeId x = 0; x < node_count_; ++x) {
      const ErrorEstimate est = estimate_error(x, refs, snapshot_.d, 1.0, config_.pdr_floor);
      snapshot_.e[x] = est.e;
      snapshot_.covered[x] = est.coverage;
      snapshot_.interval[x] = confidence_interval(snapshot_.d[x], est.e);
    }
  }

  std::uint32_t node_count_;
  EngineConfig config_;
  Variant variant_;
  ReportLedger ledger_;
  DeductionSnapshot snapshot_;
  std::vector<RemovalEvent> removals_;
};

inline constexpr const char* snapshot_csv_header =
    "report_seq,node,d,e,lo,hi,coverage,removals_so_far";

inline void write_snapshot_rows(std::ostream& os, std::uint64_t report_seq,
                                const DeductionSnapshot& snap, std::size_t removals_so_far) {
  for (std::size_t x = 0; x < snap.node_count(); ++x) {
    os << report_seq << ',' << x << ',' << csv::fixed(snap.d[x], 6) << ','
       << csv::fixed(snap.e[x], 6) << ',' << csv::fixed(snap.interval[x].first, 6) << ','
       << csv::fixed(snap.interval[x].second, 6) << ',' << snap.covered[x] << ','
       << removals_so_far << '\n';
  }
}

} // namespace pathtrust
