#pragma once

#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <vector>

#include "pathtrust/csv.hpp"
#include "pathtrust/metrics.hpp"
#include "pathtrust/rng.hpp"
#include "pathtrust/simulator.hpp"

namespace pathtrust {

// The tuning plane: decision penalty crossed with history length.
struct SweepGrid {
  std::vector<double> penalties;
  std::vector<std::size_t> histories;

  // 21 penalties (0 to 1 in steps of 0.05) x 23 histories (1, then 25 to
  // 550 in steps of 25) = 483 cells.
  static SweepGrid full() {
    SweepGrid grid;
    for (int i = 0; i <= 20; ++i) grid.penalties.push_back(i * 0.05);
    grid.histories.push_back(1);
    for (std::size_t h = 25; h <= 550; h += 25) grid.histories.push_back(h);
    return grid;
  }

  std::size_t cell_count() const { return penalties.size() * histories.size(); }
};

struct SurfaceCell {
  double tau = 0.0;
  double penalty = 0.0;
  std::size_t history = 0;
  double avg_abs_acc = 0.0;
};

// Every cell runs `runs_per_cell` independent experiments whose seeds depend
// only on (master seed, penalty index, history index, run index), so cells
// may be computed in any order without changing the surface.
inline std::vector<SurfaceCell> sweep(const ExperimentConfig& base, const SweepGrid& grid,
                                      std::uint32_t runs_per_cell,
                                      EngineConfig engine_base = {}) {
  if (runs_per_cell == 0) throw std::invalid_argument("sweep: runs_per_cell must be positive");
  if (grid.penalties.empty() || grid.histories.empty())
    throw std::invalid_argument("sweep: empty grid");

  std::vector<SurfaceCell> cells;
  cells.reserve(grid.cell_count());
  for (std::size_t pi = 0; pi < grid.penalties.size(); ++pi) {
    for (std::size_t hi = 0; hi < grid.histories.size(); ++hi) {
      EngineConfig engine = engine_base;
      engine.decision_penalty = grid.penalties[pi];
      engine.history = grid.histories[hi];

      double acc_sum = 0.0;
      for (std::uint32_t run = 0; run < runs_per_cell; ++run) {
        ExperimentConfig cfg = base;
        cfg.seed = Rng::derive(base.seed, {pi, hi, run});
        const ExperimentResult sim = run_experiment(cfg);
        const auto series = evaluate_run(sim.records, cfg.nodes, engine, Variant::reactive);
        acc_sum += steady_state_mean(series);
      }
      cells.push_back({base.tau, grid.penalties[pi], grid.histories[hi],
                       acc_sum / runs_per_cell});
    }
  }
  return cells;
}

inline constexpr const char* surface_csv_header = "tau,penalty,history,avg_abs_acc";

inline void write_surface(std::ostream& os, const std::vector<SurfaceCell>& cells) {
  os << surface_csv_header << '\n';
  for (const auto& c : cells)
    os << format_tau(c.tau) << ',' << csv::fixed(c.penalty, 2) << ',' << c.history << ','
       << csv::fixed(c.avg_abs_acc, 6) << '\n';
}

struct ComparisonResult {
  std::vector<AccuracyRecord> reactive;
  std::vector<AccuracyRecord> plain;
};

// Same simulated stream through both engine variants, for side-by-side
// accuracy series.
inline ComparisonResult compare_variants(const ExperimentConfig& cfg,
                                         const EngineConfig& engine) {
  const ExperimentResult sim = run_experiment(cfg);
  ComparisonResult out;
  out.reactive = evaluate_run(sim.records, cfg.nodes, engine, Variant::reactive);
  out.plain = evaluate_run(sim.records, cfg.nodes, engine, Variant::plain);
  return out;
}

inline constexpr const char* timeseries_csv_header =
    "variant,report_seq,avg_abs_acc,max_abs_acc,avg_e,removals";

inline void write_timeseries(std::ostream& os, const ComparisonResult& result) {
  os << timeseries_csv_header << '\n';
  const auto row = [&os](const char* name, const AccuracyRecord& r) {
    os << name << ',' << r.report_seq << ',' << csv::fixed(r.avg_abs_acc, 6) << ','
       << csv::fixed(r.max_abs_acc, 6) << ',' << csv::fixed(r.avg_e, 6) << ','
       << r.removals_cumulative << '\n';
  };
  if (result.reactive.size() != result.plain.size())
    throw std::invalid_argument("write_timeseries: unaligned series");
  for (std::size_t i = 0; i < result.reactive.size(); ++i) {
    row("reactive", result.reactive[i]);
    row("plain", result.plain[i]);
  }
}

} // namespace pathtrust
