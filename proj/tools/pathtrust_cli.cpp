// Command-line front end: simulate session streams, run deductions over
// report files, sweep the tuning plane, and compare engine variants.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "pathtrust/pathtrust.hpp"

namespace {

using namespace pathtrust;

struct SimFlags {
  CLI::Option* config = nullptr;
  CLI::Option* nodes = nullptr;
  CLI::Option* tau = nullptr;
  CLI::Option* sessions = nullptr;
  CLI::Option* packets = nullptr;
  CLI::Option* concurrency = nullptr;
  CLI::Option* seed = nullptr;
  CLI::Option* loss_baseline = nullptr;
  CLI::Option* loss_spike = nullptr;
  CLI::Option* loss_spike_prob = nullptr;
  CLI::Option* topology_file = nullptr;

  std::string config_path;
  std::uint32_t nodes_v = 15;
  std::string tau_v = "inf";
  std::uint32_t sessions_v = 1000;
  std::uint32_t packets_v = 500;
  std::uint32_t concurrency_v = 1;
  std::uint64_t seed_v = 1;
  double loss_baseline_v = 0.05;
  double loss_spike_v = 0.12;
  double loss_spike_prob_v = 0.1;
  std::string topology_file_v;
};

void add_sim_flags(CLI::App* cmd, SimFlags& f) {
  f.config = cmd->add_option("--config", f.config_path, "experiment config file (key = value lines)");
  f.nodes = cmd->add_option("--nodes", f.nodes_v, "network size");
  f.tau = cmd->add_option("--tau", f.tau_v, "mean sessions between behavior changes per node, or 'inf'");
  f.sessions = cmd->add_option("--sessions", f.sessions_v, "number of sessions to simulate");
  f.packets = cmd->add_option("--packets", f.packets_v, "packets per session");
  f.concurrency = cmd->add_option("--concurrency", f.concurrency_v, "simultaneously active sessions (1-4)");
  f.seed = cmd->add_option("--seed", f.seed_v, "master seed");
  f.loss_baseline = cmd->add_option("--loss-baseline-max", f.loss_baseline_v, "baseline exogenous loss upper bound");
  f.loss_spike = cmd->add_option("--loss-spike-max", f.loss_spike_v, "spike exogenous loss upper bound");
  f.loss_spike_prob = cmd->add_option("--loss-spike-prob", f.loss_spike_prob_v, "probability of a loss spike session");
  f.topology_file = cmd->add_option("--topology-file", f.topology_file_v, "fixed adjacency file instead of a sampled layout");
}

ExperimentConfig resolve_sim_config(const SimFlags& f) {
  ExperimentConfig cfg;
  if (f.config->count()) {
    std::ifstream in(f.config_path);
    if (!in) throw std::runtime_error("cannot open config file '" + f.config_path + "'");
    cfg = parse_experiment_config(in);
  }
  if (f.nodes->count()) cfg.nodes = f.nodes_v;
  if (f.tau->count()) cfg.tau = parse_tau(f.tau_v);
  if (f.sessions->count()) cfg.sessions = f.sessions_v;
  if (f.packets->count()) cfg.packets = f.packets_v;
  if (f.concurrency->count()) cfg.concurrency = f.concurrency_v;
  if (f.seed->count()) cfg.seed = f.seed_v;
  if (f.loss_baseline->count()) cfg.loss_baseline_max = f.loss_baseline_v;
  if (f.loss_spike->count()) cfg.loss_spike_max = f.loss_spike_v;
  if (f.loss_spike_prob->count()) cfg.loss_spike_prob = f.loss_spike_prob_v;
  if (f.topology_file->count()) cfg.topology_file = f.topology_file_v;
  cfg.validate();
  return cfg;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open output file '" + path + "'");
  return out;
}

void print_engine_config(const EngineConfig& engine) {
  std::cout << "penalty = " << csv::fixed(engine.decision_penalty, 2) << '\n'
            << "history = " << engine.history << '\n'
            << "base = " << csv::fixed(engine.base, 6) << '\n'
            << "pdr_floor = " << csv::fixed(engine.pdr_floor, 6) << '\n';
}

int cmd_simulate(const SimFlags& flags, const std::string& reports_path,
                 const std::string& truth_path, const std::string& topology_out) {
  const ExperimentConfig cfg = resolve_sim_config(flags);
  std::cout << format_effective_config(cfg);

  const ExperimentResult result = run_experiment(cfg);

  std::vector<PdrReport> reports;
  reports.reserve(result.records.size());
  for (const auto& rec : result.records) reports.push_back(rec.report);

  auto rout = open_out(reports_path);
  write_reports(rout, reports);
  auto tout = open_out(truth_path);
  write_truth_trace(tout, result.records);
  if (!topology_out.empty()) {
    auto gout = open_out(topology_out);
    write_topology(gout, result.topology);
  }
  std::cout << "sessions_emitted = " << result.records.size() << '\n'
            << "behavior_changes = " << result.stats.changes_applied << '\n';
  return 0;
}

int cmd_deduce(const std::string& reports_path, const std::string& snapshots_path,
               std::uint32_t nodes, const std::string& variant_name_arg,
               const EngineConfig& engine) {
  std::ifstream in(reports_path);
  if (!in) throw std::runtime_error("cannot open report file '" + reports_path + "'");
  const std::vector<PdrReport> reports = read_reports(in);

  if (nodes == 0) {
    for (const auto& r : reports)
      for (NodeId x : r.transit) nodes = std::max(nodes, x + 1);
    if (nodes == 0)
      throw std::runtime_error("cannot infer node count from reports; pass --nodes");
  }

  const Variant variant = variant_name_arg == "plain" ? Variant::plain : Variant::reactive;
  std::cout << "reports = " << reports_path << '\n'
            << "nodes = " << nodes << '\n'
            << "variant = " << variant_name(variant) << '\n';
  print_engine_config(engine);

  DeductionEngine eng(nodes, engine, variant);
  auto out = open_out(snapshots_path);
  out << snapshot_csv_header << '\n';
  for (const auto& r : reports) {
    const DeductionSnapshot& snap = eng.process(r);
    write_snapshot_rows(out, r.seq, snap, eng.removals().size());
  }
  std::cout << "reports_processed = " << reports.size() << '\n'
            << "removal_events = " << eng.removals().size() << '\n';
  return 0;
}

int cmd_sweep(const SimFlags& flags, const std::vector<double>& penalties,
              const std::vector<std::size_t>& histories, std::uint32_t runs_per_cell,
              const std::string& out_path) {
  const ExperimentConfig cfg = resolve_sim_config(flags);

  SweepGrid grid = SweepGrid::full();
  if (!penalties.empty()) grid.penalties = penalties;
  if (!histories.empty()) grid.histories = histories;

  std::cout << format_effective_config(cfg);
  std::cout << "runs_per_cell = " << runs_per_cell << '\n'
            << "grid_cells = " << grid.cell_count() << '\n';

  const std::vector<SurfaceCell> cells = sweep(cfg, grid, runs_per_cell);
  auto out = open_out(out_path);
  write_surface(out, cells);
  std::cout << "cells_written = " << cells.size() << '\n';
  return 0;
}

int cmd_compare(const SimFlags& flags, const EngineConfig& engine, const std::string& out_path) {
  const ExperimentConfig cfg = resolve_sim_config(flags);
  std::cout << format_effective_config(cfg);
  print_engine_config(engine);

  const ComparisonResult result = compare_variants(cfg, engine);
  auto out = open_out(out_path);
  write_timeseries(out, result);
  std::cout << "reports_compared = " << result.reactive.size() << '\n';
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"per-node forwarding behavior deduction from path delivery reports"};
  app.require_subcommand(1);

  // simulate
  auto* sim = app.add_subcommand("simulate", "run a session simulation, emit reports and truth");
  SimFlags sim_flags;
  add_sim_flags(sim, sim_flags);
  std::string sim_reports, sim_truth, sim_topo_out;
  sim->add_option("--reports", sim_reports, "output report CSV")->required();
  sim->add_option("--truth", sim_truth, "output ground-truth trace CSV")->required();
  sim->add_option("--topology-out", sim_topo_out, "also write the topology that was used");

  // deduce
  auto* ded = app.add_subcommand("deduce", "run a deduction engine over a report file");
  std::string ded_reports, ded_snapshots, ded_variant = "reactive";
  std::uint32_t ded_nodes = 0;
  EngineConfig ded_engine;
  ded->add_option("--reports", ded_reports, "input report CSV")->required();
  ded->add_option("--snapshots", ded_snapshots, "output per-report snapshot CSV")->required();
  ded->add_option("--nodes", ded_nodes, "node count (default: infer from reports)");
  ded->add_option("--variant", ded_variant, "engine variant")
      ->check(CLI::IsMember({"reactive", "plain"}));
  ded->add_option("--penalty", ded_engine.decision_penalty, "decision penalty in [0,1]");
  ded->add_option("--history", ded_engine.history, "ledger capacity");
  ded->add_option("--base", ded_engine.base, "log base (> 1)");
  ded->add_option("--pdr-floor", ded_engine.pdr_floor, "clamp for zero-delivery reports");

  // sweep
  auto* swp = app.add_subcommand("sweep", "accuracy surface over penalty x history");
  SimFlags swp_flags;
  add_sim_flags(swp, swp_flags);
  std::vector<double> swp_penalties;
  std::vector<std::size_t> swp_histories;
  std::uint32_t swp_runs = 3;
  std::string swp_out;
  swp->add_option("--penalties", swp_penalties, "penalty values (default: full grid)")->delimiter(',');
  swp->add_option("--histories", swp_histories, "history values (default: full grid)")->delimiter(',');
  swp->add_option("--runs-per-cell", swp_runs, "independent runs averaged per cell");
  swp->add_option("--out", swp_out, "output surface CSV")->required();

  // compare
  auto* cmp = app.add_subcommand("compare", "reactive vs plain on one stream");
  SimFlags cmp_flags;
  add_sim_flags(cmp, cmp_flags);
  EngineConfig cmp_engine;
  std::string cmp_out;
  cmp->add_option("--penalty", cmp_engine.decision_penalty, "decision penalty in [0,1]");
  cmp->add_option("--history", cmp_engine.history, "ledger capacity");
  cmp->add_option("--base", cmp_engine.base, "log base (> 1)");
  cmp->add_option("--pdr-floor", cmp_engine.pdr_floor, "clamp for zero-delivery reports");
  cmp->add_option("--out", cmp_out, "output timeseries CSV")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (sim->parsed()) return cmd_simulate(sim_flags, sim_reports, sim_truth, sim_topo_out);
    if (ded->parsed()) {
      ded_engine.validate();
      return cmd_deduce(ded_reports, ded_snapshots, ded_nodes, ded_variant, ded_engine);
    }
    if (swp->parsed()) return cmd_sweep(swp_flags, swp_penalties, swp_histories, swp_runs, swp_out);
    if (cmp->parsed()) {
      cmp_engine.validate();
      return cmd_compare(cmp_flags, cmp_engine, cmp_out);
    }
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << '\n';
    return 1;
  }
  return 0;
}
