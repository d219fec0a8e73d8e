#pragma once

#include <cmath>
#include <cstdint>
#include <deque>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "pathtrust/csv.hpp"
#include "pathtrust/rng.hpp"
#include "pathtrust/topology.hpp"
#include "pathtrust/types.hpp"

namespace pathtrust {

// How often a node's intrinsic behavior drifts: on average one change per
// node every tau sessions across the population, triggered only at the
// moment the node is picked up by a fresh path.
struct ChangeModel {
  double tau = std::numeric_limits<double>::infinity();
  double behavior_lo = 0.5;
  double behavior_hi = 1.0;

  double change_prob(std::uint32_t node_count) const {
    if (std::isinf(tau)) return 0.0;
    if (!(tau > 0.0)) throw std::invalid_argument("tau must be positive or infinite");
    return 1.0 / (tau * node_count);
  }
};

// Session-level exogenous loss: usually a small background rate, with
// occasional spikes, redrawn independently for every session.
struct LossModel {
  double baseline_max = 0.05;
  double spike_max = 0.12;
  double spike_prob = 0.1;

  double draw(Rng& rng) const {
    const bool spike = rng.bernoulli(spike_prob);
    const double lo = spike ? baseline_max : 0.0;
    const double hi = spike ? spike_max : baseline_max;
    return rng.uniform(lo, hi);
  }
};

struct SessionSpec {
  NodeId source = 0;
  NodeId dest = 0;
  std::vector<NodeId> path; // includes both endpoints
  std::uint32_t packets = 500;
  double net_loss = 0.0;

  std::vector<NodeId> interior() const {
    if (path.size() < 2) throw std::invalid_argument("session path too short");
    return {path.begin() + 1, path.end() - 1};
  }
};

// Per-packet Bernoulli trial at every transit node plus one exogenous loss
// trial; the reported pdr is the delivered fraction.
inline PdrReport run_session(const SessionSpec& spec, const GroundTruth& truth, Rng& rng,
                             std::uint64_t seq) {
  std::vector<NodeId> transit = spec.interior();
  std::uint32_t delivered = 0;
  for (std::uint32_t pkt = 0; pkt < spec.packets; ++pkt) {
    bool ok = true;
    for (NodeId x : transit)
      if (!rng.bernoulli(truth.g.at(x))) {
        ok = false;
        break;
      }
    if (ok && rng.bernoulli(spec.net_loss)) ok = false;
    if (ok) ++delivered;
  }
  return make_report(seq, static_cast<double>(delivered) / spec.packets, spec.packets,
                     std::move(transit));
}

struct RunStats {
  std::uint64_t change_opportunities = 0; // eligible draws seen by the change model
  std::uint64_t changes_applied = 0;
};

// A node just chosen as transit for a new path may drift — but never while
// it is already carrying another active path, so in-flight sessions always
// observe a stable behavior.
inline bool maybe_change_ift(NodeId node, const ChangeModel& cm, std::uint32_t node_count,
                             const std::vector<bool>& active_transit, GroundTruth& truth,
                             Rng& rng, RunStats& stats) {
  if (active_transit.at(node)) return false;
  ++stats.change_opportunities;
  const double p = cm.change_prob(node_count);
  if (!rng.bernoulli(p)) return false;
  truth.g.at(node) = rng.uniform(cm.behavior_lo, cm.behavior_hi);
  ++stats.changes_applied;
  return true;
}

struct ExperimentConfig {
  std::uint32_t nodes = 15;
  double tau = std::numeric_limits<double>::infinity();
  std::uint32_t sessions = 1000;
  std::uint32_t packets = 500;
  std::uint32_t concurrency = 1; // simultaneously active sessions, 1..4
  std::uint64_t seed = 1;
  double loss_baseline_max = 0.05;
  double loss_spike_max = 0.12;
  double loss_spike_prob = 0.1;
  std::string topology_file;
  double behavior_lo = 0.5;
  double behavior_hi = 1.0;
  double mean_degree = 4.0;

  void validate() const {
    if (nodes < 2) throw std::runtime_error("config: nodes must be at least 2");
    if (sessions == 0) throw std::runtime_error("config: sessions must be positive");
    if (packets == 0) throw std::runtime_error("config: packets must be positive");
    if (concurrency < 1 || concurrency > 4)
      throw std::runtime_error("config: concurrency must be between 1 and 4");
    if (!(std::isinf(tau) || tau > 0.0))
      throw std::runtime_error("config: tau must be positive or 'inf'");
    if (!(loss_baseline_max >= 0.0 && loss_baseline_max <= 1.0) ||
        !(loss_spike_max >= 0.0 && loss_spike_max <= 1.0) || loss_spike_max < loss_baseline_max)
      throw std::runtime_error("config: loss bounds must satisfy 0 <= baseline <= spike <= 1");
    if (!(loss_spike_prob >= 0.0 && loss_spike_prob <= 1.0))
      throw std::runtime_error("config: loss spike probability outside [0,1]");
    if (!(behavior_lo >= 0.0 && behavior_hi <= 1.0 && behavior_lo <= behavior_hi))
      throw std::runtime_error("config: behavior range must sit inside [0,1]");
  }
};

// One completed session: the report the destination would file, plus the
// behavior vector that was in force while the session ran.
struct SessionRecord {
  PdrReport report;
  std::vector<double> truth;
};

struct ExperimentResult {
  Topology topology;
  std::vector<SessionRecord> records;
  RunStats stats;
};

inline double parse_tau(std::string_view text) {
  if (text == "inf" || text == "infinity" || text == "Inf")
    return std::numeric_limits<double>::infinity();
  const double v = csv::parse_double(text, "tau");
  if (!(v > 0.0)) throw std::runtime_error("tau must be positive or 'inf'");
  return v;
}

inline std::string format_tau(double tau) {
  return std::isinf(tau) ? "inf" : csv::fixed(tau, 6);
}

// Flat `key = value` experiment description, unknown keys rejected.
inline ExperimentConfig parse_experiment_config(std::istream& is) {
  ExperimentConfig cfg;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    std::string_view text = csv::strip_eol(line);
    while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
    if (text.empty() || text.front() == '#') continue;
    const std::size_t eq = text.find('=');
    if (eq == std::string_view::npos)
      throw std::runtime_error("config line " + std::to_string(line_no) + ": expected key = value");
    const auto trim = [](std::string_view s) {
      while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
      while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
      return s;
    };
    const std::string_view key = trim(text.substr(0, eq));
    const std::string_view val = trim(text.substr(eq + 1));
    if (key == "nodes") cfg.nodes = static_cast<std::uint32_t>(csv::parse_u64(val, "nodes"));
    else if (key == "tau") cfg.tau = parse_tau(val);
    else if (key == "sessions") cfg.sessions = static_cast<std::uint32_t>(csv::parse_u64(val, "sessions"));
    else if (key == "packets") cfg.packets = static_cast<std::uint32_t>(csv::parse_u64(val, "packets"));
    else if (key == "concurrency") cfg.concurrency = static_cast<std::uint32_t>(csv::parse_u64(val, "concurrency"));
    else if (key == "seed") cfg.seed = csv::parse_u64(val, "seed");
    else if (key == "loss_baseline_max") cfg.loss_baseline_max = csv::parse_double(val, "loss_baseline_max");
    else if (key == "loss_spike_max") cfg.loss_spike_max = csv::parse_double(val, "loss_spike_max");
    else if (key == "loss_spike_prob") cfg.loss_spike_prob = csv::parse_double(val, "loss_spike_prob");
    else if (key == "topology_file") cfg.topology_file = std::string(val);
    else throw std::runtime_error("config line " + std::to_string(line_no) + ": unknown key '" +
                                  std::string(key) + "'");
  }
  cfg.validate();
  return cfg;
}

inline std::string format_effective_config(const ExperimentConfig& cfg) {
  std::ostringstream os;
  os << "nodes = " << cfg.nodes << '\n'
     << "tau = " << format_tau(cfg.tau) << '\n'
     << "sessions = " << cfg.sessions << '\n'
     << "packets = " << cfg.packets << '\n'
     << "concurrency = " << cfg.concurrency << '\n'
     << "seed = " << cfg.seed << '\n'
     << "loss_baseline_max = " << csv::fixed(cfg.loss_baseline_max, 6) << '\n'
     << "loss_spike_max = " << csv::fixed(cfg.loss_spike_max, 6) << '\n'
     << "loss_spike_prob = " << csv::fixed(cfg.loss_spike_prob, 6) << '\n'
     << "topology_file = " << cfg.topology_file << '\n';
  return os.str();
}

namespace detail {
inline constexpr std::uint64_t topo_stream_tag = 0x746f706f;   // sub-stream for layout
inline constexpr std::uint64_t session_stream_tag = 0x73657373; // sub-stream for traffic
} // namespace detail

// Drives the whole closed loop: topology, initial behaviors, sessions with
// up to `concurrency` in flight (oldest completes first), behavior drift on
// fresh path selection, and per-session exogenous loss. The report stream
// and truth trace are fully determined by the seed.
inline ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();

  ExperimentResult result;
  if (!cfg.topology_file.empty()) {
    std::ifstream in(cfg.topology_file);
    if (!in) throw std::runtime_error("cannot open topology file '" + cfg.topology_file + "'");
    result.topology = load_topology(in);
    if (result.topology.node_count != cfg.nodes)
      throw std::runtime_error("topology file node count disagrees with config");
  } else {
    result.topology = random_geometric(cfg.nodes, cfg.mean_degree,
                                       Rng::derive(cfg.seed, {detail::topo_stream_tag}));
  }

  Rng rng(Rng::derive(cfg.seed, {detail::session_stream_tag}));
  const ChangeModel change{cfg.tau, cfg.behavior_lo, cfg.behavior_hi};
  const LossModel loss{cfg.loss_baseline_max, cfg.loss_spike_max, cfg.loss_spike_prob};

  GroundTruth truth;
  truth.g.resize(cfg.nodes);
  for (auto& g : truth.g) g = rng.uniform(cfg.behavior_lo, cfg.behavior_hi);

  struct Active {
    SessionSpec spec;
    std::vector<NodeId> transit;
    std::vector<double> truth_at_start;
    std::uint64_t seq;
  };
  std::deque<Active> active;

  const auto complete_oldest = [&] {
    Active a = std::move(active.front());
    active.pop_front();
    GroundTruth frozen{a.truth_at_start};
    PdrReport report = run_session(a.spec, frozen, rng, a.seq);
    result.records.push_back({std::move(report), std::move(a.truth_at_start)});
  };

  for (std::uint32_t s = 0; s < cfg.sessions; ++s) {
    if (active.size() == cfg.concurrency) complete_oldest();

    const NodeId source = static_cast<NodeId>(rng.uniform_index(cfg.nodes));
    NodeId dest = static_cast<NodeId>(rng.uniform_index(cfg.nodes - 1));
    if (dest >= source) ++dest;

    SessionSpec spec;
    spec.source = source;
    spec.dest = dest;
    spec.path = select_path(result.topology, source, dest);
    spec.packets = cfg.packets;
    const std::vector<NodeId> transit = spec.interior();

    std::vector<bool> busy(cfg.nodes, false);
    for (const Active& a : active)
      for (NodeId x : a.transit) busy[x] = true;
    for (NodeId x : transit)
      maybe_change_ift(x, change, cfg.nodes, busy, truth, rng, result.stats);

    spec.net_loss = loss.draw(rng);
    active.push_back({std::move(spec), transit, truth.g, s});
  }
  while (!active.empty()) complete_oldest();

  return result;
}

inline constexpr const char* truth_csv_header = "session_seq,node,g";

inline void write_truth_trace(std::ostream& os, const std::vector<SessionRecord>& records) {
  os << truth_csv_header << '\n';
  for (const auto& rec : records)
    for (std::size_t x = 0; x < rec.truth.size(); ++x)
      os << rec.report.seq << ',' << x << ',' << csv::fixed(rec.truth[x], 6) << '\n';
}

} // namespace pathtrust
