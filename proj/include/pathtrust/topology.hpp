#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <istream>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "pathtrust/csv.hpp"
#include "pathtrust/rng.hpp"
#include "pathtrust/types.hpp"

namespace pathtrust {

struct Topology {
  std::uint32_t node_count = 0;
  std::vector<std::vector<NodeId>> adj; // sorted neighbor lists, symmetric

  bool has_edge(NodeId u, NodeId v) const {
    const auto& nb = adj.at(u);
    return std::binary_search(nb.begin(), nb.end(), v);
  }

  double mean_degree() const {
    std::size_t total = 0;
    for (const auto& nb : adj) total += nb.size();
    return node_count ? static_cast<double>(total) / node_count : 0.0;
  }
};

inline bool is_connected(const Topology& topo) {
  if (topo.node_count == 0) return false;
  std::vector<bool> seen(topo.node_count, false);
  std::deque<NodeId> frontier{0};
  seen[0] = true;
  std::size_t reached = 1;
  while (!frontier.empty()) {
    const NodeId u = frontier.front();
    frontier.pop_front();
    for (NodeId v : topo.adj[u])
      if (!seen[v]) {
        seen[v] = true;
        ++reached;
        frontier.push_back(v);
      }
  }
  return reached == topo.node_count;
}

struct TopologySpec {
  std::uint32_t nodes = 15;
  double mean_degree = 4.0;
  std::uint64_t seed = 1;
  std::string file; // nonempty: load fixed adjacency instead of sampling
};

// Nodes scattered uniformly in the unit square, joined when closer than the
// radius that yields the requested mean degree; resampled until connected.
inline Topology random_geometric(std::uint32_t nodes, double mean_degree, std::uint64_t seed) {
  if (nodes < 2) throw std::invalid_argument("topology needs at least two nodes");
  if (!(mean_degree > 0.0)) throw std::invalid_argument("mean degree must be positive");
  Rng rng(seed);
  const double radius2 = mean_degree / ((nodes - 1) * std::numbers::pi);

  for (int attempt = 0; attempt < 256; ++attempt) {
    std::vector<double> px(nodes), py(nodes);
    for (std::uint32_t i = 0; i < nodes; ++i) {
      px[i] = rng.next_unit();
      py[i] = rng.next_unit();
    }
    Topology topo;
    topo.node_count = nodes;
    topo.adj.assign(nodes, {});
    for (std::uint32_t u = 0; u < nodes; ++u)
      for (std::uint32_t v = u + 1; v < nodes; ++v) {
        const double dx = px[u] - px[v];
        const double dy = py[u] - py[v];
        if (dx * dx + dy * dy <= radius2) {
          topo.adj[u].push_back(v);
          topo.adj[v].push_back(u);
        }
      }
    if (is_connected(topo)) return topo;
  }
  throw std::runtime_error("random geometric topology: no connected sample within retry budget");
}

inline Topology load_topology(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw std::runtime_error("topology file: empty");
  const std::uint64_t n = csv::parse_u64(csv::strip_eol(line), "topology node count");
  if (n < 2) throw std::runtime_error("topology file: needs at least two nodes");
  Topology topo;
  topo.node_count = static_cast<std::uint32_t>(n);
  topo.adj.assign(topo.node_count, {});
  std::size_t line_no = 1;
  while (std::getline(is, line)) {
    ++line_no;
    const auto text = csv::strip_eol(line);
    if (text.empty()) continue;
    const std::size_t space = text.find(' ');
    if (space == std::string_view::npos)
      throw std::runtime_error("topology file line " + std::to_string(line_no) + ": expected 'u v'");
    const std::uint64_t u = csv::parse_u64(text.substr(0, space), "topology edge");
    const std::uint64_t v = csv::parse_u64(text.substr(space + 1), "topology edge");
    if (u >= n || v >= n || u == v)
      throw std::runtime_error("topology file line " + std::to_string(line_no) + ": bad edge");
    topo.adj[u].push_back(static_cast<NodeId>(v));
    topo.adj[v].push_back(static_cast<NodeId>(u));
  }
  for (auto& nb : topo.adj) {
    std::sort(nb.begin(), nb.end());
    nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
  }
  if (!is_connected(topo)) throw std::runtime_error("topology file: graph is not connected");
  return topo;
}

inline void write_topology(std::ostream& os, const Topology& topo) {
  os << topo.node_count << '\n';
  for (NodeId u = 0; u < topo.node_count; ++u)
    for (NodeId v : topo.adj[u])
      if (u < v) os << u << ' ' << v << '\n';
}

inline Topology build_topology(const TopologySpec& spec, std::istream* file_stream = nullptr) {
  if (!spec.file.empty() && file_stream) return load_topology(*file_stream);
  return random_geometric(spec.nodes, spec.mean_degree, spec.seed);
}

// Fewest hops; among equally short routes, the lexicographically smallest
// node-id sequence, so route choice is stable across runs and platforms.
inline std::vector<NodeId> select_path(const Topology& topo, NodeId source, NodeId dest) {
  if (source >= topo.node_count || dest >= topo.node_count)
    throw std::invalid_argument("select_path: node outside topology");
  if (source == dest) throw std::invalid_argument("select_path: source equals destination");

  constexpr std::uint32_t unreached = UINT32_MAX;
  std::vector<std::uint32_t> dist(topo.node_count, unreached);
  std::deque<NodeId> frontier{dest};
  dist[dest] = 0;
  while (!frontier.empty()) {
    const NodeId u = frontier.front();
    frontier.pop_front();
    for (NodeId v : topo.adj[u])
      if (dist[v] == unreached) {
        dist[v] = dist[u] + 1;
        frontier.push_back(v);
      }
  }
  if (dist[source] == unreached) throw std::runtime_error("select_path: destination unreachable");

  std::vector<NodeId> path{source};
  NodeId cur = source;
  while (cur != dest) {
    NodeId next = unreached;
    for (NodeId v : topo.adj[cur]) // neighbors sorted: first hit is smallest id
      if (dist[v] == dist[cur] - 1) {
        next = v;
        break;
      }
    if (next == unreached) throw std::logic_error("select_path: broken distance field");
    path.push_back(next);
    cur = next;
  }
  return path;
}

} // namespace pathtrust
