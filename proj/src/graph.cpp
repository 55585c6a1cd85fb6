#include "setlocal/graph.hpp"

#include <algorithm>
#include <string>

#include "setlocal/error.hpp"
#include "setlocal/rng.hpp"

namespace setlocal {

Graph Graph::from_edges(std::size_t n, std::span<const Edge> edges) {
  std::vector<std::vector<NodeId>> adjacency(n);
  for (const auto& [u, v] : edges) {
    if (u >= n || v >= n) throw InvalidArgument("edge endpoint out of range");
    if (u == v) throw InvalidArgument("self-loop at node " + std::to_string(u));
    adjacency[u].push_back(v);
    adjacency[v].push_back(u);
  }
  return from_adjacency(std::move(adjacency));
}

Graph Graph::from_adjacency(std::vector<std::vector<NodeId>> adjacency) {
  Graph g;
  const std::size_t n = adjacency.size();
  std::size_t half_edges = 0;
  for (NodeId v = 0; v < n; ++v) {
    auto& list = adjacency[v];
    std::sort(list.begin(), list.end());
    if (std::adjacent_find(list.begin(), list.end()) != list.end()) {
      throw InvalidArgument("duplicate edge at node " + std::to_string(v));
    }
    for (NodeId u : list) {
      if (u >= n) throw InvalidArgument("neighbor out of range");
      if (u == v) throw InvalidArgument("self-loop at node " + std::to_string(v));
    }
    half_edges += list.size();
  }
  for (NodeId v = 0; v < n; ++v) {
    for (NodeId u : adjacency[v]) {
      if (!std::binary_search(adjacency[u].begin(), adjacency[u].end(), v)) {
        throw InvalidArgument("adjacency is not symmetric");
      }
    }
  }
  g.adjacency_ = std::move(adjacency);
  g.edge_count_ = half_edges / 2;
  return g;
}

std::size_t Graph::max_degree() const noexcept {
  std::size_t best = 0;
  for (const auto& list : adjacency_) best = std::max(best, list.size());
  return best;
}

bool Graph::has_edge(NodeId u, NodeId v) const {
  const auto& list = adjacency_.at(u);
  return std::binary_search(list.begin(), list.end(), v);
}

std::vector<Edge> Graph::edges() const {
  std::vector<Edge> out;
  out.reserve(edge_count_);
  for (NodeId u = 0; u < adjacency_.size(); ++u) {
    for (NodeId v : adjacency_[u]) {
      if (u < v) out.emplace_back(u, v);
    }
  }
  return out;
}

ColoredGraph::ColoredGraph(Graph graph, std::vector<Color> psi, Color m, std::uint32_t delta_cap)
    : graph_(std::move(graph)), psi_(std::move(psi)), m_(m), delta_cap_(delta_cap) {
  if (psi_.size() != graph_.size()) throw InvalidArgument("psi must assign a color to every node");
  if (graph_.max_degree() > delta_cap_) {
    throw InvalidArgument("maximum degree " + std::to_string(graph_.max_degree()) + " exceeds cap " +
                          std::to_string(delta_cap_));
  }
  for (NodeId v = 0; v < psi_.size(); ++v) {
    if (psi_[v] < 1 || psi_[v] > m_) {
      throw InvalidArgument("initial color of node " + std::to_string(v) + " outside [1, m]");
    }
    for (NodeId u : graph_.neighbors(v)) {
      if (psi_[u] == psi_[v]) throw InvalidArgument("initial coloring is not proper");
    }
  }
}

namespace {

void check_coverage(const Graph& g, const ColorAssignment& phi) {
  if (phi.colors.size() != g.size()) {
    throw CoverageError("assignment covers " + std::to_string(phi.colors.size()) + " of " +
                        std::to_string(g.size()) + " nodes");
  }
}

}  // namespace

bool validate_proper(const Graph& g, const ColorAssignment& phi) {
  check_coverage(g, phi);
  for (NodeId v = 0; v < g.size(); ++v) {
    const Color c = phi.colors[v];
    if (c < 1 || c > phi.palette) {
      throw PaletteError("node " + std::to_string(v) + " has color " + std::to_string(c) +
                         " outside palette [1, " + std::to_string(phi.palette) + "]");
    }
  }
  for (const auto& [u, v] : g.edges()) {
    if (phi.colors[u] == phi.colors[v]) return false;
  }
  return true;
}

bool validate_defective(const Graph& g, const ColorAssignment& phi, std::uint32_t d) {
  check_coverage(g, phi);
  for (NodeId v = 0; v < g.size(); ++v) {
    std::uint32_t same = 0;
    for (NodeId u : g.neighbors(v)) {
      if (phi.colors[u] == phi.colors[v] && ++same > d) return false;
    }
  }
  return true;
}

ColoredGraph random_colored_tree(std::size_t n, std::uint32_t delta_cap, Color m, std::uint64_t seed) {
  if (n < 1) throw InvalidArgument("tree needs at least one node");
  if (delta_cap < 2) throw InvalidArgument("delta_cap must be at least 2");
  if (m < 2) throw InvalidArgument("palette m must be at least 2");

  Rng rng(seed);
  std::vector<Edge> edges;
  std::vector<Color> psi(n);
  std::vector<std::uint32_t> degree(n, 0);
  // Nodes that can still accept a child; swap-removed when saturated.
  std::vector<NodeId> open;

  psi[0] = 1 + uniform_below(rng, m);
  open.push_back(0);
  for (NodeId v = 1; v < n; ++v) {
    const std::size_t slot = uniform_below(rng, open.size());
    const NodeId parent = open[slot];
    edges.emplace_back(parent, v);
    if (++degree[parent] == delta_cap) {
      open[slot] = open.back();
      open.pop_back();
    }
    degree[v] = 1;
    Color c = 1 + uniform_below(rng, m - 1);
    if (c >= psi[parent]) ++c;
    psi[v] = c;
    if (degree[v] < delta_cap) open.push_back(v);
  }
  return ColoredGraph(Graph::from_edges(n, edges), std::move(psi), m, delta_cap);
}

ColorAssignment greedy_coloring(const Graph& g) {
  ColorAssignment phi{std::vector<Color>(g.size(), 0), 0};
  std::vector<NodeId> stamp(g.max_degree() + 2, 0);
  for (NodeId v = 0; v < g.size(); ++v) {
    for (NodeId u : g.neighbors(v)) {
      const Color c = phi.colors[u];
      if (c != 0 && c < stamp.size()) stamp[c] = v + 1;
    }
    Color c = 1;
    while (stamp[c] == v + 1) ++c;
    phi.colors[v] = c;
    phi.palette = std::max(phi.palette, c);
  }
  return phi;
}

nlohmann::json to_json(const ColoredGraph& g) {
  nlohmann::json edges = nlohmann::json::array();
  for (const auto& [u, v] : g.graph().edges()) edges.push_back({u, v});
  return {{"n", g.size()},
          {"edges", std::move(edges)},
          {"psi", std::vector<Color>(g.psi().begin(), g.psi().end())},
          {"m", g.m()},
          {"delta", g.delta_cap()}};
}

ColoredGraph colored_graph_from_json(const nlohmann::json& j) {
  try {
    const auto n = j.at("n").get<std::size_t>();
    std::vector<Edge> edges;
    for (const auto& e : j.at("edges")) edges.emplace_back(e.at(0).get<NodeId>(), e.at(1).get<NodeId>());
    return ColoredGraph(Graph::from_edges(n, edges), j.at("psi").get<std::vector<Color>>(), j.at("m").get<Color>(),
                        j.at("delta").get<std::uint32_t>());
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("malformed graph JSON: ") + e.what());
  }
}

nlohmann::json to_json(const ColorAssignment& phi) { return {{"colors", phi.colors}, {"palette", phi.palette}}; }

ColorAssignment color_assignment_from_json(const nlohmann::json& j) {
  try {
    return {j.at("colors").get<std::vector<Color>>(), j.at("palette").get<Color>()};
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("malformed assignment JSON: ") + e.what());
  }
}

}  // namespace setlocal
