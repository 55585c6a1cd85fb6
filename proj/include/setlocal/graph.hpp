#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include <json.hpp>

namespace setlocal {

using NodeId = std::uint32_t;
using Color = std::uint64_t;
using Edge = std::pair<NodeId, NodeId>;

// Simple undirected graph with sorted adjacency lists. Immutable once built.
class Graph {
 public:
  Graph() = default;

  // Throws InvalidArgument on self-loops, duplicate edges or out-of-range ids.
  static Graph from_edges(std::size_t n, std::span<const Edge> edges);
  // Adjacency must be symmetric and irreflexive; lists need not be sorted.
  static Graph from_adjacency(std::vector<std::vector<NodeId>> adjacency);

  std::size_t size() const noexcept { return adjacency_.size(); }
  std::size_t edge_count() const noexcept { return edge_count_; }
  std::span<const NodeId> neighbors(NodeId v) const { return adjacency_.at(v); }
  std::size_t degree(NodeId v) const { return adjacency_.at(v).size(); }
  std::size_t max_degree() const noexcept;
  bool has_edge(NodeId u, NodeId v) const;
  // Each undirected edge once, as (u, v) with u < v, in lexicographic order.
  std::vector<Edge> edges() const;

 private:
  std::vector<std::vector<NodeId>> adjacency_;
  std::size_t edge_count_ = 0;
};

// Colors are 1-based; `palette` is the declared upper bound c of a c-coloring.
struct ColorAssignment {
  std::vector<Color> colors;
  Color palette = 0;

  friend bool operator==(const ColorAssignment&, const ColorAssignment&) = default;
};

// The simulation substrate: a graph with a proper initial m-coloring psi.
class ColoredGraph {
 public:
  // Validates every invariant (degree cap, psi proper and within [1, m]).
  ColoredGraph(Graph graph, std::vector<Color> psi, Color m, std::uint32_t delta_cap);

  const Graph& graph() const noexcept { return graph_; }
  std::size_t size() const noexcept { return graph_.size(); }
  std::span<const Color> psi() const noexcept { return psi_; }
  Color psi(NodeId v) const { return psi_.at(v); }
  Color m() const noexcept { return m_; }
  std::uint32_t delta_cap() const noexcept { return delta_cap_; }
  ColorAssignment psi_assignment() const { return {psi_, m_}; }

 private:
  Graph graph_;
  std::vector<Color> psi_;
  Color m_;
  std::uint32_t delta_cap_;
};

// True iff no edge is monochromatic. Throws CoverageError if phi does not
// cover g, PaletteError if some color lies outside [1, phi.palette].
bool validate_proper(const Graph& g, const ColorAssignment& phi);

// True iff every color class induces a subgraph of maximum degree <= d.
bool validate_defective(const Graph& g, const ColorAssignment& phi, std::uint32_t d);

// Random tree on n nodes: node i attaches to a uniformly random earlier node
// with residual degree capacity, and takes a uniform color different from its
// parent's. Output depends only on the arguments.
ColoredGraph random_colored_tree(std::size_t n, std::uint32_t delta_cap, Color m, std::uint64_t seed);

// Sequential smallest-available-color greedy in node order.
ColorAssignment greedy_coloring(const Graph& g);

// Wire format uses 0-based node indices:
// {"n":..., "edges":[[u,v],...], "psi":[...], "m":..., "delta":...}
nlohmann::json to_json(const ColoredGraph& g);
ColoredGraph colored_graph_from_json(const nlohmann::json& j);

// {"colors":[...], "palette":c}
nlohmann::json to_json(const ColorAssignment& phi);
ColorAssignment color_assignment_from_json(const nlohmann::json& j);

}  // namespace setlocal
