#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "setlocal/graph.hpp"
#include "setlocal/nbhd.hpp"

namespace setlocal {

enum class Colorability { Yes, No, Unknown };
std::string to_string(Colorability c);

struct KColorResult {
  Colorability status = Colorability::Unknown;
  std::optional<ColorAssignment> witness;  // set iff status is Yes
  std::uint64_t expansions = 0;
};

struct ChiResult {
  std::size_t lower = 0;
  std::size_t upper = 0;
  bool exact = false;
  std::optional<ColorAssignment> witness;  // an upper-color coloring
  std::uint64_t expansions = 0;
  bool budget_exhausted = false;
};

// Greedy clique: from every vertex, repeatedly add the candidate with the
// most neighbors among the remaining candidates. Returns the largest found,
// sorted.
std::vector<NodeId> greedy_clique(const Graph& g);

// DSATUR greedy coloring (colors 1-based, palette = number of colors used).
ColorAssignment dsatur_coloring(const Graph& g);

// Branch and bound over DSATUR order. A greedy clique is precolored to break
// symmetry. Each color assignment counts as one expansion; exceeding the
// budget yields Unknown.
KColorResult is_k_colorable(const Graph& g, std::size_t k, std::uint64_t budget);

// Tries k = upper-1, upper-2, ... until a k fails or the shared budget runs
// out. Always returns a validated witness for `upper`.
ChiResult chi_exact(const Graph& g, std::uint64_t budget);

// DIMACS col export. Vertex i becomes i+1. When labels are given (one per
// vertex), a sidecar "<path>.map.json" maps DIMACS indices to them.
void export_dimacs(const Graph& g, const std::string& path, std::span<const std::string> labels = {});
// Labels are hex-encoded canonical view encodings.
void export_dimacs(const NbhdGraph& g, const std::string& path);

struct DimacsGraph {
  Graph graph;
  std::vector<std::string> labels;  // empty when there is no sidecar
};
// Reads a DIMACS col file (and its sidecar if present). Throws
// InvalidArgument on malformed input.
DimacsGraph import_dimacs(const std::string& path);

}  // namespace setlocal
