#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <json.hpp>

#include "setlocal/graph.hpp"
#include "setlocal/view.hpp"

namespace setlocal {

// NH1: one-round LOCAL neighborhood graph (multiset or set variant).
// NSL: SET-LOCAL neighborhood graph, built from realizing trees.
// NT, NTilde: the recursive families; NTilde adds the type condition R(x) = z(A).
enum class Family { NH1, NSL, NT, NTilde };

const char* to_string(Family f);
Family family_from_string(const std::string& s);

struct BuildCaps {
  std::size_t vertices = 2'000'000;
  std::size_t edges = 50'000'000;
};

// An explicit neighborhood graph. Vertices are views (level 0: colors; level
// i >= 1: (center, neighbor collection)) listed in canonical encoding order.
// Above level 0, {(x,A),(y,B)} is an edge iff x in B and y in A, except for
// NSL where edges are the view pairs realized at adjacent tree nodes.
class NbhdGraph {
 public:
  Family family() const noexcept { return family_; }
  Color m() const noexcept { return m_; }
  // Delta for NH1/NSL, D for NT/NTilde.
  std::uint32_t bound() const noexcept { return bound_; }
  std::uint32_t level() const noexcept { return level_; }
  Semantics kind() const noexcept { return kind_; }

  std::size_t size() const noexcept { return vertices_.size(); }
  const View& vertex(std::uint32_t i) const { return vertices_.at(i); }
  std::span<const View> vertices() const noexcept { return vertices_; }
  std::optional<std::uint32_t> find(const View& v) const;
  bool contains(const View& v) const { return find(v).has_value(); }

  const Graph& graph() const noexcept { return graph_; }
  std::span<const NodeId> neighbors(std::uint32_t i) const { return graph_.neighbors(i); }
  bool adjacent(std::uint32_t a, std::uint32_t b) const { return graph_.has_edge(a, b); }
  std::size_t edge_count() const noexcept { return graph_.edge_count(); }

  // The level-below graph this one was built on (null for level 0 and NSL).
  const std::shared_ptr<const NbhdGraph>& below() const noexcept { return below_; }
  // Index in below() of the center of vertex i, and of its members.
  std::uint32_t center_index(std::uint32_t i) const { return centers_.at(i); }
  std::span<const std::uint32_t> member_indices(std::uint32_t i) const { return members_.at(i); }

  // Builders.
  static std::shared_ptr<const NbhdGraph> make(Family family, Color m, std::uint32_t bound, std::uint32_t level,
                                               Semantics kind, std::shared_ptr<const NbhdGraph> below,
                                               std::vector<View> vertices, const BuildCaps& caps);
  static std::shared_ptr<const NbhdGraph> make_with_edges(Family family, Color m, std::uint32_t bound,
                                                          std::uint32_t level, std::vector<View> vertices,
                                                          std::vector<std::pair<View, View>> edges);

 private:
  Family family_ = Family::NT;
  Color m_ = 0;
  std::uint32_t bound_ = 0;
  std::uint32_t level_ = 0;
  Semantics kind_ = Semantics::Set;
  std::vector<View> vertices_;
  std::unordered_map<std::string, std::uint32_t> index_;
  Graph graph_;
  std::shared_ptr<const NbhdGraph> below_;
  std::vector<std::uint32_t> centers_;
  std::vector<std::vector<std::uint32_t>> members_;

  void set_vertices(std::vector<View> vertices);
};

// Mutual-membership edge rule on level >= 1 vertices: x in B and y in A.
bool mutual_membership(const View& a, const View& b);

// K_m on views of colors 1..m.
std::shared_ptr<const NbhdGraph> build_clique(Family family, Color m, std::uint32_t bound, Semantics kind);

std::shared_ptr<const NbhdGraph> build_NH1(Color m, std::uint32_t delta, Semantics variant, const BuildCaps& caps = {});
std::shared_ptr<const NbhdGraph> build_NT(std::uint32_t r, Color m, std::uint32_t d, const BuildCaps& caps = {});
std::shared_ptr<const NbhdGraph> build_Ntilde(std::uint32_t r, Color m, std::uint32_t d, const BuildCaps& caps = {});
std::shared_ptr<const NbhdGraph> build_NSL(std::uint32_t r, Color m, std::uint32_t delta, const BuildCaps& caps = {});

// Projected vertex counts, computed without materializing the graph.
std::size_t projected_NH1_size(Color m, std::uint32_t delta, Semantics variant);
std::size_t projected_next_level_size(const NbhdGraph& level, std::uint32_t d);

// The levels 0..g.level() of a recursively built graph, bottom first.
std::vector<std::shared_ptr<const NbhdGraph>> tower(const std::shared_ptr<const NbhdGraph>& g);

// Vertex of an NT/NTilde level r+1 graph over `lower` (level r)?
bool is_level_vertex(const NbhdGraph& lower, const View& v, std::uint32_t d, bool type_condition);
// Vertex of NH1(m, delta) in the given variant?
bool is_nh1_vertex(const View& v, Color m, std::uint32_t delta, Semantics variant);

nlohmann::json to_json(const NbhdGraph& g);

// A vertex mapping between two neighborhood graphs.
struct HomMap {
  std::shared_ptr<const NbhdGraph> domain;
  std::shared_ptr<const NbhdGraph> codomain;
  std::vector<View> images;  // images[i] is the image of domain vertex i
  bool verified = false;
};

struct HomReport {
  std::vector<std::uint32_t> missing;                          // images outside the codomain
  std::vector<std::pair<std::uint32_t, std::uint32_t>> broken;  // domain edges not mapped to edges
  bool ok() const { return missing.empty() && broken.empty(); }
};

// Checks every image for membership and every domain edge for preservation.
// Sets map.verified when the report is empty.
HomReport verify_homomorphism(HomMap& map);

// h_r : NTilde_r(m, D) -> NSL_r(m, D), h_0 = id, h_{r+1}((x,A)) = (h_r(x), h_r(A)).
HomMap hom_h(std::uint32_t r, Color m, std::uint32_t d, const BuildCaps& caps = {});
// f_r : NT_r(m, D) -> NTilde_r(m, (r+1)D) with the canonical minimal fill-up.
HomMap hom_f(std::uint32_t r, Color m, std::uint32_t d, const BuildCaps& caps = {});

}  // namespace setlocal
