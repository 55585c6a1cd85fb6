#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "setlocal/graph.hpp"

namespace setlocal {

// Delivery semantics: SET collapses identical messages, MULTISET keeps counts.
enum class Semantics : std::uint8_t { Set, Multiset };

const char* to_string(Semantics s);
Semantics semantics_from_string(const std::string& s);

struct ViewRep;

// Recursive r-round view. Depth 0 carries a color; depth r >= 1 carries the
// (r-1)-view of the node itself ("inner") and the collection of (r-1)-views
// of its neighbors ("children"). Children are held in canonical order:
// ascending canonical encoding, duplicate-free with count 1 for SET views,
// (child, multiplicity) pairs for MULTISET views.
//
// The same type doubles as the vertex type of the neighborhood graphs, where
// inner is the center z and children are the types R.
class View {
 public:
  using Child = std::pair<View, std::uint32_t>;

  static View leaf(Semantics kind, Color color);
  // Children may arrive in any order and with repeats; SET collapses them.
  static View node(View inner, std::vector<View> children);
  static View node_counted(View inner, std::vector<Child> children);

  Semantics kind() const noexcept;
  std::uint32_t depth() const noexcept;
  // Depth-0 only.
  Color base_color() const;
  // Depth >= 1 only.
  const View& inner() const;
  std::span<const Child> children() const noexcept;
  // Sum of multiplicities.
  std::size_t child_total() const noexcept;

  // Injective canonical byte string; the first byte is the kind.
  const std::string& encoding() const noexcept;
  // Encoding without the kind byte.
  std::string_view body() const noexcept;

  // Membership of a child view, ignoring multiplicity.
  bool has_child(const View& v) const;
  std::uint32_t child_count(const View& v) const;

  friend bool operator==(const View& a, const View& b) { return a.encoding() == b.encoding(); }
  friend std::strong_ordering operator<=>(const View& a, const View& b) { return a.encoding() <=> b.encoding(); }

 private:
  explicit View(std::shared_ptr<const ViewRep> rep) : rep_(std::move(rep)) {}
  std::shared_ptr<const ViewRep> rep_;
};

struct ViewRep {
  Semantics kind;
  std::uint32_t depth;
  Color base;
  std::optional<View> inner;
  std::vector<View::Child> children;
  std::size_t child_total;
  std::string encoding;
};

std::string canonical_encode(const View& v);
// Accepts exactly the canonical encodings; anything else throws InvalidArgument.
View decode_view(std::string_view bytes);

// The r'-view of the same node: follows the inner chain down to depth r'.
View truncate(const View& v, std::uint32_t depth);

// SET view obtained by recursively forgetting multiplicities.
View erase_multiplicities(const View& v);

// S^G_r(v) under the given delivery semantics.
View extract_view(const ColoredGraph& g, NodeId v, std::uint32_t r, Semantics kind);
// The r-views of every node, computed level by level.
std::vector<View> extract_all_views(const ColoredGraph& g, std::uint32_t r, Semantics kind);

// Center z: the inner view; nullopt stands for the level-0 sentinel.
std::optional<View> center(const View& v);
// Types R: the children; a level-0 view has types {sentinel}.
std::vector<std::optional<View>> types(const View& v);
// z(A) = {z(a) : a in A}, sorted and duplicate-free.
std::vector<std::optional<View>> centers_of(std::span<const View> a);

// JSON: depth 0 as an integer, depth r >= 1 as {"inner":..., "children":[...]}
// with children in canonical order; MULTISET children as [view, count].
nlohmann::json to_json(const View& v);
View view_from_json(const nlohmann::json& j, Semantics kind);

std::string to_hex(std::string_view bytes);

// Hash-consing of views: equal ids within one interner iff equal views. Used
// where full encodings would be exponential in the depth.
class ViewInterner {
 public:
  using Id = std::uint32_t;

  // Ids of the r-views of every node of g.
  std::vector<Id> intern_graph(const ColoredGraph& g, std::uint32_t r, Semantics kind);
  std::size_t size() const noexcept { return table_.size(); }

 private:
  std::map<std::vector<std::uint64_t>, Id> table_;
  Id intern(std::vector<std::uint64_t> key);
};

}  // namespace setlocal
