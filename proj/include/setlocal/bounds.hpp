#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "setlocal/graph.hpp"
#include "setlocal/nbhd.hpp"
#include "setlocal/view.hpp"

namespace setlocal {

// Classes I_1..I_c of vertices of one neighborhood-graph level. In proper
// mode (defect 0) each class is independent; in defective mode each class
// induces maximum degree <= defect. Classes may overlap and need not cover.
struct IndSetFamily {
  std::vector<std::vector<View>> classes;
  std::uint32_t defect = 0;
};

// Degree of every member inside the subgraph induced by `cls`, under the
// mutual-membership rule. Works on level >= 1 views without the host graph.
std::vector<std::size_t> induced_degrees(std::span<const View> cls);
bool is_independent_set(std::span<const View> cls);

// Orientation of K_m: for x < y, forward(x, y) means x -> y.
class Orientation {
 public:
  explicit Orientation(Color m);
  Color m() const noexcept { return m_; }
  // True iff the edge {x, y} points from x to y.
  bool points(Color x, Color y) const;
  void set(Color from, Color to);
  // (x, A) is covered iff every edge {x, y}, y in A, points away from x.
  bool covers(const View& node) const;
  // Colors all of whose edges point away.
  std::vector<Color> sources() const;

 private:
  Color m_;
  std::vector<bool> forward_;  // indexed by pair (x < y)
  std::size_t slot(Color x, Color y) const;
};

// Orientation induced by an independent set of NH1(m, delta). Throws
// InvalidArgument if I is not independent (some pair demanded both ways).
Orientation orientation_of(std::span<const View> cls, Color m);

// W-sources of I (a set of level i+1 vertices over `lower`):
// every x of `lower` such that each w in W adjacent to x lies in the A of
// some (x, A) in I. Returned as sorted vertex indices of `lower`.
std::vector<std::uint32_t> w_sources(const NbhdGraph& lower, std::span<const View> cls,
                                     std::span<const std::uint32_t> w);
// W = all of `lower`.
std::vector<std::uint32_t> sources(const NbhdGraph& lower, std::span<const View> cls);

// S_r(I) = I and S_i(I) = sources of S_{i+1}(I) in NT_i, for i = r-1..0.
// levels[i] is NT_i for i < r; I lives one level above the top.
struct SourceChain {
  std::vector<View> top;                          // S_r
  std::vector<std::vector<std::uint32_t>> below;  // below[i] = S_i as indices of levels[i]
};
SourceChain source_chain(std::span<const std::shared_ptr<const NbhdGraph>> levels, std::span<const View> cls);

// A vertex of the host that no class contains, plus a readable record of how
// it was constructed.
struct Refutation {
  View node;
  std::vector<std::string> transcript;
  // Within-clique W-source uniqueness checks performed (all passed).
  std::size_t clique_source_checks = 0;
};

// One-round refuter over NH1(m, delta). Requires 4c <= delta^2 and
// 4m >= delta^2 + 2 delta + 4.
Refutation uncovered_node_nh1(Color m, std::uint32_t delta, Semantics variant, const IndSetFamily& family);

// From an uncolored clique T (indices of `level`, |T| = p + d) build p
// pairwise adjacent level+1 vertices contained in none of next_classes
// (the sets S_{level+1}(I_k)). Requires d(p + d - 1) + c <= dD.
std::vector<View> uncolored_clique_step(const NbhdGraph& level, std::span<const std::uint32_t> t,
                                        std::span<const std::vector<View>> next_classes, std::uint32_t p,
                                        std::uint32_t d, std::uint32_t bound, std::size_t* clique_checks = nullptr);

// Refuter for NT_r(m, D): `lower` is NT_{r-1}(m, D) (built with its tower),
// the classes are sets of NT_r vertices. Requires D divisible by 2r,
// 4rc <= D^2 and 4rm >= D^2 + 2rD + 4r.
Refutation refute_nt(const std::shared_ptr<const NbhdGraph>& lower, const IndSetFamily& family);

// (d, W)-sources of a set of NH1 vertices: x in W such that every
// B subset of (W minus x) with |B| <= d+1 lies inside the A of some (x, A)
// in I. B ranges over the empty set too, so x needs at least one member.
std::vector<Color> d_sources(std::span<const View> cls, std::span<const Color> w, std::uint32_t d);

// One-round d-defective refuter over NH1(m, delta). Requires
// 4(d+1)^2 c <= delta^2 and m >= 2 delta^2.
Refutation uncovered_node_defective(Color m, std::uint32_t delta, Semantics variant, const IndSetFamily& family);

// Parameter calculator for the asymptotic bound.
struct BoundReport {
  std::uint32_t delta = 0;
  double c = 0;
  double eta = 0;
  std::uint64_t rounds = 0;  // floor((delta^(1-eta) / (16C))^(1/3))
  double d = 0;              // (2C delta^(2+eta))^(1/3)
  double m_threshold = 0;    // D^2/(4r) + D/2 + 1 (infinite if r = 0)
  double m_given = 0;        // 2C delta^(1+eta)
  bool m_condition = false;  // m_given >= m_threshold
};
BoundReport round_lower_bound(std::uint32_t delta, double c, double eta);

// floor(x^(1/3)) for x >= 0, exact at perfect cubes.
std::uint64_t floor_cbrt(double x);

}  // namespace setlocal
