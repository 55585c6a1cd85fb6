#include <doctest.h>

#include <cmath>
#include <functional>
#include <map>
#include <numeric>

#include "setlocal/bounds.hpp"
#include "setlocal/chromatic.hpp"
#include "setlocal/error.hpp"
#include "setlocal/families.hpp"
#include "support.hpp"

using namespace setlocal;

namespace {

View leaf(Color c, Semantics k = Semantics::Set) { return View::leaf(k, c); }
View nh(Color x, std::vector<Color> a, Semantics k = Semantics::Set) {
  std::vector<View::Child> kids;
  std::map<Color, std::uint32_t> counts;
  for (Color c : a) ++counts[c];
  for (auto [c, n] : counts) kids.emplace_back(leaf(c, k), k == Semantics::Set ? 1 : n);
  return View::node_counted(leaf(x, k), kids);
}

// Adjacency of level >= 1 views straight from the edge rule.
bool adjacent(const View& u, const View& v) {
  bool uv = false, vu = false;
  for (const auto& [c, n] : u.children()) uv |= c == v.inner();
  for (const auto& [c, n] : v.children()) vu |= c == u.inner();
  return uv && vu;
}

std::size_t max_induced_degree(const std::vector<View>& cls) {
  std::size_t best = 0;
  for (const auto& u : cls) {
    std::size_t deg = 0;
    for (const auto& v : cls) deg += (u != v && adjacent(u, v));
    best = std::max(best, deg);
  }
  return best;
}

bool in_any(const View& v, const IndSetFamily& f) {
  for (const auto& cls : f.classes) {
    for (const auto& u : cls) {
      if (oracle::view_string(u) == oracle::view_string(v)) return true;
    }
  }
  return false;
}

// Valid NH1 vertex, checked on the oracle string of its parts.
bool valid_nh1(const View& v, Color m, std::uint32_t delta, Semantics variant) {
  if (v.depth() != 1 || v.kind() != variant) return false;
  const Color x = v.inner().base_color();
  if (x < 1 || x > m) return false;
  std::size_t total = 0;
  for (const auto& [c, n] : v.children()) {
    if (c.base_color() == x || c.base_color() < 1 || c.base_color() > m) return false;
    if (variant == Semantics::Set && n != 1) return false;
    total += n;
  }
  return total <= delta;
}

// W-sources straight from the definition, on an explicit level graph.
std::vector<std::uint32_t> oracle_w_sources(const NbhdGraph& lower, const std::vector<View>& cls,
                                            const std::vector<std::uint32_t>& w) {
  std::vector<std::uint32_t> out;
  for (std::uint32_t x = 0; x < lower.size(); ++x) {
    bool ok = true;
    for (std::uint32_t y : w) {
      if (y == x || !lower.adjacent(x, y)) continue;
      bool covered = false;
      for (const auto& v : cls) {
        if (v.inner() == lower.vertex(x) && v.has_child(lower.vertex(y))) covered = true;
      }
      ok &= covered;
    }
    if (ok) out.push_back(x);
  }
  return out;
}

// (d, W)-sources straight from the definition.
std::vector<Color> oracle_d_sources(const std::vector<View>& cls, std::vector<Color> w, std::uint32_t d) {
  std::vector<Color> out;
  for (Color x : w) {
    std::vector<Color> rest;
    for (Color y : w) {
      if (y != x) rest.push_back(y);
    }
    bool ok = true;
    for (std::uint64_t mask = 0; mask < (1ULL << rest.size()) && ok; ++mask) {
      if (static_cast<std::uint32_t>(__builtin_popcountll(mask)) > d + 1) continue;
      bool inside_some = false;
      for (const auto& v : cls) {
        if (v.inner().base_color() != x) continue;
        bool all = true;
        for (std::size_t i = 0; i < rest.size(); ++i) {
          if (mask >> i & 1) all &= v.has_child(leaf(rest[i], v.kind()));
        }
        inside_some |= all;
      }
      ok &= inside_some;
    }
    if (ok) out.push_back(x);
  }
  return out;
}

IndSetFamily classes_of_coloring(const NbhdGraph& g, const ColorAssignment& phi, std::size_t c) {
  IndSetFamily f;
  f.classes.resize(c);
  for (std::uint32_t i = 0; i < g.size(); ++i) {
    if (phi.colors[i] <= c) f.classes[phi.colors[i] - 1].push_back(g.vertex(i));
  }
  return f;
}

}  // namespace

TEST_CASE("orientation examples") {
  const std::vector<View> one{nh(1, {2})};
  const auto o = orientation_of(one, 3);
  CHECK(o.points(1, 2));
  CHECK(o.points(1, 3));
  CHECK(o.points(2, 3));
  CHECK_FALSE(o.points(2, 1));
  const auto e = orientation_of(std::vector<View>{}, 3);
  CHECK(e.sources() == std::vector<Color>{1});
  CHECK_THROWS_AS(orientation_of(std::vector<View>{nh(1, {2}), nh(2, {1})}, 3), InvalidArgument);
  const auto back = orientation_of(std::vector<View>{nh(3, {1, 2})}, 3);
  CHECK(back.points(3, 1));
  CHECK(back.points(3, 2));
  CHECK(back.sources() == std::vector<Color>{3});
  CHECK(back.covers(nh(3, {1})));
  CHECK_FALSE(back.covers(nh(1, {3})));
}

TEST_CASE("orientation-covered sets are independent, orientations have at most one source") {
  Rng rng(17);
  const auto host = build_NH1(5, 3, Semantics::Multiset);
  for (int t = 0; t < 200; ++t) {
    const auto o = random_orientation(5, coin(rng, 1, 2), rng);
    const auto cls = views_of(*host, covered_vertices(*host, o));
    CHECK(is_independent_set(cls));
    CHECK(max_induced_degree(cls) == 0);
    CHECK(o.sources().size() <= 1);
  }
}

TEST_CASE("w_sources examples") {
  const auto nt1 = build_NT(1, 3, 2);
  const auto& k3 = *nt1->below();
  const std::vector<std::uint32_t> all{0, 1, 2};
  const std::vector<View> two{nh(1, {2}), nh(1, {3})};
  CHECK(w_sources(k3, two, all) == std::vector<std::uint32_t>{0});
  CHECK(sources(k3, two) == std::vector<std::uint32_t>{0});
  const std::vector<View> single{nh(1, {2})};
  CHECK(w_sources(k3, single, all).empty());
  // W = {x} has no neighbor of x inside, so x is vacuously a source.
  const std::vector<std::uint32_t> w1{1};
  const auto got = w_sources(k3, std::vector<View>{}, w1);
  CHECK(std::find(got.begin(), got.end(), 1U) != got.end());
}

TEST_CASE("w_sources agrees with the definition oracle") {
  Rng rng(23);
  const auto nt2 = build_NT(2, 3, 2);
  const auto levels = tower(nt2);
  for (int t = 0; t < 200; ++t) {
    const std::uint32_t lvl = 1 + uniform_below(rng, 2);
    const auto& up = *levels[lvl];
    const auto& low = *levels[lvl - 1];
    const auto cls = views_of(up, random_maximal_independent_set(up.graph(), rng));
    std::vector<std::uint32_t> w;
    for (std::uint32_t x = 0; x < low.size(); ++x) {
      if (coin(rng, 1, 3)) w.push_back(x);
    }
    CHECK(w_sources(low, cls, w) == oracle_w_sources(low, cls, w));
  }
}

TEST_CASE("source chain examples") {
  const auto nt1 = build_NT(1, 3, 2);
  const auto levels = tower(nt1);
  const std::span<const std::shared_ptr<const NbhdGraph>> below(levels.data(), 1);
  const std::vector<View> two{nh(1, {2}), nh(1, {3})};
  const auto ch = source_chain(below, two);
  CHECK(ch.below[0] == std::vector<std::uint32_t>{0});
  const auto empty = source_chain(below, std::vector<View>{});
  CHECK(empty.below[0].empty());
  CHECK_THROWS_AS(source_chain(below, std::vector<View>{nh(1, {2}), nh(2, {1})}), InvalidArgument);
}

TEST_CASE("source chains of random independent sets of NT2(3,2) are independent") {
  Rng rng(29);
  const auto nt2 = build_NT(2, 3, 2);
  const auto levels = tower(nt2);
  const std::span<const std::shared_ptr<const NbhdGraph>> below(levels.data(), 2);
  for (int t = 0; t < 200; ++t) {
    const auto cls = views_of(*nt2, random_maximal_independent_set(nt2->graph(), rng));
    const auto ch = source_chain(below, cls);
    for (std::uint32_t i = 0; i < 2; ++i) {
      for (auto a : ch.below[i]) {
        for (auto b : ch.below[i]) CHECK_FALSE(levels[i]->adjacent(a, b));
      }
    }
    // S_1 from the oracle.
    std::vector<std::uint32_t> all1(levels[1]->size());
    std::iota(all1.begin(), all1.end(), 0U);
    CHECK(ch.below[1] == oracle_w_sources(*levels[1], cls, all1));
  }
}

TEST_CASE("NH1 refuter examples") {
  IndSetFamily f;
  f.classes.push_back({nh(1, {2, 3})});
  const auto r = uncovered_node_nh1(3, 2, Semantics::Set, f);
  CHECK(valid_nh1(r.node, 3, 2, Semantics::Set));
  CHECK_FALSE(in_any(r.node, f));
  CHECK_FALSE(r.transcript.empty());

  Rng rng(31);
  const auto host = build_NH1(7, 4, Semantics::Multiset);
  IndSetFamily g;
  for (int k = 0; k < 4; ++k) g.classes.push_back(views_of(*host, random_maximal_independent_set(host->graph(), rng)));
  const auto r2 = uncovered_node_nh1(7, 4, Semantics::Multiset, g);
  CHECK(valid_nh1(r2.node, 7, 4, Semantics::Multiset));
  CHECK(r2.node.child_total() <= 3);
  CHECK_FALSE(in_any(r2.node, g));
}

TEST_CASE("NH1 refuter preconditions") {
  IndSetFamily two;
  two.classes.assign(2, {});
  CHECK_THROWS_AS(uncovered_node_nh1(3, 2, Semantics::Set, two), InvalidArgument);
  IndSetFamily one;
  one.classes.assign(1, {});
  CHECK_THROWS_AS(uncovered_node_nh1(4, 3, Semantics::Set, one), InvalidArgument);  // m < 4.25
  IndSetFamily bad;
  bad.classes.push_back({nh(1, {2}), nh(2, {1})});
  CHECK_THROWS_AS(uncovered_node_nh1(3, 2, Semantics::Set, bad), InvalidArgument);
  IndSetFamily nonvertex;
  nonvertex.classes.push_back({nh(1, {2, 2}, Semantics::Multiset)});
  CHECK_THROWS_AS(uncovered_node_nh1(3, 2, Semantics::Set, nonvertex), InvalidArgument);
}

TEST_CASE("NH1 refuter succeeds on random families") {
  Rng rng(37);
  for (auto [delta, m] : std::vector<std::pair<std::uint32_t, Color>>{{2, 3}, {3, 5}, {4, 7}}) {
    for (auto variant : {Semantics::Set, Semantics::Multiset}) {
      const auto host = build_NH1(m, delta, variant);
      for (int t = 0; t < 40; ++t) {
        const auto f = random_nh1_family(*host, delta * delta / 4, rng);
        for (const auto& cls : f.classes) REQUIRE(max_induced_degree(cls) == 0);
        const auto r = uncovered_node_nh1(m, delta, variant, f);
        CHECK(valid_nh1(r.node, m, delta, variant));
        CHECK(host->contains(r.node));
        CHECK_FALSE(in_any(r.node, f));
        CHECK(r.node.child_total() < delta);
      }
    }
  }
}

TEST_CASE("uncolored clique step examples") {
  const auto nt1 = build_NT(1, 4, 2);
  const auto& k4 = *nt1->below();
  const std::vector<std::uint32_t> t{0, 1};
  const auto out = uncolored_clique_step(k4, t, std::vector<std::vector<View>>{}, 1, 1, 1);
  REQUIRE(out.size() == 1);
  CHECK(out[0] == nh(1, {2}));

  // NT_0 -> NT_1 at m = 7, D = 4, c = 4, p = 1, d = 2 against DSATUR classes.
  const auto host = build_NT(1, 7, 4);
  const auto f = classes_of_coloring(*host, dsatur_coloring(host->graph()), 4);
  const auto& k7 = *host->below();
  std::set<std::uint32_t> colored;
  for (const auto& cls : f.classes) {
    for (auto x : oracle_w_sources(k7, cls, {0, 1, 2, 3, 4, 5, 6})) colored.insert(x);
  }
  std::vector<std::uint32_t> tt;
  for (std::uint32_t x = 0; x < 7 && tt.size() < 3; ++x) {
    if (!colored.count(x)) tt.push_back(x);
  }
  REQUIRE(tt.size() == 3);
  std::size_t checks = 0;
  const auto step = uncolored_clique_step(k7, tt, f.classes, 1, 2, 4, &checks);
  REQUIRE(step.size() == 1);
  CHECK(host->contains(step[0]));
  CHECK_FALSE(in_any(step[0], f));
  CHECK(checks == 4);

  CHECK_THROWS_AS(uncolored_clique_step(k7, tt, f.classes, 1, 2, 3), InvalidArgument);
  CHECK_THROWS_AS(uncolored_clique_step(k7, std::vector<std::uint32_t>{0, 1}, f.classes, 1, 2, 4), InvalidArgument);
}

TEST_CASE("clique step output is a clique avoiding the classes") {
  Rng rng(41);
  const auto host = build_NT(1, 9, 4);
  const auto& k9 = *host->below();
  for (int t = 0; t < 50; ++t) {
    IndSetFamily f;
    for (int k = 0; k < 2; ++k) f.classes.push_back(views_of(*host, random_maximal_independent_set(host->graph(), rng)));
    std::set<std::uint32_t> colored;
    for (const auto& cls : f.classes) {
      for (auto x : sources(k9, cls)) colored.insert(x);
    }
    std::vector<std::uint32_t> tt;
    for (std::uint32_t x = 0; x < 9 && tt.size() < 4; ++x) {
      if (!colored.count(x)) tt.push_back(x);
    }
    REQUIRE(tt.size() == 4);
    // d = 2, p = 2: 2 * 3 + 2 <= 2 * 4.
    const auto out = uncolored_clique_step(k9, tt, f.classes, 2, 2, 4);
    REQUIRE(out.size() == 2);
    CHECK(adjacent(out[0], out[1]));
    for (const auto& v : out) {
      CHECK(host->contains(v));
      CHECK_FALSE(in_any(v, f));
    }
  }
}

TEST_CASE("refute_nt at r = 1 against heuristic colorings") {
  const auto host = build_NT(1, 7, 4);
  for (const auto& phi : {dsatur_coloring(host->graph()), greedy_coloring(host->graph())}) {
    const auto f = classes_of_coloring(*host, phi, 4);
    const auto r = refute_nt(host->below(), f);
    CHECK(host->contains(r.node));
    CHECK_FALSE(in_any(r.node, f));
    CHECK(r.clique_source_checks > 0);
  }
}

TEST_CASE("refute_nt at r = 2, D = 4, m = 5 against lifted sets") {
  Rng rng(43);
  const auto nt1 = build_NT(1, 5, 4);
  for (int t = 0; t < 20; ++t) {
    IndSetFamily f;
    for (int k = 0; k < 2; ++k) {
      const auto j = random_maximal_independent_set(nt1->graph(), rng);
      f.classes.push_back(lift_independent_set(*nt1, j, 4, 50, rng));
      REQUIRE(max_induced_degree(f.classes.back()) == 0);
    }
    const auto r = refute_nt(nt1, f);
    CHECK(is_level_vertex(*nt1, r.node, 4, false));
    CHECK_FALSE(in_any(r.node, f));
  }
}

TEST_CASE("refute_nt preconditions") {
  const auto nt0 = build_NT(0, 7, 3);
  IndSetFamily f;
  CHECK_THROWS_AS(refute_nt(nt0, f), InvalidArgument);  // 3 is odd
  const auto nt0b = build_NT(0, 4, 4);
  CHECK_THROWS_AS(refute_nt(nt0b, f), InvalidArgument);  // m < 7
  const auto nt0c = build_NT(0, 7, 4);
  IndSetFamily many;
  many.classes.assign(5, {});
  CHECK_THROWS_AS(refute_nt(nt0c, many), InvalidArgument);
}

TEST_CASE("d_sources with d = 0 coincides with w_sources on NH1 hosts") {
  Rng rng(47);
  const auto host = build_NH1(5, 3, Semantics::Set);
  const auto k5p = build_clique(Family::NH1, 5, 3, Semantics::Set);
  const auto& k5 = *k5p;
  for (int t = 0; t < 200; ++t) {
    const auto cls = views_of(*host, random_maximal_independent_set(host->graph(), rng));
    std::vector<Color> w;
    std::vector<std::uint32_t> wi;
    for (Color x = 1; x <= 5; ++x) {
      if (coin(rng, 1, 2)) {
        w.push_back(x);
        wi.push_back(static_cast<std::uint32_t>(x - 1));
      }
    }
    if (w.size() < 2) continue;
    std::vector<Color> from_w;
    for (auto i : w_sources(k5, cls, wi)) {
      if (std::count(wi.begin(), wi.end(), i)) from_w.push_back(i + 1);
    }
    CHECK(d_sources(cls, w, 0) == from_w);
  }
}

TEST_CASE("d_sources agrees with the definition oracle and the defect bound holds") {
  Rng rng(53);
  for (int t = 0; t < 150; ++t) {
    const auto cls = random_defective_class(5, 3, 1, Semantics::Multiset, coin(rng, 2, 3), 40, rng);
    REQUIRE(max_induced_degree(cls) <= 1);
    const std::vector<Color> all{1, 2, 3, 4, 5};
    const auto s = d_sources(cls, all, 1);
    CHECK(s == oracle_d_sources(cls, all, 1));
    // K_5 restricted to the sources is a clique of max degree |S| - 1.
    CHECK(s.size() <= 2);
  }
}

TEST_CASE("defective refuter example and random families") {
  Rng rng(59);
  IndSetFamily f;
  f.defect = 1;
  f.classes.push_back(random_defective_class(32, 4, 1, Semantics::Set, true, 200, rng));
  const auto r = uncovered_node_defective(32, 4, Semantics::Set, f);
  CHECK(valid_nh1(r.node, 32, 4, Semantics::Set));
  CHECK(r.node.child_total() <= 3);
  CHECK_FALSE(in_any(r.node, f));

  for (int t = 0; t < 10; ++t) {
    IndSetFamily g;
    g.defect = 1;
    g.classes.push_back(random_defective_class(50, 5, 1, Semantics::Multiset, coin(rng, 1, 2), 300, rng));
    const auto rr = uncovered_node_defective(50, 5, Semantics::Multiset, g);
    CHECK(valid_nh1(rr.node, 50, 5, Semantics::Multiset));
    CHECK_FALSE(in_any(rr.node, g));
  }
}

TEST_CASE("defective refuter preconditions") {
  IndSetFamily f;
  f.defect = 1;
  f.classes.assign(2, {});
  CHECK_THROWS_AS(uncovered_node_defective(32, 4, Semantics::Set, f), InvalidArgument);
  f.classes.assign(1, {});
  CHECK_THROWS_AS(uncovered_node_defective(31, 4, Semantics::Set, f), InvalidArgument);
  f.classes[0] = {nh(1, {2, 3}), nh(2, {1, 3}), nh(3, {1, 2})};
  CHECK_THROWS_AS(uncovered_node_defective(32, 4, Semantics::Set, f), InvalidArgument);
}

TEST_CASE("round bound calculator") {
  CHECK(round_lower_bound(1024, 1, 0).rounds == 4);
  CHECK(round_lower_bound(16, 1, 0).rounds == 1);
  for (std::uint64_t k = 0; k < 2000; ++k) {
    CHECK(floor_cbrt(static_cast<double>(k * k * k)) == k);
    if (k > 0) CHECK(floor_cbrt(static_cast<double>(k * k * k) - 1) == k - 1);
  }
  const auto rep = round_lower_bound(1024, 1, 0);
  CHECK(rep.d == doctest::Approx(std::cbrt(2.0 * 1024 * 1024)).epsilon(1e-12));
  CHECK(rep.m_given == doctest::Approx(2048));
  CHECK(rep.m_threshold == doctest::Approx(rep.d * rep.d / 16 + rep.d / 2 + 1));
  CHECK(round_lower_bound(1024, 1, 0.99).rounds <= 1);
  CHECK_THROWS_AS(round_lower_bound(1024, 1, 1), InvalidArgument);
  CHECK_THROWS_AS(round_lower_bound(1024, 0, 0), InvalidArgument);
  CHECK_THROWS_AS(round_lower_bound(1024, 1, -0.1), InvalidArgument);
}
