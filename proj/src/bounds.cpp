#include "setlocal/bounds.hpp"

#include <algorithm>
#include <functional>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "setlocal/error.hpp"

namespace setlocal {

namespace {

std::string pair_key(const View& center, const View& member) {
  std::string key;
  const std::uint64_t len = center.encoding().size();
  for (int s = 56; s >= 0; s -= 8) key.push_back(static_cast<char>((len >> s) & 0xFF));
  key += center.encoding();
  key += member.encoding();
  return key;
}

std::string show(const View& v) { return to_json(v).dump(); }

std::string show(std::span<const Color> cs) {
  std::string s = "{";
  for (std::size_t i = 0; i < cs.size(); ++i) s += (i ? "," : "") + std::to_string(cs[i]);
  return s + "}";
}

std::vector<Color> member_colors(const View& v) {
  std::vector<Color> out;
  for (const auto& [child, count] : v.children()) out.push_back(child.base_color());
  return out;
}

// Members of `cls` grouped by center color (NH1 classes).
std::map<Color, std::vector<std::vector<Color>>> by_center(std::span<const View> cls) {
  std::map<Color, std::vector<std::vector<Color>>> out;
  for (const View& v : cls) out[v.inner().base_color()].push_back(member_colors(v));
  return out;
}

void check_nh1_class(std::span<const View> cls, Color m, std::uint32_t delta, Semantics variant, std::size_t k) {
  for (const View& v : cls) {
    if (!is_nh1_vertex(v, m, delta, variant)) {
      throw InvalidArgument("class " + std::to_string(k + 1) + " contains " + show(v) + ", which is not a vertex of NH1");
    }
  }
}

View nh1_node(Color x, std::span<const Color> a, Semantics variant) {
  std::vector<View::Child> kids;
  for (Color c : a) kids.emplace_back(View::leaf(variant, c), 1);
  return View::node_counted(View::leaf(variant, x), std::move(kids));
}

bool member_of_any(const View& v, const IndSetFamily& family) {
  for (const auto& cls : family.classes) {
    for (const View& u : cls) {
      if (u == v) return true;
    }
  }
  return false;
}

}  // namespace

std::vector<std::size_t> induced_degrees(std::span<const View> cls) {
  std::unordered_map<std::string, std::vector<std::uint32_t>> bucket;
  for (std::uint32_t i = 0; i < cls.size(); ++i) {
    if (cls[i].depth() == 0) throw InvalidArgument("induced degrees need level >= 1 vertices");
    for (const auto& [child, count] : cls[i].children()) bucket[pair_key(cls[i].inner(), child)].push_back(i);
  }
  // Distinct members can only collide if the class lists a vertex twice.
  std::vector<std::size_t> deg(cls.size(), 0);
  for (std::uint32_t i = 0; i < cls.size(); ++i) {
    std::set<std::uint32_t> nbrs;
    for (const auto& [child, count] : cls[i].children()) {
      auto it = bucket.find(pair_key(child, cls[i].inner()));
      if (it == bucket.end()) continue;
      for (std::uint32_t j : it->second) {
        if (j != i) nbrs.insert(j);
      }
    }
    deg[i] = nbrs.size();
  }
  return deg;
}

bool is_independent_set(std::span<const View> cls) {
  const auto deg = induced_degrees(cls);
  return std::all_of(deg.begin(), deg.end(), [](std::size_t d) { return d == 0; });
}

Orientation::Orientation(Color m) : m_(m) {
  if (m < 1) throw InvalidArgument("orientation needs m >= 1");
  forward_.assign(m * (m - 1) / 2, true);
}

std::size_t Orientation::slot(Color x, Color y) const {
  if (x == y || x < 1 || y < 1 || x > m_ || y > m_) throw InvalidArgument("not an edge of K_m");
  const Color a = std::min(x, y) - 1;
  const Color b = std::max(x, y) - 1;
  // Row a holds pairs (a, a+1..m-1).
  return a * (2 * m_ - a - 1) / 2 + (b - a - 1);
}

bool Orientation::points(Color x, Color y) const {
  const bool fwd = forward_[slot(x, y)];
  return x < y ? fwd : !fwd;
}

void Orientation::set(Color from, Color to) { forward_[slot(from, to)] = from < to; }

bool Orientation::covers(const View& node) const {
  const Color x = node.inner().base_color();
  for (const auto& [child, count] : node.children()) {
    if (!points(x, child.base_color())) return false;
  }
  return true;
}

std::vector<Color> Orientation::sources() const {
  std::vector<Color> out;
  for (Color x = 1; x <= m_; ++x) {
    bool all = true;
    for (Color y = 1; y <= m_ && all; ++y) {
      if (y != x && !points(x, y)) all = false;
    }
    if (all) out.push_back(x);
  }
  return out;
}

Orientation orientation_of(std::span<const View> cls, Color m) {
  Orientation o(m);
  std::set<std::pair<Color, Color>> demanded;
  for (const View& v : cls) {
    if (v.depth() != 1) throw InvalidArgument("orientation_of needs NH1 vertices");
    const Color x = v.inner().base_color();
    for (const auto& [child, count] : v.children()) demanded.emplace(x, child.base_color());
  }
  for (const auto& [x, y] : demanded) {
    if (demanded.count({y, x})) {
      throw InvalidArgument("set is not independent: {" + std::to_string(x) + "," + std::to_string(y) +
                            "} is demanded in both directions");
    }
    o.set(x, y);
  }
  return o;
}

std::vector<std::uint32_t> w_sources(const NbhdGraph& lower, std::span<const View> cls,
                                     std::span<const std::uint32_t> w) {
  std::vector<std::set<std::uint32_t>> covered(lower.size());
  for (const View& v : cls) {
    auto x = lower.find(v.inner());
    if (!x) throw InvalidArgument("class member " + show(v) + " is not centered on the given level");
    for (const auto& [child, count] : v.children()) {
      auto a = lower.find(child);
      if (!a) throw InvalidArgument("class member " + show(v) + " has a member outside the given level");
      covered[*x].insert(*a);
    }
  }
  std::vector<bool> in_w(lower.size(), false);
  for (std::uint32_t i : w) in_w.at(i) = true;
  std::vector<std::uint32_t> out;
  for (std::uint32_t x = 0; x < lower.size(); ++x) {
    bool source = true;
    for (std::uint32_t y : lower.neighbors(x)) {
      if (in_w[y] && !covered[x].count(y)) {
        source = false;
        break;
      }
    }
    if (source) out.push_back(x);
  }
  return out;
}

std::vector<std::uint32_t> sources(const NbhdGraph& lower, std::span<const View> cls) {
  std::vector<std::uint32_t> all(lower.size());
  for (std::uint32_t i = 0; i < all.size(); ++i) all[i] = i;
  return w_sources(lower, cls, all);
}

SourceChain source_chain(std::span<const std::shared_ptr<const NbhdGraph>> levels, std::span<const View> cls) {
  if (!is_independent_set(cls)) throw InvalidArgument("source_chain needs an independent set");
  SourceChain chain;
  chain.top.assign(cls.begin(), cls.end());
  chain.below.resize(levels.size());
  std::vector<View> cur = chain.top;
  for (std::size_t i = levels.size(); i-- > 0;) {
    const NbhdGraph& g = *levels[i];
    chain.below[i] = sources(g, cur);
    for (std::size_t a = 0; a < chain.below[i].size(); ++a) {
      for (std::size_t b = a + 1; b < chain.below[i].size(); ++b) {
        if (g.adjacent(chain.below[i][a], chain.below[i][b])) {
          throw InvariantViolation("S_" + std::to_string(i) + " is not independent");
        }
      }
    }
    cur.clear();
    for (std::uint32_t x : chain.below[i]) cur.push_back(g.vertex(x));
  }
  return chain;
}

Refutation uncovered_node_nh1(Color m, std::uint32_t delta, Semantics variant, const IndSetFamily& family) {
  const std::size_t c = family.classes.size();
  if (delta < 2) throw InvalidArgument("delta must be at least 2");
  if (4 * c > static_cast<std::size_t>(delta) * delta) throw InvalidArgument("need c <= delta^2/4");
  if (4 * m < static_cast<Color>(delta) * delta + 2 * delta + 4) {
    throw InvalidArgument("need m >= delta^2/4 + delta/2 + 1");
  }
  for (std::size_t k = 0; k < c; ++k) {
    check_nh1_class(family.classes[k], m, delta, variant, k);
    if (!is_independent_set(family.classes[k])) {
      throw InvalidArgument("class " + std::to_string(k + 1) + " is not independent");
    }
  }

  Refutation out{View::leaf(variant, 1), {}, 0};
  const auto k_m = build_clique(Family::NH1, m, delta, variant);
  std::vector<std::set<Color>> global(c);
  std::set<Color> colored;
  for (std::size_t k = 0; k < c; ++k) {
    for (std::uint32_t x : sources(*k_m, family.classes[k])) global[k].insert(k_m->vertex(x).base_color());
    ++out.clique_source_checks;
    if (global[k].size() > 1) throw InvariantViolation("two sources of one class in K_m");
    colored.insert(global[k].begin(), global[k].end());
  }
  out.transcript.push_back("sources of the classes: " + show(std::vector<Color>(colored.begin(), colored.end())));

  const std::size_t t_size = delta / 2 + 1;
  std::vector<Color> t;
  for (Color x = 1; x <= m && t.size() < t_size; ++x) {
    if (!colored.count(x)) t.push_back(x);
  }
  if (t.size() < t_size) throw InvariantViolation("too few non-sources for T");
  out.transcript.push_back("T = " + show(t));

  std::vector<std::uint32_t> t_idx;
  for (Color x : t) t_idx.push_back(static_cast<std::uint32_t>(x - 1));
  std::vector<std::vector<std::size_t>> t_sources_of(t.size());  // classes for which t[i] is a T-source
  for (std::size_t k = 0; k < c; ++k) {
    std::size_t within = 0;
    for (std::uint32_t x : w_sources(*k_m, family.classes[k], t_idx)) {
      auto pos = std::find(t_idx.begin(), t_idx.end(), x);
      if (pos == t_idx.end()) continue;
      t_sources_of[pos - t_idx.begin()].push_back(k);
      ++within;
    }
    ++out.clique_source_checks;
    if (within > 1) throw InvariantViolation("two T-sources of one class inside T");
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i < t.size(); ++i) {
    if (t_sources_of[i].size() < t_sources_of[best].size()) best = i;
  }
  const Color x = t[best];
  const auto& q_classes = t_sources_of[best];
  if (q_classes.size() * t.size() > c) throw InvariantViolation("pigeonhole bound on T-sources violated");
  out.transcript.push_back("x = " + std::to_string(x) + ", a T-source of " + std::to_string(q_classes.size()) +
                           " classes");

  std::set<Color> a;
  for (Color y : t) {
    if (y != x) a.insert(y);
  }
  const auto groups_x = [&](std::size_t k) {
    std::set<Color> covered;
    for (const View& v : family.classes[k]) {
      if (v.inner().base_color() == x) {
        for (Color y : member_colors(v)) covered.insert(y);
      }
    }
    return covered;
  };
  for (std::size_t k : q_classes) {
    const auto covered = groups_x(k);
    Color witness = 0;
    for (Color y = 1; y <= m; ++y) {
      if (y != x && !covered.count(y)) {
        witness = y;
        break;
      }
    }
    if (witness == 0) throw InvariantViolation("no witness for a non-source");
    a.insert(witness);
    out.transcript.push_back("class " + std::to_string(k + 1) + ": witness y = " + std::to_string(witness));
  }
  if (a.size() >= delta) throw InvariantViolation("|A| reached delta");

  const std::vector<Color> av(a.begin(), a.end());
  out.node = nh1_node(x, av, variant);
  if (!is_nh1_vertex(out.node, m, delta, variant) || member_of_any(out.node, family)) {
    throw InvariantViolation("constructed node " + show(out.node) + " does not refute the family");
  }
  out.transcript.push_back("uncovered node " + show(out.node));
  return out;
}

std::vector<View> uncolored_clique_step(const NbhdGraph& level, std::span<const std::uint32_t> t,
                                        std::span<const std::vector<View>> next_classes, std::uint32_t p,
                                        std::uint32_t d, std::uint32_t bound, std::size_t* clique_checks) {
  const std::size_t c = next_classes.size();
  if (p < 1 || d < 1) throw InvalidArgument("p and d must be positive");
  if (t.size() != static_cast<std::size_t>(p) + d) throw InvalidArgument("|T| must equal p + d");
  if (static_cast<std::uint64_t>(d) * (p + d - 1) + c > static_cast<std::uint64_t>(d) * bound) {
    throw InvalidArgument("need p + d - 1 + c/d <= D");
  }
  for (std::size_t a = 0; a < t.size(); ++a) {
    for (std::size_t b = a + 1; b < t.size(); ++b) {
      if (!level.adjacent(t[a], t[b])) throw InvalidArgument("T is not a clique");
    }
  }
  std::vector<std::vector<std::uint32_t>> lower_sources(c);
  for (std::size_t k = 0; k < c; ++k) {
    lower_sources[k] = sources(level, next_classes[k]);
    for (std::uint32_t x : t) {
      if (std::binary_search(lower_sources[k].begin(), lower_sources[k].end(), x)) {
        throw InvalidArgument("T is not uncolored");
      }
    }
  }

  // Choose the centers t_1..t_p.
  std::vector<std::uint32_t> rest(t.begin(), t.end());
  std::sort(rest.begin(), rest.end());
  std::vector<std::uint32_t> centers;
  std::vector<std::vector<std::size_t>> dangerous;  // classes where t_j is a T_j-source
  for (std::uint32_t j = 0; j < p; ++j) {
    const std::vector<std::uint32_t> tj(rest.begin(), rest.begin() + d);
    std::vector<std::vector<std::size_t>> src_of(tj.size());
    for (std::size_t k = 0; k < c; ++k) {
      std::size_t within = 0;
      for (std::uint32_t x : w_sources(level, next_classes[k], tj)) {
        auto pos = std::find(tj.begin(), tj.end(), x);
        if (pos == tj.end()) continue;
        src_of[pos - tj.begin()].push_back(k);
        ++within;
      }
      if (clique_checks) ++*clique_checks;
      if (within > 1) throw InvariantViolation("two W-sources of one class inside the clique W");
    }
    std::size_t best = 0;
    for (std::size_t i = 1; i < tj.size(); ++i) {
      if (src_of[i].size() < src_of[best].size()) best = i;
    }
    if (src_of[best].size() * d > c) throw InvariantViolation("pigeonhole bound on T_j-sources violated");
    centers.push_back(tj[best]);
    dangerous.push_back(src_of[best]);
    rest.erase(std::find(rest.begin(), rest.end(), tj[best]));
  }

  std::vector<View> clique;
  for (std::uint32_t j = 0; j < p; ++j) {
    const std::uint32_t tj = centers[j];
    std::set<std::uint32_t> a;
    for (std::uint32_t y : t) {
      if (y != tj) a.insert(y);
    }
    for (std::size_t k : dangerous[j]) {
      std::set<std::uint32_t> covered;
      for (const View& v : next_classes[k]) {
        if (v.inner() != level.vertex(tj)) continue;
        for (const auto& [child, count] : v.children()) covered.insert(*level.find(child));
      }
      std::optional<std::uint32_t> witness;
      for (std::uint32_t w : level.neighbors(tj)) {
        if (!covered.count(w)) {
          witness = w;
          break;
        }
      }
      if (!witness) throw InvariantViolation("no witness neighbor for a non-source center");
      a.insert(*witness);
    }
    if (a.size() > bound) throw InvariantViolation("constructed node exceeds the degree bound D");
    std::vector<View> members;
    for (std::uint32_t y : a) members.push_back(level.vertex(y));
    clique.push_back(View::node(level.vertex(tj), std::move(members)));
  }

  for (std::size_t a = 0; a < clique.size(); ++a) {
    for (std::size_t b = a + 1; b < clique.size(); ++b) {
      if (!mutual_membership(clique[a], clique[b])) throw InvariantViolation("constructed nodes are not a clique");
    }
    for (const auto& cls : next_classes) {
      if (std::find(cls.begin(), cls.end(), clique[a]) != cls.end()) {
        throw InvariantViolation("constructed node lies in a class");
      }
    }
  }
  return clique;
}

Refutation refute_nt(const std::shared_ptr<const NbhdGraph>& lower, const IndSetFamily& family) {
  if (!lower || lower->family() != Family::NT) throw InvalidArgument("refute_nt needs NT_{r-1} as the lower level");
  const std::uint32_t r = lower->level() + 1;
  const std::uint64_t big_d = lower->bound();
  const Color m = lower->m();
  const std::size_t c = family.classes.size();
  if (big_d % (2 * r) != 0) {
    throw InvalidArgument("D = " + std::to_string(big_d) + " is not divisible by 2r = " + std::to_string(2 * r));
  }
  if (4 * r * c > big_d * big_d) throw InvalidArgument("need c <= D^2/(4r)");
  if (4 * r * m < big_d * big_d + 2 * r * big_d + 4 * r) throw InvalidArgument("need m >= D^2/(4r) + D/2 + 1");
  const std::uint32_t d = static_cast<std::uint32_t>(big_d / (2 * r));

  const auto levels = tower(lower);
  for (std::size_t k = 0; k < c; ++k) {
    for (const View& v : family.classes[k]) {
      if (!is_level_vertex(*lower, v, static_cast<std::uint32_t>(big_d), false)) {
        throw InvalidArgument("class " + std::to_string(k + 1) + " contains a non-vertex of NT_" + std::to_string(r));
      }
    }
  }
  std::vector<SourceChain> chains;
  for (std::size_t k = 0; k < c; ++k) {
    if (!is_independent_set(family.classes[k])) {
      throw InvalidArgument("class " + std::to_string(k + 1) + " is not independent");
    }
    chains.push_back(source_chain(levels, family.classes[k]));
  }

  Refutation out{View::leaf(Semantics::Set, 1), {}, 0};
  // Base: at most one source per class in the clique NT_0.
  std::set<std::uint32_t> colored;
  for (const auto& ch : chains) {
    ++out.clique_source_checks;
    if (ch.below[0].size() > 1) throw InvariantViolation("two sources of one class in NT_0");
    colored.insert(ch.below[0].begin(), ch.below[0].end());
  }
  std::vector<std::uint32_t> t;
  for (std::uint32_t x = 0; x < levels[0]->size() && t.size() < r * d + 1; ++x) {
    if (!colored.count(x)) t.push_back(x);
  }
  if (t.size() < r * d + 1) throw InvariantViolation("too few uncolored colors in NT_0");
  out.transcript.push_back("d = " + std::to_string(d) + "; uncolored clique of size " + std::to_string(t.size()) +
                           " in NT_0");

  std::vector<View> clique;
  for (std::uint32_t i = 0; i < r; ++i) {
    const std::uint32_t p = r * d - (i + 1) * d + 1;
    std::vector<std::vector<View>> next(c);
    for (std::size_t k = 0; k < c; ++k) {
      if (i + 1 == r) {
        next[k] = chains[k].top;
      } else {
        for (std::uint32_t x : chains[k].below[i + 1]) next[k].push_back(levels[i + 1]->vertex(x));
      }
    }
    clique = uncolored_clique_step(*levels[i], t, next, p, d, static_cast<std::uint32_t>(big_d),
                                   &out.clique_source_checks);
    out.transcript.push_back("uncolored clique of size " + std::to_string(clique.size()) + " in NT_" +
                             std::to_string(i + 1));
    if (i + 1 < r) {
      t.clear();
      for (const View& v : clique) {
        auto idx = levels[i + 1]->find(v);
        if (!idx) throw InvariantViolation("constructed node is not a vertex of NT_" + std::to_string(i + 1));
        t.push_back(*idx);
      }
    }
  }
  out.node = clique.at(0);
  if (!is_level_vertex(*lower, out.node, static_cast<std::uint32_t>(big_d), false) || member_of_any(out.node, family)) {
    throw InvariantViolation("constructed node does not refute the family");
  }
  out.transcript.push_back("uncolored node of NT_" + std::to_string(r) + " with " +
                           std::to_string(out.node.children().size()) + " members");
  return out;
}

std::vector<Color> d_sources(std::span<const View> cls, std::span<const Color> w, std::uint32_t d) {
  const auto groups = by_center(cls);
  std::vector<Color> ws(w.begin(), w.end());
  std::sort(ws.begin(), ws.end());
  ws.erase(std::unique(ws.begin(), ws.end()), ws.end());
  std::vector<Color> out;
  for (Color x : ws) {
    auto it = groups.find(x);
    if (it == groups.end()) continue;  // B = {} already fails
    // All subsets of size <= d+1 of the members of some (x, A).
    std::set<std::vector<Color>> covered;
    for (const auto& a : it->second) {
      std::vector<Color> cur;
      std::function<void(std::size_t)> rec = [&](std::size_t start) {
        covered.insert(cur);
        if (cur.size() == d + 1) return;
        for (std::size_t i = start; i < a.size(); ++i) {
          cur.push_back(a[i]);
          rec(i + 1);
          cur.pop_back();
        }
      };
      rec(0);
    }
    std::vector<Color> nbrs;
    for (Color y : ws) {
      if (y != x) nbrs.push_back(y);
    }
    bool source = true;
    std::vector<Color> cur;
    std::function<void(std::size_t)> check = [&](std::size_t start) {
      if (!source) return;
      if (!covered.count(cur)) {
        source = false;
        return;
      }
      if (cur.size() == d + 1) return;
      for (std::size_t i = start; i < nbrs.size() && source; ++i) {
        cur.push_back(nbrs[i]);
        check(i + 1);
        cur.pop_back();
      }
    };
    check(0);
    if (source) out.push_back(x);
  }
  return out;
}

Refutation uncovered_node_defective(Color m, std::uint32_t delta, Semantics variant, const IndSetFamily& family) {
  const std::size_t c = family.classes.size();
  const std::uint64_t d = family.defect;
  if (delta < 2) throw InvalidArgument("delta must be at least 2");
  if (4 * (d + 1) * (d + 1) * c > static_cast<std::uint64_t>(delta) * delta) {
    throw InvalidArgument("need c <= delta^2 / (4(d+1)^2)");
  }
  if (m < 2 * static_cast<Color>(delta) * delta) throw InvalidArgument("need m >= 2 delta^2");
  for (std::size_t k = 0; k < c; ++k) {
    check_nh1_class(family.classes[k], m, delta, variant, k);
    const auto deg = induced_degrees(family.classes[k]);
    if (std::any_of(deg.begin(), deg.end(), [&](std::size_t x) { return x > d; })) {
      throw InvalidArgument("class " + std::to_string(k + 1) + " induces degree above d");
    }
  }

  Refutation out{View::leaf(variant, 1), {}, 0};
  std::vector<Color> all(m);
  for (Color x = 1; x <= m; ++x) all[x - 1] = x;
  std::set<Color> colored;
  for (std::size_t k = 0; k < c; ++k) {
    const auto s = d_sources(family.classes[k], all, static_cast<std::uint32_t>(d));
    ++out.clique_source_checks;
    // K_m is a clique, so max degree d on the sources means at most d+1.
    if (s.size() > d + 1) throw InvariantViolation("d-sources of a class induce degree above d");
    colored.insert(s.begin(), s.end());
  }
  out.transcript.push_back("d-sources of the classes: " + show(std::vector<Color>(colored.begin(), colored.end())));

  const std::size_t t_size = delta / 2 + 1;
  std::vector<Color> t;
  for (Color x = 1; x <= m && t.size() < t_size; ++x) {
    if (!colored.count(x)) t.push_back(x);
  }
  if (t.size() < t_size) throw InvariantViolation("too few non-sources for T");
  out.transcript.push_back("T = " + show(t));

  std::vector<std::vector<std::size_t>> src_of(t.size());
  for (std::size_t k = 0; k < c; ++k) {
    const auto s = d_sources(family.classes[k], t, static_cast<std::uint32_t>(d));
    ++out.clique_source_checks;
    if (s.size() > d + 1) throw InvariantViolation("(d,T)-sources of a class induce degree above d");
    for (Color x : s) src_of[std::find(t.begin(), t.end(), x) - t.begin()].push_back(k);
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i < t.size(); ++i) {
    if (src_of[i].size() < src_of[best].size()) best = i;
  }
  const Color x = t[best];
  if (src_of[best].size() * t.size() > c * (d + 1)) throw InvariantViolation("pigeonhole bound violated");
  out.transcript.push_back("x = " + std::to_string(x) + ", a (d,T)-source of " +
                           std::to_string(src_of[best].size()) + " classes");

  std::set<Color> a;
  for (Color y : t) {
    if (y != x) a.insert(y);
  }
  std::vector<Color> others;
  for (Color y = 1; y <= m; ++y) {
    if (y != x) others.push_back(y);
  }
  for (std::size_t k : src_of[best]) {
    const auto groups = by_center(family.classes[k]);
    const auto it = groups.find(x);
    // Smallest blocker B (by size, then lexicographically): no (x, A') in
    // the class has B inside A'.
    auto blocked = [&](const std::vector<Color>& b) {
      if (it == groups.end()) return true;
      for (const auto& members : it->second) {
        if (std::includes(members.begin(), members.end(), b.begin(), b.end())) return false;
      }
      return true;
    };
    std::optional<std::vector<Color>> blocker;
    for (std::size_t size = 0; size <= d + 1 && !blocker; ++size) {
      std::vector<Color> cur;
      std::function<void(std::size_t)> rec = [&](std::size_t start) {
        if (blocker) return;
        if (cur.size() == size) {
          if (blocked(cur)) blocker = cur;
          return;
        }
        for (std::size_t i = start; i < others.size() && !blocker; ++i) {
          cur.push_back(others[i]);
          rec(i + 1);
          cur.pop_back();
        }
      };
      rec(0);
    }
    if (!blocker) throw InvariantViolation("no blocker set for a non-d-source");
    a.insert(blocker->begin(), blocker->end());
    out.transcript.push_back("class " + std::to_string(k + 1) + ": blocker B = " + show(*blocker));
  }
  if (a.size() >= delta) throw InvariantViolation("|A| reached delta");

  const std::vector<Color> av(a.begin(), a.end());
  out.node = nh1_node(x, av, variant);
  if (!is_nh1_vertex(out.node, m, delta, variant) || member_of_any(out.node, family)) {
    throw InvariantViolation("constructed node " + show(out.node) + " does not refute the family");
  }
  out.transcript.push_back("uncovered node " + show(out.node));
  return out;
}

std::uint64_t floor_cbrt(double x) {
  if (!(x >= 0)) throw InvalidArgument("cube root of a negative number");
  auto r = static_cast<std::uint64_t>(std::cbrt(x));
  // cbrt(64) may land just below 4; fix up against the exact cubes.
  const double tol = x * 1e-12;
  while (static_cast<double>(r + 1) * (r + 1) * (r + 1) <= x + tol) ++r;
  while (r > 0 && static_cast<double>(r) * r * r > x + tol) --r;
  return r;
}

BoundReport round_lower_bound(std::uint32_t delta, double c, double eta) {
  if (!(eta >= 0 && eta < 1)) throw InvalidArgument("eta must lie in [0, 1)");
  if (!(c > 0)) throw InvalidArgument("C must be positive");
  if (delta < 2) throw InvalidArgument("delta must be at least 2");
  BoundReport rep;
  rep.delta = delta;
  rep.c = c;
  rep.eta = eta;
  const double dl = delta;
  rep.rounds = floor_cbrt(std::pow(dl, 1 - eta) / (16 * c));
  rep.d = std::cbrt(2 * c * std::pow(dl, 2 + eta));
  rep.m_given = 2 * c * std::pow(dl, 1 + eta);
  rep.m_threshold = rep.rounds == 0 ? std::numeric_limits<double>::infinity()
                                    : rep.d * rep.d / (4.0 * static_cast<double>(rep.rounds)) + rep.d / 2 + 1;
  rep.m_condition = rep.m_given >= rep.m_threshold;
  return rep;
}

}  // namespace setlocal
