#include "setlocal/nbhd.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <map>
#include <set>
#include <unordered_set>

#include "setlocal/error.hpp"

namespace setlocal {

namespace {

constexpr std::size_t kSaturated = std::numeric_limits<std::size_t>::max();

std::size_t sat_add(std::size_t a, std::size_t b) { return a > kSaturated - b ? kSaturated : a + b; }
std::size_t sat_mul(std::size_t a, std::size_t b) {
  if (a == 0 || b == 0) return 0;
  return a > kSaturated / b ? kSaturated : a * b;
}

std::size_t binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  std::size_t r = 1;
  for (std::size_t i = 1; i <= k; ++i) {
    // r * (n - k + i) / i stays integral; guard the product.
    const std::size_t num = n - k + i;
    if (r > kSaturated / num) return kSaturated;
    r = r * num / i;
  }
  return r;
}

// Calls fn(subset) for every subset of `items` of size <= limit, in
// lexicographic order of index sequences, the empty set first.
void for_each_subset(std::span<const std::uint32_t> items, std::size_t limit,
                     const std::function<void(const std::vector<std::uint32_t>&)>& fn) {
  std::vector<std::uint32_t> cur;
  std::function<void(std::size_t)> rec = [&](std::size_t start) {
    fn(cur);
    if (cur.size() == limit) return;
    for (std::size_t i = start; i < items.size(); ++i) {
      cur.push_back(items[i]);
      rec(i + 1);
      cur.pop_back();
    }
  };
  rec(0);
}

void check_vertex_cap(std::size_t projected, const BuildCaps& caps, const std::string& what) {
  if (projected > caps.vertices) {
    throw CapExceeded(what + ": vertices exceed the cap of " + std::to_string(caps.vertices), projected);
  }
}

}  // namespace

const char* to_string(Family f) {
  switch (f) {
    case Family::NH1: return "nh1";
    case Family::NSL: return "nsl";
    case Family::NT: return "nt";
    case Family::NTilde: return "ntilde";
  }
  return "?";
}

Family family_from_string(const std::string& s) {
  if (s == "NH1" || s == "nh1") return Family::NH1;
  if (s == "NSL" || s == "nsl") return Family::NSL;
  if (s == "NT" || s == "nt") return Family::NT;
  if (s == "Ntilde" || s == "ntilde") return Family::NTilde;
  throw InvalidArgument("unknown family '" + s + "' (expected nh1, nsl, nt or ntilde)");
}

std::optional<std::uint32_t> NbhdGraph::find(const View& v) const {
  auto it = index_.find(v.encoding());
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

void NbhdGraph::set_vertices(std::vector<View> vertices) {
  std::sort(vertices.begin(), vertices.end());
  vertices.erase(std::unique(vertices.begin(), vertices.end()), vertices.end());
  vertices_ = std::move(vertices);
  index_.clear();
  index_.reserve(vertices_.size());
  for (std::uint32_t i = 0; i < vertices_.size(); ++i) index_.emplace(vertices_[i].encoding(), i);
}

std::shared_ptr<const NbhdGraph> NbhdGraph::make(Family family, Color m, std::uint32_t bound, std::uint32_t level,
                                                 Semantics kind, std::shared_ptr<const NbhdGraph> below,
                                                 std::vector<View> vertices, const BuildCaps& caps) {
  auto g = std::make_shared<NbhdGraph>();
  g->family_ = family;
  g->m_ = m;
  g->bound_ = bound;
  g->level_ = level;
  g->kind_ = kind;
  g->below_ = std::move(below);
  g->set_vertices(std::move(vertices));
  const std::size_t n = g->vertices_.size();
  if (n > caps.vertices) check_vertex_cap(n, caps, std::string(to_string(family)) + " level " + std::to_string(level));

  std::vector<Edge> edges;
  if (level == 0) {
    for (NodeId a = 0; a < n; ++a) {
      for (NodeId b = a + 1; b < n; ++b) edges.emplace_back(a, b);
    }
  } else {
    if (!g->below_) throw InvalidArgument("a level >= 1 neighborhood graph needs the level below");
    const NbhdGraph& lower = *g->below_;
    g->centers_.resize(n);
    g->members_.resize(n);
    // bucket[(center, member)] = vertices with that center containing member.
    std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> bucket;
    for (std::uint32_t i = 0; i < n; ++i) {
      const View& v = g->vertices_[i];
      auto c = lower.find(v.inner());
      if (!c) throw InvalidArgument("vertex center is not a vertex of the level below");
      g->centers_[i] = *c;
      for (const auto& [child, count] : v.children()) {
        auto a = lower.find(child);
        if (!a) throw InvalidArgument("vertex member is not a vertex of the level below");
        g->members_[i].push_back(*a);
        bucket[(static_cast<std::uint64_t>(*c) << 32) | *a].push_back(i);
      }
    }
    for (std::uint32_t i = 0; i < n; ++i) {
      for (std::uint32_t a : g->members_[i]) {
        auto it = bucket.find((static_cast<std::uint64_t>(a) << 32) | g->centers_[i]);
        if (it == bucket.end()) continue;
        for (std::uint32_t j : it->second) {
          if (i < j) {
            edges.emplace_back(i, j);
            if (edges.size() > caps.edges) {
              throw CapExceeded("edges exceed the cap of " + std::to_string(caps.edges) + "; count so far", edges.size());
            }
          }
        }
      }
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  }
  g->graph_ = Graph::from_edges(n, edges);
  return g;
}

std::shared_ptr<const NbhdGraph> NbhdGraph::make_with_edges(Family family, Color m, std::uint32_t bound,
                                                            std::uint32_t level, std::vector<View> vertices,
                                                            std::vector<std::pair<View, View>> edges) {
  auto g = std::make_shared<NbhdGraph>();
  g->family_ = family;
  g->m_ = m;
  g->bound_ = bound;
  g->level_ = level;
  g->kind_ = Semantics::Set;
  g->set_vertices(std::move(vertices));
  std::vector<Edge> ids;
  ids.reserve(edges.size());
  for (const auto& [a, b] : edges) {
    auto ia = g->find(a);
    auto ib = g->find(b);
    if (!ia || !ib) throw InvalidArgument("edge endpoint is not a vertex");
    if (*ia == *ib) throw InvariantViolation("a realized edge joins two equal views");
    ids.emplace_back(std::min(*ia, *ib), std::max(*ia, *ib));
  }
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  g->graph_ = Graph::from_edges(g->vertices_.size(), ids);
  return g;
}

bool mutual_membership(const View& a, const View& b) {
  if (a.depth() == 0 || b.depth() == 0) throw InvalidArgument("mutual membership needs level >= 1 vertices");
  return b.has_child(a.inner()) && a.has_child(b.inner());
}

std::shared_ptr<const NbhdGraph> build_clique(Family family, Color m, std::uint32_t bound, Semantics kind) {
  if (m < 1) throw InvalidArgument("m must be at least 1");
  std::vector<View> vs;
  for (Color c = 1; c <= m; ++c) vs.push_back(View::leaf(kind, c));
  return NbhdGraph::make(family, m, bound, 0, kind, nullptr, std::move(vs), BuildCaps{});
}

std::size_t projected_NH1_size(Color m, std::uint32_t delta, Semantics variant) {
  std::size_t per_center = 0;
  for (std::size_t k = 0; k <= delta; ++k) {
    // Multisets of size k over m-1 symbols: C(m-2+k, k).
    per_center = sat_add(per_center, variant == Semantics::Multiset ? binomial(m - 2 + k, k) : binomial(m - 1, k));
  }
  return sat_mul(m, per_center);
}

std::shared_ptr<const NbhdGraph> build_NH1(Color m, std::uint32_t delta, Semantics variant, const BuildCaps& caps) {
  if (delta < 2) throw InvalidArgument("NH1 needs delta >= 2");
  if (m <= delta) throw InvalidArgument("NH1 needs m > delta");
  check_vertex_cap(projected_NH1_size(m, delta, variant), caps, "NH1");
  auto base = build_clique(Family::NH1, m, delta, variant);

  std::vector<View> vs;
  for (Color x = 1; x <= m; ++x) {
    std::vector<Color> others;
    for (Color c = 1; c <= m; ++c) {
      if (c != x) others.push_back(c);
    }
    // Non-decreasing sequences (multisets) or strictly increasing ones (sets).
    std::vector<Color> cur;
    std::function<void(std::size_t)> rec = [&](std::size_t start) {
      std::vector<View::Child> kids;
      for (Color c : cur) kids.emplace_back(View::leaf(variant, c), 1);
      vs.push_back(View::node_counted(View::leaf(variant, x), std::move(kids)));
      if (cur.size() == delta) return;
      for (std::size_t i = start; i < others.size(); ++i) {
        cur.push_back(others[i]);
        rec(variant == Semantics::Multiset ? i : i + 1);
        cur.pop_back();
      }
    };
    rec(0);
  }
  return NbhdGraph::make(Family::NH1, m, delta, 1, variant, base, std::move(vs), caps);
}

std::size_t projected_next_level_size(const NbhdGraph& level, std::uint32_t d) {
  std::size_t total = 0;
  for (std::uint32_t x = 0; x < level.size(); ++x) {
    const std::size_t deg = level.neighbors(x).size();
    for (std::size_t k = 0; k <= std::min<std::size_t>(d, deg); ++k) total = sat_add(total, binomial(deg, k));
  }
  return total;
}

namespace {

std::shared_ptr<const NbhdGraph> next_level(const std::shared_ptr<const NbhdGraph>& lower, std::uint32_t d,
                                            bool type_condition, const BuildCaps& caps) {
  const Family family = type_condition ? Family::NTilde : Family::NT;
  check_vertex_cap(projected_next_level_size(*lower, d), caps,
                   std::string(to_string(family)) + " level " + std::to_string(lower->level() + 1));
  std::vector<View> vs;
  for (std::uint32_t x = 0; x < lower->size(); ++x) {
    std::vector<std::uint32_t> wanted;  // R(x) as indices two levels down
    if (lower->level() > 0) {
      auto m = lower->member_indices(x);
      wanted.assign(m.begin(), m.end());
    }
    for_each_subset(lower->neighbors(x), d, [&](const std::vector<std::uint32_t>& a) {
      if (type_condition) {
        if (lower->level() == 0) {
          if (a.empty()) return;
        } else {
          std::vector<std::uint32_t> z;
          for (std::uint32_t y : a) z.push_back(lower->center_index(y));
          std::sort(z.begin(), z.end());
          z.erase(std::unique(z.begin(), z.end()), z.end());
          if (z != wanted) return;
        }
      }
      std::vector<View> kids;
      kids.reserve(a.size());
      for (std::uint32_t y : a) kids.push_back(lower->vertex(y));
      vs.push_back(View::node(lower->vertex(x), std::move(kids)));
    });
  }
  return NbhdGraph::make(family, lower->m(), d, lower->level() + 1, Semantics::Set, lower, std::move(vs), caps);
}

std::shared_ptr<const NbhdGraph> build_recursive(std::uint32_t r, Color m, std::uint32_t d, bool type_condition,
                                                 const BuildCaps& caps) {
  if (m < 2) throw InvalidArgument("m must be at least 2");
  if (d < 1) throw InvalidArgument("D must be at least 1");
  auto g = build_clique(type_condition ? Family::NTilde : Family::NT, m, d, Semantics::Set);
  for (std::uint32_t i = 0; i < r; ++i) g = next_level(g, d, type_condition, caps);
  return g;
}

}  // namespace

std::shared_ptr<const NbhdGraph> build_NT(std::uint32_t r, Color m, std::uint32_t d, const BuildCaps& caps) {
  return build_recursive(r, m, d, false, caps);
}

std::shared_ptr<const NbhdGraph> build_Ntilde(std::uint32_t r, Color m, std::uint32_t d, const BuildCaps& caps) {
  return build_recursive(r, m, d, true, caps);
}

std::vector<std::shared_ptr<const NbhdGraph>> tower(const std::shared_ptr<const NbhdGraph>& g) {
  std::vector<std::shared_ptr<const NbhdGraph>> out;
  for (auto cur = g; cur; cur = cur->below()) out.push_back(cur);
  std::reverse(out.begin(), out.end());
  return out;
}

bool is_level_vertex(const NbhdGraph& lower, const View& v, std::uint32_t d, bool type_condition) {
  if (v.kind() != Semantics::Set || v.depth() != lower.level() + 1) return false;
  auto x = lower.find(v.inner());
  if (!x) return false;
  if (v.children().size() > d) return false;
  std::vector<std::uint32_t> z;
  for (const auto& [child, count] : v.children()) {
    auto a = lower.find(child);
    if (!a || !lower.adjacent(*x, *a)) return false;
    if (lower.level() > 0) z.push_back(lower.center_index(*a));
  }
  if (!type_condition) return true;
  if (lower.level() == 0) return !v.children().empty();
  std::sort(z.begin(), z.end());
  z.erase(std::unique(z.begin(), z.end()), z.end());
  auto r = lower.member_indices(*x);
  return std::equal(z.begin(), z.end(), r.begin(), r.end());
}

bool is_nh1_vertex(const View& v, Color m, std::uint32_t delta, Semantics variant) {
  if (v.kind() != variant || v.depth() != 1) return false;
  const Color x = v.inner().base_color();
  if (x < 1 || x > m) return false;
  if (v.child_total() > delta) return false;
  for (const auto& [child, count] : v.children()) {
    const Color c = child.base_color();
    if (c < 1 || c > m || c == x) return false;
  }
  return true;
}

// N^SL_r: every vertex is the r-view of a node in some properly m-colored
// tree of maximum degree delta, every edge a pair of views at adjacent nodes.
// Views are SET views, so a node never needs two identical child subtrees;
// the enumeration ranges over sets of distinct subtree shapes. An edge is
// realized by a tree rooted at the edge: each endpoint carries up to delta-1
// further subtrees of height r-1. Isolated single-node views are the views
// of the trivial one-node graph.
std::shared_ptr<const NbhdGraph> build_NSL(std::uint32_t r, Color m, std::uint32_t delta, const BuildCaps& caps) {
  if (m < 2) throw InvalidArgument("NSL needs m >= 2");
  if (delta < 1) throw InvalidArgument("NSL needs delta >= 1");
  if (r == 0) return build_clique(Family::NSL, m, delta, Semantics::Set);

  struct Shape {
    Color color;
    std::vector<std::uint32_t> kids;
  };
  std::vector<Shape> pool;
  // by_color[h][c-1]: shapes of height h whose root has color c.
  std::vector<std::vector<std::vector<std::uint32_t>>> by_color(r);
  for (Color c = 1; c <= m; ++c) {
    pool.push_back({c, {}});
    by_color[0].push_back({static_cast<std::uint32_t>(pool.size() - 1)});
  }
  auto below_parent = [&](std::uint32_t h, Color parent) {
    std::vector<std::uint32_t> out;
    for (Color c = 1; c <= m; ++c) {
      if (c != parent) out.insert(out.end(), by_color[h][c - 1].begin(), by_color[h][c - 1].end());
    }
    return out;
  };
  for (std::uint32_t h = 1; h < r; ++h) {
    by_color[h].resize(m);
    for (Color c = 1; c <= m; ++c) {
      const auto options = below_parent(h - 1, c);
      std::size_t count = 0;
      for (std::size_t k = 0; k < delta; ++k) count = sat_add(count, binomial(options.size(), k));
      check_vertex_cap(sat_add(pool.size(), count), caps, "NSL subtree shapes");
      for_each_subset(options, delta - 1, [&](const std::vector<std::uint32_t>& kids) {
        pool.push_back({c, kids});
        by_color[h][c - 1].push_back(static_cast<std::uint32_t>(pool.size() - 1));
      });
    }
  }

  // Every color has the same number of shapes below it, by symmetry.
  const std::size_t options = below_parent(r - 1, 1).size();
  std::size_t side = 0;
  for (std::size_t k = 0; k < delta; ++k) side = sat_add(side, binomial(options, k));
  const std::size_t trees = sat_mul(sat_mul(m, m - 1), sat_mul(side, side));
  check_vertex_cap(sat_add(sat_mul(2, trees), m), caps, "NSL realizing trees");

  std::vector<View> vertices;
  std::unordered_set<std::string> seen;
  std::vector<std::pair<View, View>> edges;
  std::unordered_set<std::string> seen_edges;
  auto add_vertex = [&](const View& v) {
    if (seen.insert(v.encoding()).second) {
      vertices.push_back(v);
      if (vertices.size() > caps.vertices) throw CapExceeded("NSL vertex count exceeds the cap", vertices.size());
    }
  };
  // Depth-r views of a lone node.
  for (Color c = 1; c <= m; ++c) {
    View v = View::leaf(Semantics::Set, c);
    for (std::uint32_t i = 0; i < r; ++i) v = View::node(v, {});
    add_vertex(v);
  }

  std::vector<std::vector<NodeId>> adj;
  std::vector<Color> psi;
  std::function<NodeId(std::uint32_t)> expand = [&](std::uint32_t shape) {
    const NodeId id = static_cast<NodeId>(psi.size());
    psi.push_back(pool[shape].color);
    adj.emplace_back();
    for (std::uint32_t k : pool[shape].kids) {
      const NodeId child = expand(k);
      adj[id].push_back(child);
      adj[child].push_back(id);
    }
    return id;
  };

  for (Color a = 1; a <= m; ++a) {
    const auto a_side = below_parent(r - 1, a);
    for (Color b = 1; b <= m; ++b) {
      if (b == a) continue;
      const auto b_side = below_parent(r - 1, b);
      std::vector<std::vector<std::uint32_t>> b_choices;
      for_each_subset(b_side, delta - 1, [&](const std::vector<std::uint32_t>& s) { b_choices.push_back(s); });
      for_each_subset(a_side, delta - 1, [&](const std::vector<std::uint32_t>& sa) {
        for (const auto& sb : b_choices) {
          adj.assign(2, {});
          psi = {a, b};
          adj[0].push_back(1);
          adj[1].push_back(0);
          for (std::uint32_t k : sa) {
            const NodeId child = expand(k);
            adj[0].push_back(child);
            adj[child].push_back(0);
          }
          for (std::uint32_t k : sb) {
            const NodeId child = expand(k);
            adj[1].push_back(child);
            adj[child].push_back(1);
          }
          const ColoredGraph tree(Graph::from_adjacency(adj), psi, m, delta);
          const auto views = extract_all_views(tree, r, Semantics::Set);
          add_vertex(views[0]);
          add_vertex(views[1]);
          const bool ordered = views[0] < views[1];
          const View& lo = ordered ? views[0] : views[1];
          const View& hi = ordered ? views[1] : views[0];
          std::string key = lo.encoding();
          key.push_back('\x00');
          key += hi.encoding();
          if (seen_edges.insert(std::move(key)).second) {
            edges.emplace_back(lo, hi);
            if (edges.size() > caps.edges) throw CapExceeded("NSL edge count exceeds the cap", edges.size());
          }
        }
      });
    }
  }
  return NbhdGraph::make_with_edges(Family::NSL, m, delta, r, std::move(vertices), std::move(edges));
}

nlohmann::json to_json(const NbhdGraph& g) {
  nlohmann::json vs = nlohmann::json::array();
  for (const View& v : g.vertices()) vs.push_back(to_hex(v.encoding()));
  nlohmann::json es = nlohmann::json::array();
  for (const auto& [a, b] : g.graph().edges()) es.push_back({a, b});
  return {{"family", to_string(g.family())},
          {"m", g.m()},
          {"bound", g.bound()},
          {"level", g.level()},
          {"kind", to_string(g.kind())},
          {"vertices", std::move(vs)},
          {"edges", std::move(es)}};
}

HomReport verify_homomorphism(HomMap& map) {
  if (!map.domain || !map.codomain) throw InvalidArgument("homomorphism map without domain or codomain");
  if (map.images.size() != map.domain->size()) throw InvalidArgument("one image per domain vertex expected");
  HomReport report;
  std::vector<std::optional<std::uint32_t>> idx(map.images.size());
  for (std::uint32_t i = 0; i < map.images.size(); ++i) {
    idx[i] = map.codomain->find(map.images[i]);
    if (!idx[i]) report.missing.push_back(i);
  }
  for (const auto& [a, b] : map.domain->graph().edges()) {
    if (!idx[a] || !idx[b] || !map.codomain->adjacent(*idx[a], *idx[b])) report.broken.emplace_back(a, b);
  }
  map.verified = report.ok();
  return report;
}

namespace {

void require_verified(HomMap& map, const std::string& name) {
  const HomReport report = verify_homomorphism(map);
  if (!report.ok()) {
    throw InvariantViolation(name + " failed verification: " + std::to_string(report.missing.size()) +
                             " images outside the codomain, " + std::to_string(report.broken.size()) +
                             " edges not preserved");
  }
}

}  // namespace

HomMap hom_h(std::uint32_t r, Color m, std::uint32_t d, const BuildCaps& caps) {
  HomMap map;
  map.domain = build_Ntilde(r, m, d, caps);
  map.codomain = build_NSL(r, m, d, caps);
  std::map<std::string, View> memo;
  std::function<View(const View&)> h = [&](const View& v) -> View {
    if (v.depth() == 0) return View::leaf(Semantics::Set, v.base_color());
    auto it = memo.find(v.encoding());
    if (it != memo.end()) return it->second;
    std::vector<View> kids;
    for (const auto& [child, count] : v.children()) kids.push_back(h(child));
    View out = View::node(h(v.inner()), std::move(kids));
    memo.emplace(v.encoding(), out);
    return out;
  };
  for (const View& v : map.domain->vertices()) map.images.push_back(h(v));
  require_verified(map, "h_" + std::to_string(r));
  return map;
}

HomMap hom_f(std::uint32_t r, Color m, std::uint32_t d, const BuildCaps& caps) {
  HomMap map;
  map.domain = build_NT(r, m, d, caps);
  const auto levels = tower(map.domain);

  // f_k maps into NTilde_k(m, (k+1)D); its neighborhoods supply the fill-up.
  std::vector<View> f;
  for (const View& v : levels[0]->vertices()) f.push_back(View::leaf(Semantics::Set, v.base_color()));
  for (std::uint32_t k = 0; k < r; ++k) {
    const auto fill = build_Ntilde(k, m, (k + 1) * d, caps);
    const NbhdGraph& upper = *levels[k + 1];
    std::vector<View> next;
    next.reserve(upper.size());
    for (std::uint32_t i = 0; i < upper.size(); ++i) {
      const View& fx = f[upper.center_index(i)];
      std::vector<View> members;
      for (std::uint32_t a : upper.member_indices(i)) members.push_back(f[a]);
      const auto p = fill->find(fx);
      if (!p) throw InvariantViolation("f_" + std::to_string(k) + " left NTilde_" + std::to_string(k));

      // Types of f(x) not yet realized as centers of the images of A.
      std::vector<std::optional<View>> missing;
      if (k == 0) {
        if (members.empty()) missing.push_back(std::nullopt);
      } else {
        std::set<View> have;
        for (const View& y : members) have.insert(y.inner());
        for (const auto& [t, count] : fx.children()) {
          if (!have.count(t)) missing.push_back(t);
        }
      }
      for (const auto& t : missing) {
        std::optional<View> pick;
        for (std::uint32_t w : fill->neighbors(*p)) {
          const View& cand = fill->vertex(w);
          if (!t || cand.inner() == *t) {
            pick = cand;
            break;
          }
        }
        if (!pick) throw InvariantViolation("no neighbor of f(x) realizes a missing type");
        members.push_back(*pick);
      }
      View image = View::node(fx, std::move(members));
      if (image.children().size() > static_cast<std::size_t>(k + 2) * d) {
        throw InvariantViolation("fill-up exceeded the degree bound (k+2)D");
      }
      next.push_back(std::move(image));
    }
    f = std::move(next);
  }
  map.images = std::move(f);
  map.codomain = build_Ntilde(r, m, (r + 1) * d, caps);
  require_verified(map, "f_" + std::to_string(r));
  return map;
}

}  // namespace setlocal
