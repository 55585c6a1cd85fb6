#include "setlocal/families.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <unordered_map>

#include "setlocal/error.hpp"

namespace setlocal {

namespace {

std::string pair_key(const View& center, const View& member) {
  std::string key = std::to_string(center.encoding().size()) + ":";
  key += center.encoding();
  key += member.encoding();
  return key;
}

// Incremental tracker of induced degrees in a growing vertex set.
class DegreeTracker {
 public:
  // Neighbors of v among the members.
  std::vector<std::uint32_t> neighbors(const View& v) const {
    std::set<std::uint32_t> out;
    for (const auto& [child, count] : v.children()) {
      auto it = bucket_.find(pair_key(child, v.inner()));
      if (it == bucket_.end()) continue;
      out.insert(it->second.begin(), it->second.end());
    }
    return {out.begin(), out.end()};
  }

  // Adds v if every degree stays <= limit.
  bool try_add(const View& v, std::size_t limit) {
    if (seen_.count(v.encoding())) return false;
    const auto nbrs = neighbors(v);
    if (nbrs.size() > limit) return false;
    for (std::uint32_t u : nbrs) {
      if (deg_[u] + 1 > limit) return false;
    }
    for (std::uint32_t u : nbrs) ++deg_[u];
    const auto id = static_cast<std::uint32_t>(members_.size());
    members_.push_back(v);
    deg_.push_back(nbrs.size());
    seen_.insert(v.encoding());
    for (const auto& [child, count] : v.children()) bucket_[pair_key(v.inner(), child)].push_back(id);
    return true;
  }

  std::vector<View> take() { return std::move(members_); }

 private:
  std::vector<View> members_;
  std::vector<std::size_t> deg_;
  std::set<std::string> seen_;
  std::unordered_map<std::string, std::vector<std::uint32_t>> bucket_;
};

std::vector<Color> random_subset(std::vector<Color> pool, std::size_t k, Rng& rng) {
  shuffle_in_place(pool, rng);
  pool.resize(std::min(k, pool.size()));
  std::sort(pool.begin(), pool.end());
  return pool;
}

View nh1_node(Color x, std::span<const Color> a, Semantics variant) {
  std::vector<View::Child> kids;
  for (Color c : a) kids.emplace_back(View::leaf(variant, c), 1);
  return View::node_counted(View::leaf(variant, x), std::move(kids));
}

}  // namespace

std::vector<std::uint32_t> random_maximal_independent_set(const Graph& g, Rng& rng) {
  std::vector<std::uint32_t> order(g.size());
  for (std::uint32_t i = 0; i < order.size(); ++i) order[i] = i;
  shuffle_in_place(order, rng);
  std::vector<bool> blocked(g.size(), false);
  std::vector<std::uint32_t> out;
  for (std::uint32_t v : order) {
    if (blocked[v]) continue;
    out.push_back(v);
    blocked[v] = true;
    for (NodeId u : g.neighbors(v)) blocked[u] = true;
  }
  std::sort(out.begin(), out.end());
  return out;
}

Orientation random_orientation(Color m, bool acyclic, Rng& rng) {
  Orientation o(m);
  if (acyclic) {
    std::vector<Color> order(m);
    for (Color x = 1; x <= m; ++x) order[x - 1] = x;
    shuffle_in_place(order, rng);
    for (std::size_t i = 0; i < order.size(); ++i) {
      for (std::size_t j = i + 1; j < order.size(); ++j) o.set(order[i], order[j]);
    }
  } else {
    for (Color x = 1; x <= m; ++x) {
      for (Color y = x + 1; y <= m; ++y) {
        if (coin(rng, 1, 2)) {
          o.set(x, y);
        } else {
          o.set(y, x);
        }
      }
    }
  }
  return o;
}

std::vector<std::uint32_t> covered_vertices(const NbhdGraph& nh1, const Orientation& o) {
  std::vector<std::uint32_t> out;
  for (std::uint32_t i = 0; i < nh1.size(); ++i) {
    if (o.covers(nh1.vertex(i))) out.push_back(i);
  }
  return out;
}

std::vector<View> views_of(const NbhdGraph& g, std::span<const std::uint32_t> idx) {
  std::vector<View> out;
  out.reserve(idx.size());
  for (std::uint32_t i : idx) out.push_back(g.vertex(i));
  return out;
}

IndSetFamily random_nh1_family(const NbhdGraph& host, std::size_t c, Rng& rng) {
  if (host.level() != 1) throw InvalidArgument("random_nh1_family needs a level-1 host");
  IndSetFamily family;
  for (std::size_t k = 0; k < c; ++k) {
    std::vector<std::uint32_t> cls;
    switch (uniform_below(rng, 4)) {
      case 0: cls = covered_vertices(host, random_orientation(host.m(), true, rng)); break;
      case 1: cls = covered_vertices(host, random_orientation(host.m(), false, rng)); break;
      case 2: cls = random_maximal_independent_set(host.graph(), rng); break;
      default: {
        // A random thinning of an orientation class: subsets stay independent.
        const auto full = covered_vertices(host, random_orientation(host.m(), true, rng));
        for (std::uint32_t v : full) {
          if (coin(rng, 1, 2)) cls.push_back(v);
        }
      }
    }
    family.classes.push_back(views_of(host, cls));
  }
  return family;
}

std::vector<View> lift_independent_set(const NbhdGraph& lower, std::span<const std::uint32_t> j, std::uint32_t d,
                                       std::size_t extra, Rng& rng) {
  if (d < 1) throw InvalidArgument("D must be positive");
  DegreeTracker tracker;
  for (std::uint32_t x : j) {
    std::vector<std::uint32_t> nbrs(lower.neighbors(x).begin(), lower.neighbors(x).end());
    shuffle_in_place(nbrs, rng);
    if (nbrs.empty()) {
      tracker.try_add(View::node(lower.vertex(x), {}), 0);
      continue;
    }
    for (std::size_t start = 0; start < nbrs.size(); start += d) {
      std::vector<View> chunk;
      for (std::size_t i = start; i < std::min(nbrs.size(), start + d); ++i) chunk.push_back(lower.vertex(nbrs[i]));
      if (!tracker.try_add(View::node(lower.vertex(x), std::move(chunk)), 0)) {
        throw InvalidArgument("lifted set is not independent; is J independent?");
      }
    }
  }
  for (std::size_t i = 0; i < extra && lower.size() > 0; ++i) {
    const auto x = static_cast<std::uint32_t>(uniform_below(rng, lower.size()));
    std::vector<std::uint32_t> nbrs(lower.neighbors(x).begin(), lower.neighbors(x).end());
    shuffle_in_place(nbrs, rng);
    nbrs.resize(std::min<std::size_t>(nbrs.size(), uniform_below(rng, d + 1)));
    std::vector<View> kids;
    for (std::uint32_t a : nbrs) kids.push_back(lower.vertex(a));
    tracker.try_add(View::node(lower.vertex(x), std::move(kids)), 0);
  }
  return tracker.take();
}

std::vector<View> random_defective_class(Color m, std::uint32_t delta, std::uint32_t d, Semantics variant,
                                         bool with_source, std::size_t extra, Rng& rng) {
  if (m < 2 || delta < 1) throw InvalidArgument("need m >= 2 and delta >= 1");
  if (d + 1 > delta) throw InvalidArgument("need d + 1 <= delta to cover (d+1)-subsets");
  DegreeTracker tracker;
  if (with_source) {
    const Color x = 1 + uniform_below(rng, m);
    std::vector<Color> others;
    for (Color y = 1; y <= m; ++y) {
      if (y != x) others.push_back(y);
    }
    // Greedy covering: each uncovered (d+1)-subset is padded with random
    // colors to a node (x, A) with |A| = delta.
    std::set<std::vector<Color>> covered;
    std::vector<Color> cur;
    std::vector<std::vector<Color>> subsets;
    std::function<void(std::size_t)> rec = [&](std::size_t start) {
      if (cur.size() == d + 1) {
        subsets.push_back(cur);
        return;
      }
      for (std::size_t i = start; i < others.size(); ++i) {
        cur.push_back(others[i]);
        rec(i + 1);
        cur.pop_back();
      }
    };
    rec(0);
    shuffle_in_place(subsets, rng);
    for (const auto& b : subsets) {
      if (covered.count(b)) continue;
      std::vector<Color> rest;
      for (Color y : others) {
        if (!std::binary_search(b.begin(), b.end(), y)) rest.push_back(y);
      }
      std::vector<Color> a = random_subset(rest, delta - b.size(), rng);
      a.insert(a.end(), b.begin(), b.end());
      std::sort(a.begin(), a.end());
      // Nodes sharing a center are never adjacent, so this cannot fail.
      if (!tracker.try_add(nh1_node(x, a, variant), d)) {
        // Duplicate of an earlier node; its subsets are covered already.
      }
      std::function<void(std::size_t)> mark = [&](std::size_t start) {
        covered.insert(cur);
        if (cur.size() == d + 1) return;
        for (std::size_t i = start; i < a.size(); ++i) {
          cur.push_back(a[i]);
          mark(i + 1);
          cur.pop_back();
        }
      };
      cur.clear();
      mark(0);
    }
  }
  std::vector<Color> all(m);
  for (Color y = 1; y <= m; ++y) all[y - 1] = y;
  for (std::size_t i = 0; i < extra; ++i) {
    const Color y = 1 + uniform_below(rng, m);
    std::vector<Color> pool;
    for (Color z : all) {
      if (z != y) pool.push_back(z);
    }
    const auto a = random_subset(pool, uniform_below(rng, delta + 1), rng);
    tracker.try_add(nh1_node(y, a, variant), d);
  }
  return tracker.take();
}

}  // namespace setlocal
