#pragma once

// Shared oracles and instance helpers for the unit suites. The oracles here
// are written against plain containers and never call into the library's
// own view or graph logic beyond reading a ColoredGraph.

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "setlocal/graph.hpp"
#include "setlocal/rng.hpp"
#include "setlocal/view.hpp"

namespace oracle {

using setlocal::Color;
using setlocal::NodeId;

// A view written as a string: "c" at depth 0, "(inner|child,child,...)"
// above, children sorted lexicographically; SET drops repeats.
inline std::string view_string(const setlocal::ColoredGraph& g, NodeId v, std::uint32_t r, bool multiset) {
  if (r == 0) return std::to_string(g.psi(v));
  std::vector<std::string> kids;
  for (NodeId u : g.graph().neighbors(v)) kids.push_back(view_string(g, u, r - 1, multiset));
  std::sort(kids.begin(), kids.end());
  if (!multiset) kids.erase(std::unique(kids.begin(), kids.end()), kids.end());
  std::string s = "(" + view_string(g, v, r - 1, multiset) + "|";
  for (std::size_t i = 0; i < kids.size(); ++i) s += (i ? "," : "") + kids[i];
  return s + ")";
}

// The same string for a library View, read only through its accessors.
inline std::string view_string(const setlocal::View& v) {
  if (v.depth() == 0) return std::to_string(v.base_color());
  std::vector<std::string> kids;
  for (const auto& [child, count] : v.children()) {
    for (std::uint32_t i = 0; i < count; ++i) kids.push_back(view_string(child));
  }
  std::sort(kids.begin(), kids.end());
  std::string s = "(" + view_string(v.inner()) + "|";
  for (std::size_t i = 0; i < kids.size(); ++i) s += (i ? "," : "") + kids[i];
  return s + ")";
}

inline std::uint64_t binom(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  std::uint64_t r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Vertex count of NH1(m, delta): m centers times the number of sub(multi)sets
// of the other m-1 colors of size <= delta.
inline std::uint64_t nh1_count(std::uint64_t m, std::uint64_t delta, bool multiset) {
  std::uint64_t per = 0;
  for (std::uint64_t k = 0; k <= delta; ++k) per += multiset ? binom(m - 2 + k, k) : binom(m - 1, k);
  return m * per;
}

inline bool is_prime(std::uint64_t x) {
  if (x < 2) return false;
  for (std::uint64_t d = 2; d * d <= x; ++d) {
    if (x % d == 0) return false;
  }
  return true;
}

// Exhaustive search for the cover-free parameters: prime q <= 10^4, degree
// <= 20, q > delta*deg, q^(deg+1) >= m; minimize q^2, ties by degree.
struct Params {
  std::uint64_t q = 0;
  std::uint32_t deg = 0;
};
inline Params linial_search(std::uint64_t m, std::uint32_t delta) {
  Params best;
  for (std::uint64_t q = 2; q <= 10000; ++q) {
    if (!is_prime(q)) continue;
    for (std::uint32_t deg = 1; deg <= 20; ++deg) {
      if (q <= static_cast<std::uint64_t>(delta) * deg) break;
      long double pow = 1;
      for (std::uint32_t i = 0; i <= deg; ++i) pow *= q;
      if (pow < m) continue;
      if (best.q == 0 || q * q < best.q * best.q || (q == best.q && deg < best.deg)) best = {q, deg};
      break;
    }
  }
  return best;
}

// ceil(m (1 - 1/(delta+2))) computed as m - floor(m / (delta+2)).
inline std::uint64_t kw_next(std::uint64_t m, std::uint64_t delta) { return m - m / (delta + 2); }

// Brute-force properness.
inline bool proper(const setlocal::Graph& g, const std::vector<Color>& colors) {
  for (const auto& [u, v] : g.edges()) {
    if (colors[u] == colors[v]) return false;
  }
  return true;
}

// Exhaustive chromatic number for tiny graphs.
inline std::size_t brute_chi(const setlocal::Graph& g) {
  const std::size_t n = g.size();
  if (n == 0) return 0;
  for (std::size_t k = 1; k <= n; ++k) {
    std::vector<Color> c(n, 0);
    std::size_t i = 0;
    // Iterative backtracking in vertex order.
    while (true) {
      if (i == n) return k;
      ++c[i];
      if (c[i] > k) {
        c[i] = 0;
        if (i == 0) break;
        --i;
        continue;
      }
      bool ok = true;
      for (NodeId u : g.neighbors(static_cast<NodeId>(i))) {
        if (u < i && c[u] == c[i]) ok = false;
      }
      if (ok) ++i;
    }
  }
  return n;
}

inline setlocal::Graph random_graph(std::size_t n, std::uint32_t num, std::uint32_t den, setlocal::Rng& rng) {
  std::vector<setlocal::Edge> edges;
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId v = u + 1; v < n; ++v) {
      if (setlocal::coin(rng, num, den)) edges.emplace_back(u, v);
    }
  }
  return setlocal::Graph::from_edges(n, edges);
}

}  // namespace oracle
