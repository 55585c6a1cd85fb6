#include "setlocal/chromatic.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <tuple>

#include "setlocal/error.hpp"

namespace setlocal {

std::string to_string(Colorability c) {
  switch (c) {
    case Colorability::Yes: return "yes";
    case Colorability::No: return "no";
    case Colorability::Unknown: return "unknown";
  }
  return "unknown";
}

std::vector<NodeId> greedy_clique(const Graph& g) {
  std::vector<NodeId> best;
  const auto n = static_cast<NodeId>(g.size());
  std::vector<char> in_cand(n, 0);
  for (NodeId s = 0; s < n; ++s) {
    if (g.degree(s) + 1 <= best.size()) continue;
    std::vector<NodeId> clique{s};
    std::vector<NodeId> cand(g.neighbors(s).begin(), g.neighbors(s).end());
    while (!cand.empty() && clique.size() + cand.size() > best.size()) {
      for (NodeId v : cand) in_cand[v] = 1;
      NodeId pick = cand.front();
      std::size_t pick_score = 0;
      bool first = true;
      for (NodeId v : cand) {
        std::size_t score = 0;
        for (NodeId u : g.neighbors(v)) score += in_cand[u];
        if (first || score > pick_score) {
          pick = v;
          pick_score = score;
          first = false;
        }
      }
      for (NodeId v : cand) in_cand[v] = 0;
      clique.push_back(pick);
      std::vector<NodeId> next;
      for (NodeId v : cand) {
        if (v != pick && g.has_edge(v, pick)) next.push_back(v);
      }
      cand = std::move(next);
    }
    if (clique.size() > best.size()) best = clique;
  }
  std::sort(best.begin(), best.end());
  return best;
}

namespace {

// Shared search state for DSATUR ordering. Uncolored vertices live in a
// set ordered by (saturation desc, degree desc, index asc).
class Dsatur {
 public:
  Dsatur(const Graph& g, std::size_t k) : g_(g), k_(k), color_(g.size(), 0), sat_(g.size(), 0),
                                           count_(g.size() * (k + 1), 0) {
    for (NodeId v = 0; v < g.size(); ++v) queue_.insert(key(v));
  }

  bool done() const { return queue_.empty(); }
  NodeId next() const { return std::get<2>(*queue_.begin()); }
  Color color(NodeId v) const { return color_[v]; }
  bool available(NodeId v, Color c) const { return count_[v * (k_ + 1) + c] == 0; }
  std::size_t saturation(NodeId v) const { return sat_[v]; }

  void assign(NodeId v, Color c) {
    queue_.erase(key(v));
    color_[v] = c;
    for (NodeId u : g_.neighbors(v)) {
      if (color_[u] != 0) {
        ++count_[u * (k_ + 1) + c];
        continue;
      }
      if (count_[u * (k_ + 1) + c]++ == 0) {
        queue_.erase(key(u));
        ++sat_[u];
        queue_.insert(key(u));
      }
    }
  }

  void unassign(NodeId v) {
    const Color c = color_[v];
    color_[v] = 0;
    for (NodeId u : g_.neighbors(v)) {
      if (color_[u] != 0) {
        --count_[u * (k_ + 1) + c];
        continue;
      }
      if (--count_[u * (k_ + 1) + c] == 0) {
        queue_.erase(key(u));
        --sat_[u];
        queue_.insert(key(u));
      }
    }
    queue_.insert(key(v));
  }

  // True iff some uncolored neighbor of v has no color left.
  bool wipes_out_neighbor(NodeId v) const {
    for (NodeId u : g_.neighbors(v)) {
      if (color_[u] == 0 && sat_[u] >= k_) return true;
    }
    return false;
  }

  std::vector<Color> colors() const { return color_; }

 private:
  using Key = std::tuple<std::size_t, std::size_t, NodeId>;
  Key key(NodeId v) const { return {k_ + 1 - sat_[v], g_.size() - g_.degree(v), v}; }

  const Graph& g_;
  std::size_t k_;
  std::vector<Color> color_;
  std::vector<std::size_t> sat_;
  std::vector<std::uint32_t> count_;
  std::set<Key> queue_;
};

class Search {
 public:
  Search(const Graph& g, std::size_t k, std::uint64_t budget) : st_(g, k), k_(k), budget_(budget) {}

  KColorResult run(std::span<const NodeId> clique) {
    KColorResult res;
    Color used = 0;
    for (NodeId v : clique) {
      st_.assign(v, ++used);
    }
    const auto status = dfs(used);
    res.expansions = expansions_;
    if (status == 1) {
      res.status = Colorability::Yes;
      res.witness = ColorAssignment{st_.colors(), static_cast<Color>(k_)};
    } else {
      res.status = status == 0 ? Colorability::No : Colorability::Unknown;
    }
    return res;
  }

 private:
  // 1 found, 0 exhausted, -1 out of budget.
  int dfs(Color used) {
    if (st_.done()) return 1;
    const NodeId v = st_.next();
    const Color limit = std::min<Color>(k_, used + 1);
    for (Color c = 1; c <= limit; ++c) {
      if (!st_.available(v, c)) continue;
      if (expansions_ >= budget_) return -1;
      ++expansions_;
      st_.assign(v, c);
      int r = 0;
      if (!st_.wipes_out_neighbor(v)) r = dfs(std::max(used, c));
      if (r == 1) return 1;
      st_.unassign(v);
      if (r == -1) return -1;
    }
    return 0;
  }

  Dsatur st_;
  std::size_t k_;
  std::uint64_t budget_;
  std::uint64_t expansions_ = 0;
};

}  // namespace

ColorAssignment dsatur_coloring(const Graph& g) {
  const std::size_t k = g.max_degree() + 1;
  Dsatur st(g, k);
  Color used = 0;
  while (!st.done()) {
    const NodeId v = st.next();
    Color c = 1;
    while (!st.available(v, c)) ++c;
    st.assign(v, c);
    used = std::max(used, c);
  }
  return {st.colors(), used};
}

KColorResult is_k_colorable(const Graph& g, std::size_t k, std::uint64_t budget) {
  if (k < 1) throw InvalidArgument("k must be at least 1");
  if (g.size() == 0) return {Colorability::Yes, ColorAssignment{{}, static_cast<Color>(k)}, 0};
  const auto clique = greedy_clique(g);
  if (clique.size() > k) return {Colorability::No, std::nullopt, 0};
  auto res = Search(g, k, budget).run(clique);
  if (res.witness && !validate_proper(g, *res.witness)) {
    throw InvariantViolation("k-coloring search produced an improper witness");
  }
  return res;
}

ChiResult chi_exact(const Graph& g, std::uint64_t budget) {
  ChiResult res;
  if (g.size() == 0) {
    res.exact = true;
    res.witness = ColorAssignment{{}, 0};
    return res;
  }
  res.lower = greedy_clique(g).size();
  res.witness = dsatur_coloring(g);
  res.upper = res.witness->palette;
  while (res.upper > res.lower) {
    const std::uint64_t left = budget > res.expansions ? budget - res.expansions : 0;
    const auto k = is_k_colorable(g, res.upper - 1, left);
    res.expansions += k.expansions;
    if (k.status == Colorability::Yes) {
      res.upper -= 1;
      res.witness = k.witness;
    } else if (k.status == Colorability::No) {
      res.lower = res.upper;
    } else {
      res.budget_exhausted = true;
      break;
    }
  }
  res.exact = res.lower == res.upper;
  if (!validate_proper(g, *res.witness)) throw InvariantViolation("chi witness is improper");
  return res;
}

void export_dimacs(const Graph& g, const std::string& path, std::span<const std::string> labels) {
  if (!labels.empty() && labels.size() != g.size()) {
    throw InvalidArgument("need one label per vertex");
  }
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path + " for writing");
  out << "p edge " << g.size() << ' ' << g.edge_count() << '\n';
  for (const auto& [u, v] : g.edges()) out << "e " << u + 1 << ' ' << v + 1 << '\n';
  if (!out) throw Error("write to " + path + " failed");
  if (labels.empty()) return;
  nlohmann::json map = nlohmann::json::object();
  for (std::size_t i = 0; i < labels.size(); ++i) map[std::to_string(i + 1)] = labels[i];
  std::ofstream side(path + ".map.json");
  if (!side) throw Error("cannot open " + path + ".map.json for writing");
  side << map.dump(1) << '\n';
  if (!side) throw Error("write to " + path + ".map.json failed");
}

void export_dimacs(const NbhdGraph& g, const std::string& path) {
  std::vector<std::string> labels;
  labels.reserve(g.size());
  for (const View& v : g.vertices()) labels.push_back(to_hex(v.encoding()));
  export_dimacs(g.graph(), path, labels);
}

DimacsGraph import_dimacs(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open " + path);
  std::string line;
  std::optional<std::size_t> n;
  std::size_t declared = 0;
  std::vector<Edge> edges;
  std::set<Edge> seen;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag) || tag == "c") continue;
    const std::string where = path + ":" + std::to_string(lineno);
    if (tag == "p") {
      std::string fmt;
      if (n || !(ls >> fmt >> *(n = std::size_t{}) >> declared) || (fmt != "edge" && fmt != "col")) {
        throw InvalidArgument(where + ": bad problem line");
      }
    } else if (tag == "e") {
      std::size_t u = 0, v = 0;
      if (!n || !(ls >> u >> v) || u < 1 || v < 1 || u > *n || v > *n || u == v) {
        throw InvalidArgument(where + ": bad edge line");
      }
      Edge e{static_cast<NodeId>(std::min(u, v) - 1), static_cast<NodeId>(std::max(u, v) - 1)};
      if (seen.insert(e).second) edges.push_back(e);
    } else {
      throw InvalidArgument(where + ": unknown line type '" + tag + "'");
    }
  }
  if (!n) throw InvalidArgument(path + ": missing problem line");
  if (declared != edges.size()) {
    throw InvalidArgument(path + ": header declares " + std::to_string(declared) + " edges, found " +
                          std::to_string(edges.size()));
  }
  DimacsGraph out{Graph::from_edges(*n, edges), {}};
  std::ifstream side(path + ".map.json");
  if (side) {
    const auto map = nlohmann::json::parse(side);
    out.labels.resize(*n);
    for (std::size_t i = 0; i < *n; ++i) out.labels[i] = map.at(std::to_string(i + 1)).get<std::string>();
  }
  return out;
}

}  // namespace setlocal
