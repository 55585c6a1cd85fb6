// Acceptance suite: one PASS/FAIL line per criterion. Exit status is 0 only
// when every criterion passes.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>

#include "setlocal/bounds.hpp"
#include "setlocal/chromatic.hpp"
#include "setlocal/color_algos.hpp"
#include "setlocal/error.hpp"
#include "setlocal/families.hpp"
#include "setlocal/nbhd.hpp"
#include "setlocal/sim.hpp"
#include "support.hpp"

using namespace setlocal;

namespace {

// Frozen at first calibration over the criterion-1 grid (n = 100 trees).
constexpr double kRoundsA = 2.0;
constexpr double kRoundsB = 6.0;
constexpr double kGridSeconds = 120.0;
constexpr double kNh1Seconds = 1.0;
constexpr std::uint64_t kChiBudget = 50000000;  // expansions; far below 10 minutes

using Clock = std::chrono::steady_clock;
double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Verdict {
  bool pass = true;
  std::string detail;
  void require(bool ok, const std::string& what) {
    if (!ok && pass) detail = "FAILED: " + what + (detail.empty() ? "" : "; " + detail);
    pass = pass && ok;
  }
};

int failures = 0;

void report(int id, const std::string& name, const std::function<Verdict()>& body) {
  Verdict v;
  try {
    v = body();
  } catch (const std::exception& e) {
    v.pass = false;
    v.detail = std::string("exception: ") + e.what();
  }
  if (!v.pass) ++failures;
  std::printf("criterion %2d %s  %-34s %s\n", id, v.pass ? "PASS" : "FAIL", name.c_str(), v.detail.c_str());
  std::fflush(stdout);
}

std::uint32_t log_star2(double x) {
  std::uint32_t k = 0;
  while (x > 1) {
    x = std::log2(x);
    ++k;
  }
  return k;
}

View leaf(Color c, Semantics k) { return View::leaf(k, c); }

bool edge_rule(const View& u, const View& v) {
  bool uv = false, vu = false;
  for (const auto& [c, n] : u.children()) uv |= c == v.inner();
  for (const auto& [c, n] : v.children()) vu |= c == u.inner();
  return uv && vu;
}

bool edge_rule_levels(const NbhdGraph& g, std::uint32_t a, std::uint32_t b) {
  if (g.level() == 0) return a != b;
  return edge_rule(g.vertex(a), g.vertex(b));
}

bool independent(const std::vector<View>& cls) {
  for (std::size_t i = 0; i < cls.size(); ++i) {
    for (std::size_t j = i + 1; j < cls.size(); ++j) {
      if (edge_rule(cls[i], cls[j])) return false;
    }
  }
  return true;
}

bool in_family(const View& v, const IndSetFamily& f) {
  const std::string s = oracle::view_string(v);
  for (const auto& cls : f.classes) {
    for (const auto& u : cls) {
      if (oracle::view_string(u) == s) return true;
    }
  }
  return false;
}

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

// Every class of the generated families is checked independently here
// before the refuter sees it.
std::size_t max_degree_in(const std::vector<View>& cls) {
  std::size_t best = 0;
  for (const auto& u : cls) {
    std::size_t deg = 0;
    for (const auto& v : cls) deg += (u != v && edge_rule(u, v));
    best = std::max(best, deg);
  }
  return best;
}

Verdict criterion1() {
  Verdict v;
  const auto t0 = Clock::now();
  std::size_t runs = 0, improper = 0, over = 0;
  double worst_slack = 1e9;
  for (std::uint32_t delta = 2; delta <= 8; ++delta) {
    for (Color m : {Color{100}, Color{10000}, Color{1000000}}) {
      const auto prog = delta_plus_one_program(m, delta);
      const double bound = kRoundsA * delta * std::log(delta + 1.0) + log_star2(static_cast<double>(m)) + kRoundsB;
      for (std::uint64_t seed = 0; seed < 1000; ++seed) {
        const auto g = random_colored_tree(100, delta, m, seed * 1000003 + delta * 31 + m);
        const auto res = run(g, prog, Semantics::Set, {false});
        ++runs;
        if (!oracle::proper(g.graph(), res.output.colors) || res.output.palette != delta + 1 ||
            *std::max_element(res.output.colors.begin(), res.output.colors.end()) > delta + 1) {
          ++improper;
        }
        const double rounds = res.trace.rounds;
        if (rounds > bound) ++over;
        worst_slack = std::min(worst_slack, bound - rounds);
      }
    }
  }
  const double secs = seconds_since(t0);
  v.require(improper == 0, std::to_string(improper) + " improper outputs");
  v.require(over == 0, std::to_string(over) + " runs above the round fit");
  v.require(secs < kGridSeconds, "grid took too long");
  char buf[200];
  std::snprintf(buf, sizeof buf, "%zu runs, all proper; a=%.1f b=%.1f min slack %.2f; %.1fs", runs, kRoundsA,
                kRoundsB, worst_slack, secs);
  v.detail += buf;
  return v;
}

Verdict criterion2() {
  Verdict v;
  // Oracle palettes by iterating the exhaustive parameter search.
  std::vector<Color> want{1000000};
  while (true) {
    const auto p = oracle::linial_search(want.back(), 4);
    if (p.q * p.q >= want.back()) break;
    want.push_back(p.q * p.q);
  }
  v.require(want == std::vector<Color>{1000000, 289, 121}, "oracle palettes differ from 10^6 -> 289 -> 121");
  const auto sched = linial_schedule(1000000, 4);
  v.require(palette_progression(sched, 1000000) == want, "schedule palettes differ from the oracle");
  const auto prog = linial_full_program(1000000, 4);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto g = random_colored_tree(300, 4, 1000000, seed);
    const auto res = run(g, prog, Semantics::Set);
    v.require(res.trace.rounds == 2, "not exactly 2 rounds");
    v.require(res.output.palette == 121, "final palette is not 121");
    v.require(oracle::proper(g.graph(), res.output.colors), "improper output");
    // Colors broadcast in round 2 come from round 1 and must lie in [289].
    for (const auto& rec : res.trace.records) {
      if (rec.round == 2) v.require(staged_color(rec.sent) <= 289, "round-1 color above 289");
    }
    for (Color c : res.output.colors) v.require(c >= 1 && c <= 121, "final color outside [121]");
  }
  v.detail += "palettes 1000000 -> 289 -> 121, 2 rounds";
  return v;
}

Verdict criterion3() {
  Verdict v;
  // ceil(m (1 - 1/(delta + 2))) with integer arithmetic: ceil(m (delta+1) / (delta+2)).
  const auto exact = [](Color m, Color d) { return (m * (d + 1) + d + 1) / (d + 2); };
  v.require(kw_target(10, 2) == 8 && exact(10, 2) == 8, "m=10, delta=2 is not 8");
  v.require(kw_target(7, 5) == 6 && exact(7, 5) == 6, "m=7, delta=5 is not 6");
  for (Color m = 2; m <= 2000; ++m) {
    for (Color d = 1; d <= 20; ++d) v.require(kw_target(m, static_cast<std::uint32_t>(d)) == exact(m, d), "formula mismatch");
  }
  for (auto [m, d] : std::vector<std::pair<Color, std::uint32_t>>{{10, 2}, {7, 5}}) {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
      const auto g = random_colored_tree(40, d, m, seed);
      const auto out = run(g, kw_step_program(m, d), Semantics::Set).output;
      v.require(oracle::proper(g.graph(), out.colors), "improper KW output");
      v.require(*std::max_element(out.colors.begin(), out.colors.end()) <= kw_target(m, d), "color above q");
    }
  }
  v.detail += "q(10,2)=8, q(7,5)=6, formula exact on 39980 points";
  return v;
}

Verdict criterion4() {
  Verdict v;
  const auto t0 = Clock::now();
  const auto g = build_NH1(5, 3, Semantics::Multiset);
  const auto r = is_k_colorable(g->graph(), 2, 10000000);
  const double secs = seconds_since(t0);
  v.require(g->size() == oracle::nh1_count(5, 3, true), "vertex count");
  v.require(r.status == Colorability::No, "is_k_colorable(2) = " + to_string(r.status));
  // The triangle (1,{2,3}), (2,{1,3}), (3,{1,2}) certifies it independently.
  const auto ms = Semantics::Multiset;
  const auto tri = [&](Color x, Color a, Color b) {
    return View::node(leaf(x, ms), {leaf(a, ms), leaf(b, ms)});
  };
  const auto a = g->find(tri(1, 2, 3)), b = g->find(tri(2, 1, 3)), c = g->find(tri(3, 1, 2));
  v.require(a && b && c && g->adjacent(*a, *b) && g->adjacent(*b, *c) && g->adjacent(*a, *c), "triangle missing");
  v.require(secs < kNh1Seconds, "took too long");
  char buf[120];
  std::snprintf(buf, sizeof buf, "NH1(5,3): 175 vertices, 2-colorable = no; %.3fs", secs);
  v.detail += buf;
  return v;
}

Verdict criterion5() {
  Verdict v;
  const auto g = build_NH1(7, 4, Semantics::Multiset);
  v.require(g->size() == oracle::nh1_count(7, 4, true), "vertex count");
  // Export and count lines.
  const auto path = (std::filesystem::temp_directory_path() / "setlocal_nh1_7_4.col").string();
  export_dimacs(*g, path);
  std::ifstream in(path);
  std::string line;
  std::size_t e_lines = 0, lines = 0;
  std::string header;
  while (std::getline(in, line)) {
    if (lines++ == 0) header = line;
    if (line.rfind("e ", 0) == 0) ++e_lines;
  }
  v.require(header == "p edge 1470 " + std::to_string(g->edge_count()), "bad header");
  v.require(e_lines == g->edge_count(), "e-line count differs from the edge count");
  v.require(import_dimacs(path).graph.edges() == g->graph().edges(), "round trip");
  // Clique {(x, [5] \ {x})}.
  std::vector<std::uint32_t> q;
  for (Color x = 1; x <= 5; ++x) {
    std::vector<View> kids;
    for (Color y = 1; y <= 5; ++y) {
      if (y != x) kids.push_back(leaf(y, Semantics::Multiset));
    }
    const auto i = g->find(View::node(leaf(x, Semantics::Multiset), kids));
    v.require(i.has_value(), "clique vertex missing");
    if (i) q.push_back(*i);
  }
  for (std::size_t i = 0; i < q.size(); ++i) {
    for (std::size_t j = i + 1; j < q.size(); ++j) v.require(g->adjacent(q[i], q[j]), "clique edge missing");
  }
  const auto t0 = Clock::now();
  const auto chi = chi_exact(g->graph(), kChiBudget);
  const double secs = seconds_since(t0);
  v.require(chi.lower >= 5, "solver lower bound below 5");
  v.require(oracle::proper(g->graph(), chi.witness->colors), "solver witness improper");
  v.require(secs < 600, "solver exceeded 10 minutes");
  char buf[200];
  std::snprintf(buf, sizeof buf, "export %zu edges, clique 5 ok; solver chi in [%zu,%zu]%s, %.2fs", e_lines,
                chi.lower, chi.upper, chi.exact ? " exact" : "", secs);
  v.detail += buf;
  std::filesystem::remove(path);
  std::filesystem::remove(path + ".map.json");
  return v;
}

Verdict criterion6() {
  Verdict v;
  Rng rng(60606);
  std::size_t runs = 0;
  const std::vector<std::pair<std::uint32_t, Color>> points{{2, 3}, {3, 5}, {4, 7}};
  std::map<std::pair<std::uint32_t, int>, std::shared_ptr<const NbhdGraph>> hosts;
  for (auto [delta, m] : points) {
    // Minimal m: the least m with 4m >= delta^2 + 2 delta + 4.
    Color least = 1;
    while (4 * least < static_cast<Color>(delta) * delta + 2 * delta + 4) ++least;
    v.require(least == m, "minimal m mismatch");
    for (auto sem : {Semantics::Set, Semantics::Multiset}) hosts[{delta, static_cast<int>(sem)}] = build_NH1(m, delta, sem);
  }
  for (int t = 0; t < 500; ++t) {
    const auto [delta, m] = points[t % 3];
    const auto sem = (t / 3) % 2 ? Semantics::Multiset : Semantics::Set;
    const auto& host = hosts[{delta, static_cast<int>(sem)}];
    const auto f = random_nh1_family(*host, delta * delta / 4, rng);
    for (const auto& cls : f.classes) v.require(independent(cls), "generator produced a dependent class");
    const auto r = uncovered_node_nh1(m, delta, sem, f);
    ++runs;
    v.require(valid_nh1(r.node, m, delta, sem) && host->contains(r.node), "returned node is not a vertex");
    v.require(!in_family(r.node, f), "returned node is covered");
    v.require(r.node.child_total() < delta, "|A| >= delta");
  }
  v.detail += std::to_string(runs) + " families, 0 failures";
  return v;
}

Verdict criterion7() {
  Verdict v;
  Rng rng(70707);
  std::size_t runs = 0, checks = 0;
  const std::uint32_t d = 1;
  for (int t = 0; t < 200; ++t) {
    const std::uint32_t delta = 4 + t % 3;
    const Color m = 2 * static_cast<Color>(delta) * delta;
    const std::size_t c = delta * delta / (4 * (d + 1) * (d + 1));
    const auto sem = t % 2 ? Semantics::Multiset : Semantics::Set;
    IndSetFamily f;
    f.defect = d;
    for (std::size_t k = 0; k < c; ++k) {
      f.classes.push_back(random_defective_class(m, delta, d, sem, coin(rng, 2, 3), 400, rng));
      v.require(max_degree_in(f.classes.back()) <= d, "generator exceeded the defect");
    }
    const auto r = uncovered_node_defective(m, delta, sem, f);
    ++runs;
    checks += r.clique_source_checks;
    v.require(valid_nh1(r.node, m, delta, sem), "returned node is not a vertex");
    v.require(!in_family(r.node, f), "returned node is covered");
    v.require(r.node.child_total() < delta, "|A| >= delta");
  }
  v.detail += std::to_string(runs) + " families, " + std::to_string(checks) + " source-degree checks, 0 trips";
  return v;
}

Verdict criterion8() {
  Verdict v;
  Rng rng(80808);
  std::size_t chains = 0, refutations = 0, clique_checks = 0;
  const auto check_chain = [&](const std::vector<std::shared_ptr<const NbhdGraph>>& levels, const std::vector<View>& top) {
    const auto ch = source_chain(levels, top);
    ++chains;
    for (std::size_t i = 0; i < levels.size(); ++i) {
      for (auto a : ch.below[i]) {
        for (auto b : ch.below[i]) {
          if (a != b) v.require(!edge_rule_levels(*levels[i], a, b), "S_" + std::to_string(i) + " not independent");
        }
      }
    }
  };
  // NT_2(3, 2) is explicit: random maximal independent sets.
  const auto nt2 = build_NT(2, 3, 2);
  const auto low3 = tower(nt2);
  const std::vector<std::shared_ptr<const NbhdGraph>> levels3(low3.begin(), low3.begin() + 2);
  for (int t = 0; t < 250; ++t) {
    const auto top = views_of(*nt2, random_maximal_independent_set(nt2->graph(), rng));
    v.require(independent(top), "generated set not independent");
    check_chain(levels3, top);
  }
  // NT_2(5, 4) stays implicit: lifted sets over NT_1(5, 4), then the refuter.
  const auto nt1 = build_NT(1, 5, 4);
  const auto levels5 = tower(nt1);
  for (int t = 0; t < 125; ++t) {
    IndSetFamily f;
    for (int k = 0; k < 2; ++k) {
      const auto j = random_maximal_independent_set(nt1->graph(), rng);
      f.classes.push_back(lift_independent_set(*nt1, j, 4, 200, rng));
      v.require(independent(f.classes.back()), "lifted set not independent");
      check_chain(levels5, f.classes.back());
    }
    const auto r = refute_nt(nt1, f);
    ++refutations;
    clique_checks += r.clique_source_checks;
    v.require(is_level_vertex(*nt1, r.node, 4, false), "returned node is not a vertex of NT_2");
    v.require(!in_family(r.node, f), "returned node is covered");
  }
  v.detail += std::to_string(chains) + " chains independent; " + std::to_string(refutations) + " NT_2(5,4) refutations, " +
              std::to_string(clique_checks) + " W-source checks, 0 violations";
  return v;
}

Verdict criterion9() {
  Verdict v;
  std::vector<std::pair<std::string, HomMap>> maps;
  for (auto [r, m, d] : std::vector<std::tuple<std::uint32_t, Color, std::uint32_t>>{{1, 3, 2}, {1, 4, 2}, {2, 3, 2}}) {
    maps.emplace_back("h(" + std::to_string(r) + "," + std::to_string(m) + "," + std::to_string(d) + ")", hom_h(r, m, d));
  }
  for (auto [r, m, d] : std::vector<std::tuple<std::uint32_t, Color, std::uint32_t>>{{1, 3, 1}, {1, 4, 2}}) {
    maps.emplace_back("f(" + std::to_string(r) + "," + std::to_string(m) + "," + std::to_string(d) + ")", hom_f(r, m, d));
  }
  std::size_t solved = 0;
  std::string chis;
  for (auto& [name, h] : maps) {
    const auto rep = verify_homomorphism(h);
    v.require(rep.ok() && h.verified, name + " has violations");
    // Independent recheck: every image is a codomain vertex and edges map to edges.
    for (const auto& img : h.images) v.require(h.codomain->contains(img), name + " image outside codomain");
    for (const auto& [a, b] : h.domain->graph().edges()) {
      const auto ia = h.codomain->find(h.images[a]), ib = h.codomain->find(h.images[b]);
      v.require(ia && ib && h.codomain->adjacent(*ia, *ib), name + " edge not preserved");
    }
    const auto ca = chi_exact(h.domain->graph(), 5000000);
    const auto cb = chi_exact(h.codomain->graph(), 5000000);
    if (ca.exact && cb.exact) {
      ++solved;
      v.require(ca.upper <= cb.upper, name + " breaks chi monotonicity");
      chis += " " + name + ":" + std::to_string(ca.upper) + "<=" + std::to_string(cb.upper);
    }
  }
  v.detail += "5 maps verified; " + std::to_string(solved) + " pairs solved exactly;" + chis;
  return v;
}

Verdict criterion10() {
  Verdict v;
  struct Point {
    Color m;
    std::uint32_t delta;
  };
  const std::vector<Point> points{{16, 3}, {100, 4}, {1000, 2}};
  std::size_t checks = 0, violations = 0;
  for (const auto& pt : points) {
    std::vector<ColoredGraph> inst;
    Rng rng(pt.m * 7 + pt.delta);
    for (int i = 0; i < 100; ++i) inst.push_back(random_colored_tree(2 + uniform_below(rng, 40), pt.delta, pt.m, rng()));
    std::vector<std::pair<NodeProgram, Semantics>> progs{
        {linial_step_program(pt.m, pt.delta), Semantics::Set},   {linial_full_program(pt.m, pt.delta), Semantics::Set},
        {kw_step_program(pt.m, pt.delta), Semantics::Set},       {delta_plus_one_program(pt.m, pt.delta), Semantics::Set},
        {identity_program(), Semantics::Set},                    {full_information_program(2), Semantics::Set},
        {linial_step_program(pt.m, pt.delta), Semantics::Multiset}, {kw_step_program(pt.m, pt.delta), Semantics::Multiset}};
    for (const auto& [prog, kind] : progs) {
      const auto r = prog.round_budget(params_for(inst[0], kind));
      const auto rep = check_correspondence(prog, r, pt.m, pt.delta, inst, kind);
      ++checks;
      violations += rep.determinism.size() + rep.properness.size();
      v.require(rep.ok(), prog.name + " has correspondence violations");
    }
  }
  v.detail += std::to_string(checks) + " program/point checks over 100 trees each, " + std::to_string(violations) +
              " violations";
  return v;
}

Verdict criterion11() {
  Verdict v;
  Rng rng(111111);
  std::size_t samples = 0;
  for (int t = 0; t < 1000; ++t) {
    const auto g = random_colored_tree(1 + uniform_below(rng, 20), 2 + uniform_below(rng, 3), 2 + uniform_below(rng, 4), rng());
    const auto node = static_cast<NodeId>(uniform_below(rng, g.size()));
    const auto r = static_cast<std::uint32_t>(uniform_below(rng, 4));
    View set_view = View::leaf(Semantics::Set, 1);
    for (auto kind : {Semantics::Set, Semantics::Multiset}) {
      const auto res = run(g, full_information_program(r), kind, {false});
      const View state = decode_view(res.final_states[node]);
      const View extracted = extract_view(g, node, r, kind);
      v.require(state == extracted, "simulator state differs from extract_view");
      v.require(oracle::view_string(state) == oracle::view_string(g, node, r, kind == Semantics::Multiset),
                "state differs from the string oracle");
      if (kind == Semantics::Set) set_view = extracted;
      else v.require(erase_multiplicities(extracted) == set_view, "erasure property fails");
    }
    ++samples;
  }
  v.detail += std::to_string(samples) + " samples, both semantics, erasure holds";
  return v;
}

Verdict criterion12() {
  Verdict v;
  v.require(round_lower_bound(1024, 1, 0).rounds == 4, "r(1024, 1, 0) != 4");
  const std::vector<std::uint32_t> deltas{16, 128, 1024, 8192, 65536};
  const std::vector<double> etas{0.0, 0.25, 0.5, 0.75};
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    for (std::size_t j = 0; j < etas.size(); ++j) {
      const auto r = round_lower_bound(deltas[i], 1, etas[j]).rounds;
      if (i > 0) v.require(round_lower_bound(deltas[i - 1], 1, etas[j]).rounds <= r, "not monotone in delta");
      if (j > 0) v.require(round_lower_bound(deltas[i], 1, etas[j - 1]).rounds >= r, "not anti-monotone in eta");
    }
  }
  v.detail += "r(1024,1,0)=4; monotone on a 5x4 grid";
  return v;
}

}  // namespace

int main() {
  std::printf("acceptance suite\n");
  report(1, "delta+1 pipeline grid", criterion1);
  report(2, "Linial fixpoint trace", criterion2);
  report(3, "KW single step", criterion3);
  report(4, "NH1(5,3) not 2-colorable", criterion4);
  report(5, "NH1(7,4) lower bound >= 5", criterion5);
  report(6, "NH1 refuter suite", criterion6);
  report(7, "defective refuter suite", criterion7);
  report(8, "source-chain suite", criterion8);
  report(9, "homomorphism suite", criterion9);
  report(10, "correspondence", criterion10);
  report(11, "view oracle", criterion11);
  report(12, "bound calculator", criterion12);
  std::printf("%d of 12 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
