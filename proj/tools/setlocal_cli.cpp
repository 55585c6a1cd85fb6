// Command-line entry point: simulation, neighborhood-graph construction,
// chromatic bounds, refuters, homomorphism checks and the round-bound
// calculator. Every run writes its artifacts into <out>/<subcommand>-<hash>,
// where the hash covers the full configuration.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "setlocal/bounds.hpp"
#include "setlocal/chromatic.hpp"
#include "setlocal/color_algos.hpp"
#include "setlocal/error.hpp"
#include "setlocal/families.hpp"
#include "setlocal/nbhd.hpp"
#include "setlocal/sim.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace setlocal;

namespace {

constexpr int kOk = 0;
constexpr int kDomain = 1;
constexpr int kUsage = 2;

// Flag combinations CLI11 cannot express; reported with exit code 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string hex64(std::uint64_t x) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(x));
  return buf;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw Error("cannot write " + p.string());
  out << text;
  if (!out) throw Error("write to " + p.string() + " failed");
}

// The run directory for a configuration, with config.json written in it.
fs::path run_dir(const std::string& out, const std::string& sub, const json& config) {
  const std::string text = config.dump();
  const fs::path dir = fs::path(out) / (sub + "-" + hex64(fnv1a64(text)));
  fs::create_directories(dir);
  write_file(dir / "config.json", config.dump(2) + "\n");
  return dir;
}

void emit(const fs::path& dir, json result) {
  result["run_dir"] = dir.string();
  std::cout << result.dump(2) << std::endl;
}

Semantics parse_semantics(const std::string& s) {
  try {
    return semantics_from_string(s);
  } catch (const InvalidArgument& e) {
    throw UsageError(e.what());
  }
}

// Flags shared by every subcommand that builds a neighborhood graph.
struct HostFlags {
  std::string family = "nh1";
  std::uint32_t r = 1;
  Color m = 3;
  std::uint32_t d = 2;
  std::string variant = "multiset";
  std::size_t max_vertices = BuildCaps{}.vertices;
  std::size_t max_edges = BuildCaps{}.edges;

  void add(CLI::App* app) {
    app->add_option("--family", family, "nh1, nsl, nt or ntilde")
        ->check(CLI::IsMember({"nh1", "nsl", "nt", "ntilde"}));
    app->add_option("--r", r, "rounds / level (ignored for nh1)");
    app->add_option("--m", m, "initial palette size")->check(CLI::PositiveNumber);
    app->add_option("--d", d, "degree bound (Delta for nh1/nsl, D for nt/ntilde)")->check(CLI::PositiveNumber);
    app->add_option("--variant", variant, "nh1 member semantics")->check(CLI::IsMember({"set", "multiset"}));
    app->add_option("--max-vertices", max_vertices, "vertex cap");
    app->add_option("--max-edges", max_edges, "edge cap");
  }

  json config() const {
    return {{"family", family}, {"r", r},          {"m", m}, {"d", d}, {"variant", family == "nh1" ? variant : ""},
            {"max_vertices", max_vertices},        {"max_edges", max_edges}};
  }

  std::shared_ptr<const NbhdGraph> build() const {
    const BuildCaps caps{max_vertices, max_edges};
    switch (family_from_string(family)) {
      case Family::NH1: return build_NH1(m, d, parse_semantics(variant), caps);
      case Family::NSL: return build_NSL(r, m, d, caps);
      case Family::NT: return build_NT(r, m, d, caps);
      case Family::NTilde: return build_Ntilde(r, m, d, caps);
    }
    throw UsageError("unknown family");
  }
};

json stats_of(const NbhdGraph& g) {
  return {{"family", to_string(g.family())},
          {"m", g.m()},
          {"bound", g.bound()},
          {"level", g.level()},
          {"vertices", g.size()},
          {"edges", g.edge_count()},
          {"max_degree", g.graph().max_degree()},
          {"clique_lower_bound", greedy_clique(g.graph()).size()}};
}

// ---- color / simulate ----

struct ColorFlags {
  std::string algo = "delta1";
  Color m = 1000000;
  std::uint32_t delta = 4;
  std::size_t n = 500;
  std::uint64_t seed = 1;
  std::string semantics = "set";
  std::string instance;
  bool trace = false;
  std::string out = "runs";
};

int cmd_color(const ColorFlags& f) {
  const Semantics kind = parse_semantics(f.semantics);
  std::string instance_text;
  std::optional<ColoredGraph> g;
  if (!f.instance.empty()) {
    instance_text = slurp(f.instance);
    g = colored_graph_from_json(json::parse(instance_text));
  }
  const Color m = g ? g->m() : f.m;
  const std::uint32_t delta = g ? g->delta_cap() : f.delta;
  if (delta < 1) throw UsageError("--delta must be positive");
  if (m < 2) throw UsageError("--m must be at least 2");
  if (f.algo == "kw" && m <= static_cast<Color>(delta) + 1) {
    throw UsageError("--algo kw needs m > delta + 1");
  }
  if (f.algo == "delta1" && m < static_cast<Color>(delta) + 2) {
    throw UsageError("--algo delta1 needs m >= delta + 2");
  }

  std::vector<Stage> stages;
  if (f.algo == "linial") {
    stages = linial_schedule(m, delta);
  } else if (f.algo == "linial-step") {
    const auto p = linial_params(m, delta);
    stages = {{Stage::Kind::Linial, m, p.target(), p}};
  } else if (f.algo == "kw") {
    stages = {{Stage::Kind::KuhnWattenhofer, m, kw_target(m, delta), {}}};
  } else {
    stages = delta_plus_one_schedule(m, delta);
  }

  json config = {{"algo", f.algo},   {"m", m},       {"delta", delta},        {"n", f.n},
                 {"seed", f.seed},   {"semantics", f.semantics},              {"trace", f.trace},
                 {"instance", instance_text.empty() ? "" : hex64(fnv1a64(instance_text))}};
  const auto dir = run_dir(f.out, "color", config);
  if (!g) {
    if (f.n < 1) throw UsageError("--n must be positive");
    if (delta < 2) throw UsageError("generated trees need --delta >= 2");
    g = random_colored_tree(f.n, delta, m, f.seed);
  }
  write_file(dir / "instance.json", to_json(*g).dump() + "\n");

  const NodeProgram prog = staged_program(f.algo, stages, m, delta);
  const RunResult res = run(*g, prog, kind, {f.trace});
  const bool proper = validate_proper(g->graph(), res.output);
  write_file(dir / "coloring.json", to_json(res.output).dump() + "\n");

  std::ostringstream csv;
  csv << "round,stage,palette\n";
  const auto pal = palette_progression(stages, m);
  for (std::size_t i = 0; i < pal.size(); ++i) {
    const char* kind_name = i == 0 ? "initial" : stages[i - 1].kind == Stage::Kind::Linial ? "linial" : "kw";
    csv << i << ',' << kind_name << ',' << pal[i] << '\n';
  }
  write_file(dir / "progression.csv", csv.str());
  if (f.trace) {
    std::ostringstream tr;
    write_trace_jsonl(res.trace, tr);
    write_file(dir / "trace.jsonl", tr.str());
  }
  emit(dir, {{"algo", f.algo},
             {"nodes", g->size()},
             {"rounds", res.trace.rounds},
             {"palette", res.output.palette},
             {"proper", proper}});
  return proper ? kOk : kDomain;
}

// ---- build ----

int cmd_build(const HostFlags& h, const std::string& out) {
  json config = h.config();
  const auto g = h.build();
  const auto dir = run_dir(out, "build", config);
  write_file(dir / "graph.json", to_json(*g).dump() + "\n");
  const json stats = stats_of(*g);
  write_file(dir / "stats.json", stats.dump(2) + "\n");
  emit(dir, stats);
  return kOk;
}

// ---- chi ----

struct ChiFlags {
  std::string dimacs;
  std::uint64_t budget = 10000000;
  std::size_t k = 0;
  std::string export_path;
  std::string out = "runs";
};

int cmd_chi(const HostFlags& h, const ChiFlags& f) {
  json config = {{"budget", f.budget}, {"k", f.k}};
  Graph graph;
  std::shared_ptr<const NbhdGraph> host;
  if (!f.dimacs.empty()) {
    config["dimacs"] = hex64(fnv1a64(slurp(f.dimacs)));
    graph = import_dimacs(f.dimacs).graph;
  } else {
    config["host"] = h.config();
    host = h.build();
    graph = host->graph();
  }
  const auto dir = run_dir(f.out, "chi", config);
  if (!f.export_path.empty()) {
    if (host) {
      export_dimacs(*host, f.export_path);
    } else {
      export_dimacs(graph, f.export_path);
    }
  }
  json result = {{"vertices", graph.size()}, {"edges", graph.edge_count()}};
  if (f.k > 0) {
    const auto r = is_k_colorable(graph, f.k, f.budget);
    result["k"] = f.k;
    result["colorable"] = to_string(r.status);
    result["expansions"] = r.expansions;
    if (r.witness) write_file(dir / "witness.json", to_json(*r.witness).dump() + "\n");
  } else {
    const auto r = chi_exact(graph, f.budget);
    result["lower"] = r.lower;
    result["upper"] = r.upper;
    result["exact"] = r.exact;
    result["expansions"] = r.expansions;
    result["budget_exhausted"] = r.budget_exhausted;
    write_file(dir / "witness.json", to_json(*r.witness).dump() + "\n");
  }
  write_file(dir / "result.json", result.dump(2) + "\n");
  emit(dir, result);
  return kOk;
}

// ---- refute ----

struct RefuteFlags {
  std::string mode = "nh1";
  std::uint32_t r = 1;
  Color m = 7;
  std::uint32_t d = 4;
  std::string variant = "multiset";
  std::uint32_t defect = 1;
  std::string classes;
  std::size_t random_classes = 0;
  std::uint64_t seed = 1;
  std::string out = "runs";
};

IndSetFamily load_classes(const std::string& text, Semantics kind) {
  const json j = json::parse(text);
  if (!j.is_array()) throw InvalidArgument("classes file must hold a JSON list of vertex lists");
  IndSetFamily f;
  for (const auto& cls : j) {
    if (!cls.is_array()) throw InvalidArgument("each class must be a JSON list of vertices");
    std::vector<View> vs;
    for (const auto& v : cls) vs.push_back(view_from_json(v, kind));
    f.classes.push_back(std::move(vs));
  }
  return f;
}

int cmd_refute(const RefuteFlags& f) {
  if (f.classes.empty() == (f.random_classes == 0)) {
    throw UsageError("give exactly one of --classes FILE or --random C");
  }
  const Semantics kind = f.mode == "nt" ? Semantics::Set : parse_semantics(f.variant);
  std::string text;
  if (!f.classes.empty()) text = slurp(f.classes);
  json config = {{"mode", f.mode},       {"r", f.r},           {"m", f.m},
                 {"d", f.d},             {"variant", f.mode == "nt" ? "set" : f.variant},
                 {"defect", f.mode == "defective" ? f.defect : 0},
                 {"classes", text.empty() ? "" : hex64(fnv1a64(text))},
                 {"random", f.random_classes}, {"seed", f.seed}};
  const auto dir = run_dir(f.out, "refute", config);

  Rng rng(f.seed);
  IndSetFamily family;
  std::shared_ptr<const NbhdGraph> lower;
  if (f.mode == "nt") {
    if (f.r < 1) throw UsageError("--r must be at least 1");
    lower = build_NT(f.r - 1, f.m, f.d);
  }
  if (!text.empty()) {
    family = load_classes(text, kind);
  } else if (f.mode == "nh1") {
    family = random_nh1_family(*build_NH1(f.m, f.d, kind), f.random_classes, rng);
  } else if (f.mode == "defective") {
    for (std::size_t k = 0; k < f.random_classes; ++k) {
      family.classes.push_back(random_defective_class(f.m, f.d, f.defect, kind, coin(rng, 1, 2), 200, rng));
    }
  } else if (f.r == 1) {
    const auto host = build_NT(1, f.m, f.d);
    for (std::size_t k = 0; k < f.random_classes; ++k) {
      family.classes.push_back(views_of(*host, random_maximal_independent_set(host->graph(), rng)));
    }
  } else {
    for (std::size_t k = 0; k < f.random_classes; ++k) {
      const auto j = random_maximal_independent_set(lower->graph(), rng);
      family.classes.push_back(lift_independent_set(*lower, j, f.d, 100, rng));
    }
  }
  if (f.mode == "defective") family.defect = f.defect;

  json classes_json = json::array();
  for (const auto& cls : family.classes) {
    json c = json::array();
    for (const auto& v : cls) c.push_back(to_json(v));
    classes_json.push_back(std::move(c));
  }
  write_file(dir / "classes.json", classes_json.dump() + "\n");

  const Refutation res = f.mode == "nh1"         ? uncovered_node_nh1(f.m, f.d, kind, family)
                         : f.mode == "defective" ? uncovered_node_defective(f.m, f.d, kind, family)
                                                 : refute_nt(lower, family);
  json result = {{"node", to_json(res.node)},
                 {"transcript", res.transcript},
                 {"clique_source_checks", res.clique_source_checks},
                 {"classes", family.classes.size()}};
  write_file(dir / "refutation.json", result.dump(2) + "\n");
  emit(dir, result);
  return kOk;
}

// ---- verify-hom ----

int cmd_verify_hom(const std::string& which, std::uint32_t r, Color m, std::uint32_t d, const std::string& out) {
  json config = {{"which", which}, {"r", r}, {"m", m}, {"d", d}};
  const auto dir = run_dir(out, "verify-hom", config);
  HomMap map;
  try {
    map = which == "h" ? hom_h(r, m, d) : hom_f(r, m, d);
  } catch (const InvariantViolation& e) {
    emit(dir, {{"which", which}, {"verified", false}, {"error", e.what()}});
    return kDomain;
  }
  const auto rep = verify_homomorphism(map);
  json images = json::array();
  for (std::uint32_t i = 0; i < map.domain->size(); ++i) {
    images.push_back({to_hex(map.domain->vertex(i).encoding()), to_hex(map.images[i].encoding())});
  }
  write_file(dir / "map.json", images.dump() + "\n");
  json result = {{"which", which},
                 {"domain_vertices", map.domain->size()},
                 {"domain_edges", map.domain->edge_count()},
                 {"codomain_vertices", map.codomain->size()},
                 {"codomain_edges", map.codomain->edge_count()},
                 {"missing", rep.missing},
                 {"broken", rep.broken},
                 {"verified", map.verified}};
  write_file(dir / "report.json", result.dump(2) + "\n");
  emit(dir, result);
  return rep.ok() ? kOk : kDomain;
}

// ---- bound ----

int cmd_bound(std::uint32_t delta, double c, double eta, const std::string& out) {
  json config = {{"delta", delta}, {"C", c}, {"eta", eta}};
  const auto rep = round_lower_bound(delta, c, eta);
  const auto dir = run_dir(out, "bound", config);
  json result = {{"delta", rep.delta},
                 {"C", rep.c},
                 {"eta", rep.eta},
                 {"r", rep.rounds},
                 {"D", rep.d},
                 {"m_given", rep.m_given},
                 {"m_threshold", std::isinf(rep.m_threshold) ? json("inf") : json(rep.m_threshold)},
                 {"m_condition", rep.m_condition}};
  write_file(dir / "bound.json", result.dump(2) + "\n");
  emit(dir, result);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Color reduction in SET-LOCAL: simulation, neighborhood graphs and lower-bound machinery"};
  app.require_subcommand(1);

  ColorFlags color;
  auto* c_cmd = app.add_subcommand("color", "run a color-reduction program on a tree");
  c_cmd->alias("simulate");
  c_cmd->add_option("--algo", color.algo, "linial, linial-step, kw or delta1")
      ->check(CLI::IsMember({"linial", "linial-step", "kw", "delta1"}));
  c_cmd->add_option("--m", color.m, "initial palette size");
  c_cmd->add_option("--delta", color.delta, "maximum degree");
  c_cmd->add_option("--n", color.n, "tree size");
  c_cmd->add_option("--seed", color.seed, "instance seed");
  c_cmd->add_option("--semantics", color.semantics, "set or multiset")->check(CLI::IsMember({"set", "multiset"}));
  c_cmd->add_option("--instance", color.instance, "ColoredGraph JSON file instead of a generated tree")
      ->check(CLI::ExistingFile);
  c_cmd->add_flag("--trace", color.trace, "write trace.jsonl");
  c_cmd->add_option("--out", color.out, "artifact root");

  HostFlags build_host;
  std::string build_out = "runs";
  auto* b_cmd = app.add_subcommand("build", "construct a neighborhood graph");
  build_host.add(b_cmd);
  b_cmd->add_option("--out", build_out, "artifact root");

  HostFlags chi_host;
  ChiFlags chi;
  auto* x_cmd = app.add_subcommand("chi", "chromatic bounds of a neighborhood graph or DIMACS file");
  chi_host.add(x_cmd);
  x_cmd->add_option("--dimacs", chi.dimacs, "DIMACS col file instead of a built graph")->check(CLI::ExistingFile);
  x_cmd->add_option("--budget", chi.budget, "node-expansion budget");
  x_cmd->add_option("--k", chi.k, "decide k-colorability instead of bracketing chi");
  x_cmd->add_option("--export", chi.export_path, "write the graph as DIMACS (plus .map.json labels)");
  x_cmd->add_option("--out", chi.out, "artifact root");

  RefuteFlags ref;
  auto* r_cmd = app.add_subcommand("refute", "construct a vertex outside every class of a family");
  r_cmd->add_option("--host", ref.mode, "nh1, nt or defective")->check(CLI::IsMember({"nh1", "nt", "defective"}));
  r_cmd->add_option("--r", ref.r, "level of the NT host");
  r_cmd->add_option("--m", ref.m, "initial palette size");
  r_cmd->add_option("--d", ref.d, "Delta (nh1, defective) or D (nt)");
  r_cmd->add_option("--variant", ref.variant, "set or multiset")->check(CLI::IsMember({"set", "multiset"}));
  r_cmd->add_option("--defect", ref.defect, "defect d of the classes");
  r_cmd->add_option("--classes", ref.classes, "JSON list of vertex lists")->check(CLI::ExistingFile);
  r_cmd->add_option("--random", ref.random_classes, "generate this many random classes");
  r_cmd->add_option("--seed", ref.seed, "generator seed");
  r_cmd->add_option("--out", ref.out, "artifact root");

  std::string which = "h";
  std::uint32_t hom_r = 1, hom_d = 2;
  Color hom_m = 3;
  std::string hom_out = "runs";
  auto* h_cmd = app.add_subcommand("verify-hom", "build and verify a homomorphism h or f");
  h_cmd->add_option("--which", which, "h or f")->check(CLI::IsMember({"h", "f"}));
  h_cmd->add_option("--r", hom_r, "level");
  h_cmd->add_option("--m", hom_m, "palette size");
  h_cmd->add_option("--d", hom_d, "degree bound D");
  h_cmd->add_option("--out", hom_out, "artifact root");

  std::uint32_t b_delta = 1024;
  double b_c = 1, b_eta = 0;
  std::string bound_out = "runs";
  auto* n_cmd = app.add_subcommand("bound", "round lower bound parameters");
  n_cmd->add_option("--delta", b_delta, "maximum degree")->required();
  n_cmd->add_option("--C", b_c, "constant C > 0");
  n_cmd->add_option("--eta", b_eta, "exponent eta in [0, 1)");
  n_cmd->add_option("--out", bound_out, "artifact root");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*c_cmd) return cmd_color(color);
    if (*b_cmd) return cmd_build(build_host, build_out);
    if (*x_cmd) return cmd_chi(chi_host, chi);
    if (*r_cmd) return cmd_refute(ref);
    if (*h_cmd) return cmd_verify_hom(which, hom_r, hom_m, hom_d, hom_out);
    if (*n_cmd) return cmd_bound(b_delta, b_c, b_eta, bound_out);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const CapExceeded& e) {
    std::cerr << "cap exceeded: " << e.what() << "\n";
    return kDomain;
  } catch (const json::exception& e) {
    std::cerr << "bad JSON input: " << e.what() << "\n";
    return kDomain;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kDomain;
  }
  return kUsage;
}
