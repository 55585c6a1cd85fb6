#include "setlocal/sim.hpp"

#include <algorithm>
#include <cstdio>
#include <map>

#include <json.hpp>

#include "setlocal/error.hpp"

namespace setlocal {

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char b : bytes) {
    h ^= b;
    h *= 0x100000001b3ULL;
  }
  return h;
}

ProgramParams params_for(const ColoredGraph& g, Semantics kind) { return {g.m(), g.delta_cap(), g.size(), kind}; }

namespace {

Inbox collect(const Graph& graph, NodeId v, const std::vector<Bytes>& outboxes, Semantics kind) {
  std::vector<const Bytes*> msgs;
  msgs.reserve(graph.degree(v));
  for (NodeId u : graph.neighbors(v)) msgs.push_back(&outboxes[u]);
  std::sort(msgs.begin(), msgs.end(), [](const Bytes* a, const Bytes* b) { return *a < *b; });
  Inbox inbox;
  for (const Bytes* m : msgs) {
    if (!inbox.messages.empty() && inbox.messages.back().first == *m) {
      if (kind == Semantics::Multiset) ++inbox.messages.back().second;
    } else {
      inbox.messages.emplace_back(*m, 1);
    }
  }
  return inbox;
}

std::string context(const NodeProgram& prog, NodeId v, std::uint32_t round) {
  return "program '" + prog.name + "' failed at node " + std::to_string(v) + ", round " + std::to_string(round);
}

}  // namespace

RunResult run(const ColoredGraph& g, const NodeProgram& prog, Semantics kind, RunOptions options) {
  const ProgramParams params = params_for(g, kind);
  const std::uint32_t rounds = prog.round_budget(params);
  const std::size_t n = g.size();

  std::vector<Bytes> states(n);
  std::vector<Bytes> outboxes(n);
  for (NodeId v = 0; v < n; ++v) {
    try {
      Transition t = prog.init(g.psi(v), params);
      states[v] = std::move(t.state);
      outboxes[v] = std::move(t.outgoing);
    } catch (const std::exception& e) {
      throw SimulationError(context(prog, v, 0) + ": " + e.what());
    }
  }

  RunResult result;
  result.trace.rounds = rounds;
  for (std::uint32_t round = 1; round <= rounds; ++round) {
    std::vector<Bytes> next_states(n);
    std::vector<Bytes> next_outboxes(n);
    for (NodeId v = 0; v < n; ++v) {
      Inbox inbox = collect(g.graph(), v, outboxes, kind);
      try {
        Transition t = prog.step(states[v], inbox);
        next_states[v] = std::move(t.state);
        next_outboxes[v] = std::move(t.outgoing);
      } catch (const std::exception& e) {
        throw SimulationError(context(prog, v, round) + ": " + e.what());
      }
      if (options.record_trace) {
        result.trace.records.push_back(
            {round, v, fnv1a64(next_states[v]), outboxes[v], std::move(inbox.messages)});
      }
    }
    states = std::move(next_states);
    outboxes = std::move(next_outboxes);
  }

  result.output.palette = prog.palette(params);
  result.output.colors.resize(n);
  for (NodeId v = 0; v < n; ++v) {
    try {
      result.output.colors[v] = prog.finalize(states[v]);
    } catch (const std::exception& e) {
      throw SimulationError(context(prog, v, rounds) + " in finalize: " + e.what());
    }
  }
  result.final_states = std::move(states);
  return result;
}

void write_trace_jsonl(const SimTrace& trace, std::ostream& out) {
  for (const auto& rec : trace.records) {
    nlohmann::json received = nlohmann::json::array();
    for (const auto& [msg, count] : rec.received) received.push_back({to_hex(msg), count});
    char digest[17];
    std::snprintf(digest, sizeof digest, "%016llx", static_cast<unsigned long long>(rec.state_digest));
    nlohmann::json line = {{"round", rec.round},
                           {"node", rec.node},
                           {"state", digest},
                           {"sent", to_hex(rec.sent)},
                           {"received", std::move(received)}};
    out << line.dump() << '\n';
  }
}

NodeProgram full_information_program(std::uint32_t r) {
  NodeProgram p;
  p.name = "full-information";
  p.init = [](Color own, const ProgramParams& params) {
    const std::string enc = View::leaf(params.semantics, own).encoding();
    return Transition{enc, enc};
  };
  p.step = [](const Bytes& state, const Inbox& inbox) {
    View self = decode_view(state);
    std::vector<View::Child> kids;
    kids.reserve(inbox.messages.size());
    for (const auto& [msg, count] : inbox.messages) kids.emplace_back(decode_view(msg), count);
    const std::string enc = View::node_counted(std::move(self), std::move(kids)).encoding();
    return Transition{enc, enc};
  };
  p.finalize = [](const Bytes& state) { return truncate(decode_view(state), 0).base_color(); };
  p.round_budget = [r](const ProgramParams&) { return r; };
  p.palette = [](const ProgramParams& params) { return params.m; };
  return p;
}

NodeProgram erase_multiplicities(NodeProgram prog) {
  NodeProgram p = prog;
  p.name = prog.name + "+erased";
  p.init = [init = prog.init](Color own, const ProgramParams& params) {
    ProgramParams set_params = params;
    set_params.semantics = Semantics::Set;
    return init(own, set_params);
  };
  p.step = [step = prog.step](const Bytes& state, const Inbox& inbox) {
    Inbox erased = inbox;
    for (auto& msg : erased.messages) msg.second = 1;
    return step(state, erased);
  };
  auto with_set = [](auto fn) {
    return [fn](const ProgramParams& params) {
      ProgramParams set_params = params;
      set_params.semantics = Semantics::Set;
      return fn(set_params);
    };
  };
  p.round_budget = with_set(prog.round_budget);
  p.palette = with_set(prog.palette);
  return p;
}

NodeProgram identity_program() {
  NodeProgram p;
  p.name = "identity";
  p.init = [](Color own, const ProgramParams&) {
    const Bytes s = std::to_string(own);
    return Transition{s, s};
  };
  p.step = [](const Bytes& state, const Inbox&) { return Transition{state, state}; };
  p.finalize = [](const Bytes& state) { return static_cast<Color>(std::stoull(state)); };
  p.round_budget = [](const ProgramParams&) { return 0u; };
  p.palette = [](const ProgramParams& params) { return params.m; };
  return p;
}

CorrespondenceReport check_correspondence(const NodeProgram& prog, std::uint32_t r, Color m, std::uint32_t delta,
                                          std::span<const ColoredGraph> instances, Semantics kind) {
  CorrespondenceReport report;
  report.instances = instances.size();

  struct Label {
    Color output;
    std::size_t instance;
    NodeId node;
  };
  ViewInterner interner;
  std::map<ViewInterner::Id, Label> labels;
  std::vector<std::vector<ViewInterner::Id>> ids(instances.size());

  for (std::size_t i = 0; i < instances.size(); ++i) {
    const ColoredGraph& g = instances[i];
    if (g.m() > m || g.delta_cap() > delta) {
      throw InvalidArgument("instance " + std::to_string(i) + " exceeds the parameters (m, delta)");
    }
    ProgramParams params{m, delta, g.size(), kind};
    if (prog.round_budget(params) != r) {
      throw InvalidArgument("program '" + prog.name + "' does not run for exactly " + std::to_string(r) + " rounds");
    }
    // The instance is run under the declared (m, delta) rather than its own.
    const ColoredGraph as_declared(g.graph(), std::vector<Color>(g.psi().begin(), g.psi().end()), m, delta);
    const RunResult res = run(as_declared, prog, kind, {.record_trace = false});
    ids[i] = interner.intern_graph(g, r, kind);
    report.nodes += g.size();
    for (NodeId v = 0; v < g.size(); ++v) {
      const Color out = res.output.colors[v];
      auto [it, inserted] = labels.try_emplace(ids[i][v], Label{out, i, v});
      if (!inserted && it->second.output != out) {
        report.determinism.push_back({CorrespondenceViolation::Kind::ViewDeterminism, it->second.instance,
                                      it->second.node, i, v, it->second.output, out});
      }
    }
  }

  for (std::size_t i = 0; i < instances.size(); ++i) {
    for (const auto& [u, v] : instances[i].graph().edges()) {
      ++report.edges_checked;
      const Label& a = labels.at(ids[i][u]);
      const Label& b = labels.at(ids[i][v]);
      if (a.output == b.output) {
        report.properness.push_back(
            {CorrespondenceViolation::Kind::Properness, i, u, i, v, a.output, b.output});
      }
    }
  }
  report.distinct_views = labels.size();
  return report;
}

}  // namespace setlocal
