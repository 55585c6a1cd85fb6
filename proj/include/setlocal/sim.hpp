#pragma once

#include <cstdint>
#include <functional>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "setlocal/graph.hpp"
#include "setlocal/view.hpp"

namespace setlocal {

using Bytes = std::string;

// What every node knows up front. The delivery semantics is part of the model
// a program runs in, so it is visible too.
struct ProgramParams {
  Color m = 0;
  std::uint32_t delta = 0;
  std::size_t n = 0;
  Semantics semantics = Semantics::Set;
};

// Messages received in one round, sorted by content. Sender identity is never
// exposed. Under SET every count is 1.
struct Inbox {
  std::vector<std::pair<Bytes, std::uint32_t>> messages;
};

struct Transition {
  Bytes state;
  // Broadcast in the next round; the one returned by init goes out in round 1.
  Bytes outgoing;
};

// A deterministic per-node state machine. All callables must be pure.
struct NodeProgram {
  std::string name;
  std::function<Transition(Color own, const ProgramParams&)> init;
  std::function<Transition(const Bytes& state, const Inbox& inbox)> step;
  std::function<Color(const Bytes& state)> finalize;
  std::function<std::uint32_t(const ProgramParams&)> round_budget;
  // Declared palette of the output coloring.
  std::function<Color(const ProgramParams&)> palette;
};

struct TraceRecord {
  std::uint32_t round = 0;
  NodeId node = 0;
  std::uint64_t state_digest = 0;
  Bytes sent;
  std::vector<std::pair<Bytes, std::uint32_t>> received;

  friend bool operator==(const TraceRecord&, const TraceRecord&) = default;
};

struct SimTrace {
  std::uint32_t rounds = 0;
  std::vector<TraceRecord> records;

  friend bool operator==(const SimTrace&, const SimTrace&) = default;
};

struct RunResult {
  ColorAssignment output;
  SimTrace trace;
  std::vector<Bytes> final_states;
};

struct RunOptions {
  bool record_trace = true;
};

ProgramParams params_for(const ColoredGraph& g, Semantics kind);

// Synchronous fold over round_budget rounds. A failing step aborts with a
// SimulationError naming the node and round.
RunResult run(const ColoredGraph& g, const NodeProgram& prog, Semantics kind, RunOptions options = {});

// JSON lines, one record per (round, node); byte strings hex-encoded.
void write_trace_jsonl(const SimTrace& trace, std::ostream& out);

std::uint64_t fnv1a64(std::string_view bytes);

// After r rounds each node's state is the canonical encoding of its r-view
// under the run's semantics. Outputs the node's own initial color.
NodeProgram full_information_program(std::uint32_t r);

// The program that runs `prog` but hands it a SET inbox (multiplicities
// erased) and SET params. Running the result under MULTISET must match
// running `prog` under SET.
NodeProgram erase_multiplicities(NodeProgram prog);

// Outputs its own initial color without communicating.
NodeProgram identity_program();

struct CorrespondenceViolation {
  enum class Kind { ViewDeterminism, Properness };
  Kind kind;
  std::size_t instance_a = 0;
  NodeId node_a = 0;
  std::size_t instance_b = 0;
  NodeId node_b = 0;
  Color output_a = 0;
  Color output_b = 0;
};

struct CorrespondenceReport {
  std::size_t instances = 0;
  std::size_t nodes = 0;
  std::size_t distinct_views = 0;
  std::size_t edges_checked = 0;
  std::vector<CorrespondenceViolation> determinism;
  std::vector<CorrespondenceViolation> properness;

  bool ok() const { return determinism.empty() && properness.empty(); }
};

// Checks that prog behaves as a function of r-views (equal views, equal
// outputs) and that the induced labeling of the observed views is proper on
// every realized edge. Violations are report content.
CorrespondenceReport check_correspondence(const NodeProgram& prog, std::uint32_t r, Color m, std::uint32_t delta,
                                          std::span<const ColoredGraph> instances,
                                          Semantics kind = Semantics::Set);

}  // namespace setlocal
