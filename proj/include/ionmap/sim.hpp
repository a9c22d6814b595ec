#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "ionmap/fabric.hpp"
#include "ionmap/qasm.hpp"
#include "ionmap/routing_graph.hpp"
#include "ionmap/tech.hpp"
#include "ionmap/types.hpp"

namespace ionmap {

/// Time-stamped control micro-command. Timestamps are start times.
struct MicroCommand {
  enum class Kind { Move, Turn, GateStart, GateEnd };
  Duration t = 0;
  Kind kind = Kind::Move;
  int qubit = -1;        // Move, Turn
  Coord from;            // Move
  Coord to;              // Move
  Coord at;              // Turn, GateStart
  Direction turn_to = Direction::Vertical;  // Turn: direction after turning
  int instruction = -1;  // GateStart, GateEnd
  GateKind gate = GateKind::H;       // GateStart
  std::vector<int> operands;         // GateStart
};

/// Per-instruction timing breakdown recorded by the simulator:
/// gate span = congestion wait + routing delay + gate delay, all integers.
struct InstructionStats {
  Duration eligible = 0;    // all predecessors complete
  Duration issue = 0;       // routing succeeded, movement begins
  Duration gate_start = 0;  // both operands in the target trap
  Duration gate_end = 0;

  Duration congestion() const { return issue - eligible; }
  Duration routing() const { return gate_start - issue; }
};

struct Trace {
  std::vector<MicroCommand> commands;
  Duration total_latency = 0;
  Placement initial_placement;
  Placement final_placement;
  std::vector<std::string> qubit_names;
  /// Empty for traces parsed from text or produced by reversal.
  std::vector<InstructionStats> stats;
};

/// Runs the event-driven simulation: picks instructions by schedule rank,
/// routes and reserves their paths, advances time over channel-exit and
/// instruction-finished events, retries the busy queue when resources free
/// up, and emits the micro-command trace.
///
/// `ranks` is the static issue order (see forward_ranks/backward_ranks);
/// `initial` may place two qubits in one trap (placements handed off between
/// forward and backward runs end with gate partners sharing a trap).
/// Throws StuckError if the event queue drains with instructions pending.
Trace run_simulation(const Qidg& g, const std::vector<int>& ranks,
                     const Placement& initial, const Fabric& f,
                     const RoutingGraph& base_graph, const TechParams& t,
                     const std::vector<std::string>& qubit_names);

struct Violation {
  enum class Kind {
    Malformed,
    Dependency,
    Continuity,
    GateDuration,
    ChannelCapacity,
    JunctionCapacity,
    Decomposition,
    Latency,
  };
  Kind kind;
  std::string detail;
};

/// Independent re-audit of a trace: dependency order, per-resource
/// simultaneous occupancy against capacities over the full timeline, spatial
/// continuity per qubit, the per-instruction delay decomposition
/// (gate + max operand path delay + congestion >= 0, exact in integer
/// microseconds, cross-checked against recorded stats when present), and the
/// total latency. Empty result means the trace is valid.
std::vector<Violation> validate_trace(const Trace& tr, const Qidg& g,
                                      const Fabric& f, const TechParams& t);

/// Reconstructs the per-instruction timing breakdown from the commands alone
/// (used for traces without recorded stats, e.g. reversed or parsed ones).
std::vector<InstructionStats> stats_from_trace(const Trace& tr, const Qidg& g);

std::string violations_to_text(const std::vector<Violation>& v);
std::string violations_to_json(const std::vector<Violation>& v);

/// Text form, one command per line:
///   t=<us> MOVE <q> (<r>,<c>)-><(r>,<c>)
///   t=<us> TURN <q> (<r>,<c>) <H2V|V2H>
///   t=<us> GATE_START <id> <gate> <ops> @(<r>,<c>)
///   t=<us> GATE_END <id>
std::string trace_to_text(const Trace& tr);

/// Parses the text form back into commands (stats are not recoverable).
/// Qubit names are resolved against `qubit_names`; throws ParseError on
/// malformed lines.
Trace trace_from_text(const std::string& text,
                      const std::vector<std::string>& qubit_names);

/// Time-reverses a simulator-produced trace: command order and move
/// directions flip, gates are replaced by their inverses, timestamps are
/// renormalized to start at 0. The reversed trace of an uncompute run is a
/// valid execution of the forward graph and vice versa.
Trace reverse_trace(const Trace& tr, const Fabric& f, const TechParams& t);

}  // namespace ionmap
