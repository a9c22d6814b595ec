#pragma once

#include <optional>
#include <set>
#include <variant>
#include <vector>

#include "ionmap/qasm.hpp"
#include "ionmap/routing_graph.hpp"

namespace ionmap {

/// One physical step of a routed qubit. Moves span adjacent cells; turns
/// happen in place inside a junction cell. Step cost follows the timing
/// rule used throughout: entering a channel or trap cell costs one move,
/// sliding from a channel into a junction is free, and a turn costs the turn
/// delay.
struct WalkStep {
  enum class Kind { Move, Turn };
  Kind kind = Kind::Move;
  Coord from;
  Coord to;
  Duration cost = 0;
  Direction turn_to = Direction::Vertical;  // Turn only: new direction
  int edge = -1;      // channel/trap-link edge this step traverses, or -1
  int junction = -1;  // junction this step happens in/leaves, or -1
};

std::vector<WalkStep> materialize_walk(const RoutingGraph& g, int from_vertex,
                                       const std::vector<int>& edges,
                                       const TechParams& t);

/// Cost of a move entering a cell of kind `entered` coming from a cell of
/// kind `from`.
Duration transition_cost(CellKind entered, CellKind from, const TechParams& t);

struct OperandPath {
  std::vector<int> edges;
  std::vector<WalkStep> walk;
  Duration delay = 0;  // sum of step costs
  Reservation reservation;
};

struct Route {
  Coord target;  // trap where the gate executes
  std::vector<OperandPath> paths;  // one per operand, operand order

  Duration routing_delay() const {
    Duration d = 0;
    for (const auto& p : paths) d = std::max(d, p.delay);
    return d;
  }
};

struct Congested {
  enum class Reason { NoFreeTrap, PathUnavailable };
  Reason reason = Reason::PathUnavailable;
};

using RouteResult = std::variant<Route, Congested>;

/// Nearest free trap to the rounded midpoint of src and dst (Euclidean
/// distance, ties row-major). `occupied` must already exclude traps usable
/// by this instruction, i.e. the operands' own traps when their only
/// residents are the operands themselves. Returns nullopt when no candidate
/// exists.
std::optional<Coord> select_target_trap(Coord src, Coord dst, const Fabric& f,
                                        const std::set<Coord>& occupied);

/// Dijkstra over edge_weight. Saturated channel edges, junctions at full
/// occupancy and foreign trap vertices are excluded. Returns the edge list
/// (empty when from == to) or nullopt when unreachable.
std::optional<std::vector<int>> find_path(const RoutingGraph& g, int from,
                                          int to, const TechParams& t);

/// Routes one issued instruction. Two-qubit: picks the target trap near the
/// operand median, finds and reserves both paths atomically (both or
/// neither). One-qubit: executes in place with an empty path. Congested
/// means the caller parks the instruction in the busy queue; occupancies are
/// left exactly as found.
RouteResult route_instruction(const Instruction& ins,
                              const std::vector<Coord>& locations,
                              RoutingGraph& g, const Fabric& f,
                              const TechParams& t,
                              const std::set<Coord>& occupied_traps);

}  // namespace ionmap
