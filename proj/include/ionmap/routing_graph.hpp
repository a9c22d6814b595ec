#pragma once

#include <optional>
#include <vector>

#include "ionmap/fabric.hpp"
#include "ionmap/tech.hpp"
#include "ionmap/types.hpp"

namespace ionmap {

/// Turn-aware routing graph. Each junction contributes two vertices: an
/// H-vertex attaching its horizontal channels and a V-vertex attaching its
/// vertical ones, joined by a turn edge whose traversal costs the turn delay.
/// Each maximal channel run is a single capacity-tracked edge. A trap
/// contributes one vertex, reached either as a run endpoint or through a
/// zero-length link to an adjacent junction.
enum class VertexKind { JunctionH, JunctionV, Trap, Stub };

enum class EdgeKind { Channel, Turn, TrapLink };

struct Vertex {
  VertexKind kind = VertexKind::Stub;
  Coord cell;
  int junction = -1;  // owning junction index, or -1
  int trap = -1;      // owning trap index, or -1
};

struct GraphEdge {
  EdgeKind kind = EdgeKind::Channel;
  int a = 0;
  int b = 0;
  int length = 0;               // channel cells; 0 for turn and trap links
  Direction dir = Direction::Horizontal;
  std::vector<Coord> cells;     // channel cells ordered from a to b
  int occupancy = 0;            // number of unreleased reservations
};

struct JunctionNode {
  Coord cell;
  int h_vertex = -1;
  int v_vertex = -1;
  int occupancy = 0;
};

struct TrapNode {
  Coord cell;
  int vertex = -1;
};

struct RoutingGraph {
  std::vector<Vertex> vertices;
  std::vector<GraphEdge> edges;
  std::vector<JunctionNode> junctions;
  std::vector<TrapNode> traps;
  std::vector<std::vector<int>> adjacency;  // vertex -> incident edge ids
  int rows = 0;
  int cols = 0;
  std::vector<int> trap_grid;      // cell -> trap index or -1
  std::vector<int> junction_grid;  // cell -> junction index or -1
  int next_reservation_id = 0;

  int other_end(int edge, int vertex) const {
    const GraphEdge& e = edges[edge];
    return e.a == vertex ? e.b : e.a;
  }
  /// Trap index at a coordinate, or -1.
  int trap_at(Coord c) const;
  int junction_at(Coord c) const;

  /// Total channel occupancy over all edges; used by invariant audits.
  long long total_channel_occupancy() const;
};

RoutingGraph build_routing_graph(const Fabric& f);

/// Edge weight for shortest-path search, expressed in cells (one cell = one
/// move). Channel edges follow the congestion-aware rule
/// (occupancy+1)*length, jumping to +infinity at full capacity. Turn edges
/// weigh t_turn/t_move cells (plain t_turn when t_move is zero); trap links
/// weigh one move.
double edge_weight(const RoutingGraph& g, int edge, const TechParams& t);

/// Staged-release handle returned by reserve_path. Channel edges and
/// traversed junctions are released one by one as the qubit exits them.
struct Reservation {
  int id = -1;
  std::vector<int> channel_edges;
  std::vector<int> junction_nodes;
  std::vector<bool> edge_released;
  std::vector<bool> junction_released;

  bool fully_released() const;
};

/// Junction indices a walk along `edges` starting at `from_vertex` passes
/// through (consecutive duplicates collapsed).
std::vector<int> junctions_on_path(const RoutingGraph& g, int from_vertex,
                                   const std::vector<int>& edges);

/// Atomically reserves every channel edge and traversed junction on the
/// path, or returns nullopt leaving the graph untouched when any resource is
/// at capacity (the stale-path case; the caller must re-route).
std::optional<Reservation> reserve_path(RoutingGraph& g, int from_vertex,
                                        const std::vector<int>& edges,
                                        const TechParams& t);

/// Throws std::logic_error on double release or an edge the token does not
/// hold.
void release_edge(RoutingGraph& g, Reservation& token, int edge);
void release_junction(RoutingGraph& g, Reservation& token, int junction);

/// Releases everything still held (rollback of a half-committed route pair).
void release_all(RoutingGraph& g, Reservation& token);

}  // namespace ionmap
