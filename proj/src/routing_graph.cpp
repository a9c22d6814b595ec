#include "ionmap/routing_graph.hpp"

#include <limits>
#include <stdexcept>

namespace ionmap {

int RoutingGraph::trap_at(Coord c) const {
  if (c.row < 0 || c.row >= rows || c.col < 0 || c.col >= cols) return -1;
  return trap_grid[static_cast<std::size_t>(c.row) * cols + c.col];
}

int RoutingGraph::junction_at(Coord c) const {
  if (c.row < 0 || c.row >= rows || c.col < 0 || c.col >= cols) return -1;
  return junction_grid[static_cast<std::size_t>(c.row) * cols + c.col];
}

long long RoutingGraph::total_channel_occupancy() const {
  long long total = 0;
  for (const auto& e : edges)
    if (e.kind == EdgeKind::Channel) total += e.occupancy;
  return total;
}

namespace {

int add_vertex(RoutingGraph& g, VertexKind kind, Coord cell, int junction,
               int trap) {
  g.vertices.push_back({kind, cell, junction, trap});
  g.adjacency.emplace_back();
  return static_cast<int>(g.vertices.size()) - 1;
}

int add_edge(RoutingGraph& g, GraphEdge e) {
  int id = static_cast<int>(g.edges.size());
  g.adjacency[e.a].push_back(id);
  if (e.b != e.a) g.adjacency[e.b].push_back(id);
  g.edges.push_back(std::move(e));
  return id;
}

}  // namespace

RoutingGraph build_routing_graph(const Fabric& f) {
  RoutingGraph g;
  g.rows = f.rows;
  g.cols = f.cols;
  g.trap_grid.assign(f.cells.size(), -1);
  g.junction_grid.assign(f.cells.size(), -1);

  auto grid_index = [&](Coord c) {
    return static_cast<std::size_t>(c.row) * f.cols + c.col;
  };

  for (int r = 0; r < f.rows; ++r) {
    for (int c = 0; c < f.cols; ++c) {
      if (f.at(r, c) == CellKind::Junction) {
        JunctionNode node;
        node.cell = {r, c};
        int id = static_cast<int>(g.junctions.size());
        node.h_vertex = add_vertex(g, VertexKind::JunctionH, node.cell, id, -1);
        node.v_vertex = add_vertex(g, VertexKind::JunctionV, node.cell, id, -1);
        g.junction_grid[grid_index(node.cell)] = id;
        g.junctions.push_back(node);
      } else if (f.at(r, c) == CellKind::Trap) {
        TrapNode node;
        node.cell = {r, c};
        int id = static_cast<int>(g.traps.size());
        node.vertex = add_vertex(g, VertexKind::Trap, node.cell, -1, id);
        g.trap_grid[grid_index(node.cell)] = id;
        g.traps.push_back(node);
      }
    }
  }

  // One capacity-tracked edge per maximal channel run.
  for (const auto& run : channel_runs(f)) {
    Coord front = run.cells.front();
    Coord back = run.cells.back();
    int dr = run.dir == Direction::Vertical ? 1 : 0;
    int dc = run.dir == Direction::Horizontal ? 1 : 0;
    Coord end_a{front.row - dr, front.col - dc};
    Coord end_b{back.row + dr, back.col + dc};

    auto endpoint_vertex = [&](Coord end) {
      int j = g.junction_at(end);
      if (j >= 0)
        return run.dir == Direction::Horizontal ? g.junctions[j].h_vertex
                                                : g.junctions[j].v_vertex;
      int tr = g.trap_at(end);
      if (tr >= 0) return g.traps[tr].vertex;
      // Dead end at the grid boundary.
      return add_vertex(g, VertexKind::Stub, end, -1, -1);
    };

    GraphEdge e;
    e.kind = EdgeKind::Channel;
    e.a = endpoint_vertex(end_a);
    e.b = endpoint_vertex(end_b);
    e.length = static_cast<int>(run.cells.size());
    e.dir = run.dir;
    e.cells = run.cells;
    add_edge(g, std::move(e));
  }

  // Turn edge inside every junction.
  for (const auto& j : g.junctions) {
    GraphEdge e;
    e.kind = EdgeKind::Turn;
    e.a = j.h_vertex;
    e.b = j.v_vertex;
    add_edge(g, std::move(e));
  }

  // Zero-length links for traps sitting directly against a junction. The
  // link attaches to the H- or V-vertex matching the adjacency axis, so a
  // qubit adopts that orientation with no turn charge.
  for (int ti = 0; ti < static_cast<int>(g.traps.size()); ++ti) {
    Coord cell = g.traps[ti].cell;
    const Coord neighbors[4] = {{cell.row - 1, cell.col},
                                {cell.row + 1, cell.col},
                                {cell.row, cell.col - 1},
                                {cell.row, cell.col + 1}};
    for (Coord ncell : neighbors) {
      int j = g.junction_at(ncell);
      if (j < 0) continue;
      GraphEdge e;
      e.kind = EdgeKind::TrapLink;
      e.a = g.traps[ti].vertex;
      e.b = ncell.row == cell.row ? g.junctions[j].h_vertex
                                  : g.junctions[j].v_vertex;
      e.dir = ncell.row == cell.row ? Direction::Horizontal
                                    : Direction::Vertical;
      add_edge(g, std::move(e));
    }
  }

  return g;
}

double edge_weight(const RoutingGraph& g, int edge, const TechParams& t) {
  const GraphEdge& e = g.edges[static_cast<std::size_t>(edge)];
  switch (e.kind) {
    case EdgeKind::Channel:
      if (e.occupancy >= t.channel_capacity)
        return std::numeric_limits<double>::infinity();
      return static_cast<double>(e.occupancy + 1) * e.length;
    case EdgeKind::Turn:
      // In cells; with t_move = 0 the weight degenerates to plain turn
      // microseconds, which keeps zero-cost configurations searchable.
      return t.t_move > 0
                 ? static_cast<double>(t.t_turn) / static_cast<double>(t.t_move)
                 : static_cast<double>(t.t_turn);
    case EdgeKind::TrapLink:
      return 1.0;
  }
  return 0.0;
}

bool Reservation::fully_released() const {
  for (bool r : edge_released)
    if (!r) return false;
  for (bool r : junction_released)
    if (!r) return false;
  return true;
}

std::vector<int> junctions_on_path(const RoutingGraph& g, int from_vertex,
                                   const std::vector<int>& edges) {
  std::vector<int> result;
  int v = from_vertex;
  auto visit = [&](int vertex) {
    int j = g.vertices[vertex].junction;
    if (j >= 0 && (result.empty() || result.back() != j)) result.push_back(j);
  };
  visit(v);
  for (int e : edges) {
    v = g.other_end(e, v);
    visit(v);
  }
  return result;
}

std::optional<Reservation> reserve_path(RoutingGraph& g, int from_vertex,
                                        const std::vector<int>& edges,
                                        const TechParams& t) {
  Reservation token;
  token.junction_nodes = junctions_on_path(g, from_vertex, edges);
  for (int e : edges)
    if (g.edges[e].kind == EdgeKind::Channel) token.channel_edges.push_back(e);

  for (int e : token.channel_edges)
    if (g.edges[e].occupancy >= t.channel_capacity) return std::nullopt;
  for (int j : token.junction_nodes)
    if (g.junctions[j].occupancy >= t.junction_capacity) return std::nullopt;

  for (int e : token.channel_edges) ++g.edges[e].occupancy;
  for (int j : token.junction_nodes) ++g.junctions[j].occupancy;
  token.edge_released.assign(token.channel_edges.size(), false);
  token.junction_released.assign(token.junction_nodes.size(), false);
  token.id = g.next_reservation_id++;
  return token;
}

void release_edge(RoutingGraph& g, Reservation& token, int edge) {
  for (std::size_t i = 0; i < token.channel_edges.size(); ++i) {
    if (token.channel_edges[i] != edge) continue;
    if (token.edge_released[i]) continue;  // maybe a later duplicate
    token.edge_released[i] = true;
    if (g.edges[edge].occupancy <= 0)
      throw std::logic_error("channel occupancy underflow");
    --g.edges[edge].occupancy;
    return;
  }
  for (std::size_t i = 0; i < token.channel_edges.size(); ++i)
    if (token.channel_edges[i] == edge)
      throw std::logic_error("double release of a channel edge");
  throw std::logic_error("edge is not part of this reservation");
}

void release_junction(RoutingGraph& g, Reservation& token, int junction) {
  for (std::size_t i = 0; i < token.junction_nodes.size(); ++i) {
    if (token.junction_nodes[i] != junction) continue;
    if (token.junction_released[i]) continue;
    token.junction_released[i] = true;
    if (g.junctions[junction].occupancy <= 0)
      throw std::logic_error("junction occupancy underflow");
    --g.junctions[junction].occupancy;
    return;
  }
  for (std::size_t i = 0; i < token.junction_nodes.size(); ++i)
    if (token.junction_nodes[i] == junction)
      throw std::logic_error("double release of a junction");
  throw std::logic_error("junction is not part of this reservation");
}

void release_all(RoutingGraph& g, Reservation& token) {
  for (std::size_t i = 0; i < token.channel_edges.size(); ++i) {
    if (!token.edge_released[i]) {
      token.edge_released[i] = true;
      --g.edges[token.channel_edges[i]].occupancy;
    }
  }
  for (std::size_t i = 0; i < token.junction_nodes.size(); ++i) {
    if (!token.junction_released[i]) {
      token.junction_released[i] = true;
      --g.junctions[token.junction_nodes[i]].occupancy;
    }
  }
}

}  // namespace ionmap
