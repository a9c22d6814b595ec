#include "ionmap/router.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

namespace ionmap {

Duration transition_cost(CellKind entered, CellKind from, const TechParams& t) {
  // Sliding from a channel into a junction is free; every other cell entry
  // costs one move. This makes a route's time equal to its channel cells
  // plus one move per trap entered, with turns charged separately.
  if (entered == CellKind::Junction && from == CellKind::Channel) return 0;
  return t.t_move;
}

namespace {

CellKind vertex_cell_kind(const RoutingGraph& g, int vertex) {
  switch (g.vertices[vertex].kind) {
    case VertexKind::JunctionH:
    case VertexKind::JunctionV:
      return CellKind::Junction;
    case VertexKind::Trap:
      return CellKind::Trap;
    case VertexKind::Stub:
      return CellKind::Empty;
  }
  return CellKind::Empty;
}

}  // namespace

std::vector<WalkStep> materialize_walk(const RoutingGraph& g, int from_vertex,
                                       const std::vector<int>& edges,
                                       const TechParams& t) {
  std::vector<WalkStep> steps;
  int v = from_vertex;
  Coord cur = g.vertices[v].cell;
  CellKind cur_kind = vertex_cell_kind(g, v);

  for (int eid : edges) {
    const GraphEdge& e = g.edges[eid];
    int next_v = g.other_end(eid, v);
    switch (e.kind) {
      case EdgeKind::Turn: {
        WalkStep s;
        s.kind = WalkStep::Kind::Turn;
        s.from = cur;
        s.to = cur;
        s.cost = t.t_turn;
        s.turn_to = g.vertices[next_v].kind == VertexKind::JunctionV
                        ? Direction::Vertical
                        : Direction::Horizontal;
        s.edge = eid;
        s.junction = g.vertices[v].junction;
        steps.push_back(s);
        break;
      }
      case EdgeKind::Channel: {
        std::vector<Coord> cells = e.cells;
        if (v == e.b) std::reverse(cells.begin(), cells.end());
        for (Coord cell : cells) {
          WalkStep s;
          s.from = cur;
          s.to = cell;
          s.cost = transition_cost(CellKind::Channel, cur_kind, t);
          s.edge = eid;
          steps.push_back(s);
          cur = cell;
          cur_kind = CellKind::Channel;
        }
        CellKind next_kind = vertex_cell_kind(g, next_v);
        WalkStep s;
        s.from = cur;
        s.to = g.vertices[next_v].cell;
        s.cost = transition_cost(next_kind, cur_kind, t);
        s.edge = eid;
        steps.push_back(s);
        cur = g.vertices[next_v].cell;
        cur_kind = next_kind;
        break;
      }
      case EdgeKind::TrapLink: {
        CellKind next_kind = vertex_cell_kind(g, next_v);
        WalkStep s;
        s.from = cur;
        s.to = g.vertices[next_v].cell;
        s.cost = transition_cost(next_kind, cur_kind, t);
        s.edge = eid;
        steps.push_back(s);
        cur = g.vertices[next_v].cell;
        cur_kind = next_kind;
        break;
      }
    }
    v = next_v;
  }
  return steps;
}

std::optional<Coord> select_target_trap(Coord src, Coord dst, const Fabric& f,
                                        const std::set<Coord>& occupied) {
  long long mid_r = std::llround((src.row + dst.row) / 2.0);
  long long mid_c = std::llround((src.col + dst.col) / 2.0);

  std::optional<Coord> best;
  long long best_d2 = 0;
  for (int r = 0; r < f.rows; ++r) {
    for (int c = 0; c < f.cols; ++c) {
      if (f.at(r, c) != CellKind::Trap) continue;
      Coord cand{r, c};
      if (occupied.count(cand)) continue;
      long long dr = r - mid_r;
      long long dc = c - mid_c;
      long long d2 = dr * dr + dc * dc;
      if (!best || d2 < best_d2) {  // scan order is row-major, so ties keep
        best = cand;                // the first (row-major smallest) trap
        best_d2 = d2;
      }
    }
  }
  return best;
}

std::optional<std::vector<int>> find_path(const RoutingGraph& g, int from,
                                          int to, const TechParams& t) {
  if (from == to) return std::vector<int>{};
  const double inf = std::numeric_limits<double>::infinity();
  const int n = static_cast<int>(g.vertices.size());

  auto blocked = [&](int v) {
    const Vertex& vx = g.vertices[v];
    if (vx.kind == VertexKind::Trap && v != from && v != to)
      return true;  // no routing through foreign traps
    if (vx.junction >= 0 &&
        g.junctions[vx.junction].occupancy >= t.junction_capacity)
      return true;
    return false;
  };

  std::vector<double> dist(n, inf);
  std::vector<int> parent_edge(n, -1);
  std::vector<int> parent_vertex(n, -1);
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
  dist[from] = 0.0;
  heap.push({0.0, from});

  while (!heap.empty()) {
    auto [d, v] = heap.top();
    heap.pop();
    if (d > dist[v]) continue;
    if (v == to) break;
    for (int eid : g.adjacency[v]) {
      double w = edge_weight(g, eid, t);
      if (std::isinf(w)) continue;
      int u = g.other_end(eid, v);
      if (u == v || blocked(u)) continue;
      double nd = d + w;
      if (nd < dist[u]) {
        dist[u] = nd;
        parent_edge[u] = eid;
        parent_vertex[u] = v;
        heap.push({nd, u});
      }
    }
  }

  if (std::isinf(dist[to])) return std::nullopt;
  std::vector<int> edges;
  for (int v = to; v != from; v = parent_vertex[v])
    edges.push_back(parent_edge[v]);
  std::reverse(edges.begin(), edges.end());
  return edges;
}

RouteResult route_instruction(const Instruction& ins,
                              const std::vector<Coord>& locations,
                              RoutingGraph& g, const Fabric& f,
                              const TechParams& t,
                              const std::set<Coord>& occupied_traps) {
  Route route;
  route.paths.resize(ins.operands.size());

  if (ins.operands.size() == 1) {
    // One-qubit gates execute in place.
    route.target = locations[ins.operands[0]];
    return route;
  }

  Coord src = locations[ins.operands[0]];
  Coord dst = locations[ins.operands[1]];
  auto target = select_target_trap(src, dst, f, occupied_traps);
  if (!target) return Congested{Congested::Reason::NoFreeTrap};
  route.target = *target;

  // The source path is found and reserved before the destination path is
  // searched, so the second search prices in the first operand's occupancy
  // (reserving a path raises its edge weights immediately). Reservation is
  // still both-or-neither: any failure rolls back what was taken.
  int target_vertex = g.traps[g.trap_at(*target)].vertex;
  std::vector<std::vector<int>> edge_lists(2);
  std::vector<Reservation> tokens;
  for (int k = 0; k < 2; ++k) {
    Coord at = k == 0 ? src : dst;
    int from_vertex = g.traps[g.trap_at(at)].vertex;
    auto path = find_path(g, from_vertex, target_vertex, t);
    if (path) {
      auto token = reserve_path(g, from_vertex, *path, t);
      if (token) {
        edge_lists[k] = std::move(*path);
        tokens.push_back(std::move(*token));
        continue;
      }
    }
    for (auto& held : tokens) release_all(g, held);
    return Congested{Congested::Reason::PathUnavailable};
  }

  for (int k = 0; k < 2; ++k) {
    Coord at = k == 0 ? src : dst;
    int from_vertex = g.traps[g.trap_at(at)].vertex;
    OperandPath& p = route.paths[k];
    p.edges = std::move(edge_lists[k]);
    p.walk = materialize_walk(g, from_vertex, p.edges, t);
    p.delay = 0;
    for (const auto& s : p.walk) p.delay += s.cost;
    p.reservation = std::move(tokens[k]);
  }
  return route;
}

}  // namespace ionmap
