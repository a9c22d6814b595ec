#include <cmath>
#include <doctest.h>

#include "ionmap/router.hpp"
#include "test_helpers.hpp"

using namespace ionmap;
using namespace ionmap::testing;

namespace {

// Brute-force nearest-free-trap scan used as the oracle for target
// selection: squared Euclidean distance to the rounded midpoint, row-major
// tie-break.
Coord oracle_target(Coord src, Coord dst, const Fabric& f,
                    const std::set<Coord>& occupied) {
  long long mr = std::llround((src.row + dst.row) / 2.0);
  long long mc = std::llround((src.col + dst.col) / 2.0);
  Coord best{-1, -1};
  long long best_d2 = -1;
  for (Coord trap : f.trap_cells()) {
    if (occupied.count(trap)) continue;
    long long dr = trap.row - mr;
    long long dc = trap.col - mc;
    long long d2 = dr * dr + dc * dc;
    if (best_d2 < 0 || d2 < best_d2) {
      best = trap;
      best_d2 = d2;
    }
  }
  return best;
}

int trap_vertex(const RoutingGraph& g, Coord c) {
  return g.traps[g.trap_at(c)].vertex;
}

double path_weight(const RoutingGraph& g, const std::vector<int>& edges,
                   const TechParams& t) {
  double w = 0.0;
  for (int e : edges) w += edge_weight(g, e, t);
  return w;
}

}  // namespace

TEST_CASE("select_target_trap matches the scan oracle") {
  Fabric f = parse_fabric(read_file(data_dir() + "/fabrics/grid17x25.txt"));
  SUBCASE("midpoint example") {
    // src (2,3), dst (6,9): midpoint (4,6).
    auto got = select_target_trap({2, 3}, {6, 9}, f, {});
    REQUIRE(got.has_value());
    CHECK(*got == oracle_target({2, 3}, {6, 9}, f, {}));
  }
  SUBCASE("random pairs, with and without occupancy") {
    Rng rng(5);
    auto traps = f.trap_cells();
    for (int i = 0; i < 200; ++i) {
      Coord src{static_cast<int>(rng.uniform(f.rows)),
                static_cast<int>(rng.uniform(f.cols))};
      Coord dst{static_cast<int>(rng.uniform(f.rows)),
                static_cast<int>(rng.uniform(f.cols))};
      std::set<Coord> occupied;
      for (const Coord& trap : traps)
        if (rng.uniform(3) == 0) occupied.insert(trap);
      auto got = select_target_trap(src, dst, f, occupied);
      if (occupied.size() == traps.size()) {
        CHECK(!got.has_value());
      } else {
        REQUIRE(got.has_value());
        CHECK(*got == oracle_target(src, dst, f, occupied));
      }
    }
  }
  SUBCASE("all traps occupied") {
    std::set<Coord> occupied;
    for (const Coord& trap : f.trap_cells()) occupied.insert(trap);
    CHECK(!select_target_trap({1, 2}, {5, 6}, f, occupied).has_value());
  }
}

TEST_CASE("find_path basics") {
  TechParams t;
  Fabric f = parse_fabric(kTurnTieTile);
  RoutingGraph g = build_routing_graph(f);
  int s = trap_vertex(g, {5, 0});
  int d = trap_vertex(g, {0, 5});

  SUBCASE("from == to is the empty path") {
    auto p = find_path(g, s, s, t);
    REQUIRE(p.has_value());
    CHECK(p->empty());
  }

  SUBCASE("one-turn route wins under the 10x turn cost") {
    auto p = find_path(g, s, d, t);
    REQUIRE(p.has_value());
    int turns = 0;
    for (int e : *p) turns += g.edges[e].kind == EdgeKind::Turn;
    CHECK(turns == 1);
    CHECK(path_weight(g, *p, t) == 18.0);  // 8 cells + one turn

    // Strictly cheaper than every multi-turn alternative.
    auto all = enumerate_paths(g, s, d, t);
    CHECK(all.size() >= 2);
    for (const auto& alt : all)
      if (alt.turns >= 2) CHECK(path_weight(g, *p, t) < alt.weight);
  }

  SUBCASE("turn cost equal to a move restores the tie") {
    TechParams cheap = t;
    cheap.t_turn = 1;
    auto p = find_path(g, s, d, cheap);
    REQUIRE(p.has_value());
    double best = path_weight(g, *p, cheap);
    bool multi_turn_tie = false;
    for (const auto& alt : enumerate_paths(g, s, d, cheap)) {
      CHECK(best <= alt.weight);
      if (alt.turns >= 2 && alt.weight == best) multi_turn_tie = true;
    }
    CHECK(multi_turn_tie);
  }
}

TEST_CASE("find_path detours around saturated channels") {
  TechParams t;
  Fabric f = parse_fabric(
      "JCCCJ\n"
      "C...C\n"
      "TCJCT\n");
  RoutingGraph g = build_routing_graph(f);
  int s = trap_vertex(g, {2, 0});
  int d = trap_vertex(g, {2, 4});

  auto direct = find_path(g, s, d, t);
  REQUIRE(direct.has_value());
  int turns_direct = 0;
  for (int e : *direct) turns_direct += g.edges[e].kind == EdgeKind::Turn;
  CHECK(turns_direct == 0);

  // Saturate the two bottom channels.
  std::vector<int> bottom;
  for (std::size_t i = 0; i < g.edges.size(); ++i)
    if (g.edges[i].kind == EdgeKind::Channel && g.edges[i].cells[0].row == 2)
      bottom.push_back(static_cast<int>(i));
  REQUIRE(bottom.size() == 2);
  for (int e : bottom) g.edges[e].occupancy = t.channel_capacity;

  auto detour = find_path(g, s, d, t);
  REQUIRE(detour.has_value());
  for (int e : *detour)
    CHECK(std::find(bottom.begin(), bottom.end(), e) == bottom.end());

  // Saturate everything else: unreachable.
  for (auto& e : g.edges)
    if (e.kind == EdgeKind::Channel) e.occupancy = t.channel_capacity;
  CHECK(!find_path(g, s, d, t).has_value());
}

TEST_CASE("find_path optimality against brute force on lattices") {
  TechParams t;
  // 3x3 and 4x4 junction lattices with unit channels.
  for (const char* text :
       {"JCJCJ\nC.C.C\nJCJCJ\nC.C.C\nJCJCJ\n",
        "JCJCJCJ\nC.C.C.C\nJCJCJCJ\nC.C.C.C\nJCJCJCJ\nC.C.C.C\nJCJCJCJ\n"}) {
    Fabric f = parse_fabric(text);
    RoutingGraph g = build_routing_graph(f);
    Rng rng(11);
    for (int trial = 0; trial < 12; ++trial) {
      int a = static_cast<int>(rng.uniform(g.vertices.size()));
      int b = static_cast<int>(rng.uniform(g.vertices.size()));
      if (a == b) continue;
      auto p = find_path(g, a, b, t);
      auto all = enumerate_paths(g, a, b, t);
      REQUIRE(p.has_value());
      REQUIRE(!all.empty());
      double best = all[0].weight;
      for (const auto& alt : all) best = std::min(best, alt.weight);
      CHECK(path_weight(g, *p, t) == best);

      // With t_turn == t_move the returned path is Manhattan-minimal in
      // cells.
      TechParams cheap = t;
      cheap.t_turn = cheap.t_move;
      auto q = find_path(g, a, b, cheap);
      REQUIRE(q.has_value());
      long long cells = 0;
      for (int e : *q)
        if (g.edges[e].kind == EdgeKind::Channel) cells += g.edges[e].length;
      long long min_cells = -1;
      for (const auto& alt : enumerate_paths(g, a, b, cheap)) {
        long long c = 0;
        for (int e : alt.edges)
          if (g.edges[e].kind == EdgeKind::Channel) c += g.edges[e].length;
        if (min_cells < 0 || c < min_cells) min_cells = c;
      }
      CHECK(cells == min_cells);
    }
  }
}

TEST_CASE("route_instruction on the strip") {
  TechParams t;
  Fabric f = parse_fabric(kStrip);
  RoutingGraph g = build_routing_graph(f);

  Program p = parse_qasm("QUBIT a\nQUBIT b\nC-X a,b\nH a\n");
  std::vector<Coord> locations = {{0, 0}, {0, 5}};

  SUBCASE("median lands on the destination trap; source pays 5 moves") {
    RouteResult r =
        route_instruction(p.instructions[0], locations, g, f, t, {});
    REQUIRE(std::holds_alternative<Route>(r));
    const Route& route = std::get<Route>(r);
    CHECK(route.target == Coord{0, 5});
    CHECK(route.paths[1].walk.empty());
    CHECK(route.paths[0].delay == 5);  // 4 channel cells + trap entry
    CHECK(route.routing_delay() == 5);
    int turns = 0;
    for (const auto& s : route.paths[0].walk)
      turns += s.kind == WalkStep::Kind::Turn;
    CHECK(turns == 0);
    CHECK(g.total_channel_occupancy() == 1);
  }

  SUBCASE("one-qubit gates execute in place") {
    RouteResult r =
        route_instruction(p.instructions[1], locations, g, f, t, {});
    REQUIRE(std::holds_alternative<Route>(r));
    const Route& route = std::get<Route>(r);
    CHECK(route.target == Coord{0, 0});
    CHECK(route.routing_delay() == 0);
    CHECK(g.total_channel_occupancy() == 0);
  }
}

TEST_CASE("route delay decomposes into moves and turns") {
  // One-turn route across the turn-tie tile: 8 channel cells, one trap
  // entry, one turn -> 9 moves + 1 turn = 19 us with the default 1/10
  // timing.
  TechParams t;
  Fabric f = parse_fabric(kTurnTieTile);
  RoutingGraph g = build_routing_graph(f);
  Program p = parse_qasm("QUBIT a\nQUBIT b\nC-X a,b\n");
  std::vector<Coord> locations = {{5, 0}, {0, 5}};
  RouteResult r = route_instruction(p.instructions[0], locations, g, f, t, {});
  REQUIRE(std::holds_alternative<Route>(r));
  const Route& route = std::get<Route>(r);
  CHECK(route.target == Coord{0, 5});  // midpoint tie resolves row-major
  CHECK(route.paths[1].walk.empty());
  long long cells = 0;
  int turns = 0, trap_entries = 0;
  for (const auto& s : route.paths[0].walk) {
    if (s.kind == WalkStep::Kind::Turn) {
      ++turns;
    } else {
      cells += f.at(s.to) == CellKind::Channel;
      trap_entries += f.at(s.to) == CellKind::Trap;
    }
  }
  CHECK(cells == 8);
  CHECK(turns == 1);
  CHECK(trap_entries == 1);
  CHECK(route.paths[0].delay == (cells + trap_entries) * t.t_move +
                                    turns * t.t_turn);
  CHECK(route.paths[0].delay == 19);
}

TEST_CASE("congested routing leaves occupancies untouched") {
  Fabric f = parse_fabric(
      "TCJCT\n"
      "..C..\n"
      "..T..\n");
  Program p = parse_qasm("QUBIT a\nQUBIT b\nC-X a,b\n");
  std::vector<Coord> locations = {{0, 0}, {0, 4}};
  // Force the shared target below the junction.
  std::set<Coord> occupied = {{0, 0}, {0, 4}};

  SUBCASE("channel capacity 1 forces rollback of the first reservation") {
    TechParams t;
    t.channel_capacity = 1;
    RoutingGraph g = build_routing_graph(f);
    RouteResult r =
        route_instruction(p.instructions[0], locations, g, f, t, occupied);
    REQUIRE(std::holds_alternative<Congested>(r));
    CHECK(g.total_channel_occupancy() == 0);
    for (const auto& j : g.junctions) CHECK(j.occupancy == 0);
  }

  SUBCASE("junction capacity 1 forces rollback too") {
    TechParams t;
    t.junction_capacity = 1;
    RoutingGraph g = build_routing_graph(f);
    RouteResult r =
        route_instruction(p.instructions[0], locations, g, f, t, occupied);
    REQUIRE(std::holds_alternative<Congested>(r));
    CHECK(g.total_channel_occupancy() == 0);
    for (const auto& j : g.junctions) CHECK(j.occupancy == 0);
  }

  SUBCASE("capacity 2 admits both operands through the shared channel") {
    TechParams t;
    RoutingGraph g = build_routing_graph(f);
    RouteResult r =
        route_instruction(p.instructions[0], locations, g, f, t, occupied);
    REQUIRE(std::holds_alternative<Route>(r));
    const Route& route = std::get<Route>(r);
    CHECK(route.target == Coord{2, 2});
    // Shared vertical channel counts both reservations.
    CHECK(g.total_channel_occupancy() == 4);
  }

  SUBCASE("no free trap reports congestion") {
    TechParams t;
    RoutingGraph g = build_routing_graph(f);
    std::set<Coord> all = {{0, 0}, {0, 4}, {2, 2}};
    RouteResult r =
        route_instruction(p.instructions[0], locations, g, f, t, all);
    REQUIRE(std::holds_alternative<Congested>(r));
    CHECK(std::get<Congested>(r).reason == Congested::Reason::NoFreeTrap);
  }
}
