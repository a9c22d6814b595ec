#include <cmath>
#include <stdexcept>

#include <doctest.h>

#include "ionmap/fabric.hpp"
#include "ionmap/routing_graph.hpp"
#include "test_helpers.hpp"

using namespace ionmap;
using namespace ionmap::testing;

namespace {

int count_edges(const RoutingGraph& g, EdgeKind kind) {
  int n = 0;
  for (const auto& e : g.edges) n += e.kind == kind;
  return n;
}

}  // namespace

TEST_CASE("graph of the 2x2 junction tile") {
  Fabric f = parse_fabric(kFig5Tile);
  RoutingGraph g = build_routing_graph(f);
  CHECK(g.junctions.size() == 4);
  CHECK(g.vertices.size() == 8);
  CHECK(count_edges(g, EdgeKind::Channel) == 4);
  CHECK(count_edges(g, EdgeKind::Turn) == 4);
  CHECK(count_edges(g, EdgeKind::TrapLink) == 0);
  for (const auto& e : g.edges) CHECK(e.occupancy == 0);
}

TEST_CASE("graph of a single horizontal channel") {
  Fabric f = parse_fabric("JCJ\n");
  RoutingGraph g = build_routing_graph(f);
  CHECK(g.vertices.size() == 4);
  CHECK(count_edges(g, EdgeKind::Channel) == 1);
  CHECK(count_edges(g, EdgeKind::Turn) == 2);
  // The one channel edge connects the two H-vertices.
  for (const auto& e : g.edges) {
    if (e.kind != EdgeKind::Channel) continue;
    CHECK(g.vertices[e.a].kind == VertexKind::JunctionH);
    CHECK(g.vertices[e.b].kind == VertexKind::JunctionH);
    CHECK(e.length == 1);
  }
}

TEST_CASE("graph counts on the shipped 45x85 fabric") {
  Fabric f = parse_fabric(read_file(data_dir() + "/fabrics/grid45x85.txt"));
  RoutingGraph g = build_routing_graph(f);

  // Independent grid-scan oracle. Junction spacing is 2, so every channel
  // cell is its own maximal run; traps replace vertical links and touch the
  // junctions above and below.
  int junctions = 0, traps = 0, channels = 0;
  for (auto c : f.cells) {
    junctions += c == CellKind::Junction;
    traps += c == CellKind::Trap;
    channels += c == CellKind::Channel;
  }
  CHECK(static_cast<int>(g.junctions.size()) == junctions);
  CHECK(static_cast<int>(g.traps.size()) == traps);
  CHECK(static_cast<int>(g.vertices.size()) == 2 * junctions + traps);
  CHECK(count_edges(g, EdgeKind::Channel) == channels);
  CHECK(count_edges(g, EdgeKind::Turn) == junctions);
  CHECK(count_edges(g, EdgeKind::TrapLink) == 2 * traps);
}

TEST_CASE("collapsing junction vertex pairs reproduces the turn-blind model") {
  // In the simple model, vertices are junctions/traps and edges are channel
  // runs. Collapse each junction's H/V pair and check the channel edge set
  // matches the runs' endpoint cells, one edge per run.
  for (const char* text : {kFig5Tile, kTurnTieTile}) {
    Fabric f = parse_fabric(text);
    RoutingGraph g = build_routing_graph(f);
    auto runs = channel_runs(f);
    int channel_edges = count_edges(g, EdgeKind::Channel);
    CHECK(channel_edges == static_cast<int>(runs.size()));
    for (const auto& e : g.edges) {
      if (e.kind != EdgeKind::Channel) continue;
      // Collapsed endpoints are the vertex cells; each must be the cell
      // directly beyond the run's ends (or a boundary stub).
      Coord a = g.vertices[e.a].cell;
      Coord b = g.vertices[e.b].cell;
      Coord front = e.cells.front();
      Coord back = e.cells.back();
      int dr = e.dir == Direction::Vertical ? 1 : 0;
      int dc = e.dir == Direction::Horizontal ? 1 : 0;
      CHECK(a == Coord{front.row - dr, front.col - dc});
      CHECK(b == Coord{back.row + dr, back.col + dc});
    }
    // Turn edges are intra-junction only: collapsing removes them all.
    for (const auto& e : g.edges)
      if (e.kind == EdgeKind::Turn)
        CHECK(g.vertices[e.a].junction == g.vertices[e.b].junction);
  }
}

TEST_CASE("edge_weight follows the congestion rule") {
  TechParams t;  // capacity 2
  Fabric f4 = parse_fabric("JCCCCJ\n");
  RoutingGraph g4 = build_routing_graph(f4);
  int e4 = -1;
  for (std::size_t i = 0; i < g4.edges.size(); ++i)
    if (g4.edges[i].kind == EdgeKind::Channel) e4 = static_cast<int>(i);
  REQUIRE(g4.edges[e4].length == 4);
  CHECK(edge_weight(g4, e4, t) == 4.0);

  Fabric f3 = parse_fabric("JCCCJ\n");
  RoutingGraph g3 = build_routing_graph(f3);
  int e3 = -1;
  for (std::size_t i = 0; i < g3.edges.size(); ++i)
    if (g3.edges[i].kind == EdgeKind::Channel) e3 = static_cast<int>(i);
  g3.edges[e3].occupancy = 1;
  CHECK(edge_weight(g3, e3, t) == 6.0);
  g3.edges[e3].occupancy = 2;
  CHECK(std::isinf(edge_weight(g3, e3, t)));

  // Monotone in occupancy with the jump exactly at capacity.
  g3.edges[e3].occupancy = 0;
  double prev = edge_weight(g3, e3, t);
  for (int n = 1; n < t.channel_capacity; ++n) {
    g3.edges[e3].occupancy = n;
    double w = edge_weight(g3, e3, t);
    CHECK(w >= prev);
    CHECK(!std::isinf(w));
    prev = w;
  }

  // Turn weight is the turn/move ratio.
  int turn = -1;
  for (std::size_t i = 0; i < g3.edges.size(); ++i)
    if (g3.edges[i].kind == EdgeKind::Turn) turn = static_cast<int>(i);
  CHECK(edge_weight(g3, turn, t) == 10.0);
}

TEST_CASE("reserve and release") {
  TechParams t;
  Fabric f = parse_fabric(kFig5Tile);

  SUBCASE("reserve then release restores the graph") {
    RoutingGraph g = build_routing_graph(f);
    // Path: bottom-left H-vertex -> bottom-right -> turn -> up -> top-right.
    int v0 = g.junctions[2].h_vertex;  // junction order is row-major
    std::vector<int> path;
    // bottom channel between junctions 2 and 3
    for (std::size_t i = 0; i < g.edges.size(); ++i) {
      const auto& e = g.edges[i];
      if (e.kind == EdgeKind::Channel && e.cells[0] == Coord{2, 1})
        path.push_back(static_cast<int>(i));
    }
    REQUIRE(path.size() == 1);
    auto token = reserve_path(g, v0, path, t);
    REQUIRE(token.has_value());
    CHECK(g.edges[path[0]].occupancy == 1);
    CHECK(g.junctions[2].occupancy == 1);
    CHECK(g.junctions[3].occupancy == 1);
    release_all(g, *token);
    CHECK(g.total_channel_occupancy() == 0);
    for (const auto& j : g.junctions) CHECK(j.occupancy == 0);
  }

  SUBCASE("third reservation of a unit channel fails at capacity two") {
    RoutingGraph g = build_routing_graph(f);
    int edge = 0;
    int v0 = g.edges[edge].a;
    auto t1 = reserve_path(g, v0, {edge}, t);
    auto t2 = reserve_path(g, v0, {edge}, t);
    REQUIRE(t1.has_value());
    REQUIRE(t2.has_value());
    CHECK(g.edges[edge].occupancy == 2);
    auto t3 = reserve_path(g, v0, {edge}, t);
    CHECK(!t3.has_value());
    CHECK(g.edges[edge].occupancy == 2);  // failed reserve mutates nothing
  }

  SUBCASE("staged release keeps the rest reserved") {
    RoutingGraph g = build_routing_graph(f);
    // Two-edge path through the bottom-right junction with a turn.
    int bottom = -1, right = -1;
    for (std::size_t i = 0; i < g.edges.size(); ++i) {
      const auto& e = g.edges[i];
      if (e.kind != EdgeKind::Channel) continue;
      if (e.cells[0] == Coord{2, 1}) bottom = static_cast<int>(i);
      if (e.cells[0] == Coord{1, 2}) right = static_cast<int>(i);
    }
    int turn = -1;
    for (std::size_t i = 0; i < g.edges.size(); ++i)
      if (g.edges[i].kind == EdgeKind::Turn &&
          g.vertices[g.edges[i].a].junction == 3)
        turn = static_cast<int>(i);
    REQUIRE(bottom >= 0);
    REQUIRE(right >= 0);
    REQUIRE(turn >= 0);
    int v0 = g.junctions[2].h_vertex;
    auto token = reserve_path(g, v0, {bottom, turn, right}, t);
    REQUIRE(token.has_value());
    CHECK(g.total_channel_occupancy() == 2);

    release_edge(g, *token, bottom);
    CHECK(g.edges[bottom].occupancy == 0);
    CHECK(g.edges[right].occupancy == 1);
    CHECK(g.junctions[3].occupancy == 1);

    CHECK_THROWS_AS(release_edge(g, *token, bottom), std::logic_error);
    // an edge never reserved by this token
    int other = -1;
    for (std::size_t i = 0; i < g.edges.size(); ++i)
      if (g.edges[i].kind == EdgeKind::Channel &&
          static_cast<int>(i) != bottom && static_cast<int>(i) != right)
        other = static_cast<int>(i);
    CHECK_THROWS_AS(release_edge(g, *token, other), std::logic_error);

    release_junction(g, *token, 3);
    release_edge(g, *token, right);
    release_junction(g, *token, 2);
    release_junction(g, *token, 1);  // the right channel ends at junction 1
    CHECK(token->fully_released());
    CHECK(g.total_channel_occupancy() == 0);
    for (const auto& j : g.junctions) CHECK(j.occupancy == 0);
  }

  SUBCASE("disjoint reservations only touch their own edges") {
    RoutingGraph g = build_routing_graph(f);
    std::vector<int> channels;
    for (std::size_t i = 0; i < g.edges.size(); ++i)
      if (g.edges[i].kind == EdgeKind::Channel)
        channels.push_back(static_cast<int>(i));
    REQUIRE(channels.size() == 4);
    auto t1 = reserve_path(g, g.edges[channels[0]].a, {channels[0]}, t);
    auto t2 = reserve_path(g, g.edges[channels[3]].a, {channels[3]}, t);
    REQUIRE(t1.has_value());
    REQUIRE(t2.has_value());
    CHECK(g.edges[channels[0]].occupancy == 1);
    CHECK(g.edges[channels[1]].occupancy == 0);
    CHECK(g.edges[channels[2]].occupancy == 0);
    CHECK(g.edges[channels[3]].occupancy == 1);
  }
}
