#include <doctest.h>

#include "ionmap/errors.hpp"
#include "ionmap/fabric.hpp"
#include "test_helpers.hpp"

using namespace ionmap;
using namespace ionmap::testing;

TEST_CASE("parse_fabric minimal tile") {
  Fabric f = parse_fabric(kFig5Tile);
  CHECK(f.rows == 3);
  CHECK(f.cols == 3);
  int junctions = 0;
  for (auto c : f.cells)
    if (c == CellKind::Junction) ++junctions;
  CHECK(junctions == 4);
  CHECK(f.trap_cells().empty());
  CHECK(channel_runs(f).size() == 4);
  for (const auto& run : channel_runs(f)) CHECK(run.cells.size() == 1);
}

TEST_CASE("parse_fabric errors") {
  CHECK_THROWS_AS(parse_fabric("JCJ\nC.\n"), FabricError);          // ragged
  CHECK_THROWS_AS(parse_fabric("JXJ\n"), FabricError);              // unknown
  try {
    parse_fabric("JQJ\n");
    FAIL("expected FabricError");
  } catch (const FabricError& e) {
    CHECK(e.kind() == FabricError::Kind::UnknownCell);
    CHECK(e.row() == 0);
    CHECK(e.col() == 1);
  }

  // L-shaped channel bends without a junction.
  try {
    parse_fabric("JCC\n..C\n..J\n");
    FAIL("expected FabricError");
  } catch (const FabricError& e) {
    CHECK(e.kind() == FabricError::Kind::BentChannel);
  }

  // Channel dead-ends into empty space.
  CHECK_THROWS_AS(parse_fabric("JC.\n"), FabricError);

  // Trap with no neighbors at all.
  try {
    parse_fabric("T..\n...\n..J\n");
    FAIL("expected FabricError");
  } catch (const FabricError& e) {
    CHECK(e.kind() == FabricError::Kind::OrphanTrap);
  }

  // Trap adjacent only to a channel passing by sideways has no usable
  // attachment point.
  try {
    parse_fabric("JCCCJ\n.T...\n");
    FAIL("expected FabricError");
  } catch (const FabricError& e) {
    CHECK(e.kind() == FabricError::Kind::OrphanTrap);
  }
}

TEST_CASE("parse_fabric legal trap attachments") {
  // Trap terminating a run in line.
  Fabric inline_trap = parse_fabric("JCT\n");
  CHECK(inline_trap.trap_cells() == std::vector<Coord>{{0, 2}});

  // Trap directly against a junction.
  Fabric adj = parse_fabric("TJCT\n");
  CHECK(adj.trap_cells().size() == 2);

  // Channel terminating at the grid boundary is allowed.
  CHECK_NOTHROW(parse_fabric("CCJ\n"));
}

TEST_CASE("render round-trips bit-exactly") {
  for (const char* text : {kFig5Tile, kTurnTieTile, kStrip}) {
    Fabric f = parse_fabric(text);
    CHECK(render_fabric(f) == text);
    Fabric again = parse_fabric(render_fabric(f));
    CHECK(render_fabric(again) == text);
  }
}

TEST_CASE("shipped fabrics parse and have the documented shape") {
  Fabric big = parse_fabric(read_file(data_dir() + "/fabrics/grid45x85.txt"));
  CHECK(big.rows == 45);
  CHECK(big.cols == 85);

  // Independent one-pass count oracle over the grid.
  int junctions = 0, traps = 0, channels = 0;
  for (auto c : big.cells) {
    junctions += c == CellKind::Junction;
    traps += c == CellKind::Trap;
    channels += c == CellKind::Channel;
  }
  CHECK(junctions == 23 * 43);
  CHECK(traps == 11 * 21);
  CHECK(static_cast<int>(big.trap_cells().size()) == traps);
  // Lattice slots: vertical (22 per column) + horizontal (42 per junction
  // row), minus one channel per trap (each trap replaces a vertical link).
  CHECK(channels == 22 * 43 + 23 * 42 - traps);

  Fabric small = parse_fabric(read_file(data_dir() + "/fabrics/grid17x25.txt"));
  CHECK(small.rows == 17);
  CHECK(small.cols == 25);
  CHECK(small.trap_cells().size() == 24);
}
