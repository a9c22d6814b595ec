#pragma once

#include <string>
#include <vector>

#include "ionmap/types.hpp"

namespace ionmap {

enum class CellKind : char {
  Junction = 'J',
  Channel = 'C',
  Trap = 'T',
  Empty = '.',
};

/// Rectangular cell grid. Channels are straight runs terminating at a
/// junction, a trap, or the grid boundary; traps must have a usable
/// attachment (they terminate a run in line, or sit next to a junction).
struct Fabric {
  int rows = 0;
  int cols = 0;
  std::vector<CellKind> cells;  // row-major

  bool in_bounds(int r, int c) const {
    return r >= 0 && r < rows && c >= 0 && c < cols;
  }
  CellKind at(int r, int c) const { return cells[static_cast<std::size_t>(r) * cols + c]; }
  CellKind at(Coord p) const { return at(p.row, p.col); }

  /// Trap coordinates in row-major order.
  std::vector<Coord> trap_cells() const;
};

/// One maximal straight run of channel cells, with its cells in increasing
/// row/col order.
struct ChannelRun {
  Direction dir = Direction::Horizontal;
  std::vector<Coord> cells;
};

/// Throws FabricError (RaggedRows, UnknownCell, BentChannel, OrphanTrap).
/// BentChannel also covers runs that dead-end into an empty cell or whose
/// direction cannot be determined; OrphanTrap also covers traps whose only
/// neighbors are channels passing by sideways, since such a trap has no
/// usable attachment point.
Fabric parse_fabric(const std::string& text);

/// Inverse of parse_fabric: one character per cell, LF-separated rows.
std::string render_fabric(const Fabric& f);

/// Maximal channel runs of a valid fabric, in scan order.
std::vector<ChannelRun> channel_runs(const Fabric& f);

}  // namespace ionmap
