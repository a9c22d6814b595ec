#include "ionmap/fabric.hpp"

#include <sstream>

#include "ionmap/errors.hpp"

namespace ionmap {

std::vector<Coord> Fabric::trap_cells() const {
  std::vector<Coord> out;
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c)
      if (at(r, c) == CellKind::Trap) out.push_back({r, c});
  return out;
}

namespace {

CellKind cell_or_empty(const Fabric& f, int r, int c) {
  return f.in_bounds(r, c) ? f.at(r, c) : CellKind::Empty;
}

bool is_terminator(CellKind k) {
  return k == CellKind::Junction || k == CellKind::Trap;
}

/// Direction of the run a channel cell belongs to. Throws BentChannel when
/// a cell has channel neighbors on both axes, or when an isolated cell's
/// direction cannot be determined from its terminators.
Direction channel_direction(const Fabric& f, int r, int c) {
  bool h_chan = cell_or_empty(f, r, c - 1) == CellKind::Channel ||
                cell_or_empty(f, r, c + 1) == CellKind::Channel;
  bool v_chan = cell_or_empty(f, r - 1, c) == CellKind::Channel ||
                cell_or_empty(f, r + 1, c) == CellKind::Channel;
  if (h_chan && v_chan)
    throw FabricError(FabricError::Kind::BentChannel, r, c,
                      "channel bends without a junction");
  if (h_chan) return Direction::Horizontal;
  if (v_chan) return Direction::Vertical;

  bool h_term = is_terminator(cell_or_empty(f, r, c - 1)) ||
                is_terminator(cell_or_empty(f, r, c + 1));
  bool v_term = is_terminator(cell_or_empty(f, r - 1, c)) ||
                is_terminator(cell_or_empty(f, r + 1, c));
  if (h_term && v_term)
    throw FabricError(FabricError::Kind::BentChannel, r, c,
                      "single-cell channel with terminators on both axes");
  if (!h_term && !v_term)
    throw FabricError(FabricError::Kind::BentChannel, r, c,
                      "dangling channel cell");
  return h_term ? Direction::Horizontal : Direction::Vertical;
}

std::vector<ChannelRun> analyze_runs(const Fabric& f) {
  std::vector<ChannelRun> runs;
  std::vector<Direction> dir(f.cells.size(), Direction::Horizontal);
  for (int r = 0; r < f.rows; ++r)
    for (int c = 0; c < f.cols; ++c)
      if (f.at(r, c) == CellKind::Channel)
        dir[static_cast<std::size_t>(r) * f.cols + c] =
            channel_direction(f, r, c);

  auto dir_at = [&](int r, int c) {
    return dir[static_cast<std::size_t>(r) * f.cols + c];
  };

  // Horizontal runs, then vertical, in scan order.
  for (int r = 0; r < f.rows; ++r) {
    for (int c = 0; c < f.cols; ++c) {
      if (f.at(r, c) != CellKind::Channel ||
          dir_at(r, c) != Direction::Horizontal)
        continue;
      if (c > 0 && f.at(r, c - 1) == CellKind::Channel) continue;  // mid-run
      ChannelRun run;
      run.dir = Direction::Horizontal;
      int cc = c;
      while (cc < f.cols && f.at(r, cc) == CellKind::Channel) {
        run.cells.push_back({r, cc});
        ++cc;
      }
      runs.push_back(std::move(run));
    }
  }
  for (int c = 0; c < f.cols; ++c) {
    for (int r = 0; r < f.rows; ++r) {
      if (f.at(r, c) != CellKind::Channel ||
          dir_at(r, c) != Direction::Vertical)
        continue;
      if (r > 0 && f.at(r - 1, c) == CellKind::Channel) continue;
      ChannelRun run;
      run.dir = Direction::Vertical;
      int rr = r;
      while (rr < f.rows && f.at(rr, c) == CellKind::Channel) {
        run.cells.push_back({rr, c});
        ++rr;
      }
      runs.push_back(std::move(run));
    }
  }

  // Runs must end at a junction, a trap, or the grid boundary.
  for (const auto& run : runs) {
    Coord front = run.cells.front();
    Coord back = run.cells.back();
    int dr = run.dir == Direction::Vertical ? 1 : 0;
    int dc = run.dir == Direction::Horizontal ? 1 : 0;
    for (Coord end : {Coord{front.row - dr, front.col - dc},
                      Coord{back.row + dr, back.col + dc}}) {
      if (!f.in_bounds(end.row, end.col)) continue;
      if (!is_terminator(f.at(end))) {
        Coord cell = end.row < front.row || end.col < front.col ? front : back;
        throw FabricError(FabricError::Kind::BentChannel, cell.row, cell.col,
                          "channel dead-ends into an empty cell");
      }
    }
  }
  return runs;
}

void check_traps(const Fabric& f, const std::vector<ChannelRun>& runs) {
  // Mark each channel cell with its run direction for the in-line test.
  std::vector<int> run_dir(f.cells.size(), -1);
  for (const auto& run : runs)
    for (Coord c : run.cells)
      run_dir[static_cast<std::size_t>(c.row) * f.cols + c.col] =
          run.dir == Direction::Horizontal ? 0 : 1;

  for (int r = 0; r < f.rows; ++r) {
    for (int c = 0; c < f.cols; ++c) {
      if (f.at(r, c) != CellKind::Trap) continue;
      bool any_neighbor = false;
      bool usable = false;
      const Coord neighbors[4] = {{r - 1, c}, {r + 1, c}, {r, c - 1}, {r, c + 1}};
      for (Coord ncell : neighbors) {
        CellKind k = cell_or_empty(f, ncell.row, ncell.col);
        if (k != CellKind::Channel && k != CellKind::Junction) continue;
        any_neighbor = true;
        if (k == CellKind::Junction) {
          usable = true;
        } else {
          int adj_axis = ncell.row == r ? 0 : 1;  // 0 horizontal, 1 vertical
          int rd = run_dir[static_cast<std::size_t>(ncell.row) * f.cols +
                           ncell.col];
          if (rd == adj_axis) usable = true;  // trap terminates the run
        }
      }
      if (!any_neighbor)
        throw FabricError(FabricError::Kind::OrphanTrap, r, c,
                          "trap has no adjacent channel or junction");
      if (!usable)
        throw FabricError(FabricError::Kind::OrphanTrap, r, c,
                          "trap has no usable attachment");
    }
  }
}

}  // namespace

Fabric parse_fabric(const std::string& text) {
  Fabric f;
  std::istringstream in(text);
  std::string raw;
  std::vector<std::string> lines;
  while (std::getline(in, raw)) {
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    lines.push_back(raw);
  }
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  if (lines.empty()) return f;

  f.rows = static_cast<int>(lines.size());
  f.cols = static_cast<int>(lines[0].size());
  f.cells.reserve(static_cast<std::size_t>(f.rows) * f.cols);
  for (int r = 0; r < f.rows; ++r) {
    if (static_cast<int>(lines[r].size()) != f.cols)
      throw FabricError(FabricError::Kind::RaggedRows, r, 0,
                        "row length differs from the first row");
    for (int c = 0; c < f.cols; ++c) {
      char ch = lines[r][c];
      switch (ch) {
        case 'J': f.cells.push_back(CellKind::Junction); break;
        case 'C': f.cells.push_back(CellKind::Channel); break;
        case 'T': f.cells.push_back(CellKind::Trap); break;
        case '.': f.cells.push_back(CellKind::Empty); break;
        default:
          throw FabricError(FabricError::Kind::UnknownCell, r, c,
                            std::string("unknown cell '") + ch + "'");
      }
    }
  }

  auto runs = analyze_runs(f);
  check_traps(f, runs);
  return f;
}

std::string render_fabric(const Fabric& f) {
  std::string out;
  out.reserve(static_cast<std::size_t>(f.rows) * (f.cols + 1));
  for (int r = 0; r < f.rows; ++r) {
    for (int c = 0; c < f.cols; ++c)
      out.push_back(static_cast<char>(f.at(r, c)));
    out.push_back('\n');
  }
  return out;
}

std::vector<ChannelRun> channel_runs(const Fabric& f) {
  return analyze_runs(f);
}

}  // namespace ionmap
