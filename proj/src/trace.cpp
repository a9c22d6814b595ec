#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <optional>
#include <sstream>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "ionmap/errors.hpp"
#include "ionmap/router.hpp"
#include "ionmap/sim.hpp"

namespace ionmap {

namespace {

std::string coord_str(Coord c) {
  return "(" + std::to_string(c.row) + "," + std::to_string(c.col) + ")";
}

}  // namespace

std::string trace_to_text(const Trace& tr) {
  std::ostringstream out;
  for (const auto& c : tr.commands) {
    out << "t=" << c.t << ' ';
    switch (c.kind) {
      case MicroCommand::Kind::Move:
        out << "MOVE " << tr.qubit_names[c.qubit] << ' ' << coord_str(c.from)
            << "->" << coord_str(c.to);
        break;
      case MicroCommand::Kind::Turn:
        out << "TURN " << tr.qubit_names[c.qubit] << ' ' << coord_str(c.at)
            << ' ' << (c.turn_to == Direction::Vertical ? "H2V" : "V2H");
        break;
      case MicroCommand::Kind::GateStart: {
        out << "GATE_START " << c.instruction << ' ' << gate_name(c.gate)
            << ' ';
        for (std::size_t i = 0; i < c.operands.size(); ++i) {
          if (i) out << ',';
          out << tr.qubit_names[c.operands[i]];
        }
        out << " @" << coord_str(c.at);
        break;
      }
      case MicroCommand::Kind::GateEnd:
        out << "GATE_END " << c.instruction;
        break;
    }
    out << '\n';
  }
  return out.str();
}

namespace {

class LineParser {
 public:
  LineParser(const std::string& line, int line_no)
      : s_(line), pos_(0), line_(line_no) {}

  void skip_spaces() {
    while (pos_ < s_.size() && s_[pos_] == ' ') ++pos_;
  }

  std::string token() {
    skip_spaces();
    std::size_t start = pos_;
    while (pos_ < s_.size() && s_[pos_] != ' ') ++pos_;
    if (start == pos_) fail("unexpected end of line");
    return s_.substr(start, pos_ - start);
  }

  bool done() {
    skip_spaces();
    return pos_ >= s_.size();
  }

  [[noreturn]] void fail(const std::string& why) const {
    throw ParseError(ParseError::Kind::MalformedLine, line_,
                     "trace: " + why);
  }

 private:
  const std::string& s_;
  std::size_t pos_;
  int line_;
};

Coord parse_coord(const std::string& tok, LineParser& p) {
  int r = 0;
  int c = 0;
  if (std::sscanf(tok.c_str(), "(%d,%d)", &r, &c) != 2)
    p.fail("malformed coordinate '" + tok + "'");
  return {r, c};
}

}  // namespace

Trace trace_from_text(const std::string& text,
                      const std::vector<std::string>& qubit_names) {
  Trace tr;
  tr.qubit_names = qubit_names;
  std::unordered_map<std::string, int> index;
  for (std::size_t i = 0; i < qubit_names.size(); ++i)
    index[qubit_names[i]] = static_cast<int>(i);

  auto qubit = [&](const std::string& name, LineParser& p) {
    auto it = index.find(name);
    if (it == index.end()) p.fail("unknown qubit '" + name + "'");
    return it->second;
  };

  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    LineParser p(line, line_no);
    std::string t_tok = p.token();
    if (t_tok.rfind("t=", 0) != 0) p.fail("expected t=<us>");
    MicroCommand c;
    c.t = std::stoll(t_tok.substr(2));
    std::string kind = p.token();
    if (kind == "MOVE") {
      c.kind = MicroCommand::Kind::Move;
      c.qubit = qubit(p.token(), p);
      std::string arrow = p.token();
      std::size_t sep = arrow.find("->");
      if (sep == std::string::npos) p.fail("expected (r,c)->(r,c)");
      c.from = parse_coord(arrow.substr(0, sep), p);
      c.to = parse_coord(arrow.substr(sep + 2), p);
    } else if (kind == "TURN") {
      c.kind = MicroCommand::Kind::Turn;
      c.qubit = qubit(p.token(), p);
      c.at = parse_coord(p.token(), p);
      std::string dir = p.token();
      if (dir == "H2V")
        c.turn_to = Direction::Vertical;
      else if (dir == "V2H")
        c.turn_to = Direction::Horizontal;
      else
        p.fail("expected H2V or V2H");
    } else if (kind == "GATE_START") {
      c.kind = MicroCommand::Kind::GateStart;
      c.instruction = std::stoi(p.token());
      auto gate = gate_from_name(p.token());
      if (!gate) p.fail("unknown gate");
      c.gate = *gate;
      std::string ops = p.token();
      std::size_t start = 0;
      while (true) {
        std::size_t comma = ops.find(',', start);
        std::string name = ops.substr(
            start, comma == std::string::npos ? std::string::npos
                                              : comma - start);
        c.operands.push_back(qubit(name, p));
        if (comma == std::string::npos) break;
        start = comma + 1;
      }
      std::string at = p.token();
      if (at.empty() || at[0] != '@') p.fail("expected @(r,c)");
      c.at = parse_coord(at.substr(1), p);
    } else if (kind == "GATE_END") {
      c.kind = MicroCommand::Kind::GateEnd;
      c.instruction = std::stoi(p.token());
    } else {
      p.fail("unknown command '" + kind + "'");
    }
    tr.commands.push_back(std::move(c));
  }
  for (const auto& c : tr.commands)
    if (c.kind == MicroCommand::Kind::GateEnd)
      tr.total_latency = std::max(tr.total_latency, c.t);
  return tr;
}

Trace reverse_trace(const Trace& tr, const Fabric& f, const TechParams& t) {
  const Duration span = tr.total_latency;

  Trace out;
  out.qubit_names = tr.qubit_names;
  out.total_latency = span;
  out.initial_placement = tr.final_placement;
  out.final_placement = tr.initial_placement;

  for (auto it = tr.commands.rbegin(); it != tr.commands.rend(); ++it) {
    const MicroCommand& c = *it;
    MicroCommand r;
    switch (c.kind) {
      case MicroCommand::Kind::Move: {
        Duration cost = transition_cost(f.at(c.to), f.at(c.from), t);
        r.kind = MicroCommand::Kind::Move;
        r.qubit = c.qubit;
        r.from = c.to;
        r.to = c.from;
        r.t = span - c.t - cost;
        break;
      }
      case MicroCommand::Kind::Turn:
        r.kind = MicroCommand::Kind::Turn;
        r.qubit = c.qubit;
        r.at = c.at;
        r.turn_to = c.turn_to == Direction::Vertical ? Direction::Horizontal
                                                     : Direction::Vertical;
        r.t = span - c.t - t.t_turn;
        break;
      case MicroCommand::Kind::GateStart:
        r.kind = MicroCommand::Kind::GateEnd;
        r.instruction = c.instruction;
        r.t = span - c.t;
        break;
      case MicroCommand::Kind::GateEnd:
        // Payload (gate kind, operands, trap) is filled in below from the
        // matching original GateStart.
        r.kind = MicroCommand::Kind::GateStart;
        r.instruction = c.instruction;
        r.t = span - c.t;
        break;
    }
    out.commands.push_back(std::move(r));
  }

  // Fill reversed GateStart payloads from the original starts.
  std::map<int, const MicroCommand*> starts;
  for (const auto& c : tr.commands)
    if (c.kind == MicroCommand::Kind::GateStart) starts[c.instruction] = &c;
  for (auto& c : out.commands) {
    if (c.kind == MicroCommand::Kind::GateStart) {
      const MicroCommand* orig = starts.at(c.instruction);
      c.gate = inverse_gate(orig->gate);
      c.operands = orig->operands;
      c.at = orig->at;
    }
  }

  std::stable_sort(out.commands.begin(), out.commands.end(),
                   [](const MicroCommand& a, const MicroCommand& b) {
                     return a.t < b.t;
                   });
  return out;
}

// ---------------------------------------------------------------------------
// Trace validation
// ---------------------------------------------------------------------------

namespace {

struct QubitTimeline {
  // Cell occupied from `enter` until the start of the following move.
  struct Stay {
    Coord cell;
    Duration enter;
  };
  std::vector<Stay> stays;
};

void add_violation(std::vector<Violation>& out, Violation::Kind kind,
                   std::string detail) {
  out.push_back({kind, std::move(detail)});
}

}  // namespace

std::vector<Violation> validate_trace(const Trace& tr, const Qidg& g,
                                      const Fabric& f, const TechParams& t) {
  std::vector<Violation> out;
  const int n = g.size();
  const int nq = static_cast<int>(tr.qubit_names.size());

  // Global timestamp order.
  for (std::size_t i = 1; i < tr.commands.size(); ++i)
    if (tr.commands[i].t < tr.commands[i - 1].t) {
      add_violation(out, Violation::Kind::Malformed,
                    "timestamps decrease at command " + std::to_string(i));
      break;
    }

  // Gate bookkeeping.
  std::vector<Duration> gate_start(n, -1), gate_end(n, -1);
  for (const auto& c : tr.commands) {
    if (c.kind == MicroCommand::Kind::GateStart) {
      if (c.instruction < 0 || c.instruction >= n) {
        add_violation(out, Violation::Kind::Malformed,
                      "gate start for unknown instruction " +
                          std::to_string(c.instruction));
        continue;
      }
      if (gate_start[c.instruction] >= 0)
        add_violation(out, Violation::Kind::Malformed,
                      "duplicate gate start " + std::to_string(c.instruction));
      gate_start[c.instruction] = c.t;
      if (c.operands != g.nodes[c.instruction].operands)
        add_violation(out, Violation::Kind::Malformed,
                      "operand mismatch on instruction " +
                          std::to_string(c.instruction));
      if (c.gate != g.nodes[c.instruction].gate)
        add_violation(out, Violation::Kind::Malformed,
                      "gate kind mismatch on instruction " +
                          std::to_string(c.instruction));
      if (!f.in_bounds(c.at.row, c.at.col) || f.at(c.at) != CellKind::Trap)
        add_violation(out, Violation::Kind::Malformed,
                      "gate site is not a trap for instruction " +
                          std::to_string(c.instruction));
    } else if (c.kind == MicroCommand::Kind::GateEnd) {
      if (c.instruction < 0 || c.instruction >= n) continue;
      gate_end[c.instruction] = c.t;
    }
  }
  for (int i = 0; i < n; ++i) {
    if (gate_start[i] < 0 || gate_end[i] < 0) {
      add_violation(out, Violation::Kind::Malformed,
                    "instruction " + std::to_string(i) + " missing from trace");
      return out;
    }
    if (gate_end[i] - gate_start[i] != gate_delay(g.nodes[i].gate, t))
      add_violation(out, Violation::Kind::GateDuration,
                    "instruction " + std::to_string(i) +
                        " gate span != gate delay");
  }

  // Per-qubit walk: spatial continuity plus the per-instruction movement
  // blocks used for the delay decomposition.
  struct Block {
    Duration first = 0;
    Duration last = 0;
    Coord end_cell;
    bool any = false;
  };
  std::vector<QubitTimeline> timelines(nq);
  std::vector<std::optional<Coord>> pos(nq);
  std::vector<Block> open_block(nq);
  std::vector<Duration> last_gate_end(nq, 0);
  std::vector<bool> had_gate(nq, false);
  // movement block attributed to (instruction, operand index)
  std::map<std::pair<int, int>, Block> blocks;

  for (int q = 0; q < nq; ++q) {
    if (q < static_cast<int>(tr.initial_placement.size())) {
      pos[q] = tr.initial_placement[q];
      timelines[q].stays.push_back({tr.initial_placement[q], 0});
    }
  }

  for (const auto& c : tr.commands) {
    switch (c.kind) {
      case MicroCommand::Kind::Move: {
        if (!pos[c.qubit]) {
          pos[c.qubit] = c.from;
          timelines[c.qubit].stays.push_back({c.from, 0});
        }
        if (*pos[c.qubit] != c.from)
          add_violation(out, Violation::Kind::Continuity,
                        "move does not start at the qubit's position (t=" +
                            std::to_string(c.t) + ")");
        int manhattan =
            std::abs(c.from.row - c.to.row) + std::abs(c.from.col - c.to.col);
        if (manhattan != 1)
          add_violation(out, Violation::Kind::Continuity,
                        "move spans non-adjacent cells (t=" +
                            std::to_string(c.t) + ")");
        pos[c.qubit] = c.to;
        timelines[c.qubit].stays.push_back({c.to, c.t});
        Block& b = open_block[c.qubit];
        if (!b.any) {
          b.any = true;
          b.first = c.t;
          // A qubit may not leave its trap before its own gate finishes.
          if (had_gate[c.qubit] && c.t < last_gate_end[c.qubit])
            add_violation(out, Violation::Kind::Dependency,
                          "qubit " + tr.qubit_names[c.qubit] +
                              " moves before its gate ends (t=" +
                              std::to_string(c.t) + ")");
        }
        b.last = c.t;
        b.end_cell = c.to;
        break;
      }
      case MicroCommand::Kind::Turn: {
        if (pos[c.qubit] && *pos[c.qubit] != c.at)
          add_violation(out, Violation::Kind::Continuity,
                        "turn away from the qubit's position (t=" +
                            std::to_string(c.t) + ")");
        if (!f.in_bounds(c.at.row, c.at.col) ||
            f.at(c.at) != CellKind::Junction)
          add_violation(out, Violation::Kind::Malformed,
                        "turn outside a junction (t=" + std::to_string(c.t) +
                            ")");
        Block& b = open_block[c.qubit];
        if (!b.any) {
          b.any = true;
          b.first = c.t;
        }
        break;
      }
      case MicroCommand::Kind::GateStart: {
        for (std::size_t k = 0; k < c.operands.size(); ++k) {
          int q = c.operands[k];
          if (pos[q] && *pos[q] != c.at)
            add_violation(out, Violation::Kind::Continuity,
                          "operand " + tr.qubit_names[q] +
                              " not at the gate trap for instruction " +
                              std::to_string(c.instruction));
          if (!pos[q]) {
            pos[q] = c.at;
            timelines[q].stays.push_back({c.at, 0});
          }
          blocks[{c.instruction, static_cast<int>(k)}] = open_block[q];
          open_block[q] = Block{};
        }
        break;
      }
      case MicroCommand::Kind::GateEnd:
        if (c.instruction >= 0 && c.instruction < n) {
          for (int q : g.nodes[c.instruction].operands) {
            last_gate_end[q] = c.t;
            had_gate[q] = true;
          }
        }
        break;
    }
  }

  // Dependency order and the delay decomposition. A gate may not start
  // before every predecessor has finished or before its operands arrive,
  // and the span between eligibility and gate end must decompose into
  // congestion wait + routing delay + gate delay with nothing negative.
  // Traces produced directly by the simulator carry their recorded stats,
  // which must agree exactly. In time-reversed traces an operand may start
  // moving while a sibling chain is still busy (movement there mirrors the
  // forward run's post-gate dispersal), so the nonnegative-residue check
  // applies only when movement begins at or after eligibility.
  for (int i = 0; i < n; ++i) {
    Duration eligible = 0;
    for (int p : g.preds[i]) eligible = std::max(eligible, gate_end[p]);

    if (gate_start[i] < eligible)
      add_violation(out, Violation::Kind::Dependency,
                    "instruction " + std::to_string(i) +
                        " starts before its predecessors finish");

    Duration issue = gate_start[i];
    Duration routing = 0;
    for (std::size_t k = 0; k < g.nodes[i].operands.size(); ++k) {
      auto it = blocks.find({i, static_cast<int>(k)});
      if (it == blocks.end() || !it->second.any) continue;
      const Block& b = it->second;
      // Every movement block ends by entering the gate trap, so the final
      // move costs one t_move regardless of direction.
      Duration arrival = b.last + t.t_move;
      if (arrival > gate_start[i])
        add_violation(out, Violation::Kind::Decomposition,
                      "operand arrives after gate start on instruction " +
                          std::to_string(i));
      issue = std::min(issue, b.first);
      routing = std::max(routing, arrival - b.first);
    }
    Duration gate = gate_end[i] - gate_start[i];
    Duration congestion = (gate_end[i] - eligible) - gate - routing;
    if (issue >= eligible && congestion < 0)
      add_violation(out, Violation::Kind::Decomposition,
                    "negative congestion residue on instruction " +
                        std::to_string(i));

    if (static_cast<int>(tr.stats.size()) == n) {
      const InstructionStats& st = tr.stats[i];
      if (st.eligible != eligible || st.issue != issue ||
          st.gate_start != gate_start[i] || st.gate_end != gate_end[i] ||
          st.congestion() != congestion || st.routing() != routing)
        add_violation(out, Violation::Kind::Decomposition,
                      "recorded delay breakdown disagrees with the trace on "
                      "instruction " +
                          std::to_string(i));
    }
  }

  // Full-timeline capacity sweep. A qubit occupies a resource from the move
  // that enters it until the start of the move that leaves it; departures
  // at an instant free capacity before arrivals at the same instant claim
  // it, matching the simulator's release rule.
  auto runs = channel_runs(f);
  std::vector<int> cell_resource(f.cells.size(), -1);
  const int junction_base = static_cast<int>(runs.size());
  int junction_count = 0;
  {
    for (std::size_t ri = 0; ri < runs.size(); ++ri)
      for (Coord c : runs[ri].cells)
        cell_resource[static_cast<std::size_t>(c.row) * f.cols + c.col] =
            static_cast<int>(ri);
    for (int r = 0; r < f.rows; ++r)
      for (int c = 0; c < f.cols; ++c)
        if (f.at(r, c) == CellKind::Junction)
          cell_resource[static_cast<std::size_t>(r) * f.cols + c] =
              junction_base + junction_count++;
  }

  struct SweepEvent {
    Duration t;
    int delta;
    int resource;
  };
  std::vector<SweepEvent> sweep;
  for (int q = 0; q < nq; ++q) {
    const auto& stays = timelines[q].stays;
    int current = -1;
    Duration entered = 0;
    for (std::size_t s = 0; s < stays.size(); ++s) {
      Coord cell = stays[s].cell;
      int res = f.in_bounds(cell.row, cell.col)
                    ? cell_resource[static_cast<std::size_t>(cell.row) *
                                        f.cols +
                                    cell.col]
                    : -1;
      if (res != current) {
        if (current >= 0)
          sweep.push_back({stays[s].enter, -1, current});
        if (res >= 0) entered = stays[s].enter;
        current = res;
        if (res >= 0) sweep.push_back({entered, +1, res});
      }
    }
    // Whatever resource the qubit ends in stays occupied; no exit event.
  }
  std::stable_sort(sweep.begin(), sweep.end(),
                   [](const SweepEvent& a, const SweepEvent& b) {
                     if (a.t != b.t) return a.t < b.t;
                     return a.delta < b.delta;
                   });
  std::map<int, int> load;
  for (const auto& ev : sweep) {
    int& v = load[ev.resource];
    v += ev.delta;
    if (ev.resource < junction_base) {
      if (v > t.channel_capacity) {
        add_violation(out, Violation::Kind::ChannelCapacity,
                      "channel occupancy " + std::to_string(v) + " exceeds " +
                          std::to_string(t.channel_capacity) + " at t=" +
                          std::to_string(ev.t));
      }
    } else if (v > t.junction_capacity) {
      add_violation(out, Violation::Kind::JunctionCapacity,
                    "junction occupancy " + std::to_string(v) + " exceeds " +
                        std::to_string(t.junction_capacity) + " at t=" +
                        std::to_string(ev.t));
    }
  }

  Duration latency = 0;
  for (int i = 0; i < n; ++i) latency = std::max(latency, gate_end[i]);
  if (tr.total_latency != latency)
    add_violation(out, Violation::Kind::Latency,
                  "total latency " + std::to_string(tr.total_latency) +
                      " != max gate end " + std::to_string(latency));

  return out;
}

std::vector<InstructionStats> stats_from_trace(const Trace& tr,
                                               const Qidg& g) {
  const int n = g.size();
  const int nq = static_cast<int>(tr.qubit_names.size());
  std::vector<InstructionStats> stats(n);
  std::vector<Duration> block_first(nq, -1);

  for (const auto& c : tr.commands) {
    switch (c.kind) {
      case MicroCommand::Kind::Move:
      case MicroCommand::Kind::Turn:
        if (block_first[c.qubit] < 0) block_first[c.qubit] = c.t;
        break;
      case MicroCommand::Kind::GateStart: {
        InstructionStats& st = stats[c.instruction];
        st.gate_start = c.t;
        st.issue = c.t;
        for (int q : c.operands) {
          if (block_first[q] >= 0) st.issue = std::min(st.issue, block_first[q]);
          block_first[q] = -1;
        }
        break;
      }
      case MicroCommand::Kind::GateEnd:
        stats[c.instruction].gate_end = c.t;
        break;
    }
  }
  for (int i = 0; i < n; ++i) {
    Duration eligible = 0;
    for (int p : g.preds[i]) eligible = std::max(eligible, stats[p].gate_end);
    stats[i].eligible = eligible;
  }
  return stats;
}

std::string violations_to_text(const std::vector<Violation>& v) {
  static const char* names[] = {
      "malformed",        "dependency",        "continuity",
      "gate-duration",    "channel-capacity",  "junction-capacity",
      "decomposition",    "latency",
  };
  std::ostringstream out;
  for (const auto& violation : v)
    out << names[static_cast<int>(violation.kind)] << ": " << violation.detail
        << '\n';
  return out.str();
}

std::string violations_to_json(const std::vector<Violation>& v) {
  static const char* names[] = {
      "malformed",        "dependency",        "continuity",
      "gate-duration",    "channel-capacity",  "junction-capacity",
      "decomposition",    "latency",
  };
  nlohmann::ordered_json doc;
  doc["violations"] = nlohmann::ordered_json::array();
  for (const auto& violation : v) {
    nlohmann::ordered_json item;
    item["kind"] = names[static_cast<int>(violation.kind)];
    item["detail"] = violation.detail;
    doc["violations"].push_back(std::move(item));
  }
  doc["count"] = v.size();
  return doc.dump(2) + "\n";
}

}  // namespace ionmap
