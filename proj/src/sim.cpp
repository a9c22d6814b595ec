#include "ionmap/sim.hpp"

#include <algorithm>
#include <map>
#include <queue>
#include <set>
#include <sstream>
#include <stdexcept>

#include "ionmap/errors.hpp"
#include "ionmap/router.hpp"
#include "ionmap/scheduler.hpp"

namespace ionmap {

/*
 * Event-driven mapping simulator.
 *
 * The loop alternates between an issue phase and event processing. In the
 * issue phase, parked busy-queue entries flagged for retry are attempted
 * first (FIFO), then fresh ready instructions in schedule-rank order; each
 * issue routes and reserves the operand paths atomically, emits the
 * corresponding move/turn commands with precomputed timestamps, and
 * schedules the channel/junction release events and the gate-completion
 * event. Routing failures park the instruction in the busy queue. Events at
 * equal timestamps are processed releases-first so that freed capacity is
 * visible to instructions issued in the same instant.
 *
 * Resource model: a whole path is reserved at issue time and released
 * edge-by-edge as the qubit exits each channel (the exit instant is the
 * start of the move out of the channel's last cell); a traversed junction is
 * released when the qubit's move out of the junction cell starts. The target
 * trap is held from issue until gate completion.
 */

namespace {

struct Event {
  Duration t = 0;
  int rank = 0;        // 0 = resource freed, 1 = instruction finished
  long long seq = 0;   // deterministic order within a rank
  int instruction = -1;
  int operand = 0;     // token index for releases
  bool is_junction = false;
  int resource = -1;   // channel edge id or junction id

  friend bool operator>(const Event& a, const Event& b) {
    if (a.t != b.t) return a.t > b.t;
    if (a.rank != b.rank) return a.rank > b.rank;
    return a.seq > b.seq;
  }
};

struct InFlight {
  Coord target;
  bool held = false;
  std::vector<Reservation> tokens;
};

enum class NodeState { Waiting, Ready, Busy, InFlight, Done };

}  // namespace

Trace run_simulation(const Qidg& g, const std::vector<int>& ranks,
                     const Placement& initial, const Fabric& f,
                     const RoutingGraph& base_graph, const TechParams& t,
                     const std::vector<std::string>& qubit_names) {
  const int n = g.size();
  const int nq = static_cast<int>(initial.size());
  if (static_cast<int>(qubit_names.size()) != nq)
    throw std::invalid_argument("qubit name/placement size mismatch");

  std::map<Coord, std::vector<int>> residents;
  for (int q = 0; q < nq; ++q) {
    if (f.at(initial[q]) != CellKind::Trap)
      throw std::invalid_argument("initial placement outside a trap");
    auto& occupants = residents[initial[q]];
    occupants.push_back(q);
    if (occupants.size() > 2)
      throw std::invalid_argument("more than two qubits share a trap");
  }

  RoutingGraph graph = base_graph;

  std::vector<NodeState> state(n, NodeState::Waiting);
  std::vector<int> pending_preds(n, 0);
  std::vector<InstructionStats> stats(n);
  std::set<int> ready;
  BusyQueue busy;
  std::size_t retry_budget = 0;
  int done_count = 0;

  for (int i = 0; i < n; ++i) {
    pending_preds[i] = static_cast<int>(g.preds[i].size());
    if (pending_preds[i] == 0) {
      stats[i].eligible = 0;
      state[i] = NodeState::Ready;
      ready.insert(i);
    }
  }

  std::vector<Coord> locations = initial;
  std::set<Coord> held;
  std::map<int, InFlight> inflight;
  std::priority_queue<Event, std::vector<Event>, std::greater<Event>> events;
  long long seq_counter = 0;
  std::vector<MicroCommand> commands;
  Duration now = 0;
  long long active_reservations = 0;  // reserved-but-unreleased channel slots

  auto emit_walk = [&](int qubit, const std::vector<WalkStep>& walk,
                       Duration start, int instruction, int token_index) {
    Duration cursor = start;
    // Per-resource release instants, derived from the step timeline.
    std::map<int, Duration> edge_release;
    for (const auto& s : walk) {
      MicroCommand c;
      c.t = cursor;
      c.qubit = qubit;
      if (s.kind == WalkStep::Kind::Turn) {
        c.kind = MicroCommand::Kind::Turn;
        c.at = s.from;
        c.turn_to = s.turn_to;
      } else {
        c.kind = MicroCommand::Kind::Move;
        c.from = s.from;
        c.to = s.to;
      }
      commands.push_back(std::move(c));

      if (s.edge >= 0 && graph.edges[s.edge].kind == EdgeKind::Channel)
        edge_release[s.edge] = cursor;  // ends at the edge's last step

      if (s.kind == WalkStep::Kind::Move && s.from != s.to) {
        int j = graph.junction_at(s.from);
        if (j >= 0) {
          Event ev;
          ev.t = cursor;
          ev.rank = 0;
          ev.seq = seq_counter++;
          ev.instruction = instruction;
          ev.operand = token_index;
          ev.is_junction = true;
          ev.resource = j;
          events.push(ev);
        }
      }
      cursor += s.cost;
    }
    for (const auto& [edge, at] : edge_release) {
      Event ev;
      ev.t = at;
      ev.rank = 0;
      ev.seq = seq_counter++;
      ev.instruction = instruction;
      ev.operand = token_index;
      ev.is_junction = false;
      ev.resource = edge;
      events.push(ev);
    }
  };

  auto try_issue = [&](int id) -> bool {
    const Instruction& ins = g.nodes[id];

    std::set<Coord> occupied = held;
    for (const auto& [coord, occupants] : residents) {
      for (int q : occupants) {
        if (std::find(ins.operands.begin(), ins.operands.end(), q) ==
            ins.operands.end()) {
          occupied.insert(coord);
          break;
        }
      }
    }

    RouteResult result =
        route_instruction(ins, locations, graph, f, t, occupied);
    if (std::holds_alternative<Congested>(result)) return false;
    Route route = std::get<Route>(std::move(result));

    stats[id].issue = now;
    stats[id].gate_start = now + route.routing_delay();
    stats[id].gate_end = stats[id].gate_start + gate_delay(ins.gate, t);
    state[id] = NodeState::InFlight;

    InFlight fl;
    fl.target = route.target;

    for (std::size_t k = 0; k < ins.operands.size(); ++k) {
      int qubit = ins.operands[k];
      OperandPath& path = route.paths[k];
      if (!path.walk.empty()) {
        auto& occupants = residents[locations[qubit]];
        occupants.erase(std::find(occupants.begin(), occupants.end(), qubit));
        if (occupants.empty()) residents.erase(locations[qubit]);
        emit_walk(qubit, path.walk, now, id, static_cast<int>(k));
      }
      locations[qubit] = route.target;
      active_reservations +=
          static_cast<long long>(path.reservation.channel_edges.size());
      fl.tokens.push_back(std::move(path.reservation));
    }

    if (ins.operands.size() == 2) {
      held.insert(route.target);
      fl.held = true;
    }

    MicroCommand start;
    start.t = stats[id].gate_start;
    start.kind = MicroCommand::Kind::GateStart;
    start.instruction = id;
    start.gate = ins.gate;
    start.operands = ins.operands;
    start.at = route.target;
    commands.push_back(std::move(start));

    MicroCommand end;
    end.t = stats[id].gate_end;
    end.kind = MicroCommand::Kind::GateEnd;
    end.instruction = id;
    commands.push_back(std::move(end));

    Event done;
    done.t = stats[id].gate_end;
    done.rank = 1;
    done.seq = id;
    done.instruction = id;
    events.push(done);

    inflight.emplace(id, std::move(fl));
    return true;
  };

  auto issue_phase = [&]() {
    while (retry_budget > 0 && !busy.empty()) {
      --retry_budget;
      int id = *busy.pop();
      if (!try_issue(id)) busy.push(id, now);
    }
    while (!ready.empty()) {
      int pick = -1;
      for (int id : ready)
        if (pick < 0 || ranks[id] < ranks[pick]) pick = id;
      ready.erase(pick);
      if (!try_issue(pick)) {
        state[pick] = NodeState::Busy;
        busy.push(pick, now);
      }
    }
  };

  issue_phase();
  while (!events.empty()) {
    Duration batch_time = events.top().t;
    now = batch_time;
    while (!events.empty() && events.top().t == batch_time) {
      Event ev = events.top();
      events.pop();
      if (ev.rank == 0) {
        auto& fl = inflight.at(ev.instruction);
        if (ev.is_junction) {
          release_junction(graph, fl.tokens[ev.operand], ev.resource);
        } else {
          release_edge(graph, fl.tokens[ev.operand], ev.resource);
          --active_reservations;
        }
        retry_budget = busy.size();
      } else {
        int id = ev.instruction;
        auto& fl = inflight.at(id);
        if (fl.held) held.erase(fl.target);
        for (int q : g.nodes[id].operands) {
          auto& occupants = residents[fl.target];
          if (std::find(occupants.begin(), occupants.end(), q) ==
              occupants.end())
            occupants.push_back(q);
        }
        inflight.erase(id);
        state[id] = NodeState::Done;
        ++done_count;
        for (int s : g.succs[id]) {
          if (--pending_preds[s] == 0) {
            stats[s].eligible = now;
            state[s] = NodeState::Ready;
            ready.insert(s);
          }
        }
        // Completion frees the gate trap, which can unblock instructions
        // parked for want of a free trap, so it also arms busy retries.
        retry_budget = busy.size();
      }
    }
    // Global occupancy audit: the channel counters must equal the
    // outstanding reservations after every event batch.
    if (graph.total_channel_occupancy() != active_reservations)
      throw std::logic_error("channel occupancy diverged from reservations");
    issue_phase();
  }

  if (done_count != n) {
    std::ostringstream msg;
    msg << "simulation stuck at t=" << now << ": " << (n - done_count)
        << " of " << n << " instruction(s) pending";
    msg << "; busy queue [";
    bool first = true;
    BusyQueue drain = busy;
    while (auto id = drain.pop()) {
      if (!first) msg << ' ';
      first = false;
      msg << *id;
    }
    msg << "]; in flight [";
    first = true;
    for (const auto& entry : inflight) {
      if (!first) msg << ' ';
      first = false;
      msg << entry.first;
    }
    msg << "]";
    throw StuckError(msg.str());
  }

  std::stable_sort(commands.begin(), commands.end(),
                   [](const MicroCommand& a, const MicroCommand& b) {
                     return a.t < b.t;
                   });

  Trace trace;
  trace.commands = std::move(commands);
  trace.initial_placement = initial;
  trace.final_placement = locations;
  trace.qubit_names = qubit_names;
  trace.stats = std::move(stats);
  for (const auto& st : trace.stats)
    trace.total_latency = std::max(trace.total_latency, st.gate_end);
  return trace;
}

}  // namespace ionmap
