#pragma once

#include <deque>
#include <optional>
#include <set>
#include <vector>

#include "ionmap/qasm.hpp"
#include "ionmap/tech.hpp"

namespace ionmap {

/// Static list-scheduling priority of one instruction.
struct Priority {
  int descendant_count = 0;   // transitive dependents
  Duration tail_delay = 0;    // longest gate-delay path from here to a sink
  double combined = 0.0;      // alpha*descendants*t_gate_2q + beta*tail_delay
};

/// Computed once before simulation; not updated as instructions complete.
std::vector<Priority> compute_priorities(const Qidg& g, const TechParams& t,
                                         double alpha, double beta);

/// Nodes whose predecessors have all completed and which are neither done
/// nor in flight.
std::set<int> ready_set(const Qidg& g, const std::set<int>& completed,
                        const std::set<int>& in_flight);

/// FIFO of instructions parked after a failed routing attempt. Entries
/// become eligible for retry when routing resources are freed.
class BusyQueue {
 public:
  void push(int id, Duration now);
  std::optional<int> pop();
  bool contains(int id) const;
  bool empty() const { return queue_.empty(); }
  std::size_t size() const { return queue_.size(); }
  int front() const { return queue_.front().id; }
  Duration front_enqueued_at() const { return queue_.front().enqueued_at; }

 private:
  struct Entry {
    int id;
    Duration enqueued_at;
  };
  std::deque<Entry> queue_;
};

/// Retry-eligible busy entries go first (FIFO); among fresh ready nodes the
/// maximum combined priority wins, ties broken by smaller id.
std::optional<int> pick_next(const std::set<int>& ready,
                             const std::vector<Priority>& priorities,
                             const BusyQueue& busy, bool busy_retry_eligible);

/// Total issue order induced by the priorities: rank 0 is issued first.
/// Forward ranks sort by (combined desc, id asc); backward ranks are the
/// exact reversal, realizing the reversed schedule for uncompute runs.
std::vector<int> forward_ranks(const std::vector<Priority>& priorities);
std::vector<int> backward_ranks(const std::vector<Priority>& priorities);

}  // namespace ionmap
