#include "ionmap/scheduler.hpp"

#include <algorithm>
#include <numeric>

namespace ionmap {

std::vector<Priority> compute_priorities(const Qidg& g, const TechParams& t,
                                         double alpha, double beta) {
  const int n = g.size();
  std::vector<Priority> out(n);
  if (n == 0) return out;

  // Reverse topological order via Kahn on successor counts.
  std::vector<int> outdeg(n, 0);
  for (int i = 0; i < n; ++i) outdeg[i] = static_cast<int>(g.succs[i].size());
  std::vector<int> order;
  order.reserve(n);
  for (int i = 0; i < n; ++i)
    if (outdeg[i] == 0) order.push_back(i);
  for (std::size_t head = 0; head < order.size(); ++head)
    for (int p : g.preds[order[head]])
      if (--outdeg[p] == 0) order.push_back(p);

  // Transitive descendant sets as bitsets; circuits here are small enough
  // that the quadratic-word union is immaterial.
  const std::size_t words = (static_cast<std::size_t>(n) + 63) / 64;
  std::vector<std::uint64_t> desc(words * n, 0);
  auto word = [&](int node, std::size_t w) -> std::uint64_t& {
    return desc[static_cast<std::size_t>(node) * words + w];
  };

  for (int id : order) {
    Duration tail = 0;
    for (int s : g.succs[id]) {
      tail = std::max(tail, out[s].tail_delay);
      word(id, static_cast<std::size_t>(s) / 64) |= 1ull
                                                    << (s % 64);
      for (std::size_t w = 0; w < words; ++w) word(id, w) |= word(s, w);
    }
    out[id].tail_delay = tail + gate_delay(g.nodes[id].gate, t);
    int count = 0;
    for (std::size_t w = 0; w < words; ++w)
      count += __builtin_popcountll(word(id, w));
    out[id].descendant_count = count;
    out[id].combined = alpha * count * static_cast<double>(t.t_gate_2q) +
                       beta * static_cast<double>(out[id].tail_delay);
  }
  return out;
}

std::set<int> ready_set(const Qidg& g, const std::set<int>& completed,
                        const std::set<int>& in_flight) {
  std::set<int> ready;
  for (int i = 0; i < g.size(); ++i) {
    if (completed.count(i) || in_flight.count(i)) continue;
    bool ok = true;
    for (int p : g.preds[i])
      if (!completed.count(p)) {
        ok = false;
        break;
      }
    if (ok) ready.insert(i);
  }
  return ready;
}

void BusyQueue::push(int id, Duration now) {
  for (const auto& e : queue_)
    if (e.id == id) return;  // at most one entry per instruction
  queue_.push_back({id, now});
}

std::optional<int> BusyQueue::pop() {
  if (queue_.empty()) return std::nullopt;
  int id = queue_.front().id;
  queue_.pop_front();
  return id;
}

bool BusyQueue::contains(int id) const {
  for (const auto& e : queue_)
    if (e.id == id) return true;
  return false;
}

std::optional<int> pick_next(const std::set<int>& ready,
                             const std::vector<Priority>& priorities,
                             const BusyQueue& busy, bool busy_retry_eligible) {
  if (busy_retry_eligible && !busy.empty()) return busy.front();
  std::optional<int> best;
  for (int id : ready) {
    if (!best || priorities[id].combined > priorities[*best].combined)
      best = id;  // ready iterates ascending ids, so ties keep the smaller
  }
  return best;
}

std::vector<int> forward_ranks(const std::vector<Priority>& priorities) {
  const int n = static_cast<int>(priorities.size());
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    if (priorities[a].combined != priorities[b].combined)
      return priorities[a].combined > priorities[b].combined;
    return a < b;
  });
  std::vector<int> rank(n);
  for (int i = 0; i < n; ++i) rank[order[i]] = i;
  return rank;
}

std::vector<int> backward_ranks(const std::vector<Priority>& priorities) {
  std::vector<int> rank = forward_ranks(priorities);
  const int n = static_cast<int>(rank.size());
  for (int& r : rank) r = n - 1 - r;
  return rank;
}

}  // namespace ionmap
