#include "ionmap/placer.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "ionmap/scheduler.hpp"

namespace ionmap {

Placement center_placement(const Fabric& f, int qubit_count, Rng* rng) {
  std::vector<Coord> traps = f.trap_cells();
  if (static_cast<int>(traps.size()) < qubit_count)
    throw std::runtime_error("insufficient traps: fabric has " +
                             std::to_string(traps.size()) + ", need " +
                             std::to_string(qubit_count));

  const double center_r = (f.rows - 1) / 2.0;
  const double center_c = (f.cols - 1) / 2.0;
  std::stable_sort(traps.begin(), traps.end(), [&](Coord a, Coord b) {
    double da = (a.row - center_r) * (a.row - center_r) +
                (a.col - center_c) * (a.col - center_c);
    double db = (b.row - center_r) * (b.row - center_r) +
                (b.col - center_c) * (b.col - center_c);
    if (da != db) return da < db;
    return a < b;
  });

  std::vector<int> order(qubit_count);
  std::iota(order.begin(), order.end(), 0);
  if (rng) rng->shuffle(order);

  Placement placement(qubit_count);
  for (int i = 0; i < qubit_count; ++i) placement[order[i]] = traps[i];
  return placement;
}

bool ImprovementStopper::observe(Duration latency) {
  if (!any_) {
    any_ = true;
    best_ = latency;
    stale_ = 0;
    return true;
  }
  if (latency < best_) {
    best_ = latency;
    stale_ = 0;
  } else {
    ++stale_;
  }
  return stale_ < patience_;
}

namespace {

struct SeedOutcome {
  std::vector<RunSummary> runs;
  int best_run = -1;
  std::shared_ptr<const Trace> best_trace;
};

template <typename Body>
void parallel_indexed(int count, int threads, const Body& body) {
  std::exception_ptr failure = nullptr;
  if (threads > 1) {
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
    for (int i = 0; i < count; ++i) {
      try {
        body(i);
      } catch (...) {
#pragma omp critical
        if (!failure) failure = std::current_exception();
      }
    }
  } else {
    // Serial reference path; results are identical because the parallel
    // path reduces by index.
    for (int i = 0; i < count; ++i) body(i);
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace

PlacerResult monte_carlo_place(const Qidg& g, const Program& p,
                               const Fabric& f, const RoutingGraph& rg,
                               const TechParams& t, int runs, Rng rng,
                               int threads) {
  if (runs < 1) throw std::invalid_argument("monte_carlo_place: runs < 1");
  const auto priorities =
      compute_priorities(g, t, t.priority_alpha, t.priority_beta);
  const auto ranks = forward_ranks(priorities);
  const auto names = p.qubit_names();
  const int nq = static_cast<int>(p.qubits.size());

  std::vector<RunSummary> summaries(runs);
  std::vector<std::shared_ptr<const Trace>> traces(runs);

  parallel_indexed(runs, threads, [&](int i) {
    Rng run_rng = rng.derive(static_cast<std::uint64_t>(i));
    Placement placement = center_placement(f, nq, &run_rng);
    auto trace = std::make_shared<Trace>(
        run_simulation(g, ranks, placement, f, rg, t, names));
    RunSummary s;
    s.direction = RunDirection::Forward;
    s.seed_index = i;
    s.run_index = 0;
    s.initial = placement;
    s.final = trace->final_placement;
    s.latency = trace->total_latency;
    summaries[i] = std::move(s);
    traces[i] = std::move(trace);
  });

  int best = 0;
  for (int i = 1; i < runs; ++i)
    if (summaries[i].latency < summaries[best].latency) best = i;

  PlacerResult result;
  result.best.direction = RunDirection::Forward;
  result.best.initial = summaries[best].initial;
  result.best.final = summaries[best].final;
  result.best.latency = summaries[best].latency;
  result.best.trace = traces[best];
  result.best.run_stats = traces[best]->stats;
  result.total_runs = runs;
  result.runs = std::move(summaries);
  return result;
}

PlacerResult mvfb_place(const Qidg& g, const Program& p, const Fabric& f,
                        const RoutingGraph& rg, const TechParams& t,
                        int seeds_m, int patience, Rng rng, int threads) {
  if (seeds_m < 1) throw std::invalid_argument("mvfb_place: seeds < 1");
  if (patience < 1) throw std::invalid_argument("mvfb_place: patience < 1");

  const auto priorities =
      compute_priorities(g, t, t.priority_alpha, t.priority_beta);
  const auto ranks_fwd = forward_ranks(priorities);
  const auto ranks_bwd = backward_ranks(priorities);
  const Qidg uidg = invert_to_uidg(g);
  const auto names = p.qubit_names();
  const int nq = static_cast<int>(p.qubits.size());

  std::vector<SeedOutcome> outcomes(seeds_m);

  parallel_indexed(seeds_m, threads, [&](int s) {
    SeedOutcome& outcome = outcomes[s];
    Rng seed_rng = rng.derive(static_cast<std::uint64_t>(s));
    Placement current = center_placement(f, nq, &seed_rng);
    ImprovementStopper stopper(patience);
    int run_idx = 0;
    while (true) {
      const bool forward = run_idx % 2 == 0;
      auto trace = std::make_shared<Trace>(
          run_simulation(forward ? g : uidg, forward ? ranks_fwd : ranks_bwd,
                         current, f, rg, t, names));
      RunSummary summary;
      summary.direction =
          forward ? RunDirection::Forward : RunDirection::Backward;
      summary.seed_index = s;
      summary.run_index = run_idx;
      summary.initial = current;
      summary.final = trace->final_placement;
      summary.latency = trace->total_latency;
      current = trace->final_placement;
      if (outcome.best_run < 0 ||
          summary.latency < outcome.runs[outcome.best_run].latency) {
        outcome.best_run = run_idx;
        outcome.best_trace = trace;
      }
      outcome.runs.push_back(std::move(summary));
      ++run_idx;
      if (!stopper.observe(trace->total_latency)) break;
    }
  });

  int best_seed = 0;
  for (int s = 1; s < seeds_m; ++s) {
    Duration a = outcomes[s].runs[outcomes[s].best_run].latency;
    Duration b = outcomes[best_seed].runs[outcomes[best_seed].best_run].latency;
    if (a < b) best_seed = s;
  }
  const SeedOutcome& winner = outcomes[best_seed];
  const RunSummary& best_summary = winner.runs[winner.best_run];

  PlacerResult result;
  result.best.direction = best_summary.direction;
  result.best.latency = best_summary.latency;
  result.best.run_stats = winner.best_trace->stats;
  if (best_summary.direction == RunDirection::Forward) {
    result.best.initial = best_summary.initial;
    result.best.final = best_summary.final;
    result.best.trace = winner.best_trace;
  } else {
    // A winning backward run is reported as its time reversal: the reversed
    // trace executes the forward graph starting from the backward run's
    // final placement.
    result.best.initial = best_summary.final;
    result.best.final = best_summary.initial;
    result.best.trace =
        std::make_shared<Trace>(reverse_trace(*winner.best_trace, f, t));
  }
  for (auto& outcome : outcomes) {
    result.total_runs += static_cast<int>(outcome.runs.size());
    for (auto& r : outcome.runs) result.runs.push_back(std::move(r));
  }
  return result;
}

}  // namespace ionmap
