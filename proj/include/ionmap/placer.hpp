#pragma once

#include <memory>
#include <vector>

#include "ionmap/fabric.hpp"
#include "ionmap/qasm.hpp"
#include "ionmap/routing_graph.hpp"
#include "ionmap/sim.hpp"
#include "ionmap/tech.hpp"
#include "ionmap/types.hpp"

namespace ionmap {

enum class RunDirection { Forward, Backward };

/// One simulated placement run: the placement it started from, the placement
/// it produced, and the resulting latency and trace. For a backward winner
/// `trace` is the time-reversed artifact while `run_stats` keeps the
/// executed run's own per-instruction breakdown (whose delay terms are all
/// nonnegative, unlike a breakdown re-derived from the reversed timeline).
struct PlacerRunRecord {
  RunDirection direction = RunDirection::Forward;
  Placement initial;
  Placement final;
  Duration latency = 0;
  std::shared_ptr<const Trace> trace;
  std::vector<InstructionStats> run_stats;
};

/// Summary kept for every run of a multi-run placer (traces are retained
/// only for the best record).
struct RunSummary {
  RunDirection direction = RunDirection::Forward;
  int seed_index = 0;
  int run_index = 0;  // within the seed
  Placement initial;
  Placement final;
  Duration latency = 0;
};

struct PlacerResult {
  PlacerRunRecord best;
  int total_runs = 0;  // m': placement runs actually executed
  std::vector<RunSummary> runs;
};

/// Traps sorted by Euclidean distance to the fabric center (ties row-major).
/// The deterministic variant (rng == nullptr) assigns qubits in declaration
/// order to the nearest traps; the randomized variant assigns a random
/// permutation of the qubits to that same nearest-trap set.
/// Throws std::runtime_error when there are fewer traps than qubits.
Placement center_placement(const Fabric& f, int qubit_count, Rng* rng);

/// Stop-after-no-improvement rule shared by the iterative placer: feed each
/// run's latency; stops once the best seen has not improved for `patience`
/// consecutive runs.
class ImprovementStopper {
 public:
  explicit ImprovementStopper(int patience) : patience_(patience) {}
  /// Returns true if another run should follow.
  bool observe(Duration latency);
  Duration best() const { return best_; }

 private:
  int patience_;
  int stale_ = 0;
  bool any_ = false;
  Duration best_ = 0;
};

/// Simulates `runs` random center permutations and returns the best.
/// `threads` > 1 fans runs out across OpenMP threads; results are reduced by
/// run index, so the outcome is identical to the serial reference.
PlacerResult monte_carlo_place(const Qidg& g, const Program& p,
                               const Fabric& f, const RoutingGraph& rg,
                               const TechParams& t, int runs, Rng rng,
                               int threads = 1);

/// Multi-start forward/backward placer: for each of `seeds_m` random center
/// placements, alternates forward (dependency graph, forward schedule) and
/// backward (uncompute graph, reversed schedule) runs, each starting from
/// the previous run's final placement, until the seed's best latency stops
/// improving for `patience` runs. Returns the globally best record; when the
/// winner is a backward run the reported trace is its time reversal and the
/// reported placement is the backward run's final placement.
PlacerResult mvfb_place(const Qidg& g, const Program& p, const Fabric& f,
                        const RoutingGraph& rg, const TechParams& t,
                        int seeds_m, int patience, Rng rng, int threads = 1);

}  // namespace ionmap
