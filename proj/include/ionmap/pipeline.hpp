#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ionmap/placer.hpp"

namespace ionmap {

enum class PlacerKind { Center, MonteCarlo, Mvfb };

struct MapOptions {
  PlacerKind placer = PlacerKind::Mvfb;
  int seeds = 25;     // MC: number of runs; MVFB: number of seeds
  int patience = 3;
  std::uint64_t rng_seed = 1;
  int threads = 1;
};

/// Everything cmd_map produces: the winning run, the ideal baseline, and the
/// per-instruction breakdown.
struct RunReport {
  std::string benchmark;
  std::string placer;
  int seeds = 0;
  int patience = 0;
  std::uint64_t rng_seed = 0;
  int placement_runs = 0;  // m'
  Duration best_latency = 0;
  Duration baseline_latency = 0;
  RunDirection direction = RunDirection::Forward;
  PlacerRunRecord best;
  std::vector<InstructionStats> breakdown;  // by instruction id
  double wall_clock_ms = 0.0;  // printed to the console, not serialized
};

RunReport run_map_pipeline(const Program& program, const Fabric& fabric,
                           const TechParams& tech, const MapOptions& options,
                           const std::string& benchmark_name);

/// Deterministic JSON rendering of a report (stable key order; volatile
/// fields such as wall-clock time are deliberately excluded so identical
/// inputs produce identical bytes).
std::string report_to_json(const RunReport& r, const Program& program);

struct CompareTrial {
  int trial = 0;
  Duration mvfb_latency = 0;
  Duration mc_latency = 0;
  int mvfb_runs = 0;  // m'
  int mc_runs = 0;    // always 2*m'
};

struct CompareReport {
  std::vector<CompareTrial> trials;
  int mvfb_wins = 0;  // trials with mvfb <= mc
  double mvfb_mean = 0.0;
  double mc_mean = 0.0;
};

/// One trial: MVFB with `seeds` starts, then Monte Carlo with exactly twice
/// the placement runs MVFB used. Trial seeds derive from `rng_seed`, so the
/// table is reproducible.
CompareReport run_compare(const Program& program, const Fabric& fabric,
                          const TechParams& tech, int seeds, int patience,
                          int trials, std::uint64_t rng_seed, int threads = 1);

std::string compare_to_text(const CompareReport& r);
std::string compare_to_json(const CompareReport& r);

/// SVG rendering of the fabric with the final placement; when
/// `route_instruction_id` is set, the operand routes of that instruction are
/// drawn as polylines. Pure function of its inputs: re-rendering the same
/// trace yields identical bytes.
std::string render_svg(const Fabric& f, const Trace& trace,
                       std::optional<int> route_instruction_id);

}  // namespace ionmap
