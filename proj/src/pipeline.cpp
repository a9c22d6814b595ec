#include "ionmap/pipeline.hpp"

#include <chrono>
#include <map>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "ionmap/scheduler.hpp"

namespace ionmap {

namespace {

const char* placer_name(PlacerKind k) {
  switch (k) {
    case PlacerKind::Center: return "center";
    case PlacerKind::MonteCarlo: return "mc";
    case PlacerKind::Mvfb: return "mvfb";
  }
  return "?";
}

const char* direction_name(RunDirection d) {
  return d == RunDirection::Forward ? "forward" : "backward";
}

}  // namespace

RunReport run_map_pipeline(const Program& program, const Fabric& fabric,
                           const TechParams& tech, const MapOptions& options,
                           const std::string& benchmark_name) {
  const auto start = std::chrono::steady_clock::now();

  Qidg graph = build_qidg(program);
  RoutingGraph rgraph = build_routing_graph(fabric);
  Rng rng(options.rng_seed);

  PlacerResult placed;
  switch (options.placer) {
    case PlacerKind::Center: {
      auto priorities = compute_priorities(graph, tech, tech.priority_alpha,
                                           tech.priority_beta);
      auto ranks = forward_ranks(priorities);
      Placement placement = center_placement(
          fabric, static_cast<int>(program.qubits.size()), nullptr);
      auto trace = std::make_shared<Trace>(
          run_simulation(graph, ranks, placement, fabric, rgraph, tech,
                         program.qubit_names()));
      placed.best.direction = RunDirection::Forward;
      placed.best.initial = placement;
      placed.best.final = trace->final_placement;
      placed.best.latency = trace->total_latency;
      placed.best.trace = trace;
      placed.best.run_stats = trace->stats;
      placed.total_runs = 1;
      break;
    }
    case PlacerKind::MonteCarlo:
      placed = monte_carlo_place(graph, program, fabric, rgraph, tech,
                                 options.seeds, rng, options.threads);
      break;
    case PlacerKind::Mvfb:
      placed = mvfb_place(graph, program, fabric, rgraph, tech, options.seeds,
                          options.patience, rng, options.threads);
      break;
  }

  RunReport report;
  report.benchmark = benchmark_name;
  report.placer = placer_name(options.placer);
  report.seeds = options.seeds;
  report.patience = options.patience;
  report.rng_seed = options.rng_seed;
  report.placement_runs = placed.total_runs;
  report.best_latency = placed.best.latency;
  report.baseline_latency = ideal_latency(graph, tech);
  report.direction = placed.best.direction;
  report.best = placed.best;
  report.breakdown = placed.best.run_stats.empty()
                         ? stats_from_trace(*placed.best.trace, graph)
                         : placed.best.run_stats;
  report.wall_clock_ms =
      std::chrono::duration<double, std::milli>(
          std::chrono::steady_clock::now() - start)
          .count();
  if (report.best_latency < report.baseline_latency)
    throw std::logic_error("mapped latency below the ideal baseline");
  return report;
}

std::string report_to_json(const RunReport& r, const Program& program) {
  nlohmann::ordered_json doc;
  doc["benchmark"] = r.benchmark;
  doc["placer"] = r.placer;
  doc["seeds"] = r.seeds;
  doc["patience"] = r.patience;
  doc["rng_seed"] = r.rng_seed;
  doc["placement_runs"] = r.placement_runs;
  doc["best_latency_us"] = r.best_latency;
  doc["baseline_latency_us"] = r.baseline_latency;
  doc["direction"] = direction_name(r.direction);

  nlohmann::ordered_json placement = nlohmann::ordered_json::array();
  for (std::size_t q = 0; q < r.best.initial.size(); ++q) {
    nlohmann::ordered_json row;
    row["qubit"] = program.qubits[q].name;
    row["row"] = r.best.initial[q].row;
    row["col"] = r.best.initial[q].col;
    placement.push_back(std::move(row));
  }
  doc["initial_placement"] = std::move(placement);

  nlohmann::ordered_json table = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < r.breakdown.size(); ++i) {
    const auto& ins = program.instructions[i];
    const auto& st = r.breakdown[i];
    nlohmann::ordered_json row;
    row["id"] = ins.id;
    row["gate"] = std::string(gate_name(ins.gate));
    nlohmann::ordered_json ops = nlohmann::ordered_json::array();
    for (int q : ins.operands) ops.push_back(program.qubits[q].name);
    row["operands"] = std::move(ops);
    row["eligible_us"] = st.eligible;
    row["issue_us"] = st.issue;
    row["gate_start_us"] = st.gate_start;
    row["gate_end_us"] = st.gate_end;
    row["congestion_us"] = st.congestion();
    row["routing_us"] = st.routing();
    row["gate_us"] = st.gate_end - st.gate_start;
    table.push_back(std::move(row));
  }
  doc["instructions"] = std::move(table);
  return doc.dump(2) + "\n";
}

CompareReport run_compare(const Program& program, const Fabric& fabric,
                          const TechParams& tech, int seeds, int patience,
                          int trials, std::uint64_t rng_seed, int threads) {
  Qidg graph = build_qidg(program);
  RoutingGraph rgraph = build_routing_graph(fabric);
  Rng base(rng_seed);

  CompareReport report;
  double mvfb_sum = 0.0;
  double mc_sum = 0.0;
  for (int i = 0; i < trials; ++i) {
    PlacerResult mvfb =
        mvfb_place(graph, program, fabric, rgraph, tech, seeds, patience,
                   base.derive(2 * static_cast<std::uint64_t>(i)), threads);
    // The Monte Carlo budget is pinned to exactly twice the placement runs
    // the iterative placer consumed.
    int mc_runs = 2 * mvfb.total_runs;
    PlacerResult mc = monte_carlo_place(
        graph, program, fabric, rgraph, tech, mc_runs,
        base.derive(2 * static_cast<std::uint64_t>(i) + 1), threads);
    if (mc.total_runs != 2 * mvfb.total_runs)
      throw std::logic_error("monte carlo budget mismatch");

    CompareTrial trial;
    trial.trial = i;
    trial.mvfb_latency = mvfb.best.latency;
    trial.mc_latency = mc.best.latency;
    trial.mvfb_runs = mvfb.total_runs;
    trial.mc_runs = mc.total_runs;
    report.trials.push_back(trial);
    if (trial.mvfb_latency <= trial.mc_latency) ++report.mvfb_wins;
    mvfb_sum += static_cast<double>(trial.mvfb_latency);
    mc_sum += static_cast<double>(trial.mc_latency);
  }
  if (trials > 0) {
    report.mvfb_mean = mvfb_sum / trials;
    report.mc_mean = mc_sum / trials;
  }
  return report;
}

std::string compare_to_text(const CompareReport& r) {
  std::ostringstream out;
  out << "trial  mvfb_us  mc_us  placement_runs  mc_runs\n";
  for (const auto& t : r.trials) {
    out << t.trial << "  " << t.mvfb_latency << "  " << t.mc_latency << "  "
        << t.mvfb_runs << "  " << t.mc_runs << '\n';
  }
  out << "mvfb wins " << r.mvfb_wins << "/" << r.trials.size() << '\n';
  out << "mvfb mean " << r.mvfb_mean << " us, mc mean " << r.mc_mean
      << " us\n";
  return out.str();
}

std::string compare_to_json(const CompareReport& r) {
  nlohmann::ordered_json doc;
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& t : r.trials) {
    nlohmann::ordered_json row;
    row["trial"] = t.trial;
    row["mvfb_latency_us"] = t.mvfb_latency;
    row["mc_latency_us"] = t.mc_latency;
    row["placement_runs"] = t.mvfb_runs;
    row["mc_runs"] = t.mc_runs;
    rows.push_back(std::move(row));
  }
  doc["trials"] = std::move(rows);
  doc["mvfb_wins"] = r.mvfb_wins;
  doc["trial_count"] = r.trials.size();
  doc["mvfb_mean_us"] = r.mvfb_mean;
  doc["mc_mean_us"] = r.mc_mean;
  return doc.dump(2) + "\n";
}

std::string render_svg(const Fabric& f, const Trace& trace,
                       std::optional<int> route_instruction_id) {
  constexpr int cell = 10;
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\""
      << f.cols * cell << "\" height=\"" << f.rows * cell << "\">\n";
  out << "<rect width=\"" << f.cols * cell << "\" height=\"" << f.rows * cell
      << "\" fill=\"#ffffff\"/>\n";
  for (int r = 0; r < f.rows; ++r) {
    for (int c = 0; c < f.cols; ++c) {
      const char* fill = nullptr;
      switch (f.at(r, c)) {
        case CellKind::Junction: fill = "#54504c"; break;
        case CellKind::Channel: fill = "#c8c2bb"; break;
        case CellKind::Trap: fill = "#e8a33d"; break;
        case CellKind::Empty: fill = nullptr; break;
      }
      if (fill) {
        out << "<rect x=\"" << c * cell << "\" y=\"" << r * cell
            << "\" width=\"" << cell << "\" height=\"" << cell << "\" fill=\""
            << fill << "\"/>\n";
      }
    }
  }

  if (route_instruction_id) {
    // Operand movement blocks attributed to the requested instruction.
    std::map<int, std::vector<Coord>> open;
    std::vector<std::vector<Coord>> routes;
    for (const auto& c : trace.commands) {
      if (c.kind == MicroCommand::Kind::Move) {
        auto& cellsq = open[c.qubit];
        if (cellsq.empty()) cellsq.push_back(c.from);
        cellsq.push_back(c.to);
      } else if (c.kind == MicroCommand::Kind::GateStart) {
        for (int q : c.operands) {
          if (c.instruction == *route_instruction_id && open.count(q) &&
              !open[q].empty())
            routes.push_back(open[q]);
          open[q].clear();
        }
      }
    }
    for (const auto& cells : routes) {
      out << "<polyline fill=\"none\" stroke=\"#2b6cb0\" stroke-width=\"2\" "
             "points=\"";
      for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out << ' ';
        out << cells[i].col * cell + cell / 2 << ','
            << cells[i].row * cell + cell / 2;
      }
      out << "\"/>\n";
    }
  }

  for (std::size_t q = 0; q < trace.final_placement.size(); ++q) {
    Coord at = trace.final_placement[q];
    out << "<circle cx=\"" << at.col * cell + cell / 2 << "\" cy=\""
        << at.row * cell + cell / 2 << "\" r=\"" << cell / 2 - 1
        << "\" fill=\"#2f855a\"/>\n";
    out << "<text x=\"" << at.col * cell + cell / 2 << "\" y=\""
        << at.row * cell + cell / 2 + 2
        << "\" font-size=\"5\" text-anchor=\"middle\" fill=\"#ffffff\">"
        << trace.qubit_names[q] << "</text>\n";
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace ionmap
