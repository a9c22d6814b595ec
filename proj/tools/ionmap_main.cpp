#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "ionmap/errors.hpp"
#include "ionmap/pipeline.hpp"
#include "ionmap/sim.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << bytes;
}

std::string stem_of(const std::string& path) {
  std::size_t slash = path.find_last_of('/');
  std::string name = slash == std::string::npos ? path : path.substr(slash + 1);
  std::size_t dot = name.find_last_of('.');
  return dot == std::string::npos ? name : name.substr(0, dot);
}

struct MapArgs {
  std::string qasm, fabric, tech, placer = "mvfb";
  int seeds = 25, patience = 3, threads = 1;
  std::uint64_t rng_seed = 1;
  std::string trace_out, report_out, svg_out;
  int svg_route = -1;
};

int do_map(const MapArgs& a) {
  ionmap::Program program = ionmap::parse_qasm(read_file(a.qasm));
  ionmap::Fabric fabric = ionmap::parse_fabric(read_file(a.fabric));
  ionmap::TechParams tech = ionmap::parse_tech_config(read_file(a.tech));

  ionmap::MapOptions options;
  if (a.placer == "center")
    options.placer = ionmap::PlacerKind::Center;
  else if (a.placer == "mc")
    options.placer = ionmap::PlacerKind::MonteCarlo;
  else if (a.placer == "mvfb")
    options.placer = ionmap::PlacerKind::Mvfb;
  else
    throw std::runtime_error("unknown placer '" + a.placer + "'");
  options.seeds = a.seeds;
  options.patience = a.patience;
  options.rng_seed = a.rng_seed;
  options.threads = a.threads;

  ionmap::RunReport report =
      ionmap::run_map_pipeline(program, fabric, tech, options, stem_of(a.qasm));

  if (!a.trace_out.empty())
    write_file(a.trace_out, ionmap::trace_to_text(*report.best.trace));
  if (!a.report_out.empty())
    write_file(a.report_out, ionmap::report_to_json(report, program));
  if (!a.svg_out.empty()) {
    std::optional<int> route;
    if (a.svg_route >= 0) route = a.svg_route;
    write_file(a.svg_out,
               ionmap::render_svg(fabric, *report.best.trace, route));
  }

  std::cerr << "placement runs: " << report.placement_runs
            << ", wall clock: " << report.wall_clock_ms << " ms\n";
  std::cout << report.best_latency << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"QASM-to-ion-trap-fabric mapper"};
  app.require_subcommand(1);

  MapArgs margs;
  CLI::App* map = app.add_subcommand("map", "schedule, place and route a program");
  map->add_option("--qasm", margs.qasm, "QASM program")->required();
  map->add_option("--fabric", margs.fabric, "fabric grid file")->required();
  map->add_option("--tech", margs.tech, "technology config")->required();
  map->add_option("--placer", margs.placer, "center|mc|mvfb");
  map->add_option("--seeds", margs.seeds, "placement seeds (mc: total runs)");
  map->add_option("--patience", margs.patience, "non-improving runs per seed");
  map->add_option("--rng-seed", margs.rng_seed, "random seed");
  map->add_option("--threads", margs.threads, "parallel placement seeds");
  map->add_option("--trace", margs.trace_out, "write micro-command trace");
  map->add_option("--report", margs.report_out, "write JSON report");
  map->add_option("--svg", margs.svg_out, "write SVG rendering");
  map->add_option("--svg-route", margs.svg_route,
                  "overlay routes of this instruction id");

  std::string b_qasm, b_tech;
  CLI::App* baseline =
      app.add_subcommand("baseline", "ideal latency lower bound");
  baseline->add_option("--qasm", b_qasm, "QASM program")->required();
  baseline->add_option("--tech", b_tech, "technology config")->required();

  std::string v_trace, v_qasm, v_fabric, v_tech;
  bool v_json = false;
  CLI::App* validate =
      app.add_subcommand("validate", "re-audit a micro-command trace");
  validate->add_option("--trace", v_trace, "trace file")->required();
  validate->add_option("--qasm", v_qasm, "QASM program")->required();
  validate->add_option("--fabric", v_fabric, "fabric grid file")->required();
  validate->add_option("--tech", v_tech, "technology config")->required();
  validate->add_flag("--json", v_json, "emit the report as JSON");

  std::string c_qasm, c_fabric, c_tech, c_report;
  int c_seeds = 25, c_patience = 3, c_trials = 10, c_threads = 1;
  std::uint64_t c_seed = 1;
  CLI::App* compare = app.add_subcommand(
      "compare", "iterative placer vs Monte Carlo at twice the budget");
  compare->add_option("--qasm", c_qasm, "QASM program")->required();
  compare->add_option("--fabric", c_fabric, "fabric grid file")->required();
  compare->add_option("--tech", c_tech, "technology config")->required();
  compare->add_option("--seeds", c_seeds, "placement seeds per trial");
  compare->add_option("--patience", c_patience, "non-improving runs per seed");
  compare->add_option("--trials", c_trials, "number of trials");
  compare->add_option("--rng-seed", c_seed, "random seed");
  compare->add_option("--threads", c_threads, "parallel placement seeds");
  compare->add_option("--report", c_report, "write JSON comparison");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return e.get_name() == "CallForHelp" ? code : 1;
  }

  try {
    if (map->parsed()) return do_map(margs);
    if (baseline->parsed()) {
      ionmap::Program program = ionmap::parse_qasm(read_file(b_qasm));
      ionmap::TechParams tech = ionmap::parse_tech_config(read_file(b_tech));
      std::cout << ionmap::ideal_latency(ionmap::build_qidg(program), tech)
                << "\n";
      return 0;
    }
    if (validate->parsed()) {
      ionmap::Program program = ionmap::parse_qasm(read_file(v_qasm));
      ionmap::Fabric fabric = ionmap::parse_fabric(read_file(v_fabric));
      ionmap::TechParams tech = ionmap::parse_tech_config(read_file(v_tech));
      ionmap::Trace trace =
          ionmap::trace_from_text(read_file(v_trace), program.qubit_names());
      auto violations = ionmap::validate_trace(
          trace, ionmap::build_qidg(program), fabric, tech);
      std::cout << (v_json ? ionmap::violations_to_json(violations)
                           : ionmap::violations_to_text(violations));
      return violations.empty() ? 0 : 1;
    }
    if (compare->parsed()) {
      ionmap::Program program = ionmap::parse_qasm(read_file(c_qasm));
      ionmap::Fabric fabric = ionmap::parse_fabric(read_file(c_fabric));
      ionmap::TechParams tech = ionmap::parse_tech_config(read_file(c_tech));
      ionmap::CompareReport report = ionmap::run_compare(
          program, fabric, tech, c_seeds, c_patience, c_trials, c_seed,
          c_threads);
      std::cout << ionmap::compare_to_text(report);
      if (!c_report.empty())
        write_file(c_report, ionmap::compare_to_json(report));
      return 0;
    }
  } catch (const ionmap::StuckError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
