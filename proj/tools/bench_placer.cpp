// Benchmark of the OpenMP placement fan-out against the serial reference.
// Both paths must agree bit-for-bit on the chosen placement and latency; the
// benchmark reports wall-clock times and the speedup.

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "ionmap/pipeline.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

int main(int argc, char** argv) {
  std::string data_dir = IONMAP_DATA_DIR;
  int runs = 256;
  std::uint64_t seed = 7;
  if (argc > 1) runs = std::stoi(argv[1]);
  if (argc > 2) seed = std::stoull(argv[2]);

  ionmap::Program program =
      ionmap::parse_qasm(read_file(data_dir + "/benchmarks/code913.qasm"));
  ionmap::Fabric fabric =
      ionmap::parse_fabric(read_file(data_dir + "/fabrics/grid45x85.txt"));
  ionmap::TechParams tech =
      ionmap::parse_tech_config(read_file(data_dir + "/tech/default.cfg"));

  ionmap::Qidg graph = ionmap::build_qidg(program);
  ionmap::RoutingGraph rgraph = ionmap::build_routing_graph(fabric);

  int threads = 1;
#ifdef _OPENMP
  threads = omp_get_max_threads();
#endif

  auto bench = [&](int nthreads) {
    auto start = std::chrono::steady_clock::now();
    ionmap::PlacerResult result =
        ionmap::monte_carlo_place(graph, program, fabric, rgraph, tech, runs,
                                  ionmap::Rng(seed), nthreads);
    double ms = std::chrono::duration<double, std::milli>(
                    std::chrono::steady_clock::now() - start)
                    .count();
    return std::make_pair(result.best.latency, ms);
  };

  std::cout << "monte carlo placement, " << runs << " runs, code913 on the "
            << fabric.rows << "x" << fabric.cols << " fabric\n";
  auto [serial_latency, serial_ms] = bench(1);
  std::cout << "serial reference: " << serial_ms << " ms, best latency "
            << serial_latency << " us\n";
  auto [parallel_latency, parallel_ms] = bench(threads);
  std::cout << "openmp x" << threads << ":       " << parallel_ms
            << " ms, best latency " << parallel_latency << " us\n";
  std::cout << "speedup: " << serial_ms / parallel_ms << "\n";

  if (serial_latency != parallel_latency) {
    std::cerr << "mismatch between serial and parallel results\n";
    return 1;
  }
  return 0;
}
