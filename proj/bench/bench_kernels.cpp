// Serial reference loops against the OpenMP kernels. Each benchmark takes the
// execution mode as its argument: 0 serial, 1 parallel. Set
// EONSPECTRA_THREADS to pin the thread count.

#include <benchmark/benchmark.h>

#include <string>

#include "eonspectra/analyzer.hpp"
#include "eonspectra/io.hpp"
#include "eonspectra/placement.hpp"
#include "eonspectra/simulator.hpp"

using namespace eonspectra;

namespace {

const std::string kData = EONSPECTRA_DATA_DIR;

struct Nsf {
  NetworkGraph graph = load_topology(read_file(kData + "/nsfnet.json"));
  NetworkModel model{graph, load_demands(read_file(kData + "/nsfnet_demands.json"), graph)};
};

const Nsf& nsf() {
  static const Nsf instance;
  return instance;
}

Execution mode(const benchmark::State& state) {
  return state.range(0) == 0 ? Execution::serial : Execution::parallel;
}

ArchitectureMap mixed(std::size_t nodes) {
  ArchitectureMap archs(nodes);
  for (std::size_t v = 0; v < nodes; ++v) {
    archs[v] = v % 3 == 0   ? NodeArchitecture::full()
               : v % 3 == 1 ? NodeArchitecture::share_per_link(1)
                            : NodeArchitecture::share_per_node(1);
  }
  return archs;
}

void BM_EvaluateDemands(benchmark::State& state) {
  const NetworkModel& model = nsf().model;
  const ArchitectureMap archs = mixed(model.graph.node_count());
  const LinkFreeProbs phi(model.graph.link_count(), 0.8);
  for (auto _ : state) {
    benchmark::DoNotOptimize(evaluate_demands(model, archs, phi, mode(state)));
  }
}
BENCHMARK(BM_EvaluateDemands)->Arg(0)->Arg(1)->Unit(benchmark::kMicrosecond);

void BM_FixedPoint(benchmark::State& state) {
  const NetworkModel& model = nsf().model;
  const ArchitectureMap archs = mixed(model.graph.node_count());
  AnalysisConfig cfg;
  cfg.damping = 0.5;
  cfg.execution = mode(state);
  for (auto _ : state) benchmark::DoNotOptimize(fixed_point(model, archs, cfg));
}
BENCHMARK(BM_FixedPoint)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_PlaceHeuristic(benchmark::State& state) {
  const NetworkModel& model = nsf().model;
  const std::vector<NodeArchitecture> inventory{
      NodeArchitecture::full(), NodeArchitecture::full(), NodeArchitecture::share_per_node(1)};
  PlacementConfig cfg;
  cfg.analysis.damping = 0.5;
  cfg.analysis.execution = mode(state);
  cfg.execution = mode(state);
  for (auto _ : state) {
    benchmark::DoNotOptimize(place_heuristic(model, ArchitectureMap(14), inventory, cfg));
  }
}
BENCHMARK(BM_PlaceHeuristic)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_Simulate(benchmark::State& state) {
  const Nsf& n = nsf();
  SimConfig cfg;
  cfg.replications = 8;
  cfg.warmup = 5.0;
  cfg.horizon = 60.0;
  cfg.execution = mode(state);
  const ArchitectureMap archs = mixed(n.graph.node_count());
  for (auto _ : state) {
    benchmark::DoNotOptimize(simulate(n.graph, n.model.demands, archs, cfg));
  }
}
BENCHMARK(BM_Simulate)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
