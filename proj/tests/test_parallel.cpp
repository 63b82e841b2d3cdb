#include <doctest.h>

#include <cstdlib>
#include <cstring>

#include "eonspectra/analyzer.hpp"
#include "eonspectra/io.hpp"
#include "eonspectra/parallel.hpp"
#include "eonspectra/placement.hpp"
#include "eonspectra/simulator.hpp"
#include "support.hpp"

using namespace eonspectra;
using namespace eonspectra::test;

namespace {

// Forces several OpenMP threads even on a single-core machine.
struct ThreadOverride {
  explicit ThreadOverride(const char* n) { setenv("EONSPECTRA_THREADS", n, 1); }
  ~ThreadOverride() { unsetenv("EONSPECTRA_THREADS"); }
};

bool same_bits(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

NetworkModel nsf() {
  const NetworkGraph g = load_fixture("nsfnet.json");
  return NetworkModel(g, load_demands(read_file(data_path("nsfnet_demands.json")), g));
}

}  // namespace

TEST_SUITE("parallel") {

TEST_CASE("thread selection") {
  CHECK(threads_for(Execution::serial, 100) == 1);
  CHECK(threads_for(Execution::parallel, 1) == 1);
  ThreadOverride over("3");
  CHECK(thread_cap() == 3);
  CHECK(threads_for(Execution::parallel, 100) == 3);
  CHECK(threads_for(Execution::parallel, 2) == 2);
  setenv("EONSPECTRA_THREADS", "zero", 1);
  CHECK(thread_cap() >= 1);
}

TEST_CASE("demand evaluation is schedule independent") {
  ThreadOverride over("4");
  const NetworkModel model = nsf();
  ArchitectureMap archs(14);
  archs[5] = NodeArchitecture::full();
  archs[10] = NodeArchitecture::share_per_link(1);
  archs[13] = NodeArchitecture::share_per_node(1);
  LinkFreeProbs phi(model.graph.link_count());
  for (std::size_t i = 0; i < phi.size(); ++i) phi[i] = 0.5 + 0.01 * static_cast<double>(i);
  const auto serial = evaluate_demands(model, archs, phi, Execution::serial);
  const auto parallel = evaluate_demands(model, archs, phi, Execution::parallel);
  CHECK(same_bits(serial, parallel));

  AnalysisConfig cfg;
  cfg.damping = 0.5;
  cfg.execution = Execution::serial;
  const AnalysisResult a = fixed_point(model, archs, cfg);
  cfg.execution = Execution::parallel;
  const AnalysisResult b = fixed_point(model, archs, cfg);
  CHECK(same_bits(a.trajectory, b.trajectory));
  CHECK(same_bits(a.phi, b.phi));
  CHECK(same_bits(a.demand_blocking, b.demand_blocking));
}

TEST_CASE("placement is schedule independent") {
  ThreadOverride over("4");
  const NetworkGraph g = load_fixture("six_node.json");
  const NetworkModel model(g, load_demands(read_file(data_path("six_node_demands.json")), g));
  const std::vector<NodeArchitecture> inv{NodeArchitecture::full(),
                                          NodeArchitecture::share_per_node(1)};
  PlacementConfig cfg;
  cfg.analysis.damping = 0.5;
  cfg.execution = Execution::serial;
  const PlacementResult a = place_heuristic(model, ArchitectureMap(6), inv, cfg);
  const PlacementResult c = place_brute_force(model, ArchitectureMap(6), inv, cfg);
  cfg.execution = Execution::parallel;
  const PlacementResult b = place_heuristic(model, ArchitectureMap(6), inv, cfg);
  const PlacementResult d = place_brute_force(model, ArchitectureMap(6), inv, cfg);
  CHECK(a.placed == b.placed);
  CHECK(a.network_blocking == b.network_blocking);
  CHECK(c.placed == d.placed);
  CHECK(c.network_blocking == d.network_blocking);
  for (std::size_t k = 0; k < a.steps.size(); ++k) {
    for (std::size_t i = 0; i < a.steps[k].candidates.size(); ++i) {
      CHECK(a.steps[k].candidates[i].network_blocking ==
            b.steps[k].candidates[i].network_blocking);
    }
  }
}

TEST_CASE("replications are schedule independent") {
  ThreadOverride over("4");
  const NetworkGraph g = load_fixture("six_node.json");
  const auto demands = load_demands(read_file(data_path("six_node_demands.json")), g);
  SimConfig cfg;
  cfg.seed = 3;
  cfg.warmup = 5.0;
  cfg.horizon = 200.0;
  cfg.replications = 6;
  cfg.execution = Execution::serial;
  const ArchitectureMap archs(6, NodeArchitecture::share_per_link(1));
  const SimResult a = simulate(g, demands, archs, cfg);
  cfg.execution = Execution::parallel;
  const SimResult b = simulate(g, demands, archs, cfg);
  REQUIRE(a.replications.size() == b.replications.size());
  for (std::size_t r = 0; r < a.replications.size(); ++r) {
    CHECK(a.replications[r].network.offered == b.replications[r].network.offered);
    CHECK(a.replications[r].network.blocked == b.replications[r].network.blocked);
  }
  CHECK(a.network_blocking == b.network_blocking);
  CHECK(a.half_width == b.half_width);
}

}  // TEST_SUITE
