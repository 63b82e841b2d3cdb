#include "eonspectra/analyzer.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "eonspectra/error.hpp"
#include "eonspectra/random.hpp"

namespace eonspectra {

void validate(const AnalysisConfig& config) {
  if (!(config.epsilon > 0.0)) {
    throw Error(ErrorCode::invalid_argument, "epsilon must be positive");
  }
  if (config.max_iter < 1) {
    throw Error(ErrorCode::invalid_argument, "max_iter must be at least 1");
  }
  if (!(config.damping > 0.0) || config.damping > 1.0) {
    throw Error(ErrorCode::invalid_argument, "damping must lie in (0,1]");
  }
}

NetworkModel::NetworkModel(NetworkGraph g, std::vector<DemandSpec> d,
                           CrossingWeight weight)
    : graph(std::move(g)), demands(std::move(d)) {
  for (const DemandSpec& demand : demands) validate_demand(graph, demand);
  routes = route_all(graph, demands);
  stats = crossing_stats(graph, demands, routes, weight);
}

double demand_blocking(const DemandSpec& demand, const RoutedPath& path,
                       const NetworkGraph& g, const ArchitectureMap& archs,
                       const LinkFreeProbs& phi, const CrossingStats& stats) {
  double total = 0.0;
  for (const auto& [slots, p] : demand.slots.entries()) {
    if (p == 0.0) continue;
    total += p * lightpath_blocking(slots, path, g, archs, phi, stats);
  }
  return std::clamp(total, 0.0, 1.0);
}

double network_blocking(std::span<const DemandSpec> demands,
                        std::span<const double> blockings) {
  if (demands.size() != blockings.size()) {
    throw Error(ErrorCode::invalid_argument, "demand and blocking lists differ in size");
  }
  long double weighted = 0.0L;
  long double offered = 0.0L;
  for (std::size_t i = 0; i < demands.size(); ++i) {
    weighted += demands[i].erlangs() * blockings[i];
    offered += demands[i].erlangs();
  }
  if (offered <= 0.0L) return 0.0;
  return std::clamp(static_cast<double>(weighted / offered), 0.0, 1.0);
}

LinkFreeProbs phi_update(const NetworkGraph& g, std::span<const DemandSpec> demands,
                         std::span<const RoutedPath> routes,
                         std::span<const double> blockings) {
  std::vector<long double> carried(g.link_count(), 0.0L);
  for (const RoutedPath& route : routes) {
    const DemandSpec& d = demands[route.demand];
    const double load = d.erlangs() * d.mean_slots() * (1.0 - blockings[route.demand]);
    for (LinkId h : route.links) carried[h] += load;
  }
  LinkFreeProbs phi(g.link_count());
  for (LinkId h = 0; h < g.link_count(); ++h) {
    const double used = static_cast<double>(carried[h] / g.slot_count());
    phi[h] = 1.0 - std::clamp(used, 0.0, 1.0);
  }
  return phi;
}

std::vector<double> evaluate_demands(const NetworkModel& model, const ArchitectureMap& archs,
                                     const LinkFreeProbs& phi, Execution execution,
                                     int* clamp_breaches) {
  const auto n = static_cast<long>(model.routes.size());
  std::vector<double> out(model.routes.size(), 0.0);
  std::vector<char> breach(model.routes.size(), 0);

  auto evaluate = [&](long i) {
    const RoutedPath& route = model.routes[static_cast<std::size_t>(i)];
    const DemandSpec& d = model.demands[route.demand];
    double total = 0.0;
    for (const auto& [slots, p] : d.slots.entries()) {
      if (p == 0.0) continue;
      const LightpathBlocking lb =
          lightpath_blocking_detail(slots, route, model.graph, archs, phi, model.stats);
      if (lb.clamp_breach()) breach[static_cast<std::size_t>(i)] = 1;
      total += p * lb.blocking;
    }
    out[route.demand] = std::clamp(total, 0.0, 1.0);
  };

  const int threads = threads_for(execution, model.routes.size());
  if (threads == 1) {
    for (long i = 0; i < n; ++i) evaluate(i);
  } else {
#pragma omp parallel for num_threads(threads) schedule(dynamic, 4)
    for (long i = 0; i < n; ++i) evaluate(i);
  }

  if (clamp_breaches != nullptr) {
    *clamp_breaches += static_cast<int>(std::count(breach.begin(), breach.end(), 1));
  }
  return out;
}

AnalysisResult fixed_point(const NetworkModel& model, const ArchitectureMap& archs,
                           const AnalysisConfig& config) {
  validate(config);
  if (archs.size() != model.graph.node_count()) {
    throw Error(ErrorCode::invalid_argument, "architecture map does not match the graph");
  }
  for (const NodeArchitecture& a : archs) validate_architecture(a);

  AnalysisResult result;
  if (model.demands.empty()) result.warnings.push_back("no demands: network blocking is 0");

  std::mt19937_64 rng = substream(config.seed, "analyzer.init");
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double pb = unit(rng);
  result.demand_blocking.resize(model.demands.size());
  for (double& b : result.demand_blocking) b = unit(rng);

  double previous = -1.0;
  while (std::abs(pb - previous) > config.epsilon && result.iterations < config.max_iter) {
    previous = pb;
    LinkFreeProbs phi = phi_update(model.graph, model.demands, model.routes,
                                   result.demand_blocking);
    if (config.damping < 1.0 && !result.phi.empty()) {
      for (std::size_t h = 0; h < phi.size(); ++h) {
        phi[h] = config.damping * phi[h] + (1.0 - config.damping) * result.phi[h];
      }
    }
    result.phi = std::move(phi);
    result.demand_blocking = evaluate_demands(model, archs, result.phi, config.execution,
                                              &result.clamp_breaches);
    pb = network_blocking(model.demands, result.demand_blocking);
    result.trajectory.push_back(pb);
    ++result.iterations;
  }
  result.network_blocking = pb;
  result.converged = std::abs(pb - previous) <= config.epsilon;
  if (result.clamp_breaches > 0) {
    result.warnings.push_back(std::to_string(result.clamp_breaches) +
                              " lightpath evaluations left [0,1] by more than 1e-9");
  }
  if (!result.converged) {
    result.warnings.push_back("no convergence within " + std::to_string(config.max_iter) +
                              " iterations");
  }
  return result;
}

AnalysisResult fixed_point(const NetworkGraph& g, std::span<const DemandSpec> demands,
                           const ArchitectureMap& archs, const AnalysisConfig& config) {
  const NetworkModel model(g, {demands.begin(), demands.end()}, config.crossing_weight);
  return fixed_point(model, archs, config);
}

}  // namespace eonspectra
