#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "eonspectra/lightpath.hpp"
#include "eonspectra/parallel.hpp"
#include "eonspectra/topology.hpp"

namespace eonspectra {

struct AnalysisConfig {
  double epsilon = 1e-6;   // stop when |P_B - previous P_B| <= epsilon
  int max_iter = 1000;
  std::uint64_t seed = 1;  // random initial blocking values
  double damping = 1.0;    // weight of the new link estimate, in (0,1]
  CrossingWeight crossing_weight = CrossingWeight::mean_slots;
  Execution execution = Execution::parallel;
};

void validate(const AnalysisConfig& config);

/// Routes and crossing statistics of a demand set. Neither depends on the
/// node architectures, so placement search builds this once.
struct NetworkModel {
  NetworkModel(NetworkGraph graph, std::vector<DemandSpec> demands,
               CrossingWeight weight = CrossingWeight::mean_slots);

  NetworkGraph graph;
  std::vector<DemandSpec> demands;
  std::vector<RoutedPath> routes;
  CrossingStats stats;
};

struct AnalysisResult {
  LinkFreeProbs phi;
  std::vector<double> demand_blocking;
  double network_blocking = 0.0;
  int iterations = 0;
  bool converged = false;
  std::vector<double> trajectory;  // P_B after every iteration
  int clamp_breaches = 0;          // lightpath evaluations outside [0,1] by > 1e-9
  std::vector<std::string> warnings;
};

/// pmf-weighted lightpath blocking of one demand.
double demand_blocking(const DemandSpec& demand, const RoutedPath& path,
                       const NetworkGraph& g, const ArchitectureMap& archs,
                       const LinkFreeProbs& phi, const CrossingStats& stats);

/// Erlang-weighted mean of per-demand blocking. Zero when no demand offers
/// traffic.
double network_blocking(std::span<const DemandSpec> demands,
                        std::span<const double> blockings);

/// Reduced-load link estimate: phi_h = 1 - min(carried slots on h / F, 1),
/// where each demand routed over h carries R*T*S*(1 - blocking).
LinkFreeProbs phi_update(const NetworkGraph& g, std::span<const DemandSpec> demands,
                         std::span<const RoutedPath> routes,
                         std::span<const double> blockings);

/// Blocking of every demand at fixed link probabilities. Each demand is
/// independent; Execution::parallel spreads them over OpenMP threads and
/// Execution::serial is the reference loop. Both give identical bits.
std::vector<double> evaluate_demands(const NetworkModel& model, const ArchitectureMap& archs,
                                     const LinkFreeProbs& phi, Execution execution,
                                     int* clamp_breaches = nullptr);

/// Fixed-point iteration: random initial blocking, then repeatedly update
/// link estimates, per-demand blocking and network blocking until P_B moves
/// by at most epsilon or max_iter is hit. Never throws on non-convergence.
AnalysisResult fixed_point(const NetworkModel& model, const ArchitectureMap& archs,
                           const AnalysisConfig& config);

AnalysisResult fixed_point(const NetworkGraph& g, std::span<const DemandSpec> demands,
                           const ArchitectureMap& archs, const AnalysisConfig& config);

}  // namespace eonspectra
