#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "eonspectra/analyzer.hpp"

namespace eonspectra {

struct PlacementConfig {
  AnalysisConfig analysis;
  // SCB count assumed for a Full node when ranking; <= 0 means F.
  double full_converters = 0.0;
  // Upper bound on C(|V|,K) * K! for the exhaustive search.
  std::uint64_t brute_force_guard = 100000;
  // Skip assignments that only permute identical inventory items.
  bool dedup_identical = true;
  Execution execution = Execution::parallel;
};

/// Ranking merit of an architecture: Full -> N_sc, Share-per-Link ->
/// N_sc / F, Share-per-Node -> N_sc / (mean out-degree * F).
double n_eff(const NodeArchitecture& arch, int fiber_slots, double mean_out_degree,
             double full_converters);

/// Inventory indices in placement order: decreasing n_eff, then
/// Full > Share-per-Link > Share-per-Node, then more SCBs, then input order.
std::vector<std::size_t> rank_inventory(std::span<const NodeArchitecture> inventory,
                                        int fiber_slots, double mean_out_degree,
                                        double full_converters);

struct CandidateScore {
  NodeId node = 0;
  double network_blocking = 1.0;
  bool converged = true;
};

struct PlacementStep {
  std::size_t item = 0;  // index into the input inventory
  NodeArchitecture arch;
  double n_eff = 0.0;
  std::vector<CandidateScore> candidates;  // ascending node id
  NodeId chosen = 0;
  double network_blocking = 1.0;
  bool unconverged_candidates = false;
};

struct PlacementResult {
  ArchitectureMap architectures;  // base map plus the placed converters
  std::vector<std::pair<NodeId, std::size_t>> placed;  // node, inventory index
  double baseline_blocking = 1.0;
  double network_blocking = 1.0;
  std::vector<PlacementStep> steps;  // empty for the exhaustive search
  std::size_t evaluations = 0;       // fixed-point runs, baseline excluded
  std::vector<std::string> warnings;
};

/// Greedy placement: each converter, in rank order, is tried at every node
/// that is still simple and committed to the node with the lowest network
/// blocking (ties: lowest node id). Performs |V|K - K(K-1)/2 evaluations when
/// every node starts simple.
PlacementResult place_heuristic(const NetworkModel& model, const ArchitectureMap& base,
                                std::span<const NodeArchitecture> inventory,
                                const PlacementConfig& config);

/// Exhaustive search over every assignment of the inventory items to
/// distinct simple nodes. Refuses with Error(guard_exceeded) when
/// C(|V|,K) * K! exceeds the configured guard.
PlacementResult place_brute_force(const NetworkModel& model, const ArchitectureMap& base,
                                  std::span<const NodeArchitecture> inventory,
                                  const PlacementConfig& config);

/// Number of ordered assignments of k items to n nodes (saturating).
std::uint64_t ordered_assignments(std::uint64_t n, std::uint64_t k);

}  // namespace eonspectra
