#include "eonspectra/placement.hpp"

#include <algorithm>
#include <limits>

#include "eonspectra/error.hpp"

namespace eonspectra {

namespace {

int kind_rank(ArchKind kind) {
  switch (kind) {
    case ArchKind::full: return 0;
    case ArchKind::share_per_link: return 1;
    case ArchKind::share_per_node: return 2;
    case ArchKind::simple: return 3;
  }
  return 3;
}

std::vector<NodeId> simple_nodes(const ArchitectureMap& archs) {
  std::vector<NodeId> nodes;
  for (NodeId v = 0; v < archs.size(); ++v) {
    if (!archs[v].converts()) nodes.push_back(v);
  }
  return nodes;
}

void check_inputs(const NetworkModel& model, const ArchitectureMap& base,
                  std::span<const NodeArchitecture> inventory) {
  if (base.size() != model.graph.node_count()) {
    throw Error(ErrorCode::invalid_argument, "architecture map does not match the graph");
  }
  for (const NodeArchitecture& arch : inventory) {
    if (!arch.converts()) {
      throw Error(ErrorCode::invalid_argument, "inventory may not contain simple nodes");
    }
    validate_architecture(arch);
  }
  if (inventory.size() > simple_nodes(base).size()) {
    throw Error(ErrorCode::invalid_argument,
                "inventory has more converters than there are simple nodes");
  }
}

// Runs one fixed point per architecture map. With parallel execution the
// maps are spread over threads and each analysis runs serially inside.
std::vector<AnalysisResult> evaluate_all(const NetworkModel& model,
                                         const std::vector<ArchitectureMap>& maps,
                                         const PlacementConfig& config) {
  std::vector<AnalysisResult> out(maps.size());
  const int threads = threads_for(config.execution, maps.size());
  AnalysisConfig inner = config.analysis;
  if (threads > 1) inner.execution = Execution::serial;
  const auto n = static_cast<long>(maps.size());
  if (threads == 1) {
    for (long i = 0; i < n; ++i) {
      out[static_cast<std::size_t>(i)] = fixed_point(model, maps[static_cast<std::size_t>(i)], inner);
    }
  } else {
#pragma omp parallel for num_threads(threads) schedule(dynamic, 1)
    for (long i = 0; i < n; ++i) {
      out[static_cast<std::size_t>(i)] = fixed_point(model, maps[static_cast<std::size_t>(i)], inner);
    }
  }
  return out;
}

double full_bank(double full_converters, int fiber_slots) {
  return full_converters > 0.0 ? full_converters : static_cast<double>(fiber_slots);
}

}  // namespace

double n_eff(const NodeArchitecture& arch, int fiber_slots, double mean_out_degree,
             double full_converters) {
  if (fiber_slots < 1) throw Error(ErrorCode::invalid_argument, "F must be >= 1");
  switch (arch.kind) {
    case ArchKind::simple:
      throw Error(ErrorCode::invalid_argument, "simple nodes have no merit");
    case ArchKind::full:
      return full_bank(full_converters, fiber_slots);
    case ArchKind::share_per_link:
      return static_cast<double>(arch.converters) / fiber_slots;
    case ArchKind::share_per_node:
      if (!(mean_out_degree > 0.0)) {
        throw Error(ErrorCode::invalid_argument, "mean out-degree must be positive");
      }
      return arch.converters / (mean_out_degree * fiber_slots);
  }
  return 0.0;
}

std::vector<std::size_t> rank_inventory(std::span<const NodeArchitecture> inventory,
                                        int fiber_slots, double mean_out_degree,
                                        double full_converters) {
  std::vector<double> merit(inventory.size());
  for (std::size_t i = 0; i < inventory.size(); ++i) {
    merit[i] = n_eff(inventory[i], fiber_slots, mean_out_degree, full_converters);
  }
  std::vector<std::size_t> order(inventory.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (merit[a] != merit[b]) return merit[a] > merit[b];
    const int ka = kind_rank(inventory[a].kind);
    const int kb = kind_rank(inventory[b].kind);
    if (ka != kb) return ka < kb;
    return inventory[a].converters > inventory[b].converters;
  });
  return order;
}

std::uint64_t ordered_assignments(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  std::uint64_t total = 1;
  for (std::uint64_t i = 0; i < k; ++i) {
    const std::uint64_t factor = n - i;
    if (total > std::numeric_limits<std::uint64_t>::max() / factor) {
      return std::numeric_limits<std::uint64_t>::max();
    }
    total *= factor;
  }
  return total;
}

PlacementResult place_heuristic(const NetworkModel& model, const ArchitectureMap& base,
                                std::span<const NodeArchitecture> inventory,
                                const PlacementConfig& config) {
  check_inputs(model, base, inventory);
  const NetworkGraph& g = model.graph;

  PlacementResult result;
  result.architectures = base;
  result.baseline_blocking = fixed_point(model, base, config.analysis).network_blocking;
  result.network_blocking = result.baseline_blocking;

  const auto order = rank_inventory(inventory, g.slot_count(), g.mean_out_degree(),
                                    config.full_converters);
  for (std::size_t item : order) {
    PlacementStep step;
    step.item = item;
    step.arch = inventory[item];
    step.n_eff = n_eff(step.arch, g.slot_count(), g.mean_out_degree(), config.full_converters);

    const std::vector<NodeId> candidates = simple_nodes(result.architectures);
    std::vector<ArchitectureMap> maps(candidates.size(), result.architectures);
    for (std::size_t c = 0; c < candidates.size(); ++c) maps[c][candidates[c]] = step.arch;
    const std::vector<AnalysisResult> scores = evaluate_all(model, maps, config);
    result.evaluations += scores.size();

    std::size_t best = 0;
    for (std::size_t c = 0; c < candidates.size(); ++c) {
      step.candidates.push_back({candidates[c], scores[c].network_blocking, scores[c].converged});
      if (!scores[c].converged) step.unconverged_candidates = true;
      if (scores[c].network_blocking < scores[best].network_blocking) best = c;
    }
    step.chosen = candidates[best];
    step.network_blocking = scores[best].network_blocking;
    if (step.unconverged_candidates) {
      result.warnings.push_back("step placing " + to_string(step.arch) +
                                " scored unconverged candidates by their last iterate");
    }

    result.architectures[step.chosen] = step.arch;
    result.placed.emplace_back(step.chosen, item);
    result.network_blocking = step.network_blocking;
    result.steps.push_back(std::move(step));
  }
  return result;
}

PlacementResult place_brute_force(const NetworkModel& model, const ArchitectureMap& base,
                                  std::span<const NodeArchitecture> inventory,
                                  const PlacementConfig& config) {
  check_inputs(model, base, inventory);
  const std::vector<NodeId> nodes = simple_nodes(base);
  const std::size_t k = inventory.size();
  const std::uint64_t count = ordered_assignments(nodes.size(), k);
  if (count > config.brute_force_guard) {
    throw Error(ErrorCode::guard_exceeded,
                "exhaustive placement needs " + std::to_string(count) +
                    " evaluations, guard is " + std::to_string(config.brute_force_guard));
  }

  // Lexicographic enumeration of node tuples; tuple[i] hosts inventory[i].
  std::vector<std::vector<NodeId>> tuples;
  std::vector<NodeId> tuple;
  std::vector<char> used(nodes.size(), 0);
  auto recurse = [&](auto&& self) -> void {
    const std::size_t i = tuple.size();
    if (i == k) {
      tuples.push_back(tuple);
      return;
    }
    for (std::size_t c = 0; c < nodes.size(); ++c) {
      if (used[c]) continue;
      if (config.dedup_identical) {
        // An identical earlier item must sit on a smaller node.
        bool skip = false;
        for (std::size_t j = 0; j < i; ++j) {
          if (inventory[j] == inventory[i] && tuple[j] > nodes[c]) skip = true;
        }
        if (skip) continue;
      }
      used[c] = 1;
      tuple.push_back(nodes[c]);
      self(self);
      tuple.pop_back();
      used[c] = 0;
    }
  };
  recurse(recurse);

  std::vector<ArchitectureMap> maps(tuples.size(), base);
  for (std::size_t t = 0; t < tuples.size(); ++t) {
    for (std::size_t i = 0; i < k; ++i) maps[t][tuples[t][i]] = inventory[i];
  }

  PlacementResult result;
  result.baseline_blocking = fixed_point(model, base, config.analysis).network_blocking;
  const std::vector<AnalysisResult> scores = evaluate_all(model, maps, config);
  result.evaluations = scores.size();

  std::size_t best = 0;
  bool unconverged = false;
  for (std::size_t t = 0; t < scores.size(); ++t) {
    if (!scores[t].converged) unconverged = true;
    if (scores[t].network_blocking < scores[best].network_blocking) best = t;
  }
  if (unconverged) {
    result.warnings.push_back("some assignments were scored by an unconverged last iterate");
  }
  result.architectures = maps[best];
  result.network_blocking = scores[best].network_blocking;
  for (std::size_t i = 0; i < k; ++i) result.placed.emplace_back(tuples[best][i], i);
  return result;
}

}  // namespace eonspectra
