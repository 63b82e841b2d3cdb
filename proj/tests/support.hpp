#pragma once

// Test-only fixtures and independent oracles. Nothing here calls the code
// paths it is used to check.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "eonspectra/io.hpp"
#include "eonspectra/topology.hpp"

namespace eonspectra::test {

inline std::string data_path(const std::string& name) {
  return std::string(EONSPECTRA_DATA_DIR) + "/" + name;
}

inline NetworkGraph load_fixture(const std::string& name) {
  return load_topology(read_file(data_path(name)));
}

// Directed line 0 -> 1 -> ... -> n-1 (plus reverse links when `both`).
inline NetworkGraph line_graph(std::size_t nodes, int slots, bool both = false) {
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < nodes; ++i) labels.push_back(std::string(1, static_cast<char>('a' + i)));
  NetworkGraph g("line", slots, labels);
  for (std::size_t i = 0; i + 1 < nodes; ++i) {
    g.add_link(i, i + 1, 1.0);
    if (both) g.add_link(i + 1, i, 1.0);
  }
  return g;
}

inline DemandSpec demand(NodeId s, NodeId d, double rate, double hold, int slots) {
  DemandSpec spec;
  spec.src = s;
  spec.dst = d;
  spec.rate = rate;
  spec.hold = hold;
  spec.slots = SlotPmf::fixed(slots);
  return spec;
}

inline std::vector<DemandSpec> all_pairs(const NetworkGraph& g, double rate, double hold,
                                         int slots) {
  std::vector<DemandSpec> out;
  for (NodeId s = 0; s < g.node_count(); ++s) {
    for (NodeId d = 0; d < g.node_count(); ++d) {
      if (s != d) out.push_back(demand(s, d, rate, hold, slots));
    }
  }
  return out;
}

// Exhaustive DFS over simple paths; returns the minimum total weight.
inline double brute_force_min_weight(const NetworkGraph& g, NodeId src, NodeId dst) {
  double best = std::numeric_limits<double>::infinity();
  std::vector<char> seen(g.node_count(), 0);
  std::function<void(NodeId, double)> dfs = [&](NodeId v, double w) {
    if (v == dst) {
      best = std::min(best, w);
      return;
    }
    seen[v] = 1;
    for (LinkId id : g.out_links(v)) {
      const Link& l = g.link(id);
      if (!seen[l.head]) dfs(l.head, w + l.weight);
    }
    seen[v] = 0;
  };
  dfs(src, 0.0);
  return best;
}

// Random strongly connected digraph on `nodes` nodes: a bidirectional ring
// plus random extra links. Integer weights 1..4 make ties common; real
// weights make every shortest path unique.
inline NetworkGraph random_graph(std::mt19937_64& rng, std::size_t nodes, int slots,
                                 bool real_weights = false) {
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < nodes; ++i) labels.push_back("n" + std::to_string(i));
  NetworkGraph g("random", slots, labels);
  std::uniform_int_distribution<int> integer(1, 4);
  std::uniform_real_distribution<double> real(1.0, 4.0);
  auto weight = [&](std::mt19937_64& r) {
    return real_weights ? real(r) : static_cast<double>(integer(r));
  };
  for (std::size_t i = 0; i < nodes; ++i) {
    const std::size_t j = (i + 1) % nodes;
    if (!g.find_link(i, j)) g.add_link(i, j, weight(rng));
    if (!g.find_link(j, i)) g.add_link(j, i, weight(rng));
  }
  std::uniform_int_distribution<std::size_t> pick(0, nodes - 1);
  for (std::size_t e = 0; e < nodes; ++e) {
    const std::size_t a = pick(rng);
    const std::size_t b = pick(rng);
    if (a != b && !g.find_link(a, b)) g.add_link(a, b, weight(rng));
  }
  return g;
}

// Erlang-B blocking of an M/M/c/c loss system with offered load `a`.
inline double erlang_b(int servers, double a) {
  double b = 1.0;
  for (int k = 1; k <= servers; ++k) b = a * b / (k + a * b);
  return b;
}

// True when the 0/1 free mask has `run` consecutive free entries.
inline bool has_run(const std::vector<char>& free, int run) {
  int current = 0;
  for (char f : free) {
    current = f ? current + 1 : 0;
    if (current >= run) return true;
  }
  return false;
}

/// Monte Carlo slot-mask sampler for one lightpath: every link gets an
/// independent Bernoulli(phi_h) free mask; the request succeeds when every
/// segment between consecutive cut positions has a common free run of
/// `slots`. `cuts` holds 1-based interior node positions (empty: no
/// conversion, every interior position: per-link check).
struct SamplerResult {
  double mean = 0.0;
  double standard_error = 0.0;
};

inline SamplerResult sample_success(const std::vector<double>& phis, int slots, int fiber,
                                    const std::vector<int>& cuts, std::size_t samples,
                                    std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const std::size_t hops = phis.size();
  std::vector<std::vector<char>> masks(hops, std::vector<char>(static_cast<std::size_t>(fiber)));
  std::vector<int> bounds{1};
  bounds.insert(bounds.end(), cuts.begin(), cuts.end());
  bounds.push_back(static_cast<int>(hops) + 1);
  std::size_t ok = 0;
  std::vector<char> common(static_cast<std::size_t>(fiber));
  for (std::size_t n = 0; n < samples; ++n) {
    for (std::size_t h = 0; h < hops; ++h) {
      for (auto& slot : masks[h]) slot = u(rng) < phis[h] ? 1 : 0;
    }
    bool success = true;
    for (std::size_t k = 0; k + 1 < bounds.size() && success; ++k) {
      std::fill(common.begin(), common.end(), 1);
      for (int h = bounds[k]; h < bounds[k + 1]; ++h) {
        for (std::size_t s = 0; s < common.size(); ++s) {
          common[s] = common[s] && masks[static_cast<std::size_t>(h - 1)][s];
        }
      }
      success = has_run(common, slots);
    }
    ok += success ? 1 : 0;
  }
  const double p = static_cast<double>(ok) / static_cast<double>(samples);
  return {p, std::sqrt(std::max(p * (1.0 - p), 1e-300) / static_cast<double>(samples))};
}

}  // namespace eonspectra::test
