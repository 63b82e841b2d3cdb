// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 when any
// criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "eonspectra/analyzer.hpp"
#include "eonspectra/io.hpp"
#include "eonspectra/lightpath.hpp"
#include "eonspectra/placement.hpp"
#include "eonspectra/runprob.hpp"
#include "eonspectra/simulator.hpp"
#include "support.hpp"

using namespace eonspectra;
using namespace eonspectra::test;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

// --- 1: recursion against mask enumeration --------------------------------

Outcome run_prob_equivalence() {
  const auto t0 = Clock::now();
  double worst = 0.0;
  int cases = 0;
  for (int f = 1; f <= 18; ++f) {
    for (int s = 1; s <= f; ++s) {
      for (int k = 0; k <= 20; ++k) {
        const double rho = k * 0.05;
        worst = std::max(worst, std::abs(run_prob(s, f, rho) - run_prob_oracle(s, f, rho)));
        ++cases;
      }
    }
  }
  const double t = seconds_since(t0);
  return {worst <= 1e-12 && t < 5.0, std::to_string(cases) + " cases, max |diff| " +
                                         fmt("%.3g", worst) + ", " + fmt("%.2f", t) + " s"};
}

// --- 2: closed forms against slot-mask sampling ---------------------------

// Free probabilities are multiples of 2^-16, so 16 random bits per slot give
// an exact Bernoulli draw.
struct Instance {
  int hops, fiber, slots;
  std::vector<std::uint32_t> phi16;
  std::vector<int> cuts;  // 1-based interior positions of the segmentwise case
};

bool has_run16(std::uint32_t mask, int slots) {
  for (int i = 1; i < slots && mask; ++i) mask &= mask >> 1;
  return mask != 0;
}

Outcome scenario_sampling() {
  const auto t0 = Clock::now();
  std::mt19937_64 gen(20240601);
  const std::size_t samples = 1000000;
  int failures = 0;
  double worst = 0.0;
  for (int n = 0; n < 50; ++n) {
    Instance in;
    in.hops = 1 + static_cast<int>(gen() % 5);
    in.fiber = 1 + static_cast<int>(gen() % 16);
    in.slots = 1 + static_cast<int>(gen() % static_cast<unsigned>(std::min(in.fiber, 5)));
    std::vector<double> phis;
    for (int h = 0; h < in.hops; ++h) {
      const std::uint32_t q = 19661 + static_cast<std::uint32_t>(gen() % (65536 - 19661 + 1));
      in.phi16.push_back(q);
      phis.push_back(q / 65536.0);
    }
    for (int pos = 2; pos <= in.hops; ++pos) {
      if (gen() % 2) in.cuts.push_back(pos);
    }
    ConverterLayout every{{1}};
    ConverterLayout some{{1}};
    for (int pos = 2; pos <= in.hops; ++pos) every.points.push_back(pos);
    for (int pos : in.cuts) some.points.push_back(pos);
    every.points.push_back(in.hops + 1);
    some.points.push_back(in.hops + 1);

    const double expect[3] = {segment_success(in.slots, in.fiber, ConverterLayout::endpoints_only(in.hops), phis),
                              segment_success(in.slots, in.fiber, every, phis),
                              segment_success(in.slots, in.fiber, some, phis)};
    std::vector<int> seg_of(static_cast<std::size_t>(in.hops));
    for (int h = 1, k = 0; h <= in.hops; ++h) {
      while (k < static_cast<int>(in.cuts.size()) && in.cuts[static_cast<std::size_t>(k)] <= h) ++k;
      seg_of[static_cast<std::size_t>(h - 1)] = k;
    }

    std::mt19937_64 rng(1000 + static_cast<std::uint64_t>(n));
    const std::uint32_t full = in.fiber == 32 ? ~0u : ((1u << in.fiber) - 1u);
    std::size_t hits[3] = {0, 0, 0};
    std::vector<std::uint32_t> masks(static_cast<std::size_t>(in.hops));
    std::vector<std::uint32_t> seg(in.cuts.size() + 1);
    for (std::size_t i = 0; i < samples; ++i) {
      for (int h = 0; h < in.hops; ++h) {
        std::uint32_t m = 0;
        const std::uint32_t q = in.phi16[static_cast<std::size_t>(h)];
        for (int s = 0; s < in.fiber; s += 4) {
          std::uint64_t bits = rng();
          for (int j = 0; j < 4 && s + j < in.fiber; ++j, bits >>= 16) {
            if ((bits & 0xFFFF) < q) m |= 1u << (s + j);
          }
        }
        masks[static_cast<std::size_t>(h)] = m;
      }
      std::uint32_t common = full;
      bool per_link = true;
      std::fill(seg.begin(), seg.end(), full);
      for (int h = 0; h < in.hops; ++h) {
        const std::uint32_t m = masks[static_cast<std::size_t>(h)];
        common &= m;
        per_link = per_link && has_run16(m, in.slots);
        seg[static_cast<std::size_t>(seg_of[static_cast<std::size_t>(h)])] &= m;
      }
      bool segmentwise = true;
      for (std::uint32_t m : seg) segmentwise = segmentwise && has_run16(m, in.slots);
      hits[0] += has_run16(common, in.slots);
      hits[1] += per_link;
      hits[2] += segmentwise;
    }
    for (int c = 0; c < 3; ++c) {
      const double p = expect[c];
      const double observed = static_cast<double>(hits[c]) / samples;
      const double se = std::sqrt(p * (1.0 - p) / samples);
      const double z = se > 0.0 ? std::abs(observed - p) / se : (observed == p ? 0.0 : 1e9);
      worst = std::max(worst, z);
      if (z > 3.0) {
        ++failures;
        std::printf("  AC2 instance %d scenario %d: H=%d F=%d S=%d analytic %.6f sampled %.6f z=%.2f\n",
                    n, c + 1, in.hops, in.fiber, in.slots, p, observed, z);
      }
    }
  }
  const double t = seconds_since(t0);
  return {failures == 0 && t < 60.0,
          "150 comparisons, " + std::to_string(failures) + " beyond 3 SE, max z " +
              fmt("%.2f", worst) + ", " + fmt("%.1f", t) + " s"};
}

// --- 3: general engine collapses to the closed forms ----------------------

Outcome special_case_collapse() {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  int compared = 0;
  int skipped = 0;
  for (int n = 0; n < 200; ++n) {
    const int hops = 1 + static_cast<int>(rng() % 6);
    const int f = 1 + static_cast<int>(rng() % 12);
    const int s = 1 + static_cast<int>(rng() % static_cast<unsigned>(f));
    const NetworkGraph g = line_graph(static_cast<std::size_t>(hops) + 1, f);
    const RoutedPath path = shortest_path(g, 0, g.node_count() - 1);
    LinkFreeProbs phi(g.link_count());
    for (auto& x : phi) x = u(rng);
    CrossingStats stats;
    stats.port_paths.assign(g.link_count(), 0);
    stats.port_slots.assign(g.link_count(), 0.0);
    stats.node_paths.assign(g.node_count(), 0);
    stats.node_slots.assign(g.node_count(), 0.0);
    stats.out_degree.assign(g.node_count(), 1);

    ArchitectureMap some(g.node_count());
    ConverterLayout layout{{1}};
    for (int pos = 2; pos <= hops; ++pos) {
      if (rng() % 2) {
        some[static_cast<std::size_t>(pos - 1)] = NodeArchitecture::full();
        layout.points.push_back(pos);
      }
    }
    layout.points.push_back(hops + 1);
    ConverterLayout every{{1}};
    for (int pos = 2; pos <= hops; ++pos) every.points.push_back(pos);
    every.points.push_back(hops + 1);

    const struct {
      ArchitectureMap archs;
      ConverterLayout layout;
    } cases[3] = {{ArchitectureMap(g.node_count()), ConverterLayout::endpoints_only(hops)},
                  {uniform_architecture(g.node_count(), NodeArchitecture::full()), every},
                  {some, layout}};
    for (const auto& c : cases) {
      const LightpathBlocking r = lightpath_blocking_detail(s, path, g, c.archs, phi, stats);
      if (r.ramp_clamps > 0) {
        ++skipped;
        continue;
      }
      const double closed = 1.0 - segment_success(s, f, c.layout, phi);
      worst = std::max(worst, std::abs(r.blocking - closed));
      ++compared;
    }
  }
  return {worst <= 1e-12 && compared > 0,
          std::to_string(compared) + " comparisons (" + std::to_string(skipped) +
              " skipped: ramp clamp), max |diff| " + fmt("%.3g", worst)};
}

// --- 4: single-link loss system against Erlang-B --------------------------

Outcome erlang_b_oracle() {
  const auto t0 = Clock::now();
  int failures = 0;
  double worst = 0.0;
  std::uint64_t fewest = UINT64_MAX;
  for (int f : {1, 2, 5}) {
    for (double load : {0.5, 1.0, 2.0}) {
      const NetworkGraph g = line_graph(2, f);
      const std::vector<DemandSpec> d{demand(0, 1, load, 1.0, 1)};
      SimConfig cfg;
      cfg.seed = 4000 + static_cast<std::uint64_t>(f * 10 + load * 2);
      cfg.replications = 20;
      cfg.warmup = 20.0;
      cfg.horizon = cfg.warmup + 1.1e5 / (cfg.replications * load);
      const SimResult r = simulate(g, d, ArchitectureMap(2), cfg);
      const double expected = erlang_b(f, load);
      const double z = std::abs(r.network_blocking - expected) / r.standard_error;
      worst = std::max(worst, z);
      fewest = std::min(fewest, r.pooled_network.offered);
      if (z > 3.0 || r.pooled_network.offered < 100000) {
        ++failures;
        std::printf("  AC4 F=%d RT=%.1f: Erlang-B %.6f simulated %.6f z=%.2f\n", f, load, expected,
                    r.network_blocking, z);
      }
    }
  }
  const double t = seconds_since(t0);
  return {failures == 0 && t < 120.0,
          "9 points, >= " + std::to_string(fewest) + " requests each, max z " + fmt("%.2f", worst) +
              ", " + fmt("%.1f", t) + " s"};
}

// --- 5: four settings on the NSF fixture ----------------------------------

const std::vector<std::pair<std::string, NodeArchitecture>> kSettings{
    {"simple", NodeArchitecture::simple()},
    {"share_per_node:1", NodeArchitecture::share_per_node(1)},
    {"share_per_link:1", NodeArchitecture::share_per_link(1)},
    {"full", NodeArchitecture::full()}};

Outcome nsf_rank_order() {
  const auto t0 = Clock::now();
  const NetworkGraph g = load_fixture("nsfnet.json");
  const auto base = load_demands(read_file(data_path("nsfnet_demands.json")), g);
  const double base_traffic = network_traffic(g, base, route_all(g, base));
  const std::vector<double> targets{0.3, 0.4, 0.5, 0.6, 0.7};

  AnalysisConfig acfg;
  acfg.damping = 0.5;
  SimConfig scfg;
  scfg.seed = 11;
  scfg.replications = 20;
  scfg.warmup = 10.0;
  scfg.horizon = 410.0;

  // [target][setting]
  std::vector<std::vector<double>> analytic(targets.size()), simulated(targets.size()),
      half(targets.size());
  bool converged = true;
  for (std::size_t t = 0; t < targets.size(); ++t) {
    std::vector<DemandSpec> d = base;
    for (auto& x : d) x.rate *= targets[t] / base_traffic;
    const NetworkModel model(g, d);
    for (const auto& [name, arch] : kSettings) {
      const ArchitectureMap archs = uniform_architecture(g.node_count(), arch);
      const AnalysisResult a = fixed_point(model, archs, acfg);
      converged = converged && a.converged;
      const SimResult s = simulate(g, d, archs, scfg);
      analytic[t].push_back(a.network_blocking);
      simulated[t].push_back(s.network_blocking);
      half[t].push_back(s.half_width);
    }
  }

  std::printf("  AC5 traffic  setting            analytic    simulated   half-width  ratio\n");
  bool ranks = true;
  bool monotone = true;
  bool factor = true;
  double worst_ratio = 1.0;
  for (std::size_t t = 0; t < targets.size(); ++t) {
    for (std::size_t k = 0; k < kSettings.size(); ++k) {
      const double a = analytic[t][k];
      const double s = simulated[t][k];
      const double ratio = s > 0.0 ? a / s : 0.0;
      std::printf("  AC5 %.2f    %-18s %.6f    %.6f    %.6f    %.3f\n", targets[t],
                  kSettings[k].first.c_str(), a, s, half[t][k], ratio);
      if (k > 0 && (a > analytic[t][k - 1] || s > simulated[t][k - 1])) ranks = false;
      if (t > 0 && (a < analytic[t - 1][k] || s < simulated[t - 1][k])) monotone = false;
      if (s >= 1e-2) {
        const double r = std::max(a / s, s / a);
        worst_ratio = std::max(worst_ratio, r);
        if (!(r <= 2.0)) factor = false;
      }
    }
  }
  const double t = seconds_since(t0);
  std::string detail = std::string("rank order ") + (ranks ? "ok" : "violated") +
                       ", monotone in T " + (monotone ? "ok" : "violated") +
                       ", worst analytic/simulated factor " + fmt("%.3f", worst_ratio) +
                       (converged ? "" : ", analysis did not converge") + ", " +
                       fmt("%.1f", t) + " s";
  return {ranks && monotone && factor && converged, detail};
}

// --- 6: greedy versus exhaustive placement --------------------------------

Outcome placement_optimality() {
  const NetworkGraph g = load_fixture("six_node.json");
  const NetworkModel model(g, load_demands(read_file(data_path("six_node_demands.json")), g));
  const std::vector<NodeArchitecture> inventory{NodeArchitecture::full(),
                                                NodeArchitecture::share_per_node(1)};
  PlacementConfig cfg;
  cfg.analysis.damping = 0.5;
  const PlacementResult h = place_heuristic(model, ArchitectureMap(6), inventory, cfg);
  const PlacementResult b = place_brute_force(model, ArchitectureMap(6), inventory, cfg);
  const double diff = std::abs(h.network_blocking - b.network_blocking);
  std::string where;
  for (const auto& [node, item] : h.placed) {
    where += " " + g.label(node) + "=" + to_string(inventory[item]);
  }
  return {diff <= 1e-9, "heuristic " + fmt("%.12f", h.network_blocking) + " exhaustive " +
                            fmt("%.12f", b.network_blocking) + " |diff| " + fmt("%.3g", diff) +
                            ", heuristic placed" + where};
}

// --- 7: heuristic evaluation count ----------------------------------------

Outcome heuristic_cost() {
  PlacementConfig cfg;
  cfg.analysis.damping = 0.5;
  bool ok = true;
  std::string detail;
  const std::pair<const char*, const char*> fixtures[] = {
      {"six_node.json", "six_node_demands.json"}, {"nsfnet.json", "nsfnet_demands.json"}};
  for (const auto& [topo, dem] : fixtures) {
    const NetworkGraph g = load_fixture(topo);
    const NetworkModel model(g, load_demands(read_file(data_path(dem)), g));
    const std::size_t v = g.node_count();
    const std::size_t k = v == 6 ? 2 : 3;
    std::vector<NodeArchitecture> inventory{NodeArchitecture::full(),
                                            NodeArchitecture::share_per_node(1)};
    if (k == 3) inventory.insert(inventory.begin(), NodeArchitecture::full());
    const PlacementResult r = place_heuristic(model, ArchitectureMap(v), inventory, cfg);
    const std::size_t expected = v * k - k * (k - 1) / 2;
    ok = ok && r.evaluations == expected;
    detail += "(|V|=" + std::to_string(v) + ", K=" + std::to_string(k) +
              "): " + std::to_string(r.evaluations) + " of " + std::to_string(expected) + "  ";
  }
  return {ok, detail};
}

// --- 8: fixed-point robustness --------------------------------------------

Outcome fixed_point_robustness() {
  const NetworkGraph g = load_fixture("nsfnet.json");
  const auto d = load_demands(read_file(data_path("nsfnet_demands.json")), g);
  const NetworkModel model(g, d);
  bool ok = true;
  double worst_spread = 0.0;
  double slowest = 0.0;
  int most_iterations = 0;
  for (const auto& [name, arch] : kSettings) {
    double lo = 1.0;
    double hi = 0.0;
    for (std::uint64_t seed : {1u, 2u, 3u, 4u, 5u}) {
      AnalysisConfig cfg;
      cfg.seed = seed;
      cfg.epsilon = 1e-6;
      cfg.max_iter = 1000;
      cfg.damping = 0.5;
      const auto t0 = Clock::now();
      const AnalysisResult r = fixed_point(model, uniform_architecture(14, arch), cfg);
      slowest = std::max(slowest, seconds_since(t0));
      most_iterations = std::max(most_iterations, r.iterations);
      ok = ok && r.converged;
      lo = std::min(lo, r.network_blocking);
      hi = std::max(hi, r.network_blocking);
    }
    worst_spread = std::max(worst_spread, hi - lo);
  }
  ok = ok && worst_spread <= 1e-5 && slowest < 30.0;
  return {ok, "4 settings x 5 seeds, max iterations " + std::to_string(most_iterations) +
                  ", max seed spread " + fmt("%.3g", worst_spread) + ", slowest run " +
                  fmt("%.3f", slowest) + " s"};
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<Outcome()>> criteria[] = {
      {"run-probability oracle equivalence", run_prob_equivalence},
      {"scenario formulas vs slot-mask sampling", scenario_sampling},
      {"special-case collapse of the general engine", special_case_collapse},
      {"single-link simulation vs Erlang-B", erlang_b_oracle},
      {"NSF rank order, monotonicity and factor-2 agreement", nsf_rank_order},
      {"heuristic placement matches exhaustive search", placement_optimality},
      {"heuristic evaluation count", heuristic_cost},
      {"fixed-point robustness on NSF", fixed_point_robustness},
  };
  int failed = 0;
  int index = 0;
  for (const auto& [name, check] : criteria) {
    ++index;
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("AC%d %s  %s: %s\n", index, o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
    std::fflush(stdout);
    failed += o.pass ? 0 : 1;
  }
  std::printf("%d of 8 acceptance criteria passed\n", 8 - failed);
  return failed == 0 ? 0 : 1;
}
