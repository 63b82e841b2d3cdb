#include "eonspectra/simulator.hpp"

#include <algorithm>
#include <boost/math/distributions/students_t.hpp>
#include <cmath>
#include <limits>
#include <ostream>
#include <queue>
#include <sstream>

#include "eonspectra/error.hpp"
#include "eonspectra/random.hpp"

namespace eonspectra {

const char* to_string(AdmissionPolicy policy) {
  switch (policy) {
    case AdmissionPolicy::minimal_conversions: return "minimal-conversions";
  }
  return "minimal-conversions";
}

AdmissionPolicy parse_policy(const std::string& name) {
  if (name == "minimal-conversions") return AdmissionPolicy::minimal_conversions;
  throw Error(ErrorCode::invalid_argument, "unknown admission policy '" + name + "'");
}

SimConfig resolve(SimConfig config, std::span<const DemandSpec> demands) {
  double rate = 0.0;
  double weighted_hold = 0.0;
  double min_rate = std::numeric_limits<double>::infinity();
  for (const DemandSpec& d : demands) {
    rate += d.rate;
    weighted_hold += d.rate * d.hold;
    if (d.rate > 0.0) min_rate = std::min(min_rate, d.rate);
  }
  const double mean_hold = rate > 0.0 ? weighted_hold / rate : 1.0;
  if (config.warmup < 0.0) config.warmup = 10.0 * mean_hold;
  if (config.horizon < 0.0) {
    config.horizon = config.warmup + (std::isfinite(min_rate) ? 1e4 / min_rate : 1.0);
  }
  if (!(config.horizon > config.warmup)) {
    throw Error(ErrorCode::invalid_argument, "horizon must exceed warmup");
  }
  if (config.replications < 1) {
    throw Error(ErrorCode::invalid_argument, "replications must be at least 1");
  }
  if (config.subset_guard < 1) {
    throw Error(ErrorCode::invalid_argument, "subset guard must be at least 1");
  }
  return config;
}

NetworkState::NetworkState(const NetworkGraph& g, const ArchitectureMap& archs)
    : graph_(&g), archs_(&archs) {
  if (archs.size() != g.node_count()) {
    throw Error(ErrorCode::invalid_argument, "architecture map does not match the graph");
  }
  occupied_.assign(g.link_count(),
                   std::vector<std::uint8_t>(static_cast<std::size_t>(g.slot_count()), 0));
  capacity_.assign(g.link_count() + g.node_count(), 0);
  for (const Link& l : g.links()) {
    if (archs[l.tail].kind == ArchKind::share_per_link) capacity_[l.id] = archs[l.tail].converters;
  }
  for (NodeId v = 0; v < g.node_count(); ++v) {
    if (archs[v].kind == ArchKind::share_per_node) {
      capacity_[g.link_count() + v] = archs[v].converters;
    }
  }
  in_use_.assign(capacity_.size(), 0);
}

int NetworkState::occupied_slots(LinkId link) const {
  return static_cast<int>(std::count(occupied_[link].begin(), occupied_[link].end(), 1));
}

void NetworkState::set_slot(LinkId link, int slot, bool used) {
  occupied_.at(link).at(static_cast<std::size_t>(slot)) = used ? 1 : 0;
}

std::optional<std::size_t> NetworkState::bank_for(NodeId node, LinkId exit_link) const {
  switch ((*archs_)[node].kind) {
    case ArchKind::share_per_link: return exit_link;
    case ArchKind::share_per_node: return graph_->link_count() + node;
    default: return std::nullopt;
  }
}

bool NetworkState::converter_available(NodeId node, LinkId exit_link) const {
  const NodeArchitecture& arch = (*archs_)[node];
  if (arch.kind == ArchKind::simple) return false;
  if (arch.kind == ArchKind::full) return true;
  const std::size_t bank = *bank_for(node, exit_link);
  return in_use_[bank] < capacity_[bank];
}

ConnectionId NetworkState::establish(Connection c) {
  for (const Segment& seg : c.segments) {
    for (std::size_t h = seg.first_hop; h < seg.last_hop; ++h) {
      for (int s = seg.start; s < seg.start + c.slots; ++s) {
        auto& slot = occupied_[c.links[h]][static_cast<std::size_t>(s)];
        if (slot != 0) throw Error(ErrorCode::internal, "slot assigned twice");
        slot = 1;
      }
    }
  }
  for (std::size_t bank : c.banks) {
    if (in_use_[bank] >= capacity_[bank]) throw Error(ErrorCode::internal, "bank overdrawn");
    ++in_use_[bank];
  }
  c.id = next_id_++;
  const ConnectionId id = c.id;
  active_.emplace(id, std::move(c));
  return id;
}

void NetworkState::release(ConnectionId id) {
  auto it = active_.find(id);
  if (it == active_.end()) {
    throw Error(ErrorCode::internal, "release of unknown connection " + std::to_string(id));
  }
  const Connection& c = it->second;
  for (const Segment& seg : c.segments) {
    for (std::size_t h = seg.first_hop; h < seg.last_hop; ++h) {
      for (int s = seg.start; s < seg.start + c.slots; ++s) {
        occupied_[c.links[h]][static_cast<std::size_t>(s)] = 0;
      }
    }
  }
  for (std::size_t bank : c.banks) --in_use_[bank];
  active_.erase(it);
}

const Connection& NetworkState::connection(ConnectionId id) const {
  auto it = active_.find(id);
  if (it == active_.end()) {
    throw Error(ErrorCode::internal, "unknown connection " + std::to_string(id));
  }
  return it->second;
}

bool NetworkState::conserved() const {
  std::vector<std::vector<std::uint8_t>> claimed(occupied_.size());
  for (std::size_t l = 0; l < occupied_.size(); ++l) claimed[l].assign(occupied_[l].size(), 0);
  std::vector<int> held(capacity_.size(), 0);
  for (const auto& [id, c] : active_) {
    for (const Segment& seg : c.segments) {
      for (std::size_t h = seg.first_hop; h < seg.last_hop; ++h) {
        for (int s = seg.start; s < seg.start + c.slots; ++s) {
          auto& slot = claimed[c.links[h]][static_cast<std::size_t>(s)];
          if (slot != 0) return false;
          slot = 1;
        }
      }
    }
    for (std::size_t bank : c.banks) ++held[bank];
  }
  return claimed == occupied_ && held == in_use_ &&
         std::equal(in_use_.begin(), in_use_.end(), capacity_.begin(),
                    [](int used, int cap) { return used <= cap; });
}

std::vector<int> feasible_starts(const NetworkState& state, std::span<const LinkId> links,
                                 int slots) {
  const int f = state.graph().slot_count();
  std::vector<int> starts;
  int run = 0;
  for (int s = 0; s < f; ++s) {
    bool free = true;
    for (LinkId l : links) {
      if (!state.slot_free(l, s)) {
        free = false;
        break;
      }
    }
    run = free ? run + 1 : 0;
    if (run >= slots) starts.push_back(s - slots + 1);
  }
  return starts;
}

namespace {

// Feasible starts for hop ranges [a, b), computed on demand.
class SegmentCache {
 public:
  SegmentCache(const NetworkState& state, const RoutedPath& route, int slots)
      : state_(state), route_(route), slots_(slots),
        cache_(route.hops() * (route.hops() + 1)), known_(cache_.size(), 0) {}

  const std::vector<int>& starts(std::size_t a, std::size_t b) {
    const std::size_t key = a * (route_.hops() + 1) + b;
    if (!known_[key]) {
      cache_[key] = feasible_starts(
          state_, std::span<const LinkId>(route_.links).subspan(a, b - a), slots_);
      known_[key] = 1;
    }
    return cache_[key];
  }

 private:
  const NetworkState& state_;
  const RoutedPath& route_;
  int slots_;
  std::vector<std::vector<int>> cache_;
  std::vector<char> known_;
};

// Splits hops at the chosen converter positions (hop indices where a new
// segment starts) and checks each segment has a feasible interval.
bool segments_feasible(SegmentCache& cache, std::size_t hops,
                       std::span<const std::size_t> cuts) {
  std::size_t a = 0;
  for (std::size_t i = 0; i <= cuts.size(); ++i) {
    const std::size_t b = i < cuts.size() ? cuts[i] : hops;
    if (cache.starts(a, b).empty()) return false;
    a = b;
  }
  return true;
}

// Advances `combo` (sorted indices into [0, n)) to the next k-combination in
// lexicographic order. Returns false after the last one.
bool next_combination(std::vector<std::size_t>& combo, std::size_t n) {
  const std::size_t k = combo.size();
  for (std::size_t i = k; i-- > 0;) {
    if (combo[i] < n - k + i) {
      ++combo[i];
      for (std::size_t j = i + 1; j < k; ++j) combo[j] = combo[j - 1] + 1;
      return true;
    }
  }
  return false;
}

// Greedy splitting for routes with too many converters to enumerate: extend
// each segment while a common interval exists, convert where it stops.
std::optional<std::vector<std::size_t>> greedy_cuts(SegmentCache& cache,
                                                    const std::vector<char>& can_convert,
                                                    std::size_t hops) {
  std::vector<std::size_t> cuts;
  std::size_t a = 0;
  for (std::size_t b = 1; b <= hops; ++b) {
    if (!cache.starts(a, b).empty()) continue;
    const std::size_t cut = b - 1;
    if (cut == a || !can_convert[cut]) return std::nullopt;
    cuts.push_back(cut);
    a = cut;
    if (cache.starts(a, b).empty()) return std::nullopt;
  }
  return cuts;
}

}  // namespace

Admission admit(NetworkState& state, const RoutedPath& route, int slots,
                std::mt19937_64& rng, double departure, std::size_t subset_guard) {
  Admission out;
  const std::size_t hops = route.hops();
  if (slots < 1 || slots > state.graph().slot_count() || hops == 0) return out;

  SegmentCache cache(state, route, slots);

  // Interior positions (hop index h: node route.nodes[h], exit route.links[h])
  // whose converter currently has a free SCB.
  std::vector<std::size_t> available;
  std::vector<char> can_convert(hops, 0);
  for (std::size_t h = 1; h < hops; ++h) {
    if (state.converter_available(route.nodes[h], route.links[h])) {
      available.push_back(h);
      can_convert[h] = 1;
    }
  }

  std::optional<std::vector<std::size_t>> cuts;
  const std::size_t n = available.size();
  const bool enumerable = n < 63 && (std::uint64_t{1} << n) <= subset_guard;
  if (enumerable) {
    for (std::size_t k = 0; k <= n && !cuts; ++k) {
      std::vector<std::size_t> combo(k);
      for (std::size_t i = 0; i < k; ++i) combo[i] = i;
      do {
        std::vector<std::size_t> chosen(k);
        for (std::size_t i = 0; i < k; ++i) chosen[i] = available[combo[i]];
        if (segments_feasible(cache, hops, chosen)) {
          cuts = std::move(chosen);
          break;
        }
      } while (next_combination(combo, n));
    }
  } else {
    out.greedy_fallback = true;
    cuts = greedy_cuts(cache, can_convert, hops);
  }
  if (!cuts) return out;

  Connection c;
  c.links = route.links;
  c.slots = slots;
  c.departure = departure;
  std::size_t a = 0;
  for (std::size_t i = 0; i <= cuts->size(); ++i) {
    const std::size_t b = i < cuts->size() ? (*cuts)[i] : hops;
    const std::vector<int>& starts = cache.starts(a, b);
    std::uniform_int_distribution<std::size_t> pick(0, starts.size() - 1);
    c.segments.push_back({a, b, starts[pick(rng)]});
    a = b;
  }
  for (std::size_t h : *cuts) {
    if (auto bank = state.bank_for(route.nodes[h], route.links[h])) c.banks.push_back(*bank);
  }
  out.segments = c.segments;
  out.conversions = static_cast<int>(cuts->size());
  out.id = state.establish(std::move(c));
  out.accepted = true;
  return out;
}

namespace {

struct Departure {
  double time;
  ConnectionId id;
  bool operator>(const Departure& o) const {
    return time != o.time ? time > o.time : id > o.id;
  }
};

ReplicationResult run_replication(const NetworkGraph& g, std::span<const DemandSpec> demands,
                                  std::span<const RoutedPath> routes,
                                  const ArchitectureMap& archs, const SimConfig& config,
                                  std::uint64_t replication, std::ostream* trace) {
  ReplicationResult result;
  result.demands.resize(demands.size());

  double total_rate = 0.0;
  std::vector<double> rates(demands.size());
  for (std::size_t i = 0; i < demands.size(); ++i) {
    rates[i] = demands[i].rate;
    total_rate += rates[i];
  }
  if (!(total_rate > 0.0)) return result;

  // Arrivals and spectrum choices draw from separate streams, so runs that
  // differ only in node architectures see the same offered requests.
  std::mt19937_64 rng = substream(config.seed, "simulator.arrivals", replication);
  std::mt19937_64 fit = substream(config.seed, "simulator.fit", replication);
  std::exponential_distribution<double> interarrival(total_rate);
  std::discrete_distribution<std::size_t> which(rates.begin(), rates.end());
  std::vector<std::discrete_distribution<std::size_t>> slot_draw;
  slot_draw.reserve(demands.size());
  for (const DemandSpec& d : demands) {
    std::vector<double> p;
    for (const auto& e : d.slots.entries()) p.push_back(e.second);
    slot_draw.emplace_back(p.begin(), p.end());
  }

  NetworkState state(g, archs);
  std::priority_queue<Departure, std::vector<Departure>, std::greater<>> departures;
  auto check = [&] {
    if (config.check_invariants && !state.conserved()) {
      throw Error(ErrorCode::internal, "conservation violated");
    }
  };

  double now = interarrival(rng);
  while (now <= config.horizon) {
    while (!departures.empty() && departures.top().time <= now) {
      const Departure d = departures.top();
      departures.pop();
      state.release(d.id);
      if (trace) *trace << d.time << " depart " << d.id << '\n';
      check();
    }

    const std::size_t i = which(rng);
    const DemandSpec& d = demands[i];
    const int slots = d.slots.entries()[slot_draw[i](rng)].first;
    std::exponential_distribution<double> holding(1.0 / d.hold);
    const double leave = now + holding(rng);
    const Admission a = admit(state, routes[i], slots, fit, leave, config.subset_guard);
    if (a.accepted) departures.push({leave, a.id});
    if (a.greedy_fallback) ++result.fallback_admissions;

    if (now >= config.warmup) {
      ++result.demands[i].offered;
      ++result.network.offered;
      if (!a.accepted) {
        ++result.demands[i].blocked;
        ++result.network.blocked;
      }
    }
    if (trace) {
      *trace << now << " arrive " << g.label(d.src) << "->" << g.label(d.dst) << " S=" << slots;
      if (a.accepted) {
        *trace << " accept " << a.id << " conversions=" << a.conversions << " slots";
        for (const Segment& s : a.segments) *trace << ' ' << s.start;
      } else {
        *trace << " block";
      }
      *trace << '\n';
    }
    check();
    now += interarrival(rng);
  }
  return result;
}

}  // namespace

SimResult simulate(const NetworkGraph& g, std::span<const DemandSpec> demands,
                   const ArchitectureMap& archs, const SimConfig& config) {
  for (const DemandSpec& d : demands) validate_demand(g, d);
  for (const NodeArchitecture& a : archs) validate_architecture(a);
  if (archs.size() != g.node_count()) {
    throw Error(ErrorCode::invalid_argument, "architecture map does not match the graph");
  }
  std::vector<RoutedPath> routes = route_all(g, demands);

  SimResult out;
  out.config = resolve(config, demands);
  const auto reps = static_cast<std::size_t>(out.config.replications);
  out.replications.resize(reps);

  std::ostringstream trace_buffer;
  std::ostream* trace = out.config.trace ? &trace_buffer : nullptr;
  const int threads = threads_for(out.config.execution, reps);
  const auto n = static_cast<long>(reps);
  if (threads == 1) {
    for (long r = 0; r < n; ++r) {
      out.replications[static_cast<std::size_t>(r)] =
          run_replication(g, demands, routes, archs, out.config, static_cast<std::uint64_t>(r),
                          r == 0 ? trace : nullptr);
    }
  } else {
#pragma omp parallel for num_threads(threads) schedule(dynamic, 1)
    for (long r = 0; r < n; ++r) {
      out.replications[static_cast<std::size_t>(r)] =
          run_replication(g, demands, routes, archs, out.config, static_cast<std::uint64_t>(r),
                          r == 0 ? trace : nullptr);
    }
  }
  if (out.config.trace) *out.config.trace << trace_buffer.str();

  out.pooled.resize(demands.size());
  double sum = 0.0;
  for (const ReplicationResult& r : out.replications) {
    for (std::size_t i = 0; i < demands.size(); ++i) {
      out.pooled[i].offered += r.demands[i].offered;
      out.pooled[i].blocked += r.demands[i].blocked;
    }
    out.pooled_network.offered += r.network.offered;
    out.pooled_network.blocked += r.network.blocked;
    sum += r.network.blocking();
  }
  out.network_blocking = sum / static_cast<double>(reps);
  if (reps > 1) {
    double ss = 0.0;
    for (const ReplicationResult& r : out.replications) {
      const double dev = r.network.blocking() - out.network_blocking;
      ss += dev * dev;
    }
    const double sd = std::sqrt(ss / static_cast<double>(reps - 1));
    out.standard_error = sd / std::sqrt(static_cast<double>(reps));
    const boost::math::students_t dist(static_cast<double>(reps - 1));
    out.half_width = boost::math::quantile(boost::math::complement(dist, 0.025)) *
                     out.standard_error;
  }
  return out;
}

}  // namespace eonspectra
