#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "eonspectra/lightpath.hpp"
#include "eonspectra/parallel.hpp"
#include "eonspectra/topology.hpp"

namespace eonspectra {

enum class AdmissionPolicy {
  // Try whole-path continuity first, then converter subsets of increasing
  // size, then lexicographic order.
  minimal_conversions,
};

const char* to_string(AdmissionPolicy policy);
AdmissionPolicy parse_policy(const std::string& name);

struct SimConfig {
  std::uint64_t seed = 1;
  double warmup = -1.0;   // < 0: ten mean holding times
  double horizon = -1.0;  // end of measurement; < 0: every demand offers >= 1e4 requests
  int replications = 1;
  AdmissionPolicy policy = AdmissionPolicy::minimal_conversions;
  std::size_t subset_guard = 4096;  // more converter subsets: greedy splitting
  bool check_invariants = false;    // verify conservation after every event
  std::ostream* trace = nullptr;    // event trace of replication 0
  Execution execution = Execution::parallel;
};

/// Replaces negative warmup/horizon with the documented defaults and checks
/// the rest. Throws Error(invalid_argument).
SimConfig resolve(SimConfig config, std::span<const DemandSpec> demands);

using ConnectionId = std::uint64_t;

// Hops [first_hop, last_hop) of a route share slots [start, start + slots).
struct Segment {
  std::size_t first_hop = 0;
  std::size_t last_hop = 0;
  int start = 0;
};

struct Connection {
  ConnectionId id = 0;
  std::vector<LinkId> links;
  int slots = 0;
  std::vector<Segment> segments;
  std::vector<std::size_t> banks;  // one entry per held SCB
  double departure = 0.0;
};

/// Slot occupancy of every link, SCB bank usage and the active connections.
/// Share-per-Link banks are indexed by link id, Share-per-Node banks by
/// link_count + node id. Full nodes convert without a bank.
class NetworkState {
 public:
  NetworkState(const NetworkGraph& g, const ArchitectureMap& archs);

  const NetworkGraph& graph() const { return *graph_; }
  const ArchitectureMap& architectures() const { return *archs_; }

  bool slot_free(LinkId link, int slot) const {
    return occupied_[link][static_cast<std::size_t>(slot)] == 0;
  }
  int occupied_slots(LinkId link) const;
  void set_slot(LinkId link, int slot, bool used);

  // Bank a conversion at `node` toward `exit_link` draws from; nullopt for
  // Full nodes (unlimited) and simple nodes (no conversion).
  std::optional<std::size_t> bank_for(NodeId node, LinkId exit_link) const;
  bool converter_available(NodeId node, LinkId exit_link) const;
  int bank_in_use(std::size_t bank) const { return in_use_[bank]; }
  int bank_capacity(std::size_t bank) const { return capacity_[bank]; }
  std::size_t bank_count() const { return capacity_.size(); }

  ConnectionId establish(Connection connection);
  /// Frees slots and SCBs of an active connection. Unknown ids throw
  /// Error(internal).
  void release(ConnectionId id);

  const std::map<ConnectionId, Connection>& active() const { return active_; }
  const Connection& connection(ConnectionId id) const;

  /// Occupied slots equal the slots of active connections on every link,
  /// bank usage equals held SCBs and never exceeds capacity, and no slot is
  /// claimed twice.
  bool conserved() const;

 private:
  const NetworkGraph* graph_;
  const ArchitectureMap* archs_;
  std::vector<std::vector<std::uint8_t>> occupied_;
  std::vector<int> capacity_;
  std::vector<int> in_use_;
  std::map<ConnectionId, Connection> active_;
  ConnectionId next_id_ = 1;
};

/// Contiguous `slots`-wide intervals free on every link of `links`, as
/// 0-based start slots in increasing order.
std::vector<int> feasible_starts(const NetworkState& state, std::span<const LinkId> links,
                                 int slots);

struct Admission {
  bool accepted = false;
  ConnectionId id = 0;
  std::vector<Segment> segments;
  int conversions = 0;
  bool greedy_fallback = false;
};

/// Staged Random-Fit admission. On success the connection is established
/// in `state` with the given departure time and its SCBs are acquired.
Admission admit(NetworkState& state, const RoutedPath& route, int slots,
                std::mt19937_64& rng, double departure = 0.0,
                std::size_t subset_guard = 4096);

inline void release(NetworkState& state, ConnectionId id) { state.release(id); }

struct DemandCounts {
  std::uint64_t offered = 0;
  std::uint64_t blocked = 0;
  double blocking() const {
    return offered == 0 ? 0.0 : static_cast<double>(blocked) / static_cast<double>(offered);
  }
};

struct ReplicationResult {
  std::vector<DemandCounts> demands;
  DemandCounts network;
  std::uint64_t fallback_admissions = 0;
};

struct SimResult {
  SimConfig config;  // resolved
  std::vector<ReplicationResult> replications;
  std::vector<DemandCounts> pooled;  // per demand, summed over replications
  DemandCounts pooled_network;
  double network_blocking = 0.0;  // mean of replication values
  double standard_error = 0.0;    // of that mean, across replications
  double half_width = 0.0;        // 95% Student-t half-width
};

/// Discrete-event loss-network simulation of shortest-path routed requests.
/// Replications are independent and may run in parallel; each uses its own
/// streams derived from (seed, replication), so results do not depend on the
/// schedule. The arrival stream is independent of the architectures, so two
/// runs with the same seed offer identical requests.
SimResult simulate(const NetworkGraph& g, std::span<const DemandSpec> demands,
                   const ArchitectureMap& archs, const SimConfig& config);

}  // namespace eonspectra
