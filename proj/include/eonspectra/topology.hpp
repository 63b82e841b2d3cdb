#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace eonspectra {

// Dense node index, 0-based internally. File labels are kept on the graph
// and used for every user-facing output.
using NodeId = std::size_t;
using LinkId = std::size_t;

struct Link {
  LinkId id = 0;
  NodeId tail = 0;
  NodeId head = 0;
  double weight = 1.0;
};

/// Directed fiber graph. Every link carries the same number of spectrum
/// slots. Construction enforces the structural invariants: positive weights,
/// no self-loops and at most one link per ordered node pair.
class NetworkGraph {
 public:
  NetworkGraph(std::string name, int slot_count, std::vector<std::string> labels);

  LinkId add_link(NodeId tail, NodeId head, double weight);

  const std::string& name() const { return name_; }
  int slot_count() const { return slot_count_; }
  std::size_t node_count() const { return labels_.size(); }
  std::size_t link_count() const { return links_.size(); }

  const std::vector<Link>& links() const { return links_; }
  const Link& link(LinkId id) const { return links_.at(id); }
  std::span<const LinkId> out_links(NodeId node) const { return out_.at(node); }
  std::optional<LinkId> find_link(NodeId tail, NodeId head) const;

  const std::string& label(NodeId node) const { return labels_.at(node); }
  const std::vector<std::string>& labels() const { return labels_; }
  // Throws Error(missing_node) for unknown labels.
  NodeId node_by_label(const std::string& label) const;

  // Mean number of output ports over all nodes.
  double mean_out_degree() const;

 private:
  std::string name_;
  int slot_count_;
  std::vector<std::string> labels_;
  std::vector<Link> links_;
  std::vector<std::vector<LinkId>> out_;
};

/// Finite slot-count distribution, sorted by slot count.
class SlotPmf {
 public:
  SlotPmf() = default;
  explicit SlotPmf(std::vector<std::pair<int, double>> entries);
  static SlotPmf fixed(int slots) { return SlotPmf({{slots, 1.0}}); }

  const std::vector<std::pair<int, double>>& entries() const { return entries_; }
  double mean() const;
  int max_slots() const;

 private:
  std::vector<std::pair<int, double>> entries_;
};

struct DemandSpec {
  NodeId src = 0;
  NodeId dst = 0;
  double rate = 0.0;  // Poisson arrivals per unit time
  double hold = 1.0;  // mean exponential holding time
  SlotPmf slots;

  double mean_slots() const { return slots.mean(); }
  double erlangs() const { return rate * hold; }
};

// Checks the demand invariants against a graph; throws Error(invalid_argument).
// Zero rates are accepted: such a demand never offers a request.
void validate_demand(const NetworkGraph& g, const DemandSpec& demand);

struct RoutedPath {
  std::size_t demand = 0;
  std::vector<NodeId> nodes;  // src ... dst, size hops() + 1
  std::vector<LinkId> links;  // hop h (0-based) leaves nodes[h]

  std::size_t hops() const { return links.size(); }
};

/// Minimum-weight simple path. Among equal-weight paths the lexicographically
/// smallest node sequence wins.
RoutedPath shortest_path(const NetworkGraph& g, NodeId src, NodeId dst);

/// Routes every demand; RoutedPath::demand is the index into `demands`.
/// Throws Error(unreachable) listing every unroutable pair.
std::vector<RoutedPath> route_all(const NetworkGraph& g,
                                  std::span<const DemandSpec> demands);

// What a crossing demand contributes to the S sums.
enum class CrossingWeight {
  mean_slots,  // S_sd
  carried_load,  // R_sd * T_sd * S_sd
};

/// Transit statistics per output port and per node. Only demands for which
/// the node is strictly interior to the route are counted.
struct CrossingStats {
  std::vector<int> port_paths;      // per link: transit demands leaving via it
  std::vector<double> port_slots;   // per link: summed slots of those demands
  std::vector<int> node_paths;      // per node: transit demands crossing it
  std::vector<double> node_slots;   // per node: summed slots
  std::vector<int> out_degree;      // per node
};

CrossingStats crossing_stats(const NetworkGraph& g,
                             std::span<const DemandSpec> demands,
                             std::span<const RoutedPath> routes,
                             CrossingWeight weight = CrossingWeight::mean_slots);

/// Network traffic: sum of R*T*S*hops over demands divided by
/// (directed link count * F).
double network_traffic(const NetworkGraph& g, std::span<const DemandSpec> demands,
                       std::span<const RoutedPath> routes);

}  // namespace eonspectra
