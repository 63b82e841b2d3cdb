#include "eonspectra/topology.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <sstream>

#include "eonspectra/error.hpp"

namespace eonspectra {

namespace {

bool same_cost(double a, double b) {
  return std::abs(a - b) <= 1e-12 * std::max({1.0, std::abs(a), std::abs(b)});
}

// Distance from every node to `dst` over the reversed graph.
std::vector<double> distances_to(const NetworkGraph& g, NodeId dst) {
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<std::vector<LinkId>> in(g.node_count());
  for (const Link& l : g.links()) in[l.head].push_back(l.id);

  std::vector<double> dist(g.node_count(), inf);
  using Entry = std::pair<double, NodeId>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> queue;
  dist[dst] = 0.0;
  queue.emplace(0.0, dst);
  while (!queue.empty()) {
    auto [d, v] = queue.top();
    queue.pop();
    if (d > dist[v]) continue;
    for (LinkId id : in[v]) {
      const Link& l = g.link(id);
      const double nd = d + l.weight;
      if (nd < dist[l.tail]) {
        dist[l.tail] = nd;
        queue.emplace(nd, l.tail);
      }
    }
  }
  return dist;
}

}  // namespace

NetworkGraph::NetworkGraph(std::string name, int slot_count,
                           std::vector<std::string> labels)
    : name_(std::move(name)),
      slot_count_(slot_count),
      labels_(std::move(labels)),
      out_(labels_.size()) {
  if (slot_count_ < 1) {
    throw Error(ErrorCode::invalid_argument, "slot_count must be at least 1");
  }
  std::vector<std::string> sorted = labels_;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw Error(ErrorCode::invalid_argument, "duplicate node identifier");
  }
}

LinkId NetworkGraph::add_link(NodeId tail, NodeId head, double weight) {
  if (tail >= node_count() || head >= node_count()) {
    throw Error(ErrorCode::missing_node, "link endpoint is not a node");
  }
  if (tail == head) {
    throw Error(ErrorCode::invalid_argument, "self-loop at node " + labels_[tail]);
  }
  if (!(weight > 0.0) || !std::isfinite(weight)) {
    throw Error(ErrorCode::nonpositive_weight,
                "link " + labels_[tail] + "->" + labels_[head] +
                    " has nonpositive weight");
  }
  if (find_link(tail, head)) {
    throw Error(ErrorCode::duplicate_edge,
                "duplicate link " + labels_[tail] + "->" + labels_[head]);
  }
  const LinkId id = links_.size();
  links_.push_back({id, tail, head, weight});
  out_[tail].push_back(id);
  return id;
}

std::optional<LinkId> NetworkGraph::find_link(NodeId tail, NodeId head) const {
  for (LinkId id : out_.at(tail)) {
    if (links_[id].head == head) return id;
  }
  return std::nullopt;
}

NodeId NetworkGraph::node_by_label(const std::string& label) const {
  auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end()) {
    throw Error(ErrorCode::missing_node, "unknown node '" + label + "'");
  }
  return static_cast<NodeId>(it - labels_.begin());
}

double NetworkGraph::mean_out_degree() const {
  if (labels_.empty()) return 0.0;
  return static_cast<double>(links_.size()) / static_cast<double>(labels_.size());
}

SlotPmf::SlotPmf(std::vector<std::pair<int, double>> entries)
    : entries_(std::move(entries)) {
  std::sort(entries_.begin(), entries_.end());
  double total = 0.0;
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const auto& [s, p] = entries_[i];
    if (s < 1) throw Error(ErrorCode::invalid_argument, "slot count must be >= 1");
    if (!(p >= 0.0) || p > 1.0) {
      throw Error(ErrorCode::invalid_argument, "slot probability outside [0,1]");
    }
    if (i > 0 && entries_[i - 1].first == s) {
      throw Error(ErrorCode::invalid_argument, "repeated slot count in pmf");
    }
    total += p;
  }
  if (entries_.empty() || std::abs(total - 1.0) > 1e-12) {
    throw Error(ErrorCode::invalid_argument, "slot pmf must sum to 1");
  }
}

double SlotPmf::mean() const {
  double m = 0.0;
  for (const auto& [s, p] : entries_) m += s * p;
  return m;
}

int SlotPmf::max_slots() const {
  return entries_.empty() ? 0 : entries_.back().first;
}

void validate_demand(const NetworkGraph& g, const DemandSpec& d) {
  if (d.src >= g.node_count() || d.dst >= g.node_count()) {
    throw Error(ErrorCode::missing_node, "demand endpoint is not a node");
  }
  if (d.src == d.dst) {
    throw Error(ErrorCode::invalid_argument,
                "demand source equals destination (" + g.label(d.src) + ")");
  }
  if (!(d.rate >= 0.0) || !std::isfinite(d.rate)) {
    throw Error(ErrorCode::invalid_argument, "demand rate must be >= 0");
  }
  if (!(d.hold > 0.0) || !std::isfinite(d.hold)) {
    throw Error(ErrorCode::invalid_argument, "demand hold time must be > 0");
  }
  if (d.slots.entries().empty()) {
    throw Error(ErrorCode::invalid_argument, "demand has an empty slot pmf");
  }
  if (d.slots.max_slots() > g.slot_count()) {
    throw Error(ErrorCode::invalid_argument,
                "demand requests more slots than a fiber carries");
  }
}

RoutedPath shortest_path(const NetworkGraph& g, NodeId src, NodeId dst) {
  if (src >= g.node_count() || dst >= g.node_count()) {
    throw Error(ErrorCode::missing_node, "path endpoint is not a node");
  }
  if (src == dst) {
    throw Error(ErrorCode::invalid_argument, "path source equals destination");
  }
  const std::vector<double> dist = distances_to(g, dst);
  if (!std::isfinite(dist[src])) {
    throw Error(ErrorCode::unreachable,
                "no path from " + g.label(src) + " to " + g.label(dst));
  }

  // Walking forward and always taking the smallest next node that stays on
  // some shortest path yields the lexicographically smallest sequence.
  RoutedPath path;
  path.nodes.push_back(src);
  NodeId at = src;
  while (at != dst) {
    std::optional<LinkId> best;
    for (LinkId id : g.out_links(at)) {
      const Link& l = g.link(id);
      if (!std::isfinite(dist[l.head])) continue;
      if (!same_cost(l.weight + dist[l.head], dist[at])) continue;
      if (!best || l.head < g.link(*best).head) best = id;
    }
    if (!best || path.nodes.size() > g.node_count()) {
      throw Error(ErrorCode::internal, "shortest path walk failed");
    }
    path.links.push_back(*best);
    at = g.link(*best).head;
    path.nodes.push_back(at);
  }
  return path;
}

std::vector<RoutedPath> route_all(const NetworkGraph& g,
                                  std::span<const DemandSpec> demands) {
  std::vector<RoutedPath> routes;
  routes.reserve(demands.size());
  std::vector<std::string> unreachable;
  for (std::size_t i = 0; i < demands.size(); ++i) {
    try {
      RoutedPath p = shortest_path(g, demands[i].src, demands[i].dst);
      p.demand = i;
      routes.push_back(std::move(p));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::unreachable) throw;
      unreachable.push_back(g.label(demands[i].src) + "->" + g.label(demands[i].dst));
    }
  }
  if (!unreachable.empty()) {
    std::ostringstream msg;
    msg << "unreachable demands:";
    for (const auto& u : unreachable) msg << ' ' << u;
    throw Error(ErrorCode::unreachable, msg.str());
  }
  return routes;
}

CrossingStats crossing_stats(const NetworkGraph& g,
                             std::span<const DemandSpec> demands,
                             std::span<const RoutedPath> routes,
                             CrossingWeight weight) {
  CrossingStats stats;
  stats.port_paths.assign(g.link_count(), 0);
  stats.port_slots.assign(g.link_count(), 0.0);
  stats.node_paths.assign(g.node_count(), 0);
  stats.node_slots.assign(g.node_count(), 0.0);
  stats.out_degree.resize(g.node_count());
  for (NodeId v = 0; v < g.node_count(); ++v) {
    stats.out_degree[v] = static_cast<int>(g.out_links(v).size());
  }

  for (const RoutedPath& route : routes) {
    const DemandSpec& d = demands[route.demand];
    const double s = weight == CrossingWeight::mean_slots
                         ? d.mean_slots()
                         : d.erlangs() * d.mean_slots();
    // Interior nodes are nodes[1..H-1]; the exit port of nodes[h] is links[h].
    for (std::size_t h = 1; h < route.hops(); ++h) {
      const NodeId v = route.nodes[h];
      const LinkId port = route.links[h];
      stats.node_paths[v] += 1;
      stats.node_slots[v] += s;
      stats.port_paths[port] += 1;
      stats.port_slots[port] += s;
    }
  }
  return stats;
}

double network_traffic(const NetworkGraph& g, std::span<const DemandSpec> demands,
                       std::span<const RoutedPath> routes) {
  if (g.link_count() == 0) return 0.0;
  double total = 0.0;
  for (const RoutedPath& route : routes) {
    const DemandSpec& d = demands[route.demand];
    total += d.erlangs() * d.mean_slots() * static_cast<double>(route.hops());
  }
  return total / (static_cast<double>(g.link_count()) * g.slot_count());
}

}  // namespace eonspectra
