#include "eonspectra/lightpath.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

#include "eonspectra/error.hpp"
#include "eonspectra/runprob.hpp"

namespace eonspectra {

namespace {

// sum_{k=0}^{min(n_sc-1, n)} C(n,k) (1-p)^k p^(n-k), p = phi^(s/n)
double bank_availability(int converters, int paths, double total_slots, double phi) {
  if (converters < 1) {
    throw Error(ErrorCode::invalid_argument, "shared bank needs at least one SCB");
  }
  if (paths < 0 || total_slots < 0.0) {
    throw Error(ErrorCode::invalid_argument, "negative crossing statistics");
  }
  phi = checked_probability(phi, "free-slot probability");
  if (paths == 0 || converters > paths) return 1.0;

  const double mean_slots = total_slots / paths;
  const double no_conversion = std::pow(phi, mean_slots);
  const double needs_conversion = 1.0 - no_conversion;
  const int top = std::min(converters - 1, paths);
  long double sum = 0.0L;
  long double binom = 1.0L;
  for (int k = 0; k <= top; ++k) {
    if (k > 0) binom = binom * (paths - k + 1) / k;
    sum += binom * std::pow(static_cast<long double>(needs_conversion), k) *
           std::pow(static_cast<long double>(no_conversion), paths - k);
  }
  const double v = static_cast<double>(sum);
  return std::clamp(v, 0.0, 1.0);
}

}  // namespace

const char* to_string(ArchKind kind) {
  switch (kind) {
    case ArchKind::simple: return "simple";
    case ArchKind::full: return "full";
    case ArchKind::share_per_link: return "share_per_link";
    case ArchKind::share_per_node: return "share_per_node";
  }
  return "simple";
}

std::string to_string(const NodeArchitecture& arch) {
  std::string s = to_string(arch.kind);
  if (arch.shared()) s += ":" + std::to_string(arch.converters);
  return s;
}

NodeArchitecture parse_architecture(const std::string& text) {
  const auto colon = text.find(':');
  const std::string kind = text.substr(0, colon);
  int n = 1;
  if (colon != std::string::npos) {
    try {
      std::size_t used = 0;
      n = std::stoi(text.substr(colon + 1), &used);
      if (used != text.size() - colon - 1) throw std::invalid_argument(text);
    } catch (const std::exception&) {
      throw Error(ErrorCode::parse, "bad SCB count in '" + text + "'");
    }
  }
  NodeArchitecture arch;
  if (kind == "simple") {
    arch = NodeArchitecture::simple();
  } else if (kind == "full") {
    arch = NodeArchitecture::full();
  } else if (kind == "share_per_link") {
    arch = NodeArchitecture::share_per_link(n);
  } else if (kind == "share_per_node") {
    arch = NodeArchitecture::share_per_node(n);
  } else {
    throw Error(ErrorCode::parse, "unknown architecture '" + text + "'");
  }
  if (colon != std::string::npos && !arch.shared()) {
    throw Error(ErrorCode::parse, "SCB count only applies to shared kinds: '" + text + "'");
  }
  validate_architecture(arch);
  return arch;
}

void validate_architecture(const NodeArchitecture& arch) {
  if (arch.shared() && arch.converters < 1) {
    throw Error(ErrorCode::invalid_argument, "shared architecture needs n_sc >= 1");
  }
}

void validate_layout(const ConverterLayout& layout) {
  const auto& p = layout.points;
  if (p.size() < 2 || p.front() != 1 || p.back() < 2) {
    throw Error(ErrorCode::invalid_argument, "layout must run from 1 to H+1");
  }
  for (std::size_t i = 1; i < p.size(); ++i) {
    if (p[i] <= p[i - 1]) {
      throw Error(ErrorCode::invalid_argument, "layout must be strictly increasing");
    }
  }
}

ConverterLayout converter_layout(const RoutedPath& path, const ArchitectureMap& archs) {
  const int hops = static_cast<int>(path.hops());
  ConverterLayout layout;
  layout.points.push_back(1);
  for (int pos = 2; pos <= hops; ++pos) {
    const NodeId v = path.nodes[static_cast<std::size_t>(pos - 1)];
    if (v < archs.size() && archs[v].converts()) layout.points.push_back(pos);
  }
  layout.points.push_back(hops + 1);
  return layout;
}

std::vector<ConverterLayout> power_set(const ConverterLayout& layout) {
  validate_layout(layout);
  const std::size_t n = layout.converters();
  if (n > kMaxLayoutConverters) {
    throw Error(ErrorCode::guard_exceeded, "too many converters on one path");
  }
  std::vector<ConverterLayout> out;
  out.reserve(std::size_t{1} << n);
  for (std::uint32_t mask = 0; mask < (std::uint32_t{1} << n); ++mask) {
    ConverterLayout sub;
    sub.points.push_back(1);
    for (std::size_t i = 0; i < n; ++i) {
      if (mask & (std::uint32_t{1} << i)) sub.points.push_back(layout.points[i + 1]);
    }
    sub.points.push_back(layout.points.back());
    out.push_back(std::move(sub));
  }
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.points.size() != b.points.size()) return a.points.size() < b.points.size();
    return a.points < b.points;
  });
  return out;
}

double segment_success(int slots, int fiber_slots, const ConverterLayout& layout,
                       std::span<const double> hop_phis) {
  validate_layout(layout);
  if (static_cast<std::size_t>(layout.hops()) != hop_phis.size()) {
    throw Error(ErrorCode::invalid_argument, "one free probability per hop required");
  }
  double product = 1.0;
  for (std::size_t k = 0; k + 1 < layout.points.size(); ++k) {
    double rho = 1.0;
    for (int h = layout.points[k]; h < layout.points[k + 1]; ++h) {
      rho *= hop_phis[static_cast<std::size_t>(h - 1)];
    }
    product *= run_prob(slots, fiber_slots, rho);
  }
  return product;
}

LayoutRecursion::LayoutRecursion(int slots, int fiber_slots, ConverterLayout layout,
                                 std::span<const double> hop_phis)
    : layout_(std::move(layout)) {
  validate_layout(layout_);
  const std::size_t n = layout_.converters();
  if (n > kMaxLayoutConverters) {
    throw Error(ErrorCode::guard_exceeded, "too many converters on one path");
  }
  if (static_cast<std::size_t>(layout_.hops()) != hop_phis.size()) {
    throw Error(ErrorCode::invalid_argument, "one free probability per hop required");
  }

  // run_prob of every segment between two layout points, so each sub-layout
  // costs only a product of cached values.
  const std::size_t points = layout_.points.size();
  std::vector<double> segment(points * points, 0.0);
  for (std::size_t a = 0; a < points; ++a) {
    double rho = 1.0;
    for (std::size_t b = a + 1; b < points; ++b) {
      for (int h = layout_.points[b - 1]; h < layout_.points[b]; ++h) {
        rho *= hop_phis[static_cast<std::size_t>(h - 1)];
      }
      segment[a * points + b] = run_prob(slots, fiber_slots, rho);
    }
  }

  const std::uint32_t count = std::uint32_t{1} << n;
  success_.assign(count, 0.0);
  u_.assign(count, 0.0);
  for (std::uint32_t mask = 0; mask < count; ++mask) {
    double product = 1.0;
    std::size_t prev = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask & (std::uint32_t{1} << i)) {
        product *= segment[prev * points + (i + 1)];
        prev = i + 1;
      }
    }
    product *= segment[prev * points + (points - 1)];
    success_[mask] = product;

    // Proper subsets are numerically smaller, so they are already final.
    long double below = 0.0L;
    if (mask != 0) {
      for (std::uint32_t sub = (mask - 1) & mask;; sub = (sub - 1) & mask) {
        below += u_[sub];
        if (sub == 0) break;
      }
    }
    const double arg = static_cast<double>(static_cast<long double>(product) - below);
    if (arg < 0.0) ++clamped_;
    u_[mask] = ramp(arg);
  }
}

ConverterLayout LayoutRecursion::sub_layout(std::uint32_t mask) const {
  ConverterLayout sub;
  sub.points.push_back(1);
  for (std::size_t i = 0; i < layout_.converters(); ++i) {
    if (mask & (std::uint32_t{1} << i)) sub.points.push_back(layout_.points[i + 1]);
  }
  sub.points.push_back(layout_.points.back());
  return sub;
}

double u_value(int slots, int fiber_slots, const ConverterLayout& layout,
               std::span<const double> hop_phis) {
  LayoutRecursion rec(slots, fiber_slots, layout, hop_phis);
  return rec.u(static_cast<std::uint32_t>(rec.subsets() - 1));
}

double share_per_link_availability(int converters, int paths, double total_slots,
                                   double phi) {
  return bank_availability(converters, paths, total_slots, phi);
}

double share_per_node_availability(int converters, int paths, double total_slots,
                                   double phi) {
  return bank_availability(converters, paths, total_slots, phi);
}

double phi_node(const NetworkGraph& g, const CrossingStats& stats,
                const LinkFreeProbs& phi, NodeId node) {
  const auto ports = g.out_links(node);
  if (ports.empty()) return 1.0;
  const int crossing = stats.node_paths.at(node);
  double value = 0.0;
  if (crossing > 0) {
    for (LinkId j : ports) {
      value += static_cast<double>(stats.port_paths.at(j)) / crossing * phi.at(j);
    }
  } else {
    for (LinkId j : ports) value += phi.at(j);
    value /= static_cast<double>(ports.size());
  }
  return std::clamp(value, 0.0, 1.0);
}

double converter_availability(const NetworkGraph& g, const ArchitectureMap& archs,
                              const CrossingStats& stats, const LinkFreeProbs& phi,
                              NodeId node, LinkId exit_link) {
  const NodeArchitecture& arch = archs.at(node);
  switch (arch.kind) {
    case ArchKind::simple:
      return 0.0;
    case ArchKind::full:
      return 1.0;
    case ArchKind::share_per_link:
      return share_per_link_availability(arch.converters, stats.port_paths.at(exit_link),
                                         stats.port_slots.at(exit_link), phi.at(exit_link));
    case ArchKind::share_per_node:
      return share_per_node_availability(arch.converters, stats.node_paths.at(node),
                                         stats.node_slots.at(node),
                                         phi_node(g, stats, phi, node));
  }
  return 0.0;
}

double v_value(const ConverterLayout& layout, const RoutedPath& path,
               const NetworkGraph& g, const ArchitectureMap& archs,
               const CrossingStats& stats, const LinkFreeProbs& phi) {
  validate_layout(layout);
  double product = 1.0;
  for (std::size_t k = 1; k + 1 < layout.points.size(); ++k) {
    const auto pos = static_cast<std::size_t>(layout.points[k] - 1);
    product *= converter_availability(g, archs, stats, phi, path.nodes.at(pos),
                                      path.links.at(pos));
  }
  return product;
}

LightpathBlocking lightpath_blocking_detail(int slots, const RoutedPath& path,
                                            const NetworkGraph& g,
                                            const ArchitectureMap& archs,
                                            const LinkFreeProbs& phi,
                                            const CrossingStats& stats) {
  LightpathBlocking result;
  if (slots > g.slot_count()) return result;

  std::vector<double> hop_phis(path.hops());
  for (std::size_t h = 0; h < path.hops(); ++h) {
    hop_phis[h] = phi.at(path.links[h]);
  }
  const ConverterLayout layout = converter_layout(path, archs);
  const LayoutRecursion rec(slots, g.slot_count(), layout, hop_phis);

  std::vector<double> availability(layout.converters());
  for (std::size_t i = 0; i < layout.converters(); ++i) {
    const auto pos = static_cast<std::size_t>(layout.points[i + 1] - 1);
    availability[i] =
        converter_availability(g, archs, stats, phi, path.nodes[pos], path.links[pos]);
  }

  long double established = 0.0L;
  for (std::uint32_t mask = 0; mask < rec.subsets(); ++mask) {
    double v = 1.0;
    for (std::size_t i = 0; i < availability.size(); ++i) {
      if (mask & (std::uint32_t{1} << i)) v *= availability[i];
    }
    established += static_cast<long double>(rec.u(mask)) * v;
  }
  result.raw = static_cast<double>(1.0L - established);
  result.blocking = std::clamp(result.raw, 0.0, 1.0);
  result.ramp_clamps = rec.clamped();
  return result;
}

}  // namespace eonspectra
