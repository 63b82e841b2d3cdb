#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "eonspectra/topology.hpp"

namespace eonspectra {

enum class ArchKind { simple, full, share_per_link, share_per_node };

/// Converter capability of one cross-connect. `converters` is the size of
/// the shared SCB bank (per output port for share_per_link, per node for
/// share_per_node); it is ignored for simple and full.
struct NodeArchitecture {
  ArchKind kind = ArchKind::simple;
  int converters = 0;

  static NodeArchitecture simple() { return {}; }
  static NodeArchitecture full() { return {ArchKind::full, 0}; }
  static NodeArchitecture share_per_link(int n) { return {ArchKind::share_per_link, n}; }
  static NodeArchitecture share_per_node(int n) { return {ArchKind::share_per_node, n}; }

  bool converts() const { return kind != ArchKind::simple; }
  bool shared() const {
    return kind == ArchKind::share_per_link || kind == ArchKind::share_per_node;
  }
  friend bool operator==(const NodeArchitecture&, const NodeArchitecture&) = default;
};

const char* to_string(ArchKind kind);
// "simple", "full", "share_per_link:3", "share_per_node:1".
std::string to_string(const NodeArchitecture& arch);
// Accepts the forms produced by to_string; shared kinds default to one SCB.
NodeArchitecture parse_architecture(const std::string& text);
// Throws Error(invalid_argument) when a shared kind has fewer than one SCB.
void validate_architecture(const NodeArchitecture& arch);

// Indexed by NodeId.
using ArchitectureMap = std::vector<NodeArchitecture>;

inline ArchitectureMap uniform_architecture(std::size_t nodes, NodeArchitecture arch) {
  return ArchitectureMap(nodes, arch);
}

// Per-link probability that a slot is free, indexed by LinkId.
using LinkFreeProbs = std::vector<double>;

/// Converter positions along a routed path using 1-based node positions:
/// points = (1, interior converter positions..., H+1).
struct ConverterLayout {
  std::vector<int> points;

  static ConverterLayout endpoints_only(int hops) { return {{1, hops + 1}}; }
  int hops() const { return points.back() - 1; }
  std::size_t converters() const { return points.size() - 2; }
  friend bool operator==(const ConverterLayout&, const ConverterLayout&) = default;
};

// Throws Error(invalid_argument) unless strictly increasing with fixed endpoints.
void validate_layout(const ConverterLayout& layout);

/// Interior path positions whose node converts. Endpoints never count.
ConverterLayout converter_layout(const RoutedPath& path, const ArchitectureMap& archs);

inline constexpr std::size_t kMaxLayoutConverters = 20;

/// All sub-layouts of `layout` (endpoints kept), ordered by number of
/// interior converters and then lexicographically.
std::vector<ConverterLayout> power_set(const ConverterLayout& layout);

/// Product over segments [l_k, l_{k+1}) of run_prob(S, F, prod of segment phi).
/// `hop_phis` holds one value per hop.
double segment_success(int slots, int fiber_slots, const ConverterLayout& layout,
                       std::span<const double> hop_phis);

/// Success probabilities U_l for every sub-layout l of a fixed layout.
/// Sub-layouts are addressed by bitmask over the layout's interior points
/// (bit i set: the i-th interior converter participates).
class LayoutRecursion {
 public:
  LayoutRecursion(int slots, int fiber_slots, ConverterLayout layout,
                  std::span<const double> hop_phis);

  const ConverterLayout& layout() const { return layout_; }
  std::size_t subsets() const { return u_.size(); }
  ConverterLayout sub_layout(std::uint32_t mask) const;

  // Segment success of the sub-layout.
  double success(std::uint32_t mask) const { return success_[mask]; }
  // U value of the sub-layout.
  double u(std::uint32_t mask) const { return u_[mask]; }
  // Number of sub-layouts whose ramp argument was negative.
  int clamped() const { return clamped_; }

 private:
  ConverterLayout layout_;
  std::vector<double> success_;
  std::vector<double> u_;
  int clamped_ = 0;
};

/// U value of `layout` itself (its own top-level recursion).
double u_value(int slots, int fiber_slots, const ConverterLayout& layout,
               std::span<const double> hop_phis);

/// Probability that at least one SCB of a shared bank is free, given
/// `paths` contending transit paths needing `total_slots` slots in total and
/// a per-slot free probability `phi` on the contended link(s). No contending
/// paths means the bank is always available.
double share_per_link_availability(int converters, int paths, double total_slots,
                                   double phi);
double share_per_node_availability(int converters, int paths, double total_slots,
                                   double phi);

/// Transit-weighted mean free probability over a node's output ports. A node
/// with no transit paths uses the unweighted mean of its ports (1 if none).
double phi_node(const NetworkGraph& g, const CrossingStats& stats,
                const LinkFreeProbs& phi, NodeId node);

/// Availability of the converter at `node` for a path leaving through
/// `exit_link`. Full: 1. Simple: 0.
double converter_availability(const NetworkGraph& g, const ArchitectureMap& archs,
                              const CrossingStats& stats, const LinkFreeProbs& phi,
                              NodeId node, LinkId exit_link);

/// Product of converter availabilities over the interior points of `layout`.
double v_value(const ConverterLayout& layout, const RoutedPath& path,
               const NetworkGraph& g, const ArchitectureMap& archs,
               const CrossingStats& stats, const LinkFreeProbs& phi);

struct LightpathBlocking {
  double blocking = 1.0;  // clamped to [0,1]
  double raw = 1.0;       // 1 - sum U*V before clamping
  int ramp_clamps = 0;

  bool clamp_breach() const { return raw < -1e-9 || raw > 1.0 + 1e-9; }
};

/// Blocking of an S-slot request on `path`: 1 - sum over sub-layouts of the
/// path's converter layout of U_l(S) * V_l. Requests wider than the fiber
/// are always blocked.
LightpathBlocking lightpath_blocking_detail(int slots, const RoutedPath& path,
                                            const NetworkGraph& g,
                                            const ArchitectureMap& archs,
                                            const LinkFreeProbs& phi,
                                            const CrossingStats& stats);

inline double lightpath_blocking(int slots, const RoutedPath& path, const NetworkGraph& g,
                                 const ArchitectureMap& archs, const LinkFreeProbs& phi,
                                 const CrossingStats& stats) {
  return lightpath_blocking_detail(slots, path, g, archs, phi, stats).blocking;
}

}  // namespace eonspectra
