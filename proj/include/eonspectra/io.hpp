#pragma once

#include <iosfwd>
#include <json.hpp>
#include <string>
#include <string_view>
#include <vector>

#include "eonspectra/analyzer.hpp"
#include "eonspectra/placement.hpp"
#include "eonspectra/simulator.hpp"
#include "eonspectra/topology.hpp"

namespace eonspectra {

// Reads a whole file; throws Error(parse) when it cannot be opened.
std::string read_file(const std::string& path);

/// Topology document:
///   {"name": str, "slot_count": int, "nodes": [id...],
///    "edges": [{"a": id, "b": id, "weight": num, "directed": bool}...]}
/// Node ids may be strings or integers and become labels in file order.
/// Undirected edges (the default) expand into two directed links.
NetworkGraph load_topology(std::string_view document);

/// Demands document:
///   [{"src": id, "dst": id, "rate": num, "hold": num,
///     "slots": int | [{"s": int, "p": num}...]}...]
std::vector<DemandSpec> load_demands(std::string_view document, const NetworkGraph& g);

/// Architecture document: {"<node id>": {"kind": "...", "n_sc": int}}.
/// Nodes not listed are simple.
ArchitectureMap load_architectures(std::string_view document, const NetworkGraph& g);

nlohmann::json topology_json(const NetworkGraph& g);
nlohmann::json demands_json(const NetworkGraph& g, std::span<const DemandSpec> demands);
nlohmann::json architectures_json(const NetworkGraph& g, const ArchitectureMap& archs);

// Fixed-width-free numeric formatting used by every CSV writer.
std::string format_number(double value);

/// Analysis result as one JSON document.
nlohmann::json analysis_json(const NetworkModel& model, const AnalysisResult& result);
/// CSV tables. demands: src,dst,hops,blocking. links: link,tail,head,phi.
/// summary: converged,iterations,network_blocking,traffic,clamp_breaches.
void write_analysis_demands_csv(std::ostream& out, const NetworkModel& model,
                                const AnalysisResult& result);
void write_analysis_links_csv(std::ostream& out, const NetworkModel& model,
                              const AnalysisResult& result);
void write_analysis_summary_csv(std::ostream& out, const NetworkModel& model,
                                const AnalysisResult& result);

/// Simulation report: one row per replication plus an aggregate row.
/// Columns: replication,offered,blocked,blocking,half_width.
void write_simulation_csv(std::ostream& out, const SimResult& result);
/// Per-demand counts, long format: replication,src,dst,offered,blocked,blocking.
void write_simulation_demands_csv(std::ostream& out, const NetworkGraph& g,
                                  std::span<const DemandSpec> demands, const SimResult& result);
nlohmann::json simulation_json(const NetworkGraph& g, std::span<const DemandSpec> demands,
                               const SimResult& result);

/// Placement report.
nlohmann::json placement_json(const NetworkGraph& g, std::span<const NodeArchitecture> inventory,
                              const PlacementResult& result, const PlacementConfig& config,
                              bool exhaustive);
/// Per-step candidate table: step,architecture,n_eff,node,blocking,converged,chosen.
void write_placement_csv(std::ostream& out, const NetworkGraph& g, const PlacementResult& result);

}  // namespace eonspectra
