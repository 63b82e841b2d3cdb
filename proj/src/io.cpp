#include "eonspectra/io.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "eonspectra/error.hpp"

namespace eonspectra {

using nlohmann::json;

namespace {

json parse(std::string_view document, const char* what) {
  try {
    return json::parse(document);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::parse, std::string(what) + ": " + e.what());
  }
}

std::string node_label(const json& id) {
  if (id.is_string()) return id.get<std::string>();
  if (id.is_number_integer()) return std::to_string(id.get<long long>());
  throw Error(ErrorCode::parse, "node ids must be strings or integers");
}

template <typename T>
T field(const json& obj, const char* key, const char* context) {
  if (!obj.is_object() || !obj.contains(key)) {
    throw Error(ErrorCode::parse, std::string(context) + ": missing '" + key + "'");
  }
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw Error(ErrorCode::parse, std::string(context) + ": bad type for '" + key + "'");
  }
}

double number(const json& obj, const char* key, const char* context) {
  if (!obj.is_object() || !obj.contains(key) || !obj.at(key).is_number()) {
    throw Error(ErrorCode::parse, std::string(context) + ": '" + key + "' must be a number");
  }
  return obj.at(key).get<double>();
}

int integer(const json& obj, const char* key, const char* context) {
  if (!obj.is_object() || !obj.contains(key) || !obj.at(key).is_number_integer()) {
    throw Error(ErrorCode::parse, std::string(context) + ": '" + key + "' must be an integer");
  }
  return obj.at(key).get<int>();
}

}  // namespace

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::parse, "cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

NetworkGraph load_topology(std::string_view document) {
  const json doc = parse(document, "topology");
  if (!doc.is_object()) throw Error(ErrorCode::parse, "topology must be an object");
  const std::string name = doc.contains("name") ? field<std::string>(doc, "name", "topology")
                                                : std::string("unnamed");
  const int slots = integer(doc, "slot_count", "topology");
  if (!doc.contains("nodes") || !doc.at("nodes").is_array()) {
    throw Error(ErrorCode::parse, "topology: 'nodes' must be an array");
  }
  std::vector<std::string> labels;
  for (const json& id : doc.at("nodes")) labels.push_back(node_label(id));
  NetworkGraph g(name, slots, std::move(labels));

  if (!doc.contains("edges") || !doc.at("edges").is_array()) {
    throw Error(ErrorCode::parse, "topology: 'edges' must be an array");
  }
  for (const json& e : doc.at("edges")) {
    if (!e.is_object() || !e.contains("a") || !e.contains("b")) {
      throw Error(ErrorCode::parse, "topology: every edge needs 'a' and 'b'");
    }
    const NodeId a = g.node_by_label(node_label(e.at("a")));
    const NodeId b = g.node_by_label(node_label(e.at("b")));
    const double w = e.contains("weight") ? number(e, "weight", "edge") : 1.0;
    const bool directed = e.contains("directed") ? field<bool>(e, "directed", "edge") : false;
    g.add_link(a, b, w);
    if (!directed) g.add_link(b, a, w);
  }
  return g;
}

std::vector<DemandSpec> load_demands(std::string_view document, const NetworkGraph& g) {
  const json doc = parse(document, "demands");
  if (!doc.is_array()) throw Error(ErrorCode::parse, "demands must be an array");
  std::vector<DemandSpec> demands;
  for (const json& d : doc) {
    if (!d.is_object() || !d.contains("src") || !d.contains("dst")) {
      throw Error(ErrorCode::parse, "demand: missing 'src' or 'dst'");
    }
    DemandSpec spec;
    spec.src = g.node_by_label(node_label(d.at("src")));
    spec.dst = g.node_by_label(node_label(d.at("dst")));
    spec.rate = number(d, "rate", "demand");
    spec.hold = number(d, "hold", "demand");
    if (!d.contains("slots")) throw Error(ErrorCode::parse, "demand: missing 'slots'");
    const json& s = d.at("slots");
    if (s.is_number_integer()) {
      spec.slots = SlotPmf::fixed(s.get<int>());
    } else if (s.is_array()) {
      std::vector<std::pair<int, double>> entries;
      for (const json& e : s) entries.emplace_back(integer(e, "s", "slot pmf"),
                                                   number(e, "p", "slot pmf"));
      spec.slots = SlotPmf(std::move(entries));
    } else {
      throw Error(ErrorCode::parse, "demand: 'slots' must be an integer or a pmf table");
    }
    validate_demand(g, spec);
    demands.push_back(std::move(spec));
  }
  return demands;
}

ArchitectureMap load_architectures(std::string_view document, const NetworkGraph& g) {
  const json doc = parse(document, "architectures");
  if (!doc.is_object()) throw Error(ErrorCode::parse, "architectures must be an object");
  ArchitectureMap archs(g.node_count());
  for (const auto& [key, value] : doc.items()) {
    const NodeId v = g.node_by_label(key);
    const std::string kind = field<std::string>(value, "kind", "architecture");
    std::string text = kind;
    if (value.contains("n_sc")) {
      text += ":" + std::to_string(integer(value, "n_sc", "architecture"));
    }
    archs[v] = parse_architecture(text);
  }
  return archs;
}

json topology_json(const NetworkGraph& g) {
  json nodes = json::array();
  for (const auto& l : g.labels()) nodes.push_back(l);
  json edges = json::array();
  for (const Link& l : g.links()) {
    edges.push_back({{"a", g.label(l.tail)}, {"b", g.label(l.head)}, {"weight", l.weight},
                     {"directed", true}});
  }
  return {{"name", g.name()}, {"slot_count", g.slot_count()}, {"nodes", nodes}, {"edges", edges}};
}

json demands_json(const NetworkGraph& g, std::span<const DemandSpec> demands) {
  json out = json::array();
  for (const DemandSpec& d : demands) {
    json slots;
    if (d.slots.entries().size() == 1) {
      slots = d.slots.entries().front().first;
    } else {
      slots = json::array();
      for (const auto& [s, p] : d.slots.entries()) slots.push_back({{"s", s}, {"p", p}});
    }
    out.push_back({{"src", g.label(d.src)}, {"dst", g.label(d.dst)}, {"rate", d.rate},
                   {"hold", d.hold}, {"slots", slots}});
  }
  return out;
}

json architectures_json(const NetworkGraph& g, const ArchitectureMap& archs) {
  json out = json::object();
  for (NodeId v = 0; v < archs.size(); ++v) {
    if (!archs[v].converts()) continue;
    json entry = {{"kind", to_string(archs[v].kind)}};
    if (archs[v].shared()) entry["n_sc"] = archs[v].converters;
    out[g.label(v)] = entry;
  }
  return out;
}

std::string format_number(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  return buf;
}

json analysis_json(const NetworkModel& model, const AnalysisResult& result) {
  const NetworkGraph& g = model.graph;
  json demands = json::array();
  for (const RoutedPath& r : model.routes) {
    const DemandSpec& d = model.demands[r.demand];
    json path = json::array();
    for (NodeId v : r.nodes) path.push_back(g.label(v));
    demands.push_back({{"src", g.label(d.src)}, {"dst", g.label(d.dst)}, {"hops", r.hops()},
                       {"path", path}, {"blocking", result.demand_blocking[r.demand]}});
  }
  json links = json::array();
  for (const Link& l : g.links()) {
    links.push_back({{"link", l.id}, {"tail", g.label(l.tail)}, {"head", g.label(l.head)},
                     {"phi", result.phi.empty() ? 1.0 : result.phi[l.id]}});
  }
  return {{"converged", result.converged},
          {"iterations", result.iterations},
          {"network_blocking", result.network_blocking},
          {"traffic", network_traffic(g, model.demands, model.routes)},
          {"trajectory", result.trajectory},
          {"clamp_breaches", result.clamp_breaches},
          {"warnings", result.warnings},
          {"demands", demands},
          {"links", links}};
}

void write_analysis_demands_csv(std::ostream& out, const NetworkModel& model,
                                const AnalysisResult& result) {
  const NetworkGraph& g = model.graph;
  out << "src,dst,hops,blocking\n";
  for (const RoutedPath& r : model.routes) {
    const DemandSpec& d = model.demands[r.demand];
    out << g.label(d.src) << ',' << g.label(d.dst) << ',' << r.hops() << ','
        << format_number(result.demand_blocking[r.demand]) << '\n';
  }
}

void write_analysis_links_csv(std::ostream& out, const NetworkModel& model,
                              const AnalysisResult& result) {
  const NetworkGraph& g = model.graph;
  out << "link,tail,head,phi\n";
  for (const Link& l : g.links()) {
    out << l.id << ',' << g.label(l.tail) << ',' << g.label(l.head) << ','
        << format_number(result.phi.empty() ? 1.0 : result.phi[l.id]) << '\n';
  }
}

void write_analysis_summary_csv(std::ostream& out, const NetworkModel& model,
                                const AnalysisResult& result) {
  out << "converged,iterations,network_blocking,traffic,clamp_breaches\n"
      << (result.converged ? "true" : "false") << ',' << result.iterations << ','
      << format_number(result.network_blocking) << ','
      << format_number(network_traffic(model.graph, model.demands, model.routes)) << ','
      << result.clamp_breaches << '\n';
}

void write_simulation_csv(std::ostream& out, const SimResult& result) {
  out << "replication,offered,blocked,blocking,half_width\n";
  for (std::size_t r = 0; r < result.replications.size(); ++r) {
    const DemandCounts& c = result.replications[r].network;
    out << r << ',' << c.offered << ',' << c.blocked << ',' << format_number(c.blocking())
        << ",\n";
  }
  out << "mean," << result.pooled_network.offered << ',' << result.pooled_network.blocked << ','
      << format_number(result.network_blocking) << ',' << format_number(result.half_width)
      << '\n';
}

void write_simulation_demands_csv(std::ostream& out, const NetworkGraph& g,
                                  std::span<const DemandSpec> demands, const SimResult& result) {
  out << "replication,src,dst,offered,blocked,blocking\n";
  auto row = [&](const std::string& rep, const DemandSpec& d, const DemandCounts& c) {
    out << rep << ',' << g.label(d.src) << ',' << g.label(d.dst) << ',' << c.offered << ','
        << c.blocked << ',' << format_number(c.blocking()) << '\n';
  };
  for (std::size_t r = 0; r < result.replications.size(); ++r) {
    for (std::size_t i = 0; i < demands.size(); ++i) {
      row(std::to_string(r), demands[i], result.replications[r].demands[i]);
    }
  }
  for (std::size_t i = 0; i < demands.size(); ++i) row("pooled", demands[i], result.pooled[i]);
}

json simulation_json(const NetworkGraph& g, std::span<const DemandSpec> demands,
                     const SimResult& result) {
  json reps = json::array();
  for (const ReplicationResult& r : result.replications) {
    reps.push_back({{"offered", r.network.offered},
                    {"blocked", r.network.blocked},
                    {"blocking", r.network.blocking()},
                    {"greedy_fallbacks", r.fallback_admissions}});
  }
  json per_demand = json::array();
  for (std::size_t i = 0; i < demands.size(); ++i) {
    per_demand.push_back({{"src", g.label(demands[i].src)},
                          {"dst", g.label(demands[i].dst)},
                          {"offered", result.pooled[i].offered},
                          {"blocked", result.pooled[i].blocked},
                          {"blocking", result.pooled[i].blocking()}});
  }
  return {{"network_blocking", result.network_blocking},
          {"half_width", result.half_width},
          {"standard_error", result.standard_error},
          {"pooled_blocking", result.pooled_network.blocking()},
          {"warmup", result.config.warmup},
          {"horizon", result.config.horizon},
          {"replications", reps},
          {"demands", per_demand}};
}

json placement_json(const NetworkGraph& g, std::span<const NodeArchitecture> inventory,
                    const PlacementResult& result, const PlacementConfig& config,
                    bool exhaustive) {
  json ranked = json::array();
  if (!inventory.empty()) {
    for (std::size_t i : rank_inventory(inventory, g.slot_count(), g.mean_out_degree(),
                                        config.full_converters)) {
      ranked.push_back({{"item", i},
                        {"architecture", to_string(inventory[i])},
                        {"n_eff", n_eff(inventory[i], g.slot_count(), g.mean_out_degree(),
                                        config.full_converters)}});
    }
  }
  json steps = json::array();
  for (const PlacementStep& s : result.steps) {
    json candidates = json::array();
    for (const CandidateScore& c : s.candidates) {
      candidates.push_back({{"node", g.label(c.node)},
                            {"network_blocking", c.network_blocking},
                            {"converged", c.converged}});
    }
    steps.push_back({{"architecture", to_string(s.arch)},
                     {"n_eff", s.n_eff},
                     {"chosen", g.label(s.chosen)},
                     {"network_blocking", s.network_blocking},
                     {"candidates", candidates}});
  }
  json assignment = json::array();
  for (const auto& [node, item] : result.placed) {
    assignment.push_back({{"node", g.label(node)}, {"architecture", to_string(inventory[item])}});
  }
  return {{"method", exhaustive ? "brute_force" : "heuristic"},
          {"ranked_inventory", ranked},
          {"steps", steps},
          {"assignment", assignment},
          {"evaluations", result.evaluations},
          {"baseline_blocking", result.baseline_blocking},
          {"network_blocking", result.network_blocking},
          {"warnings", result.warnings}};
}

void write_placement_csv(std::ostream& out, const NetworkGraph& g, const PlacementResult& result) {
  out << "step,architecture,n_eff,node,blocking,converged,chosen\n";
  out << "0,baseline,,,"
      << format_number(result.baseline_blocking) << ",,\n";
  for (std::size_t k = 0; k < result.steps.size(); ++k) {
    const PlacementStep& s = result.steps[k];
    for (const CandidateScore& c : s.candidates) {
      out << k + 1 << ',' << to_string(s.arch) << ',' << format_number(s.n_eff) << ','
          << g.label(c.node) << ',' << format_number(c.network_blocking) << ','
          << (c.converged ? "true" : "false") << ',' << (c.node == s.chosen ? "true" : "false")
          << '\n';
    }
  }
  if (result.steps.empty()) {
    for (const auto& [node, item] : result.placed) {
      out << "final,item" << item << ",," << g.label(node) << ','
          << format_number(result.network_blocking) << ",,true\n";
    }
  }
}

}  // namespace eonspectra
