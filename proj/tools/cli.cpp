#include "cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>

#include "eonspectra/analyzer.hpp"
#include "eonspectra/error.hpp"
#include "eonspectra/io.hpp"
#include "eonspectra/placement.hpp"
#include "eonspectra/random.hpp"
#include "eonspectra/simulator.hpp"

namespace eonspectra::cli {

using nlohmann::json;

namespace {

struct CommonOptions {
  std::string topology;
  std::string demands;
  std::string arch;
  std::string out;
  std::string format = "csv";
  std::uint64_t seed = 1;
  bool serial = false;
};

struct AnalyzeOptions {
  double epsilon = 1e-6;
  int max_iter = 1000;
  double damping = 1.0;
  bool port_load_weighted = false;
};

struct SimOptions {
  double horizon = -1.0;
  double warmup = -1.0;
  int replications = 1;
  std::string policy = "minimal-conversions";
  std::string trace;
};

struct PlaceOptions {
  std::string converters;
  bool oracle = false;
  double full_nsc = 0.0;
  std::uint64_t guard = 100000;
};

struct SweepOptions {
  std::vector<double> traffic;
  bool with_sim = false;
  std::string settings = "simple,share_per_node:1,share_per_link:1,full";
};

struct GenOptions {
  std::vector<double> rate{0.5, 1.5};
  std::vector<double> hold{0.5, 1.5};
  std::vector<int> slots{1, 4};
  double traffic = -1.0;
};

// Loaded inputs of a run.
struct Inputs {
  std::optional<NetworkGraph> graph;
  std::vector<DemandSpec> demands;
  ArchitectureMap archs;
};

Inputs load_inputs(const CommonOptions& c, bool need_demands) {
  Inputs in;
  in.graph = load_topology(read_file(c.topology));
  if (need_demands) in.demands = load_demands(read_file(c.demands), *in.graph);
  in.archs = c.arch.empty() ? ArchitectureMap(in.graph->node_count())
                            : load_architectures(read_file(c.arch), *in.graph);
  return in;
}

std::string stem_of(const std::string& path) {
  for (const char* ext : {".csv", ".json"}) {
    const std::string e(ext);
    if (path.size() > e.size() && path.compare(path.size() - e.size(), e.size(), e) == 0) {
      return path.substr(0, path.size() - e.size());
    }
  }
  return path;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::parse, "cannot write '" + path + "'");
  f << text;
}

// Main document to --out (or stdout), companions and manifest next to it.
class Emitter {
 public:
  Emitter(const CommonOptions& c, std::ostream& out) : common_(c), out_(out) {}

  void main(const std::string& text) {
    if (common_.out.empty()) {
      out_ << text;
    } else {
      write_text(common_.out, text);
    }
  }
  void companion(const std::string& suffix, const std::string& text) {
    if (!common_.out.empty()) write_text(stem_of(common_.out) + suffix, text);
  }
  void manifest(const json& doc) { companion(".manifest.json", doc.dump(2) + "\n"); }

 private:
  const CommonOptions& common_;
  std::ostream& out_;
};

json manifest(const std::string& command, const std::vector<std::string>& args,
              const CommonOptions& c, const Inputs& in, json options) {
  options["seed"] = c.seed;
  options["format"] = c.format;
  options["serial"] = c.serial;
  json inputs = {{"topology", topology_json(*in.graph)},
                 {"architectures", architectures_json(*in.graph, in.archs)}};
  if (!c.demands.empty()) inputs["demands"] = demands_json(*in.graph, in.demands);
  return {{"tool", "eonspectra"},
          {"version", EONSPECTRA_VERSION},
          {"command", command},
          {"arguments", args},
          {"options", options},
          {"inputs", inputs}};
}

AnalysisConfig analysis_config(const CommonOptions& c, const AnalyzeOptions& a) {
  AnalysisConfig cfg;
  cfg.epsilon = a.epsilon;
  cfg.max_iter = a.max_iter;
  cfg.damping = a.damping;
  cfg.seed = c.seed;
  cfg.crossing_weight =
      a.port_load_weighted ? CrossingWeight::carried_load : CrossingWeight::mean_slots;
  cfg.execution = c.serial ? Execution::serial : Execution::parallel;
  validate(cfg);
  return cfg;
}

json analysis_options(const AnalysisConfig& cfg) {
  return {{"epsilon", cfg.epsilon},
          {"max_iter", cfg.max_iter},
          {"damping", cfg.damping},
          {"port_load_weighted", cfg.crossing_weight == CrossingWeight::carried_load}};
}

SimConfig sim_config(const CommonOptions& c, const SimOptions& s) {
  SimConfig cfg;
  cfg.seed = c.seed;
  cfg.horizon = s.horizon;
  cfg.warmup = s.warmup;
  cfg.replications = s.replications;
  cfg.policy = parse_policy(s.policy);
  cfg.execution = c.serial ? Execution::serial : Execution::parallel;
  return cfg;
}

json sim_options(const SimConfig& cfg) {
  return {{"horizon", cfg.horizon},
          {"warmup", cfg.warmup},
          {"replications", cfg.replications},
          {"policy", to_string(cfg.policy)}};
}

void check_format(const CommonOptions& c) {
  if (c.format != "csv" && c.format != "json") {
    throw Error(ErrorCode::invalid_argument, "--format must be csv or json");
  }
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep)) {
    if (!item.empty()) parts.push_back(item);
  }
  return parts;
}

int run_analyze(const std::vector<std::string>& args, const CommonOptions& c,
                const AnalyzeOptions& a, std::ostream& out, std::ostream& err) {
  check_format(c);
  const AnalysisConfig cfg = analysis_config(c, a);
  Inputs in = load_inputs(c, true);
  const NetworkModel model(*in.graph, in.demands, cfg.crossing_weight);
  const AnalysisResult result = fixed_point(model, in.archs, cfg);
  for (const auto& w : result.warnings) err << "warning: " << w << '\n';

  Emitter emit(c, out);
  if (c.format == "json") {
    emit.main(analysis_json(model, result).dump(2) + "\n");
  } else {
    std::ostringstream demands, links, summary;
    write_analysis_demands_csv(demands, model, result);
    write_analysis_links_csv(links, model, result);
    write_analysis_summary_csv(summary, model, result);
    emit.main(demands.str());
    emit.companion(".links.csv", links.str());
    emit.companion(".summary.csv", summary.str());
  }
  emit.manifest(manifest("analyze", args, c, in, analysis_options(cfg)));
  return result.converged ? kOk : kNotConverged;
}

int run_simulate(const std::vector<std::string>& args, const CommonOptions& c,
                 const SimOptions& s, std::ostream& out, std::ostream& err) {
  check_format(c);
  Inputs in = load_inputs(c, true);
  SimConfig cfg = sim_config(c, s);
  std::ofstream trace;
  if (!s.trace.empty()) {
    trace.open(s.trace, std::ios::binary);
    if (!trace) throw Error(ErrorCode::parse, "cannot write '" + s.trace + "'");
    cfg.trace = &trace;
  }
  const SimResult result = simulate(*in.graph, in.demands, in.archs, cfg);
  std::uint64_t fallbacks = 0;
  for (const auto& r : result.replications) fallbacks += r.fallback_admissions;
  if (fallbacks > 0) err << "note: " << fallbacks << " admissions used greedy splitting\n";

  Emitter emit(c, out);
  if (c.format == "json") {
    emit.main(simulation_json(*in.graph, in.demands, result).dump(2) + "\n");
  } else {
    std::ostringstream main, demands;
    write_simulation_csv(main, result);
    write_simulation_demands_csv(demands, *in.graph, in.demands, result);
    emit.main(main.str());
    emit.companion(".demands.csv", demands.str());
  }
  emit.manifest(manifest("simulate", args, c, in, sim_options(result.config)));
  return kOk;
}

int run_place(const std::vector<std::string>& args, const CommonOptions& c,
              const AnalyzeOptions& a, const PlaceOptions& p, std::ostream& out,
              std::ostream& err) {
  check_format(c);
  PlacementConfig cfg;
  cfg.analysis = analysis_config(c, a);
  cfg.full_converters = p.full_nsc;
  cfg.brute_force_guard = p.guard;
  cfg.execution = cfg.analysis.execution;

  std::vector<NodeArchitecture> inventory;
  for (const auto& item : split(p.converters, ',')) inventory.push_back(parse_architecture(item));

  Inputs in = load_inputs(c, true);
  const NetworkModel model(*in.graph, in.demands, cfg.analysis.crossing_weight);
  const PlacementResult result = p.oracle
                                     ? place_brute_force(model, in.archs, inventory, cfg)
                                     : place_heuristic(model, in.archs, inventory, cfg);
  for (const auto& w : result.warnings) err << "warning: " << w << '\n';

  Emitter emit(c, out);
  const json report = placement_json(*in.graph, inventory, result, cfg, p.oracle);
  if (c.format == "json") {
    emit.main(report.dump(2) + "\n");
  } else {
    std::ostringstream steps;
    write_placement_csv(steps, *in.graph, result);
    emit.main(steps.str());
    emit.companion(".report.json", report.dump(2) + "\n");
  }
  json options = analysis_options(cfg.analysis);
  options["converters"] = p.converters;
  options["oracle"] = p.oracle;
  options["full_nsc"] = p.full_nsc;
  options["guard"] = p.guard;
  emit.manifest(manifest("place", args, c, in, options));
  return kOk;
}

int run_sweep(const std::vector<std::string>& args, const CommonOptions& c,
              const AnalyzeOptions& a, const SimOptions& s, const SweepOptions& w,
              std::ostream& out, std::ostream& err) {
  check_format(c);
  if (w.traffic.empty()) throw Error(ErrorCode::invalid_argument, "--traffic needs targets");
  for (std::size_t i = 0; i < w.traffic.size(); ++i) {
    if (!(w.traffic[i] > 0.0) || (i > 0 && !(w.traffic[i] > w.traffic[i - 1]))) {
      throw Error(ErrorCode::invalid_argument, "traffic targets must be positive and increasing");
    }
  }
  const AnalysisConfig cfg = analysis_config(c, a);
  Inputs in = load_inputs(c, true);

  std::vector<std::pair<std::string, ArchitectureMap>> settings;
  if (!c.arch.empty()) {
    settings.emplace_back("custom", in.archs);
  } else {
    for (const auto& item : split(w.settings, ',')) {
      settings.emplace_back(item, uniform_architecture(in.graph->node_count(),
                                                       parse_architecture(item)));
    }
  }

  const NetworkModel base(*in.graph, in.demands, cfg.crossing_weight);
  const double base_traffic = network_traffic(base.graph, base.demands, base.routes);
  if (!(base_traffic > 0.0)) {
    throw Error(ErrorCode::invalid_argument, "base demands carry no traffic to scale");
  }

  bool all_converged = true;
  json rows = json::array();
  std::ostringstream csv;
  csv << "traffic,scale,setting,analytic_blocking,converged,iterations,sim_blocking,"
         "sim_half_width\n";
  for (double target : w.traffic) {
    const double scale = target / base_traffic;
    std::vector<DemandSpec> scaled = in.demands;
    for (DemandSpec& d : scaled) d.rate *= scale;
    const NetworkModel model(*in.graph, scaled, cfg.crossing_weight);
    for (const auto& [name, archs] : settings) {
      const AnalysisResult r = fixed_point(model, archs, cfg);
      all_converged = all_converged && r.converged;
      json row = {{"traffic", target}, {"scale", scale}, {"setting", name},
                  {"analytic_blocking", r.network_blocking}, {"converged", r.converged},
                  {"iterations", r.iterations}};
      csv << format_number(target) << ',' << format_number(scale) << ',' << name << ','
          << format_number(r.network_blocking) << ',' << (r.converged ? "true" : "false") << ','
          << r.iterations << ',';
      if (w.with_sim) {
        const SimResult sim = simulate(*in.graph, scaled, archs, sim_config(c, s));
        row["sim_blocking"] = sim.network_blocking;
        row["sim_half_width"] = sim.half_width;
        csv << format_number(sim.network_blocking) << ',' << format_number(sim.half_width);
      } else {
        csv << ',';
      }
      csv << '\n';
      rows.push_back(row);
    }
  }
  if (!all_converged) err << "warning: some sweep points did not converge\n";

  Emitter emit(c, out);
  emit.main(c.format == "json" ? json{{"base_traffic", base_traffic}, {"rows", rows}}.dump(2) + "\n"
                               : csv.str());
  json options = analysis_options(cfg);
  options["traffic"] = w.traffic;
  options["with_sim"] = w.with_sim;
  options["settings"] = c.arch.empty() ? w.settings : std::string("custom");
  if (w.with_sim) options["simulation"] = sim_options(sim_config(c, s));
  emit.manifest(manifest("sweep", args, c, in, options));
  return all_converged ? kOk : kNotConverged;
}

int run_gen_demands(const std::vector<std::string>& args, const CommonOptions& c,
                    const GenOptions& gopt, std::ostream& out) {
  auto check_range = [](const auto& r, const char* name) {
    if (r.size() != 2 || r[0] > r[1] || !(r[0] > 0)) {
      throw Error(ErrorCode::invalid_argument,
                  std::string(name) + " needs two positive bounds LOW,HIGH");
    }
  };
  check_range(gopt.rate, "--rate");
  check_range(gopt.hold, "--hold");
  check_range(gopt.slots, "--slots");

  Inputs in = load_inputs(c, false);
  const NetworkGraph& g = *in.graph;
  if (gopt.slots[1] > g.slot_count()) {
    throw Error(ErrorCode::invalid_argument, "--slots exceeds the fiber slot count");
  }
  std::mt19937_64 rng = substream(c.seed, "gen-demands");
  std::uniform_real_distribution<double> rate(gopt.rate[0], gopt.rate[1]);
  std::uniform_real_distribution<double> hold(gopt.hold[0], gopt.hold[1]);
  std::uniform_int_distribution<int> slots(gopt.slots[0], gopt.slots[1]);
  for (NodeId s = 0; s < g.node_count(); ++s) {
    for (NodeId d = 0; d < g.node_count(); ++d) {
      if (s == d) continue;
      DemandSpec spec;
      spec.src = s;
      spec.dst = d;
      spec.rate = rate(rng);
      spec.hold = hold(rng);
      spec.slots = SlotPmf::fixed(slots(rng));
      in.demands.push_back(std::move(spec));
    }
  }
  if (gopt.traffic > 0.0) {
    const auto routes = route_all(g, in.demands);
    const double base = network_traffic(g, in.demands, routes);
    for (DemandSpec& d : in.demands) d.rate *= gopt.traffic / base;
  }
  Emitter emit(c, out);
  emit.main(demands_json(g, in.demands).dump(2) + "\n");
  emit.manifest(manifest("gen-demands", args, c, in,
                         {{"rate", gopt.rate}, {"hold", gopt.hold}, {"slots", gopt.slots},
                          {"traffic", gopt.traffic}}));
  return kOk;
}

void add_common(CLI::App* cmd, CommonOptions& c, bool demands) {
  cmd->add_option("--topology", c.topology, "Topology JSON")->required()->check(CLI::ExistingFile);
  if (demands) {
    cmd->add_option("--demands", c.demands, "Demands JSON")->required()->check(CLI::ExistingFile);
    cmd->add_option("--arch", c.arch, "Architecture JSON (default: all simple)")
        ->check(CLI::ExistingFile);
  }
  cmd->add_option("--out", c.out, "Output path (default: standard output)");
  cmd->add_option("--format", c.format, "csv or json")->capture_default_str();
  cmd->add_option("--seed", c.seed, "Root random seed")->capture_default_str();
  cmd->add_flag("--serial", c.serial, "Use the serial reference loops");
}

void add_analysis(CLI::App* cmd, AnalyzeOptions& a) {
  cmd->add_option("--epsilon", a.epsilon, "Convergence threshold on P_B")->capture_default_str();
  cmd->add_option("--max-iter", a.max_iter, "Iteration cap")->capture_default_str();
  cmd->add_option("--damping", a.damping, "Weight of new link estimates")->capture_default_str();
  cmd->add_flag("--port-load-weighted", a.port_load_weighted,
                "Weight crossing statistics by carried load");
}

void add_simulation(CLI::App* cmd, SimOptions& s) {
  cmd->add_option("--horizon", s.horizon, "End of measurement (default: 1e4 requests/demand)");
  cmd->add_option("--warmup", s.warmup, "Warm-up time (default: 10 mean holding times)");
  cmd->add_option("--replications", s.replications, "Replications")->capture_default_str();
  cmd->add_option("--policy", s.policy, "Converter usage policy")->capture_default_str();
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Blocking analysis, converter placement and simulation for elastic optical "
               "networks with spectrum conversion"};
  app.require_subcommand(1);

  CommonOptions common;
  AnalyzeOptions analyze;
  SimOptions sim;
  PlaceOptions place;
  SweepOptions sweep;
  GenOptions gen;

  auto* a = app.add_subcommand("analyze", "Fixed-point blocking analysis");
  add_common(a, common, true);
  add_analysis(a, analyze);

  auto* s = app.add_subcommand("simulate", "Discrete-event simulation");
  add_common(s, common, true);
  add_simulation(s, sim);
  s->add_option("--trace", sim.trace, "Write an event trace of replication 0");

  auto* p = app.add_subcommand("place", "Converter placement");
  add_common(p, common, true);
  add_analysis(p, analyze);
  p->add_option("--converters", place.converters,
                "Inventory, e.g. full,full,share_per_node:1");
  p->add_flag("--oracle", place.oracle, "Exhaustive search instead of the greedy heuristic");
  p->add_option("--full-nsc", place.full_nsc, "SCB count ranked for Full nodes (default: F)");
  p->add_option("--guard", place.guard, "Exhaustive search limit")->capture_default_str();

  auto* w = app.add_subcommand("sweep", "Blocking versus network traffic");
  add_common(w, common, true);
  add_analysis(w, analyze);
  add_simulation(w, sim);
  w->add_option("--traffic", sweep.traffic, "Traffic targets")->delimiter(',')->required();
  w->add_flag("--with-sim", sweep.with_sim, "Also simulate every row");
  w->add_option("--settings", sweep.settings, "Uniform architecture settings when --arch is absent")
      ->capture_default_str();

  auto* g = app.add_subcommand("gen-demands", "Random all-pairs demand set");
  add_common(g, common, false);
  g->add_option("--rate", gen.rate, "Arrival rate range LOW,HIGH")->delimiter(',');
  g->add_option("--hold", gen.hold, "Holding time range LOW,HIGH")->delimiter(',');
  g->add_option("--slots", gen.slots, "Slot count range LOW,HIGH")->delimiter(',');
  g->add_option("--traffic", gen.traffic, "Scale rates to this network traffic");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInputError;
  }

  try {
    if (a->parsed()) return run_analyze(args, common, analyze, out, err);
    if (s->parsed()) return run_simulate(args, common, sim, out, err);
    if (p->parsed()) return run_place(args, common, analyze, place, out, err);
    if (w->parsed()) return run_sweep(args, common, analyze, sim, sweep, out, err);
    if (g->parsed()) return run_gen_demands(args, common, gen, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }
  return kInputError;
}

}  // namespace eonspectra::cli
