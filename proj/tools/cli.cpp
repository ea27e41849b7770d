#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>

#include "optresp/baseline.hpp"
#include "optresp/epidemic.hpp"
#include "optresp/generators.hpp"
#include "optresp/graph_io.hpp"
#include "optresp/kernels.hpp"
#include "optresp/report.hpp"
#include "optresp/rng.hpp"

namespace optresp::cli {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

constexpr const char* kVersion = "0.1.0";

/// Problems with input files; maps to exit code 3.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Config files are JSON objects of option names to values for the
/// subcommand being run. A run manifest is accepted too: its "config" member
/// is used.
class JsonConfig : public CLI::Config {
 public:
  explicit JsonConfig(std::string section) : section_(std::move(section)) {}

  std::string to_config(const CLI::App*, bool, bool, std::string) const override { return "{}"; }

  std::vector<CLI::ConfigItem> from_config(std::istream& in) const override {
    json doc;
    try {
      doc = json::parse(in);
    } catch (const json::exception& e) {
      throw CLI::ConversionError(std::string("config file is not valid JSON: ") + e.what());
    }
    if (doc.is_object() && doc.contains("config")) doc = doc["config"];
    if (!doc.is_object()) throw CLI::ConversionError("config file must hold a JSON object");
    std::vector<CLI::ConfigItem> items;
    for (const auto& [key, value] : doc.items()) {
      CLI::ConfigItem item;
      if (!section_.empty()) item.parents = {section_};
      item.name = key;
      if (value.is_array()) {
        for (const auto& v : value) item.inputs.push_back(scalar(v));
      } else if (!value.is_null()) {
        item.inputs.push_back(scalar(value));
      } else {
        continue;
      }
      items.push_back(std::move(item));
    }
    return items;
  }

 private:
  static std::string scalar(const json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    return v.dump();
  }

  std::string section_;
};

std::string hex64(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

// ---------------------------------------------------------------- options

struct InstanceOptions {
  std::string graph;
  std::string attrs;
  bool directed = false;
  bool largest_component = false;
  double degree_penalty = 0.0;
};

void add_instance_options(CLI::App* app, InstanceOptions& o, bool attrs_required = true) {
  app->add_option("--graph", o.graph, "Edge list `i j [w]`")->required();
  auto* attrs = app->add_option("--attrs", o.attrs, "Node attributes `id phi b [a]`");
  if (attrs_required) attrs->required();
  app->add_flag("--directed", o.directed, "Input lists directed links (merged by summing)");
  app->add_flag("--largest-component", o.largest_component, "Keep only the largest connected component");
  app->add_option("--degree-penalty", o.degree_penalty, "Subtract this times the weighted degree from a")
      ->check(CLI::NonNegativeNumber);
}

struct LoadedInstance {
  ResponseInstance inst;
  std::vector<std::string> inputs;
};

LoadedInstance load_instance(const InstanceOptions& o) {
  LoadedInstance out;
  try {
    EdgeListFile file = load_edge_list(o.graph, o.directed);
    out.inputs.push_back(o.graph);
    NodeAttributes attrs = load_attributes(o.attrs, file.graph.num_nodes());
    out.inputs.push_back(o.attrs);
    WeightedGraph g = std::move(file.graph);
    if (o.largest_component) {
      ComponentExtraction cc = largest_component(g);
      NodeAttributes sub;
      for (NodeId old : cc.new_to_old) {
        sub.phi.push_back(attrs.phi[old]);
        sub.b.push_back(attrs.b[old]);
        sub.a.push_back(attrs.a[old]);
      }
      g = std::move(cc.graph);
      attrs = std::move(sub);
    }
    out.inst = make_instance(std::move(g), attrs);
  } catch (const Error& e) {
    throw InputError(e.what());
  }
  if (o.degree_penalty > 0.0) apply_degree_penalty(out.inst, o.degree_penalty);
  return out;
}

struct VCycleOptions {
  VCycleConfig cfg;
  std::string norm = "2";
  std::string order = "descending";
  std::string scalars = "mean";
  bool sequential = false;
};

void add_vcycle_options(CLI::App* app, VCycleOptions& o) {
  VCycleConfig& c = o.cfg;
  app->add_option("--seed", c.seed, "Random seed")->capture_default_str();
  app->add_option("--theta", c.theta, "Coupling threshold for seeds")->capture_default_str();
  app->add_option("--coarsest-size", c.coarsest_size, "Stop coarsening at this many nodes")->capture_default_str();
  app->add_option("--subset-cap", c.subset_cap, "Nodes per refinement subproblem")->capture_default_str();
  app->add_option("--gs-sweeps", c.gs_sweeps, "Flip sweeps after interpolation")->capture_default_str();
  app->add_option("--refine-passes", c.refine_passes, "Refinement passes per level")->capture_default_str();
  app->add_option("--time-budget", c.time_budget, "Seconds, 0 for none")->capture_default_str();
  app->add_option("--exact-limit", c.exact_limit, "Largest exact solve")->capture_default_str();
  app->add_option("--max-levels", c.max_levels, "Hierarchy depth limit")->capture_default_str();
  app->add_option("--omega", c.algdist.omega, "JOR damping")->capture_default_str();
  app->add_option("--vectors", c.algdist.num_vectors, "Test vectors")->capture_default_str();
  app->add_option("--jor-iterations", c.algdist.num_iters, "JOR sweeps per test vector")->capture_default_str();
  app->add_option("--norm", o.norm, "Distance norm p, or inf")->capture_default_str();
  app->add_option("--order", o.order, "Seed traversal by phi")
      ->check(CLI::IsMember({"descending", "ascending"}))
      ->capture_default_str();
  app->add_option("--scalars", o.scalars, "Coarse phi and b")
      ->check(CLI::IsMember({"mean", "sum", "max"}))
      ->capture_default_str();
  app->add_flag("--sequential", o.sequential, "Run without OpenMP parallel regions");
}

VCycleConfig resolve(const VCycleOptions& o) {
  VCycleConfig c = o.cfg;
  if (o.norm == "inf" || o.norm == "Inf" || o.norm == "infinity") {
    c.algdist.norm_p = std::numeric_limits<double>::infinity();
  } else {
    try {
      std::size_t used = 0;
      c.algdist.norm_p = std::stod(o.norm, &used);
      if (used != o.norm.size()) throw std::invalid_argument(o.norm);
    } catch (const std::exception&) {
      throw ValidationError("--norm must be a number >= 1 or inf");
    }
  }
  c.order = o.order == "ascending" ? TraversalOrder::ascending_phi : TraversalOrder::descending_phi;
  c.scalars = o.scalars == "sum" ? ScalarAggregation::sum
              : o.scalars == "max" ? ScalarAggregation::max
                                   : ScalarAggregation::mean;
  c.exec = o.sequential ? Execution::sequential : Execution::parallel;
  c.validate();
  return c;
}

struct ILSOptions {
  ILSConfig cfg;
};

void add_ils_options(CLI::App* app, ILSOptions& o, const std::string& prefix = "") {
  ILSConfig& c = o.cfg;
  app->add_option("--" + prefix + "perturb-fraction", c.perturb_fraction, "Share of nodes flipped per kick")
      ->capture_default_str();
  app->add_option("--" + prefix + "max-iterations", c.max_iterations, "Kicks, 0 for budget only")
      ->capture_default_str();
  app->add_option("--" + prefix + "gs-sweeps", c.gs_sweeps, "Sweep limit per descent")->capture_default_str();
}

struct OutputOptions {
  std::string solution;
  std::string report;
  std::string trace;
  std::string levels;
  std::string refine_trace;
  std::string manifest;
};

void add_output_options(CLI::App* app, OutputOptions& o, bool levels) {
  app->add_option("--out", o.solution, "Solution file `id x`");
  app->add_option("--report", o.report, "Key-value summary");
  app->add_option("--trace", o.trace, "CSV of objective over time");
  if (levels) {
    app->add_option("--levels", o.levels, "CSV of per-level statistics");
    app->add_option("--refine-trace", o.refine_trace, "CSV of objective after each color phase");
  }
  app->add_option("--manifest", o.manifest, "Run manifest (default: next to the first output)");
}

// ---------------------------------------------------------------- manifest

json resolved_config(const CLI::App* app) {
  json cfg = json::object();
  for (const CLI::Option* opt : app->get_options()) {
    const std::string name = opt->get_single_name();
    if (name.empty() || name == "help" || name == "config") continue;
    if (opt->get_items_expected_max() == 0) {
      cfg[name] = opt->count() > 0 && opt->as<bool>();
    } else if (opt->count() > 0) {
      const auto& results = opt->results();
      if (opt->get_expected_max() > 1) {
        cfg[name] = results;
      } else {
        cfg[name] = results.back();
      }
    } else if (!opt->get_default_str().empty()) {
      cfg[name] = opt->get_default_str();
    }
  }
  return cfg;
}

void write_manifest(const fs::path& path, const CLI::App* sub, std::uint64_t seed,
                    const std::vector<std::string>& inputs, const std::vector<std::string>& outputs) {
  json m;
  m["tool"] = "optresp";
  m["version"] = kVersion;
  m["subcommand"] = sub->get_name();
  m["seed"] = seed;
  m["config"] = resolved_config(sub);
  json in = json::array();
  for (const auto& p : inputs) in.push_back({{"path", p}, {"fnv1a64", file_digest(p)}});
  m["inputs"] = in;
  json out = json::array();
  for (const auto& p : outputs) out.push_back({{"path", p}, {"fnv1a64", file_digest(p)}});
  m["outputs"] = out;
  write_file(path, m.dump(2) + "\n");
}

std::string manifest_path(const std::string& explicit_path, const std::vector<std::string>& outputs) {
  if (!explicit_path.empty()) return explicit_path;
  if (outputs.empty()) return {};
  return outputs.front() + ".manifest.json";
}

template <class Fn>
std::string to_string_with(Fn&& fn) {
  std::ostringstream ss;
  fn(ss);
  return ss.str();
}

std::vector<std::string> write_outputs(const OutputOptions& o, const SolveReport& report,
                                       const ResponseInstance& inst) {
  std::vector<std::string> written;
  auto emit = [&](const std::string& path, const std::string& contents) {
    if (path.empty()) return;
    try {
      write_file(path, contents);
    } catch (const Error& e) {
      throw InputError(e.what());
    }
    written.push_back(path);
  };
  emit(o.solution, to_string_with([&](std::ostream& s) { write_solution(s, report.solution.x); }));
  emit(o.report, to_string_with([&](std::ostream& s) { write_key_values(s, summarize(report, inst)); }));
  emit(o.trace, to_string_with([&](std::ostream& s) { write_trace_csv(s, report); }));
  emit(o.levels, to_string_with([&](std::ostream& s) { write_levels_csv(s, report); }));
  emit(o.refine_trace, to_string_with([&](std::ostream& s) { write_refine_trace_csv(s, report); }));
  return written;
}

// ---------------------------------------------------------------- generate

struct GenerateOptions {
  ErdosRenyiParams params;
  std::size_t count = 1;
  std::uint64_t seed = 1;
  std::string out_dir = ".";
  std::string prefix = "er";
};

int cmd_generate(const CLI::App* sub, const GenerateOptions& o, std::ostream& out) {
  if (o.count == 0) throw ValidationError("--count must be positive");
  if (o.params.n < 2) throw ValidationError("--n must be at least 2");
  if (!(o.params.edge_prob >= 0.0 && o.params.edge_prob <= 1.0)) throw ValidationError("--p must lie in [0, 1]");
  std::error_code ec;
  fs::create_directories(o.out_dir, ec);
  if (ec) throw InputError("cannot create " + o.out_dir + ": " + ec.message());

  std::vector<std::string> written;
  for (std::size_t k = 0; k < o.count; ++k) {
    const ResponseInstance inst = erdos_renyi_instance(o.params, mix_seed(o.seed, k));
    char name[64];
    std::snprintf(name, sizeof name, "%s_%04zu", o.prefix.c_str(), k);
    const fs::path base = fs::path(o.out_dir) / name;
    try {
      save_edge_list(base.string() + ".edges", inst.graph);
      save_attributes(base.string() + ".attrs", attributes_of(inst));
    } catch (const Error& e) {
      throw InputError(e.what());
    }
    written.push_back(base.string() + ".edges");
    written.push_back(base.string() + ".attrs");
  }
  const fs::path manifest = fs::path(o.out_dir) / (o.prefix + ".manifest.json");
  write_manifest(manifest, sub, o.seed, {}, written);
  out << "instances = " << o.count << "\nout_dir = " << o.out_dir << "\nmanifest = " << manifest.string()
      << '\n';
  return kOk;
}

// ---------------------------------------------------------------- simulate

struct SimulateOptions {
  std::string graph;
  std::string attrs;
  bool directed = false;
  std::string out;
  std::string manifest;
  double fraction = 0.05;
  double phi_min = 0.8;
  double phi_max = 1.0;
  double background = 0.0;
  std::size_t iterations = 5;
  double b_min = 0.0;
  double b_max = 1.0;
  std::uint64_t seed = 1;
};

int cmd_simulate(const CLI::App* sub, const SimulateOptions& o, std::ostream& out) {
  if (!(o.fraction > 0.0 && o.fraction <= 1.0)) throw ValidationError("--fraction must lie in (0, 1]");
  if (!(0.0 <= o.phi_min && o.phi_min <= o.phi_max && o.phi_max <= 1.0)) {
    throw ValidationError("phi range must be a sub-interval of [0, 1]");
  }
  if (!(0.0 <= o.b_min && o.b_min <= o.b_max)) throw ValidationError("b range must be non-negative");

  std::vector<std::string> inputs{o.graph};
  WeightedGraph g;
  NodeAttributes attrs;
  try {
    g = load_edge_list(o.graph, o.directed).graph;
    if (!o.attrs.empty()) {
      attrs = load_attributes(o.attrs, g.num_nodes());
      inputs.push_back(o.attrs);
    }
  } catch (const Error& e) {
    throw InputError(e.what());
  }
  const std::size_t n = g.num_nodes();
  if (o.fraction * static_cast<double>(n) < 1.0 - 1e-9) {
    throw ValidationError("--fraction selects no node for a graph of " + std::to_string(n) + " nodes");
  }
  if (o.attrs.empty()) {
    Rng rng(mix_seed(o.seed, 1));
    attrs.b.resize(n);
    for (double& b : attrs.b) b = rng.uniform(o.b_min, o.b_max);
    attrs.a.assign(n, 0.0);
  }
  std::vector<double> phi = seed_outbreak(n, o.fraction, {o.phi_min, o.phi_max}, mix_seed(o.seed, 0), o.background);
  ResponseInstance inst = make_instance(std::move(g), phi, attrs.b, attrs.a);
  inst.phi = spread_iterate(inst, std::move(phi), o.iterations);

  try {
    save_attributes(o.out, attributes_of(inst));
  } catch (const Error& e) {
    throw InputError(e.what());
  }
  write_manifest(manifest_path(o.manifest, {o.out}), sub, o.seed, inputs, {o.out});
  std::size_t infected = 0;
  for (double p : inst.phi) infected += p > 0.0;
  out << "nodes = " << n << "\nnodes_with_infection = " << infected << "\nout = " << o.out << '\n';
  return kOk;
}

// ---------------------------------------------------------------- solve / baseline

int cmd_solve(const CLI::App* sub, const InstanceOptions& io, const VCycleOptions& vo, const OutputOptions& oo,
              bool strict_budget, std::ostream& out) {
  const VCycleConfig cfg = resolve(vo);
  LoadedInstance li = load_instance(io);
  const SolveReport report = ms_solve(li.inst, cfg);
  const auto written = write_outputs(oo, report, li.inst);
  const std::string mpath = manifest_path(oo.manifest, written);
  if (!mpath.empty()) write_manifest(mpath, sub, cfg.seed, li.inputs, written);
  write_key_values(out, summarize(report, li.inst));
  return strict_budget && report.budget_exhausted ? kBudget : kOk;
}

int cmd_baseline(const CLI::App* sub, const InstanceOptions& io, ILSOptions ils, double time_budget,
                 std::uint64_t seed, const OutputOptions& oo, std::ostream& out) {
  ils.cfg.time_budget = time_budget;
  ils.cfg.seed = seed;
  ils.cfg.validate();
  LoadedInstance li = load_instance(io);
  const SolveReport report = ils_solve(li.inst, ils.cfg);
  const auto written = write_outputs(oo, report, li.inst);
  const std::string mpath = manifest_path(oo.manifest, written);
  if (!mpath.empty()) write_manifest(mpath, sub, seed, li.inputs, written);
  write_key_values(out, summarize(report, li.inst));
  return kOk;
}

// ---------------------------------------------------------------- compare

struct CompareOptions {
  std::string instances;
  std::string against = "exact";
  std::string out;
  std::string manifest;
  double ils_budget_factor = 10.0;
  bool directed = false;
  double degree_penalty = 0.0;
};

std::vector<std::pair<std::string, std::string>> instance_pairs(const std::string& dir) {
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) throw InputError(dir + " is not a directory");
  std::vector<std::pair<std::string, std::string>> pairs;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.path().extension() != ".edges") continue;
    fs::path attrs = entry.path();
    attrs.replace_extension(".attrs");
    if (fs::exists(attrs)) pairs.emplace_back(entry.path().string(), attrs.string());
  }
  std::sort(pairs.begin(), pairs.end());
  if (pairs.empty()) throw InputError("no .edges/.attrs pairs in " + dir);
  return pairs;
}

int cmd_compare(const CLI::App* sub, const CompareOptions& o, const VCycleOptions& vo, ILSOptions ils,
                std::ostream& out) {
  const VCycleConfig base = resolve(vo);
  if (!(o.ils_budget_factor > 0.0)) throw ValidationError("--ils-budget-factor must be positive");
  const auto pairs = instance_pairs(o.instances);

  std::ostringstream csv;
  csv << "instance,nodes,edges,ma_objective," << o.against << "_objective,ratio,ma_seconds," << o.against
      << "_seconds,ma_closed," << o.against << "_closed,status\n";
  std::vector<std::string> inputs;
  bool all_ok = true;
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const auto& [graph, attrs] = pairs[k];
    inputs.push_back(graph);
    inputs.push_back(attrs);
    const std::string name = fs::path(graph).stem().string();
    try {
      InstanceOptions io;
      io.graph = graph;
      io.attrs = attrs;
      io.directed = o.directed;
      io.degree_penalty = o.degree_penalty;
      const ResponseInstance inst = load_instance(io).inst;
      VCycleConfig cfg = base;
      cfg.seed = mix_seed(base.seed, k);
      const SolveReport ma = ms_solve(inst, cfg);
      Solution other;
      double other_seconds = 0.0;
      if (o.against == "exact") {
        const auto t0 = std::chrono::steady_clock::now();
        ExactOptions eo;
        eo.limit = base.exact_limit;
        const ExactSolve ex = solve_exact(inst, eo);
        other_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (!ex.optimal) throw Error("exact solve did not finish");
        other = ex.solution;
      } else if (o.against == "ils") {
        ILSConfig ic = ils.cfg;
        ic.seed = mix_seed(base.seed ^ 0x1f5u, k);
        ic.time_budget = o.ils_budget_factor * std::max(ma.total_seconds, 1e-3);
        const SolveReport r = ils_solve(inst, ic);
        other = r.solution;
        other_seconds = r.total_seconds;
      } else {
        const SolveReport r = ms_solve(inst, cfg);
        other = r.solution;
        other_seconds = r.total_seconds;
      }
      const double ratio = other.objective == 0.0 ? (ma.solution.objective == 0.0 ? 1.0 : INFINITY)
                                                  : ma.solution.objective / other.objective;
      csv << name << ',' << inst.num_nodes() << ',' << inst.graph.num_edges() << ','
          << format_double(ma.solution.objective) << ',' << format_double(other.objective) << ','
          << format_double(ratio) << ',' << format_double(ma.total_seconds) << ',' << format_double(other_seconds)
          << ',' << ma.solution.num_closed() << ',' << other.num_closed() << ",ok\n";
    } catch (const std::exception& e) {
      all_ok = false;
      std::string msg = e.what();
      std::replace(msg.begin(), msg.end(), ',', ';');
      std::replace(msg.begin(), msg.end(), '\n', ' ');
      csv << name << ",,,,,,,,,,error: " << msg << '\n';
    }
  }

  if (o.out.empty()) {
    out << csv.str();
  } else {
    try {
      write_file(o.out, csv.str());
    } catch (const Error& e) {
      throw InputError(e.what());
    }
    const std::string mpath = manifest_path(o.manifest, {o.out});
    write_manifest(mpath, sub, base.seed, inputs, {o.out});
    out << "instances = " << pairs.size() << "\nout = " << o.out << '\n';
  }
  return all_ok ? kOk : kFailure;
}

// ---------------------------------------------------------------- hierarchy

struct HierarchyOptions {
  std::string out;
  std::string aggregates;
  std::string distances;
  std::string manifest;
};

int cmd_hierarchy(const CLI::App* sub, const InstanceOptions& io, const VCycleOptions& vo,
                  const HierarchyOptions& ho, std::ostream& out) {
  const VCycleConfig cfg = resolve(vo);
  LoadedInstance li = load_instance(io);
  const std::vector<HierarchyLevel> levels = build_hierarchy(li.inst, cfg);

  std::ostringstream lv;
  lv << "level,nodes,edges,coarse_nodes,theta,theta_retries,seeds,aggregate_min,aggregate_mean,aggregate_max\n";
  std::ostringstream hist;
  hist << "level,aggregate_size,count\n";
  const ResponseInstance* fine = &li.inst;
  for (std::size_t l = 0; l < levels.size(); ++l) {
    const HierarchyLevel& h = levels[l];
    std::vector<std::size_t> size(h.coarse_size, 0);
    for (NodeId a : h.aggregate_of) ++size[a];
    std::map<std::size_t, std::size_t> counts;
    for (std::size_t s : size) ++counts[s];
    lv << l << ',' << h.fine_size << ',' << fine->graph.num_edges() << ',' << h.coarse_size << ','
       << format_double(h.theta_used) << ',' << h.theta_retries << ',' << h.split.num_seeds() << ','
       << counts.begin()->first << ','
       << format_double(static_cast<double>(h.fine_size) / static_cast<double>(h.coarse_size)) << ','
       << counts.rbegin()->first << '\n';
    for (auto [s, c] : counts) hist << l << ',' << s << ',' << c << '\n';
    fine = &h.coarse;
  }
  lv << levels.size() << ',' << fine->num_nodes() << ',' << fine->graph.num_edges() << ",0,,,,,,\n";

  std::vector<std::string> written;
  auto emit = [&](const std::string& path, const std::string& contents) {
    if (path.empty()) return;
    try {
      write_file(path, contents);
    } catch (const Error& e) {
      throw InputError(e.what());
    }
    written.push_back(path);
  };
  emit(ho.out, lv.str());
  emit(ho.aggregates, hist.str());
  if (!ho.distances.empty()) {
    const EdgeDistances dist = algebraic_distances(li.inst.graph, cfg.algdist, mix_seed(cfg.seed, 0), cfg.exec);
    std::ostringstream d;
    d << "u,v,w,rho\n";
    for (EdgeId e = 0; e < li.inst.graph.num_edges(); ++e) {
      const Edge& ed = li.inst.graph.edge(e);
      d << ed.u << ',' << ed.v << ',' << format_double(ed.w) << ',' << format_double(dist.rho[e]) << '\n';
    }
    emit(ho.distances, d.str());
  }
  if (ho.out.empty()) out << lv.str();
  const std::string mpath = manifest_path(ho.manifest, written);
  if (!mpath.empty()) write_manifest(mpath, sub, cfg.seed, li.inputs, written);
  return kOk;
}

}  // namespace

std::string file_digest(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw InputError("cannot read " + path);
  std::uint64_t h = 0xcbf29ce484222325ull;
  char buf[1 << 16];
  while (f.read(buf, sizeof buf) || f.gcount() > 0) {
    for (std::streamsize i = 0; i < f.gcount(); ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 0x100000001b3ull;
    }
  }
  return hex64(h);
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  kernels::configure_threads_from_env();

  CLI::App app{"Multilevel solver for the infection response problem"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  // the config file belongs to whichever subcommand is named first
  std::string section;
  for (const auto& a : args) {
    if (a == "generate" || a == "simulate" || a == "solve" || a == "baseline" || a == "compare" ||
        a == "hierarchy") {
      section = a;
      break;
    }
  }
  app.config_formatter(std::make_shared<JsonConfig>(section));
  app.set_config("--config", "", "JSON file of option values for the subcommand (a run manifest works too)");
  app.fallthrough();

  GenerateOptions gen;
  auto* generate = app.add_subcommand("generate", "Random Erdos-Renyi instances");
  generate->add_option("--n", gen.params.n, "Nodes")->capture_default_str();
  generate->add_option("--p", gen.params.edge_prob, "Edge probability")->capture_default_str();
  generate->add_option("--count", gen.count, "Instances")->capture_default_str();
  generate->add_option("--seed", gen.seed, "Random seed")->capture_default_str();
  generate->add_option("--out-dir", gen.out_dir, "Output directory")->capture_default_str();
  generate->add_option("--prefix", gen.prefix, "File name prefix")->capture_default_str();
  generate->add_option("--weight-min", gen.params.weight.lo)->capture_default_str();
  generate->add_option("--weight-max", gen.params.weight.hi)->capture_default_str();
  generate->add_option("--phi-min", gen.params.phi.lo)->capture_default_str();
  generate->add_option("--phi-max", gen.params.phi.hi)->capture_default_str();
  generate->add_option("--b-min", gen.params.b.lo)->capture_default_str();
  generate->add_option("--b-max", gen.params.b.hi)->capture_default_str();

  SimulateOptions sim;
  auto* simulate = app.add_subcommand("simulate", "Outbreak seeding and spreading");
  simulate->add_option("--graph", sim.graph, "Edge list")->required();
  simulate->add_option("--attrs", sim.attrs, "Take b and a from this attribute file");
  simulate->add_flag("--directed", sim.directed);
  simulate->add_option("--out", sim.out, "Attribute file to write")->required();
  simulate->add_option("--manifest", sim.manifest);
  simulate->add_option("--fraction", sim.fraction, "Share of initially infected nodes")->capture_default_str();
  simulate->add_option("--phi-min", sim.phi_min)->capture_default_str();
  simulate->add_option("--phi-max", sim.phi_max)->capture_default_str();
  simulate->add_option("--background", sim.background, "phi of the other nodes")->capture_default_str();
  simulate->add_option("--iterations", sim.iterations, "Spreading rounds")->capture_default_str();
  simulate->add_option("--b-min", sim.b_min, "Threshold range when --attrs is absent")->capture_default_str();
  simulate->add_option("--b-max", sim.b_max)->capture_default_str();
  simulate->add_option("--seed", sim.seed)->capture_default_str();

  InstanceOptions solve_in;
  VCycleOptions solve_v;
  OutputOptions solve_out;
  bool strict_budget = false;
  auto* solve = app.add_subcommand("solve", "Multilevel solve");
  add_instance_options(solve, solve_in);
  add_vcycle_options(solve, solve_v);
  add_output_options(solve, solve_out, true);
  solve->add_flag("--strict-budget", strict_budget, "Exit with code 4 when the time budget ran out");

  InstanceOptions base_in;
  ILSOptions base_ils;
  OutputOptions base_out;
  double base_budget = 0.0;
  std::uint64_t base_seed = 1;
  auto* baseline = app.add_subcommand("baseline", "Iterated local search");
  add_instance_options(baseline, base_in);
  add_ils_options(baseline, base_ils);
  baseline->add_option("--time-budget", base_budget, "Seconds, 0 for none")->capture_default_str();
  baseline->add_option("--seed", base_seed)->capture_default_str();
  add_output_options(baseline, base_out, false);

  CompareOptions cmp;
  VCycleOptions cmp_v;
  ILSOptions cmp_ils;
  cmp_ils.cfg.max_iterations = 0;
  auto* compare = app.add_subcommand("compare", "Multilevel against exact, ILS or itself");
  compare->add_option("--instances", cmp.instances, "Directory of .edges/.attrs pairs")->required();
  compare->add_option("--against", cmp.against)
      ->check(CLI::IsMember({"exact", "ils", "ma"}))
      ->capture_default_str();
  compare->add_option("--out", cmp.out, "CSV file (default stdout)");
  compare->add_option("--manifest", cmp.manifest);
  compare->add_option("--ils-budget-factor", cmp.ils_budget_factor, "ILS time as a multiple of the multilevel time")
      ->capture_default_str();
  compare->add_flag("--directed", cmp.directed);
  compare->add_option("--degree-penalty", cmp.degree_penalty)->check(CLI::NonNegativeNumber);
  add_vcycle_options(compare, cmp_v);
  add_ils_options(compare, cmp_ils, "ils-");

  InstanceOptions hier_in;
  VCycleOptions hier_v;
  HierarchyOptions hier;
  auto* hierarchy = app.add_subcommand("hierarchy", "Coarsening diagnostics");
  add_instance_options(hierarchy, hier_in);
  add_vcycle_options(hierarchy, hier_v);
  hierarchy->add_option("--out", hier.out, "Per-level CSV (default stdout)");
  hierarchy->add_option("--aggregates", hier.aggregates, "CSV histogram of aggregate sizes");
  hierarchy->add_option("--distances", hier.distances, "CSV of level-0 algebraic distances");
  hierarchy->add_option("--manifest", hier.manifest);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::FileError& e) {
    err << "error: " << e.what() << '\n';
    return kIO;
  } catch (const CLI::ParseError& e) {
    // help and version requests come through here with a zero exit code
    return app.exit(e, out, err) == 0 ? kOk : kUsage;
  }

  try {
    if (generate->parsed()) return cmd_generate(generate, gen, out);
    if (simulate->parsed()) return cmd_simulate(simulate, sim, out);
    if (solve->parsed()) return cmd_solve(solve, solve_in, solve_v, solve_out, strict_budget, out);
    if (baseline->parsed()) return cmd_baseline(baseline, base_in, base_ils, base_budget, base_seed, base_out, out);
    if (compare->parsed()) return cmd_compare(compare, cmp, cmp_v, cmp_ils, out);
    if (hierarchy->parsed()) return cmd_hierarchy(hierarchy, hier_in, hier_v, hier, out);
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kIO;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kFailure;
  }
  return kUsage;
}

}  // namespace optresp::cli
