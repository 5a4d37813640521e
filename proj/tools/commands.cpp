#include "commands.hpp"

#include <unistd.h>

#include <algorithm>
#include <cstdlib>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "rumor/analysis.hpp"
#include "rumor/error.hpp"
#include "rumor/format.hpp"
#include "rumor/io.hpp"
#include "rumor/netgen.hpp"
#include "rumor/random.hpp"
#include "rumor/scenarios.hpp"

namespace rumor::cli {

namespace {

// Files go to a hidden sibling directory first and are moved into place only
// when the command finished, so a failed command leaves no half-written tree.
class StagedDir {
 public:
  explicit StagedDir(fs::path target) : target_(std::move(target)) {
    if (target_.empty()) throw ConfigError("no output directory given (use --out or set RUMORSIM_OUT)");
    target_ = fs::absolute(target_).lexically_normal();
    if (target_.filename().empty()) target_ = target_.parent_path();
    if (fs::exists(target_) && !fs::is_directory(target_)) {
      throw ConfigError("output path '" + target_.string() + "' exists and is not a directory");
    }
    fs::create_directories(target_.parent_path());
    staging_ = target_.parent_path() /
               ("." + target_.filename().string() + ".staging-" + std::to_string(::getpid()));
    fs::remove_all(staging_);
    fs::create_directories(staging_);
  }

  StagedDir(const StagedDir&) = delete;
  StagedDir& operator=(const StagedDir&) = delete;

  ~StagedDir() {
    if (!committed_) {
      std::error_code ec;
      fs::remove_all(staging_, ec);
    }
  }

  const fs::path& path() const { return staging_; }

  void commit() {
    if (!fs::exists(target_)) {
      fs::rename(staging_, target_);
    } else {
      for (const auto& entry : fs::directory_iterator(staging_)) {
        const fs::path dest = target_ / entry.path().filename();
        fs::remove_all(dest);
        fs::rename(entry.path(), dest);
      }
      fs::remove_all(staging_);
    }
    committed_ = true;
  }

 private:
  fs::path target_;
  fs::path staging_;
  bool committed_ = false;
};

template <typename F>
void write_with(const fs::path& path, F&& fill) {
  std::ostringstream os;
  fill(os);
  write_text_file(path, os.str());
}

void write_json(const fs::path& path, const Json& j) { write_text_file(path, j.dump(2) + "\n"); }

std::string run_dir_name(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "run_%03zu", index);
  return buf;
}

std::string point_dir_name(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "point_%03zu", index);
  return buf;
}

void write_run_files(const fs::path& dir, const RunResult& r) {
  fs::create_directories(dir);
  write_with(dir / "trace.csv", [&](std::ostream& os) { write_trace_csv(os, r.trace); });
  write_json(dir / "trace.json", to_json(r.trace));
  write_with(dir / "snapshot.csv", [&](std::ostream& os) { write_snapshot_csv(os, r.trace, *r.graph); });
  write_with(dir / "graph.edges", [&](std::ostream& os) { write_edge_list(os, *r.graph); });
  if (r.sir) write_with(dir / "sir_trace.csv", [&](std::ostream& os) { write_sir_csv(os, *r.sir); });
}

ScenarioConfig load_config(const std::string& scenario, const std::vector<std::string>& overrides,
                           std::optional<std::size_t> runs) {
  ScenarioConfig cfg = resolve_scenario(scenario);
  for (const auto& o : overrides) apply_override(cfg, o);
  if (runs) cfg.n_runs = *runs;
  try {
    cfg.validate();
  } catch (const InvalidParameter& e) {
    throw ConfigError(e.what());
  }
  return cfg;
}

Json run_entry(const RunResult& r) {
  return Json{{"index", r.index},
              {"status", "ok"},
              {"seed", r.seed},
              {"graph_seed", r.graph_seed},
              {"dynamics_seed", derive_seed(r.seed, 1)},
              {"sir_seed", derive_seed(r.seed, 2)},
              {"cycles", r.trace.cycles.size()}};
}

Json manifest(const std::string& command, const ScenarioConfig& cfg, std::uint64_t seed,
              const std::vector<std::string>& overrides) {
  return Json{{"tool", "rumorsim"},
              {"command", command},
              {"scenario_name", cfg.name},
              {"config_hash", hash_hex(config_hash(cfg))},
              {"master_seed", seed},
              {"seed_derivation", "run i: derive_seed(master_seed, i); graph: derive_seed(run, 0); "
                                  "dynamics: derive_seed(run, 1); sir: derive_seed(run, 2)"},
              {"overrides", overrides},
              {"scenario", dump_scenario(cfg)}};
}

struct RcRow {
  std::size_t index;
  std::uint64_t seed;
  std::optional<AssortativityResult> result;
  std::string note;
};

RcRow echo_assortativity(std::size_t index, std::uint64_t seed, const Graph& g,
                         const SimulationTrace& t, double delta_th) {
  RcRow row{index, seed, std::nullopt, ""};
  const EchoSubgraph sub = echo_subgraph(g, t.final_agents, delta_th);
  try {
    row.result = attribute_assortativity(sub.graph, sub.labels);
  } catch (const DegenerateLabels&) {
    row.note = "degenerate-labels";
  } catch (const EmptySubgraph&) {
    row.note = "empty-subgraph";
  }
  return row;
}

void write_rc_rows(std::ostream& os, const std::vector<RcRow>& rows) {
  os << "run,seed,r_c,n_edges,status\n";
  for (const auto& r : rows) {
    os << r.index << ',' << r.seed << ',';
    if (r.result) {
      os << format_double(r.result->r_c) << ',' << r.result->n_edges_used << ",ok\n";
    } else {
      os << ",," << r.note << '\n';
    }
  }
}

// Aggregates shared by batch and analyze.
void write_aggregate_files(const fs::path& dir, std::span<const SimulationTrace> traces,
                           std::span<const RunView> views, std::size_t bins, double reliability) {
  write_with(dir / "active_density.csv",
             [&](std::ostream& os) { write_series_csv(os, activation_density_series(traces)); });
  write_with(dir / "degree_density.csv",
             [&](std::ostream& os) { write_degree_density_csv(os, density_by_degree(views)); });
  std::vector<std::vector<AgentSnapshot>> snaps;
  for (const auto& t : traces) snaps.push_back(t.final_agents);
  write_with(dir / "threshold_histogram.csv", [&](std::ostream& os) {
    write_threshold_histogram_csv(os, threshold_histogram(snaps, bins, reliability));
  });
}

void write_batch(const fs::path& dir, const AggregateResult& agg, const ScenarioConfig& cfg,
                 std::size_t bins, double delta_th) {
  for (const auto& r : agg.runs) write_run_files(dir / "runs" / run_dir_name(r.index), r);

  std::vector<SimulationTrace> traces;
  std::vector<RunView> views;
  for (const auto& r : agg.runs) traces.push_back(r.trace);
  for (std::size_t i = 0; i < agg.runs.size(); ++i) views.push_back({agg.runs[i].graph.get(), &traces[i]});
  write_aggregate_files(dir, traces, views, bins, cfg.schedule.segments().back().reliability);

  for (auto c : kAllColors) {
    write_with(dir / ("density_" + std::string(color_name(c)) + ".csv"), [&](std::ostream& os) {
      write_series_csv(os, agg.by_color[static_cast<std::size_t>(c)]);
    });
  }
  write_with(dir / "cumulative_spreaders.csv",
             [&](std::ostream& os) { write_series_csv(os, agg.cum_spreaders); });
  write_with(dir / "cumulative_debunkers.csv",
             [&](std::ostream& os) { write_series_csv(os, agg.cum_debunkers); });
  if (agg.sir_spreaders) {
    write_with(dir / "sir_density.csv", [&](std::ostream& os) { write_series_csv(os, *agg.sir_spreaders); });
  }
  std::vector<RcRow> rows;
  for (const auto& r : agg.runs) {
    rows.push_back(echo_assortativity(r.index, r.seed, *r.graph, r.trace, delta_th));
  }
  write_with(dir / "assortativity.csv", [&](std::ostream& os) { write_rc_rows(os, rows); });
}

Json runs_json(const AggregateResult& agg) {
  Json runs = Json::array();
  std::size_t ok = 0, bad = 0;
  // Interleave successes and failures back into index order.
  while (ok < agg.runs.size() || bad < agg.failures.size()) {
    const bool take_fail =
        bad < agg.failures.size() && (ok >= agg.runs.size() || agg.failures[bad].index < agg.runs[ok].index);
    if (take_fail) {
      const auto& f = agg.failures[bad++];
      runs.push_back({{"index", f.index}, {"status", "failed"}, {"seed", f.seed}, {"error", f.message}});
    } else {
      runs.push_back(run_entry(agg.runs[ok++]));
    }
  }
  return runs;
}

fs::path default_out(const fs::path& given) {
  if (!given.empty()) return given;
  if (const char* env = std::getenv(kOutEnvVar); env && *env) return env;
  return {};
}

std::string sanitize(std::string s) {
  for (char& c : s) {
    if (c == ':' || c == '=' || c == ',' || c == '/' || c == ' ') c = '_';
  }
  return s;
}

}  // namespace

std::pair<std::string, std::vector<double>> parse_grid(const std::string& spec) {
  const auto eq = spec.find('=');
  if (eq == std::string::npos || eq == 0) throw ConfigError("--param must be key=lo:hi:count or key=v1,v2,...");
  const std::string key = spec.substr(0, eq);
  const std::string rest = spec.substr(eq + 1);
  std::vector<double> values;
  if (rest.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(rest);
    for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
    if (parts.size() != 3) throw ConfigError("--param range must be lo:hi:count");
    const double lo = parse_double(parts[0], "--param lo");
    const double hi = parse_double(parts[1], "--param hi");
    const auto count = parse_uint(parts[2], "--param count");
    if (count < 1) throw ConfigError("--param count must be >= 1");
    values = linspace(lo, hi, count);
  } else {
    std::stringstream ss(rest);
    for (std::string p; std::getline(ss, p, ',');) values.push_back(parse_double(p, "--param value"));
  }
  if (values.empty()) throw ConfigError("--param has no values");
  return {key, values};
}

void cmd_generate(const GenerateOptions& o) {
  StagedDir dir(default_out(o.out));
  const Graph g = generate_ba(o.nodes, o.m, o.seed);
  write_with(dir.path() / "graph.edges", [&](std::ostream& os) { write_edge_list(os, g); });
  if (o.gexf) write_with(dir.path() / "graph.gexf", [&](std::ostream& os) { write_gexf(os, g); });
  const DegreeHistogram h = degree_histogram(g);
  write_with(dir.path() / "degree_histogram.csv", [&](std::ostream& os) { write_degree_histogram_csv(os, h); });
  const std::size_t k_min = o.k_min.value_or(default_k_min(o.m));
  Json report{{"nodes", o.nodes}, {"m", o.m}, {"seed", o.seed}, {"edges", g.edge_count()}, {"k_min", k_min}, {"min_count", o.min_count}};
  try {
    report["fit"] = to_json(fit_power_law(h, k_min, o.min_count));
  } catch (const InsufficientData& e) {
    report["fit"] = nullptr;
    report["error"] = std::string("insufficient-data: ") + e.what();
  }
  write_json(dir.path() / "powerlaw_fit.json", report);
  dir.commit();
}

void cmd_run(const RunOptions& o) {
  ScenarioConfig cfg = load_config(o.scenario, o.overrides, 1);
  StagedDir dir(default_out(o.out));
  const AggregateResult agg = batch_run(cfg, o.seed);
  write_run_files(dir.path(), agg.runs.front());
  dir.commit();
}

void cmd_batch(const BatchOptions& o) {
  const ScenarioConfig cfg = load_config(o.scenario, o.overrides, o.runs);
  StagedDir dir(default_out(o.out));
  const AggregateResult agg = batch_run(cfg, o.seed, {o.jobs, true});
  write_batch(dir.path(), agg, cfg, o.bins, o.delta_th);
  Json m = manifest("batch", cfg, o.seed, o.overrides);
  m["n_runs"] = cfg.n_runs;
  m["n_succeeded"] = agg.runs.size();
  m["n_failed"] = agg.failures.size();
  m["runs"] = runs_json(agg);
  write_json(dir.path() / "manifest.json", m);
  dir.commit();
}

void cmd_sweep(const SweepOptions& o) {
  const ScenarioConfig base = load_config(o.scenario, o.overrides, o.runs);
  const auto [key, values] = parse_grid(o.param);
  // Fail on a bad key before any work is done.
  {
    ScenarioConfig probe = base;
    apply_override(probe, key, format_double(values.front()));
  }
  StagedDir dir(default_out(o.out));
  ScenarioFamily family = [&base, key = key](double v) {
    ScenarioConfig c = base;
    apply_override(c, key, format_double(v));
    return c;
  };
  Json points = Json::array();
  rumor::SweepOptions so;
  so.delta_th = o.delta_th;
  so.bins = o.bins;
  so.jobs = o.jobs;
  std::size_t idx = 0;
  so.on_point = [&](const SweepPoint& p, const AggregateResult& agg) {
    const fs::path pd = dir.path() / point_dir_name(idx);
    fs::create_directories(pd);
    const ScenarioConfig cfg = family(p.value);
    if (!o.summary_only) write_batch(pd, agg, cfg, o.bins, o.delta_th);
    write_with(pd / "threshold_histogram.csv",
               [&](std::ostream& os) { write_threshold_histogram_csv(os, p.histogram); });
    points.push_back({{"index", idx},
                      {"value", p.value},
                      {"config_hash", hash_hex(p.config_hash)},
                      {"master_seed", p.seed},
                      {"runs", runs_json(agg)}});
    ++idx;
  };
  const auto result = parameter_sweep(family, values, base.n_runs, o.seed, so);
  write_with(dir.path() / "assortativity.csv", [&](std::ostream& os) {
    os << key << ",mean_rc,stderr,n_defined,n_undefined,bimodal\n";
    for (const auto& p : result) {
      os << format_double(p.value) << ',' << format_double(p.mean_rc) << ','
         << format_double(p.stderr_rc) << ',' << p.n_defined << ',' << p.n_undefined << ','
         << (is_bimodal(p.histogram) ? 1 : 0) << '\n';
    }
  });
  Json m = manifest("sweep", base, o.seed, o.overrides);
  m["param"] = key;
  m["values"] = values;
  m["n_runs"] = base.n_runs;
  m["delta_th"] = o.delta_th;
  m["bins"] = o.bins;
  m["points"] = points;
  Json warnings = Json::array();
  for (const auto& p : result) {
    if (p.degenerate_stats) {
      warnings.push_back("point " + format_double(p.value) +
                         ": fewer than two defined assortativity values, stderr reported as 0");
    }
  }
  m["warnings"] = warnings;
  write_json(dir.path() / "manifest.json", m);
  dir.commit();
}

void cmd_analyze(const AnalyzeOptions& o) {
  if (!fs::is_directory(o.trace_dir)) {
    throw ConfigError("trace directory '" + o.trace_dir.string() + "' does not exist");
  }
  std::vector<fs::path> run_dirs;
  for (const auto& e : fs::recursive_directory_iterator(o.trace_dir)) {
    if (e.is_regular_file() && e.path().filename() == "trace.json") run_dirs.push_back(e.path().parent_path());
  }
  std::sort(run_dirs.begin(), run_dirs.end());
  if (run_dirs.empty()) throw ConfigError("no trace.json found under '" + o.trace_dir.string() + "'");

  std::vector<SimulationTrace> traces;
  std::vector<Graph> graphs;
  for (const auto& d : run_dirs) {
    Json j;
    try {
      j = Json::parse(read_text_file(d / "trace.json"));
    } catch (const nlohmann::json::parse_error& e) {
      throw ConfigError((d / "trace.json").string() + ": " + e.what());
    }
    traces.push_back(trace_from_json(j));
    std::istringstream edges(read_text_file(d / "graph.edges"));
    graphs.push_back(read_edge_list(edges, traces.back().node_count()));
  }
  StagedDir dir(default_out(o.out));
  std::vector<RunView> views;
  for (std::size_t i = 0; i < traces.size(); ++i) views.push_back({&graphs[i], &traces[i]});
  const double r_final = traces.front().schedule.segments().back().reliability;
  write_aggregate_files(dir.path(), traces, views, o.bins, r_final);

  std::vector<RcRow> rows;
  fs::create_directories(dir.path() / "echo");
  for (std::size_t i = 0; i < traces.size(); ++i) {
    rows.push_back(echo_assortativity(i, traces[i].seed, graphs[i], traces[i], o.delta_th));
    const EchoSubgraph sub = echo_subgraph(graphs[i], traces[i].final_agents, o.delta_th);
    write_with(dir.path() / "echo" / (run_dir_name(i) + ".gexf"), [&](std::ostream& os) { write_gexf(os, sub); });
  }
  write_with(dir.path() / "assortativity.csv", [&](std::ostream& os) { write_rc_rows(os, rows); });

  std::vector<std::vector<AgentSnapshot>> snaps;
  for (const auto& t : traces) snaps.push_back(t.final_agents);
  const ThresholdHistogram h = threshold_histogram(snaps, o.bins, r_final);
  const AveragedSeries active = activation_density_series(traces);
  Json sources = Json::array();
  for (const auto& d : run_dirs) sources.push_back(fs::relative(d, o.trace_dir).generic_string());
  Json summary{{"n_runs", traces.size()},
               {"sources", sources},
               {"delta_th", o.delta_th},
               {"bins", o.bins},
               {"bimodal_thresholds", is_bimodal(h)},
               {"peak_active_density", *std::max_element(active.mean.begin(), active.mean.end())}};
  try {
    summary["time_to_half_peak"] = time_to_half_peak(active.mean);
  } catch (const InsufficientData&) {
    summary["time_to_half_peak"] = nullptr;
  }
  write_json(dir.path() / "summary.json", summary);
  dir.commit();
}

fs::path cmd_dump_scenario(const DumpOptions& o) {
  const ScenarioConfig cfg = builtin_scenario(o.name);
  fs::path target = default_out(o.out);
  if (target.empty()) throw ConfigError("no output path given (use --out or set RUMORSIM_OUT)");
  if (fs::is_directory(target) || target.filename().empty()) {
    fs::create_directories(target);
    target /= sanitize(cfg.name) + ".scenario";
  } else if (target.has_parent_path()) {
    fs::create_directories(target.parent_path());
  }
  const fs::path tmp = target.string() + ".tmp-" + std::to_string(::getpid());
  write_text_file(tmp, dump_scenario(cfg));
  fs::rename(tmp, target);
  return target;
}

int main_entry(int argc, const char* const* argv) {
  CLI::App app{"Agent-based rumor spreading on scale-free networks"};
  app.require_subcommand(1);
  const std::string env_note = std::string("(default: $") + kOutEnvVar + ")";

  GenerateOptions gen;
  auto* g = app.add_subcommand("generate", "Build a BA graph and fit its degree distribution");
  g->add_option("--nodes", gen.nodes, "Node count")->required();
  g->add_option("--m", gen.m, "Edges per new node")->default_val(2);
  g->add_option("--seed", gen.seed, "RNG seed")->required();
  g->add_option("--k-min", gen.k_min, "Smallest degree in the fit (default m+1)");
  g->add_option("--min-count", gen.min_count, "Smallest class size in the fit")
      ->default_val(kDefaultMinClassCount)
      ->check(CLI::PositiveNumber);
  g->add_flag("--gexf", gen.gexf, "Also write graph.gexf");
  g->add_option("--out", gen.out, "Output directory " + env_note);

  RunOptions run;
  auto* r = app.add_subcommand("run", "One simulation of a scenario");
  r->add_option("--scenario", run.scenario, "Built-in name or scenario file")->required();
  r->add_option("--seed", run.seed, "Master seed")->required();
  r->add_option("--set", run.overrides, "Override key=value (repeatable)");
  r->add_option("--out", run.out, "Output directory " + env_note);

  BatchOptions batch;
  auto* b = app.add_subcommand("batch", "Repeated runs of a scenario, averaged");
  b->add_option("--scenario", batch.scenario, "Built-in name or scenario file")->required();
  b->add_option("--runs", batch.runs, "Number of runs (default from scenario)");
  b->add_option("--seed", batch.seed, "Master seed")->required();
  b->add_option("--set", batch.overrides, "Override key=value (repeatable)");
  b->add_option("--jobs", batch.jobs, "Parallel runs")->default_val(1)->check(CLI::PositiveNumber);
  b->add_option("--bins", batch.bins, "Threshold histogram bins")->default_val(20);
  b->add_option("--delta-th", batch.delta_th, "Echo subgraph threshold tolerance")->default_val(0.4);
  b->add_option("--out", batch.out, "Output directory " + env_note);

  SweepOptions sweep;
  auto* s = app.add_subcommand("sweep", "Batch over a parameter grid with histograms and assortativity");
  s->add_option("--scenario", sweep.scenario, "Built-in name or scenario file")->required();
  s->add_option("--param", sweep.param, "key=lo:hi:count or key=v1,v2,...")->required();
  s->add_option("--runs", sweep.runs, "Runs per point (default from scenario)");
  s->add_option("--seed", sweep.seed, "Master seed")->required();
  s->add_option("--set", sweep.overrides, "Override key=value (repeatable)");
  s->add_option("--jobs", sweep.jobs, "Parallel runs")->default_val(1)->check(CLI::PositiveNumber);
  s->add_option("--bins", sweep.bins, "Threshold histogram bins")->default_val(20);
  s->add_option("--delta-th", sweep.delta_th, "Echo subgraph threshold tolerance")->default_val(0.4);
  s->add_flag("--summary-only", sweep.summary_only, "Skip per-run files");
  s->add_option("--out", sweep.out, "Output directory " + env_note);

  AnalyzeOptions an;
  auto* a = app.add_subcommand("analyze", "Recompute metrics from saved run directories");
  a->add_option("--trace-dir", an.trace_dir, "Directory searched for trace.json")->required();
  a->add_option("--bins", an.bins, "Threshold histogram bins")->default_val(20);
  a->add_option("--delta-th", an.delta_th, "Echo subgraph threshold tolerance")->default_val(0.4);
  a->add_option("--out", an.out, "Output directory " + env_note);

  DumpOptions dump;
  auto* d = app.add_subcommand("dump-scenario", "Write a built-in scenario as an editable file");
  d->add_option("--name", dump.name, "Built-in scenario, e.g. higgs:v1=0.05")->required();
  d->add_option("--out", dump.out, "File or directory " + env_note);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (*g) cmd_generate(gen);
    if (*r) cmd_run(run);
    if (*b) cmd_batch(batch);
    if (*s) cmd_sweep(sweep);
    if (*a) cmd_analyze(an);
    if (*d) std::cout << cmd_dump_scenario(dump).string() << '\n';
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const InvalidParameter& e) {
    std::cerr << "invalid parameter: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntimeError;
  }
  return kOk;
}

}  // namespace rumor::cli
