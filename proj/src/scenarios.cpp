#include "rumor/scenarios.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <sstream>
#include <thread>

#include "rumor/error.hpp"
#include "rumor/format.hpp"
#include "rumor/io.hpp"
#include "rumor/netgen.hpp"
#include "rumor/random.hpp"

namespace rumor {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(s.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::string_view policy_name(GraphPolicy p) { return p == GraphPolicy::Fixed ? "fixed" : "fresh"; }

GraphPolicy parse_policy(std::string_view s) {
  if (s == "fresh") return GraphPolicy::Fresh;
  if (s == "fixed") return GraphPolicy::Fixed;
  throw ConfigError("graph_policy must be fresh or fixed, got '" + std::string(s) + "'");
}

int parse_cycles(std::string_view v, std::string_view what) {
  const long long x = parse_int(v, what);
  if (x < 0 || x > 1'000'000'000) throw ConfigError(std::string(what) + " out of range");
  return static_cast<int>(x);
}

SirParams& baseline_of(ScenarioConfig& c) {
  if (!c.baseline) c.baseline = SirParams{};
  return *c.baseline;
}

// Scalar fields shared by the file parser and the override mechanism.
struct Field {
  const char* section;
  const char* key;
  void (*set)(ScenarioConfig&, std::string_view);
};

const std::vector<Field>& fields() {
  static const std::vector<Field> table = {
      {"network", "nodes",
       [](ScenarioConfig& c, std::string_view v) { c.network.nodes = parse_uint(v, "nodes"); }},
      {"network", "m", [](ScenarioConfig& c, std::string_view v) { c.network.m = parse_uint(v, "m"); }},
      {"network", "graph_policy",
       [](ScenarioConfig& c, std::string_view v) { c.network.policy = parse_policy(v); }},
      {"network", "graph_seed",
       [](ScenarioConfig& c, std::string_view v) { c.network.graph_seed = parse_uint(v, "graph_seed"); }},
      {"model", "influence_fraction",
       [](ScenarioConfig& c, std::string_view v) {
         c.params.influence_fraction = parse_double(v, "influence_fraction");
       }},
      {"model", "hub_degree_quantile",
       [](ScenarioConfig& c, std::string_view v) {
         c.params.hub_degree_quantile = parse_double(v, "hub_degree_quantile");
       }},
      {"model", "delta_influence",
       [](ScenarioConfig& c, std::string_view v) {
         c.params.delta_influence = parse_double(v, "delta_influence");
       }},
      {"model", "delta_persuasion",
       [](ScenarioConfig& c, std::string_view v) {
         c.params.delta_persuasion = parse_double(v, "delta_persuasion");
       }},
      {"model", "epsilon_similarity",
       [](ScenarioConfig& c, std::string_view v) {
         c.params.epsilon_similarity = parse_double(v, "epsilon_similarity");
       }},
      {"model", "t_active",
       [](ScenarioConfig& c, std::string_view v) { c.params.t_active = parse_cycles(v, "t_active"); }},
      {"model", "debunk_margin",
       [](ScenarioConfig& c, std::string_view v) {
         c.params.debunk_margin = parse_double(v, "debunk_margin");
       }},
      {"model", "debunking",
       [](ScenarioConfig& c, std::string_view v) {
         c.params.debunking_enabled = parse_bool(v, "debunking");
       }},
      {"population", "thresholds",
       [](ScenarioConfig& c, std::string_view v) { c.thresholds = ThresholdDistribution::parse(v); }},
      {"run", "runs", [](ScenarioConfig& c, std::string_view v) { c.n_runs = parse_uint(v, "runs"); }},
      {"run", "max_cycles",
       [](ScenarioConfig& c, std::string_view v) { c.max_cycles = parse_cycles(v, "max_cycles"); }},
      {"baseline", "alpha",
       [](ScenarioConfig& c, std::string_view v) { baseline_of(c).alpha = parse_double(v, "alpha"); }},
      {"baseline", "lambda",
       [](ScenarioConfig& c, std::string_view v) { baseline_of(c).lambda = parse_double(v, "lambda"); }},
      {"baseline", "initial_spreaders",
       [](ScenarioConfig& c, std::string_view v) {
         baseline_of(c).n_initial_spreaders = parse_uint(v, "initial_spreaders");
       }},
  };
  return table;
}

const Field* find_field(std::string_view section, std::string_view key) {
  for (const auto& f : fields()) {
    if (f.section == section && f.key == key) return &f;
  }
  return nullptr;
}

ScheduleSegment parse_segment(std::string_view v) {
  std::istringstream in{std::string(v)};
  std::string a, b, c, extra;
  if (!(in >> a >> b >> c) || (in >> extra)) {
    throw ConfigError("segment needs 'start_cycle reliability visualization', got '" +
                      std::string(v) + "'");
  }
  return {parse_cycles(a, "segment start"), parse_double(b, "segment reliability"),
          parse_double(c, "segment visualization")};
}

void set_all_segments(ScenarioConfig& c, double value, bool reliability) {
  auto segs = c.schedule.segments();
  for (auto& s : segs) (reliability ? s.reliability : s.visualization) = value;
  c.schedule = NewsSchedule(std::move(segs));
}

void checked_validate(const ScenarioConfig& c) {
  try {
    c.validate();
  } catch (const InvalidParameter& e) {
    throw ConfigError(e.what());
  }
}

std::string dump_body(const ScenarioConfig& c) {
  std::ostringstream os;
  os << "[network]\n"
     << "nodes = " << c.network.nodes << '\n'
     << "m = " << c.network.m << '\n'
     << "graph_policy = " << policy_name(c.network.policy) << '\n'
     << "graph_seed = " << c.network.graph_seed << '\n'
     << "\n[news]\n"
     << "# segment = start_cycle reliability visualization\n";
  for (const auto& s : c.schedule.segments()) {
    os << "segment = " << s.start_cycle << ' ' << format_double(s.reliability) << ' '
       << format_double(s.visualization) << '\n';
  }
  const auto& p = c.params;
  os << "\n[model]\n"
     << "influence_fraction = " << format_double(p.influence_fraction) << '\n'
     << "hub_degree_quantile = " << format_double(p.hub_degree_quantile) << '\n'
     << "delta_influence = " << format_double(p.delta_influence) << '\n'
     << "delta_persuasion = " << format_double(p.delta_persuasion) << '\n'
     << "epsilon_similarity = " << format_double(p.epsilon_similarity) << '\n'
     << "t_active = " << p.t_active << '\n'
     << "debunk_margin = " << format_double(p.debunk_margin) << '\n'
     << "debunking = " << (p.debunking_enabled ? "true" : "false") << '\n'
     << "\n[population]\n"
     << "thresholds = " << c.thresholds.to_string() << '\n'
     << "\n[run]\n"
     << "runs = " << c.n_runs << '\n'
     << "max_cycles = " << c.max_cycles << '\n';
  if (c.baseline) {
    os << "\n[baseline]\n"
       << "alpha = " << format_double(c.baseline->alpha) << '\n'
       << "lambda = " << format_double(c.baseline->lambda) << '\n'
       << "initial_spreaders = " << c.baseline->n_initial_spreaders << '\n';
  }
  return os.str();
}

}  // namespace

void ScenarioConfig::validate() const {
  if (network.m < 1 || network.nodes <= network.m) {
    throw InvalidParameter("network needs m >= 1 and nodes > m");
  }
  if (n_runs < 1) throw InvalidParameter("runs must be >= 1");
  if (max_cycles < 1) throw InvalidParameter("max_cycles must be >= 1");
  params.validate();
  if (baseline) {
    baseline->validate();
    if (baseline->n_initial_spreaders > network.nodes) {
      throw InvalidParameter("more SIR initial spreaders than nodes");
    }
  }
}

ScenarioConfig scenario_true_news() {
  ScenarioConfig c;
  c.name = "true_news";
  c.schedule = NewsSchedule::constant(0.99, 0.10);
  c.baseline = SirParams{0.05, 0.27, 1};
  return c;
}

ScenarioConfig scenario_higgs(double v1) {
  if (!(v1 > 0.0 && v1 <= 1.0)) throw InvalidParameter("higgs v1 must lie in (0, 1]");
  ScenarioConfig c;
  c.name = "higgs:v1=" + format_double(v1);
  c.schedule = NewsSchedule({{0, 0.45, v1}, {20, 0.99, v1}});
  return c;
}

ScenarioConfig scenario_hoax_debunk(std::size_t n) {
  ScenarioConfig c;
  c.name = "hoax_debunk:n=" + std::to_string(n);
  c.network.nodes = n;
  c.schedule = NewsSchedule({{0, 0.67, 0.15}, {3, 0.48, 0.60}});
  c.params.debunking_enabled = true;
  c.validate();
  return c;
}

std::vector<std::string> builtin_scenario_names() { return {"true_news", "higgs", "hoax_debunk"}; }

ScenarioConfig builtin_scenario(std::string_view spec) {
  const auto colon = spec.find(':');
  const std::string_view name = trim(spec.substr(0, colon));
  std::vector<std::pair<std::string_view, std::string_view>> args;
  if (colon != std::string_view::npos) {
    for (auto part : split(spec.substr(colon + 1), ',')) {
      part = trim(part);
      if (part.empty()) continue;
      const auto eq = part.find('=');
      if (eq == std::string_view::npos) {
        throw ConfigError("scenario argument '" + std::string(part) + "' is not key=value");
      }
      args.emplace_back(trim(part.substr(0, eq)), trim(part.substr(eq + 1)));
    }
  }
  auto take = [&](std::string_view key) -> std::optional<std::string_view> {
    for (auto it = args.begin(); it != args.end(); ++it) {
      if (it->first == key) {
        auto v = it->second;
        args.erase(it);
        return v;
      }
    }
    return std::nullopt;
  };

  ScenarioConfig c;
  try {
    if (name == "true_news") {
      c = scenario_true_news();
    } else if (name == "higgs") {
      const auto v1 = take("v1");
      c = scenario_higgs(v1 ? parse_double(*v1, "v1") : 0.10);
    } else if (name == "hoax_debunk") {
      const auto n = take("n");
      c = scenario_hoax_debunk(n ? parse_uint(*n, "n") : 10000);
    } else {
      throw ConfigError("unknown scenario '" + std::string(name) + "'");
    }
  } catch (const InvalidParameter& e) {
    throw ConfigError(e.what());
  }
  for (const auto& [k, v] : args) apply_override(c, k, v);
  if (!args.empty()) c.name = std::string(trim(spec));
  checked_validate(c);
  return c;
}

ScenarioConfig resolve_scenario(std::string_view spec_or_path) {
  const auto name = trim(spec_or_path.substr(0, spec_or_path.find(':')));
  for (const auto& b : builtin_scenario_names()) {
    if (name == b) return builtin_scenario(spec_or_path);
  }
  return load_scenario(std::filesystem::path(std::string(spec_or_path)));
}

std::string dump_scenario(const ScenarioConfig& cfg) {
  return "name = " + cfg.name + "\n\n" + dump_body(cfg);
}

ScenarioConfig parse_scenario(std::string_view text) {
  ScenarioConfig c;
  std::string section;
  std::vector<ScheduleSegment> segments;
  bool saw_baseline = false;
  std::size_t lineno = 0;
  for (auto raw : split(text, '\n')) {
    ++lineno;
    const auto where = [&] { return "line " + std::to_string(lineno) + ": "; };
    std::string_view line = raw.substr(0, raw.find('#'));
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(where() + "unterminated section header");
      section = std::string(trim(line.substr(1, line.size() - 2)));
      if (section == "baseline") saw_baseline = true;
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError(where() + "expected key = value");
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    try {
      if (section.empty() && key == "name") {
        c.name = std::string(value);
      } else if (section == "news" && key == "segment") {
        segments.push_back(parse_segment(value));
      } else if (const Field* f = find_field(section, key)) {
        f->set(c, value);
      } else {
        throw ConfigError("unknown key '" + std::string(key) + "' in section [" + section + "]");
      }
    } catch (const ConfigError& e) {
      throw ConfigError(where() + e.what());
    }
  }
  if (saw_baseline) baseline_of(c);
  if (!segments.empty()) {
    try {
      c.schedule = NewsSchedule(std::move(segments));
    } catch (const InvalidParameter& e) {
      throw ConfigError(std::string("schedule: ") + e.what());
    }
  }
  checked_validate(c);
  return c;
}

ScenarioConfig load_scenario(const std::filesystem::path& path) {
  try {
    return parse_scenario(read_text_file(path));
  } catch (const ConfigError& e) {
    const std::string msg = e.what();
    if (msg.find(path.string()) != std::string::npos) throw;
    throw ConfigError(path.string() + ": " + msg);
  }
}

void apply_override(ScenarioConfig& cfg, std::string_view key, std::string_view value) {
  key = trim(key);
  value = trim(value);
  std::string_view section;
  std::string_view bare = key;
  if (const auto dot = key.find('.'); dot != std::string_view::npos) {
    section = key.substr(0, dot);
    bare = key.substr(dot + 1);
  }
  try {
    if (bare == "reliability" || bare == "visualization") {
      if (!section.empty() && section != "news") throw ConfigError("unknown key '" + std::string(key) + "'");
      set_all_segments(cfg, parse_double(value, bare), bare == "reliability");
    } else if (bare == "name" && section.empty()) {
      cfg.name = std::string(value);
    } else if (section == "baseline" && bare == "enabled") {
      if (parse_bool(value, key)) {
        baseline_of(cfg);
      } else {
        cfg.baseline.reset();
      }
    } else {
      const Field* hit = nullptr;
      for (const auto& f : fields()) {
        if (f.key != bare || (!section.empty() && f.section != section)) continue;
        if (hit) throw ConfigError("ambiguous key '" + std::string(key) + "'");
        hit = &f;
      }
      if (!hit) throw ConfigError("unknown key '" + std::string(key) + "'");
      hit->set(cfg, value);
    }
  } catch (const InvalidParameter& e) {
    throw ConfigError(std::string(key) + ": " + e.what());
  }
}

void apply_override(ScenarioConfig& cfg, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos) {
    throw ConfigError("override '" + std::string(assignment) + "' is not key=value");
  }
  apply_override(cfg, assignment.substr(0, eq), assignment.substr(eq + 1));
}

std::uint64_t config_hash(const ScenarioConfig& cfg) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : dump_body(cfg)) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hash_hex(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::vector<std::uint64_t> AggregateResult::seeds() const {
  std::vector<std::uint64_t> out;
  for (const auto& r : runs) out.push_back(r.seed);
  return out;
}

AggregateResult batch_run(const ScenarioConfig& cfg, std::uint64_t master_seed,
                          const BatchOptions& opts) {
  cfg.validate();
  const std::size_t n_runs = cfg.n_runs;

  std::shared_ptr<const Graph> shared;
  if (cfg.network.policy == GraphPolicy::Fixed) {
    shared = std::make_shared<const Graph>(
        generate_ba(cfg.network.nodes, cfg.network.m, cfg.network.graph_seed));
  }

  std::vector<std::optional<RunResult>> results(n_runs);
  std::vector<std::optional<RunFailure>> failures(n_runs);
  std::atomic<std::size_t> next{0};

  auto worker = [&] {
    for (std::size_t i = next++; i < n_runs; i = next++) {
      const std::uint64_t seed = derive_seed(master_seed, i);
      try {
        RunResult r;
        r.index = i;
        r.seed = seed;
        if (shared) {
          r.graph_seed = cfg.network.graph_seed;
          r.graph = shared;
        } else {
          r.graph_seed = derive_seed(seed, 0);
          r.graph = std::make_shared<const Graph>(
              generate_ba(cfg.network.nodes, cfg.network.m, r.graph_seed));
        }
        r.trace = run(*r.graph, cfg.schedule, cfg.params, cfg.max_cycles, derive_seed(seed, 1),
                      cfg.thresholds);
        if (cfg.baseline) {
          r.sir = run_sir(*r.graph, *cfg.baseline, cfg.max_cycles, derive_seed(seed, 2));
        }
        results[i] = std::move(r);
      } catch (const std::exception& e) {
        failures[i] = RunFailure{i, seed, e.what()};
      }
    }
  };

  const unsigned jobs = std::max(1u, std::min<unsigned>(opts.jobs, static_cast<unsigned>(n_runs)));
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned k = 0; k < jobs; ++k) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  AggregateResult agg;
  agg.name = cfg.name;
  agg.config_hash = config_hash(cfg);
  agg.master_seed = master_seed;
  for (std::size_t i = 0; i < n_runs; ++i) {
    if (failures[i]) {
      if (!opts.keep_going) {
        throw Error("run " + std::to_string(i) + " (seed " + std::to_string(failures[i]->seed) +
                    ") failed: " + failures[i]->message);
      }
      agg.failures.push_back(*failures[i]);
    } else {
      agg.runs.push_back(std::move(*results[i]));
    }
  }
  if (agg.runs.empty()) throw Error("all " + std::to_string(n_runs) + " runs failed");

  std::vector<SimulationTrace> traces;
  for (const auto& r : agg.runs) traces.push_back(r.trace);
  agg.active = activation_density_series(traces);
  for (auto c : kAllColors) agg.by_color.push_back(color_density_series(traces, c));
  std::vector<std::vector<double>> cs, cd;
  for (const auto& t : traces) {
    cs.push_back(density(t, [](const CycleRecord& r) { return r.cum_spreaders; }));
    cd.push_back(density(t, [](const CycleRecord& r) { return r.cum_debunkers; }));
  }
  agg.cum_spreaders = average_series(cs);
  agg.cum_debunkers = average_series(cd);
  if (cfg.baseline) {
    std::vector<SirTrace> sirs;
    for (const auto& r : agg.runs) sirs.push_back(*r.sir);
    agg.sir_spreaders = sir_density_series(sirs);
  }
  return agg;
}

ScenarioFamily reliability_family(ScenarioConfig base) {
  return [base = std::move(base)](double r) {
    ScenarioConfig c = base;
    set_all_segments(c, r, true);
    c.params.debunking_enabled = true;
    c.name = base.name + "@r=" + format_double(r);
    return c;
  };
}

std::vector<SweepPoint> parameter_sweep(const ScenarioFamily& family,
                                        const std::vector<double>& values, std::size_t n_runs,
                                        std::uint64_t seed, const SweepOptions& opts) {
  if (values.empty()) throw InvalidParameter("sweep needs at least one value");
  if (n_runs < 1) throw InvalidParameter("sweep needs at least one run per point");
  std::vector<SweepPoint> out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    ScenarioConfig cfg = family(values[i]);
    cfg.n_runs = n_runs;
    SweepPoint p;
    p.value = values[i];
    p.seed = seed;
    p.config_hash = config_hash(cfg);
    AggregateResult agg = batch_run(cfg, p.seed, {opts.jobs, false});
    p.run_seeds = agg.seeds();

    std::vector<double> rcs;
    std::vector<std::vector<AgentSnapshot>> snaps;
    for (const auto& r : agg.runs) {
      snaps.push_back(r.trace.final_agents);
      const EchoSubgraph sub = echo_subgraph(*r.graph, r.trace.final_agents, opts.delta_th);
      try {
        rcs.push_back(attribute_assortativity(sub.graph, sub.labels).r_c);
      } catch (const DegenerateLabels&) {
        ++p.n_undefined;
      } catch (const EmptySubgraph&) {
        ++p.n_undefined;
      }
    }
    p.n_defined = rcs.size();
    p.degenerate_stats = rcs.size() < 2;
    if (!rcs.empty()) {
      double sum = 0.0;
      for (double x : rcs) sum += x;
      p.mean_rc = sum / static_cast<double>(rcs.size());
      if (rcs.size() > 1) {
        double ss = 0.0;
        for (double x : rcs) ss += (x - p.mean_rc) * (x - p.mean_rc);
        p.stderr_rc = std::sqrt(ss / static_cast<double>(rcs.size() - 1)) /
                      std::sqrt(static_cast<double>(rcs.size()));
      }
    }
    const double r_final = cfg.schedule.segments().back().reliability;
    p.histogram = threshold_histogram(snaps, opts.bins, r_final);
    if (opts.on_point) opts.on_point(p, agg);
    out.push_back(std::move(p));
  }
  return out;
}

std::vector<SweepPoint> assortativity_sweep(const ScenarioFamily& family,
                                            const std::vector<double>& reliabilities,
                                            std::size_t n_runs, std::uint64_t seed,
                                            const SweepOptions& opts) {
  if (reliabilities.size() < 2) throw InvalidParameter("assortativity sweep needs two reliabilities");
  return parameter_sweep(family, reliabilities, n_runs, seed, opts);
}

std::vector<double> linspace(double lo, double hi, std::size_t n) {
  if (n == 0) throw InvalidParameter("linspace needs at least one point");
  if (n == 1) return {lo};
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  out.back() = hi;
  return out;
}

}  // namespace rumor
