#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rumor/analysis.hpp"
#include "rumor/engine.hpp"
#include "rumor/graph.hpp"
#include "rumor/model.hpp"
#include "rumor/sir.hpp"

namespace rumor {

enum class GraphPolicy { Fresh, Fixed };

struct NetworkSpec {
  std::size_t nodes = 10000;
  std::size_t m = 2;
  GraphPolicy policy = GraphPolicy::Fresh;
  std::uint64_t graph_seed = 0;  // used only by the fixed policy

  bool operator==(const NetworkSpec&) const = default;
};

struct ScenarioConfig {
  std::string name;
  NetworkSpec network;
  NewsSchedule schedule;
  ModelParams params;
  ThresholdDistribution thresholds;
  std::size_t n_runs = 10;
  int max_cycles = 500;
  std::optional<SirParams> baseline;

  /// Throws InvalidParameter on an inconsistent config.
  void validate() const;

  bool operator==(const ScenarioConfig&) const = default;
};

ScenarioConfig scenario_true_news();
ScenarioConfig scenario_higgs(double v1);
ScenarioConfig scenario_hoax_debunk(std::size_t n);

/// "true_news", "higgs", "higgs:v1=0.05", "hoax_debunk:n=5000". Further
/// comma-separated key=value pairs after the colon are applied as overrides.
/// Throws ConfigError for unknown names.
ScenarioConfig builtin_scenario(std::string_view spec);
std::vector<std::string> builtin_scenario_names();

/// Built-in spec if it names one, otherwise a scenario file path.
ScenarioConfig resolve_scenario(std::string_view spec_or_path);

/// Sectioned key = value text. Parsing a dump yields an equal config.
std::string dump_scenario(const ScenarioConfig& cfg);
ScenarioConfig parse_scenario(std::string_view text);
ScenarioConfig load_scenario(const std::filesystem::path& path);

/// Sets one field. Keys are "section.key" or a bare key when unambiguous;
/// "reliability" and "visualization" overwrite every schedule segment.
void apply_override(ScenarioConfig& cfg, std::string_view key, std::string_view value);
/// Parses "key=value".
void apply_override(ScenarioConfig& cfg, std::string_view assignment);

/// FNV-1a of the canonical dump, the name excluded.
std::uint64_t config_hash(const ScenarioConfig& cfg);
std::string hash_hex(std::uint64_t h);

struct RunResult {
  std::size_t index = 0;
  std::uint64_t seed = 0;        // derive_seed(master, index)
  std::uint64_t graph_seed = 0;  // seed the graph was built from
  std::shared_ptr<const Graph> graph;
  SimulationTrace trace;
  std::optional<SirTrace> sir;
};

struct RunFailure {
  std::size_t index = 0;
  std::uint64_t seed = 0;
  std::string message;
};

struct AggregateResult {
  std::string name;
  std::uint64_t config_hash = 0;
  std::uint64_t master_seed = 0;
  std::vector<RunResult> runs;  // successful runs by index
  std::vector<RunFailure> failures;
  AveragedSeries active;
  std::vector<AveragedSeries> by_color;  // indexed by AgentColor
  AveragedSeries cum_spreaders;
  AveragedSeries cum_debunkers;
  std::optional<AveragedSeries> sir_spreaders;

  std::vector<std::uint64_t> seeds() const;
};

struct BatchOptions {
  unsigned jobs = 1;
  // Record failing runs and aggregate the rest instead of throwing.
  bool keep_going = false;
};

/// Run i uses seed derive_seed(master_seed, i). From it: the graph (fresh
/// policy) with derive_seed(seed, 0), the MAS run with derive_seed(seed, 1),
/// the SIR baseline with derive_seed(seed, 2). Results do not depend on jobs.
/// Without keep_going a failing run throws Error naming its seed.
AggregateResult batch_run(const ScenarioConfig& cfg, std::uint64_t master_seed,
                          const BatchOptions& opts = {});

/// Builds one member of a scenario family for a parameter value.
using ScenarioFamily = std::function<ScenarioConfig(double)>;

/// Base config with every schedule segment's reliability replaced by r and
/// debunking switched on.
ScenarioFamily reliability_family(ScenarioConfig base);

struct SweepPoint {
  double value = 0.0;
  double mean_rc = 0.0;
  double stderr_rc = 0.0;
  std::size_t n_defined = 0;
  std::size_t n_undefined = 0;  // runs with degenerate labels or no edges
  bool degenerate_stats = false;  // fewer than two defined runs
  ThresholdHistogram histogram;
  std::uint64_t config_hash = 0;
  std::uint64_t seed = 0;
  std::vector<std::uint64_t> run_seeds;
};

struct SweepOptions {
  double delta_th = 0.4;
  std::size_t bins = kDefaultHistogramBins;
  unsigned jobs = 1;
  // Sees each point's full batch before it is dropped.
  std::function<void(const SweepPoint&, const AggregateResult&)> on_point;
};

/// Point i runs family(values[i]) with n_runs runs. Every point uses the same
/// master seed, so run k sees the same graph and streams at every value.
/// Assortativity is measured on each run's echo subgraph.
std::vector<SweepPoint> parameter_sweep(const ScenarioFamily& family,
                                        const std::vector<double>& values, std::size_t n_runs,
                                        std::uint64_t seed, const SweepOptions& opts = {});

/// Reliability sweep as plotted for echo chambers; needs at least two values.
std::vector<SweepPoint> assortativity_sweep(const ScenarioFamily& family,
                                            const std::vector<double>& reliabilities,
                                            std::size_t n_runs, std::uint64_t seed,
                                            const SweepOptions& opts = {});

/// n evenly spaced values from lo to hi inclusive.
std::vector<double> linspace(double lo, double hi, std::size_t n);

}  // namespace rumor
