#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "rumor/engine.hpp"
#include "rumor/graph.hpp"
#include "rumor/sir.hpp"

namespace rumor {

/// Per-cycle mean over runs with the standard error of that mean.
struct AveragedSeries {
  std::vector<double> mean;
  std::vector<double> stderr_;
  std::size_t n_runs = 0;

  std::size_t size() const { return mean.size(); }
};

/// Averages runs of unequal length. A run shorter than the longest one is
/// extended with its last value. SE is sample sd / sqrt(runs), 0 for one run.
/// Throws InsufficientData on no runs or an empty run.
AveragedSeries average_series(std::span<const std::vector<double>> runs);

/// Per-cycle count picked by `select`, divided by the node count.
std::vector<double> density(const SimulationTrace& trace,
                            const std::function<std::size_t(const CycleRecord&)>& select);

/// Activated agents that are not yet Inactive, over n.
std::vector<double> active_density(const SimulationTrace& trace);
std::vector<double> sir_spreader_density(const SirTrace& trace);

/// Requires all traces to share the node count.
AveragedSeries activation_density_series(std::span<const SimulationTrace> traces);
AveragedSeries color_density_series(std::span<const SimulationTrace> traces, AgentColor c);
AveragedSeries sir_density_series(std::span<const SirTrace> traces);

/// First index at which the series reaches half its maximum.
/// Throws InsufficientData when empty or never positive.
std::size_t time_to_half_peak(std::span<const double> series);

struct DegreeClassStat {
  std::size_t k = 0;
  double mean = 0.0;  // fraction of the class ever activated
  double stderr_ = 0.0;
  std::size_t n_occurrences = 0;  // runs in which the class exists
};

struct DegreeClassDensity {
  std::vector<DegreeClassStat> classes;  // ascending k, absent classes omitted
};

struct RunView {
  const Graph* graph = nullptr;
  const SimulationTrace* trace = nullptr;
};

/// Each run may carry its own graph (fresh-network scenarios).
DegreeClassDensity density_by_degree(std::span<const RunView> runs);
DegreeClassDensity density_by_degree(std::span<const SimulationTrace> traces, const Graph& g);

struct ThresholdHistogram {
  std::vector<double> edges;      // bins + 1 values from 0 to 1
  std::vector<double> frequency;  // sums to 1
  double reliability = 0.0;
  std::size_t n_runs = 0;

  std::size_t bins() const { return frequency.size(); }
};

constexpr std::size_t kDefaultHistogramBins = 20;

/// Pools final thresholds of all snapshots. Bin i is [i/b, (i+1)/b), the last
/// one closed. Throws InvalidParameter for bins < 10, InsufficientData when
/// there is nothing to count.
ThresholdHistogram threshold_histogram(std::span<const std::vector<AgentSnapshot>> snapshots,
                                       std::size_t bins, double reliability);

/// Centred 3-bin moving average, truncated at the ends.
std::vector<double> smooth3(std::span<const double> f);

/// Two interior local maxima of the smoothed histogram with a trough between
/// them at most (1 - trough_drop) times the smaller one.
bool is_bimodal(std::span<const double> frequency, double trough_drop = 0.2);
inline bool is_bimodal(const ThresholdHistogram& h, double trough_drop = 0.2) {
  return is_bimodal(h.frequency, trough_drop);
}

struct AssortativityResult {
  double r_c = 0.0;
  std::size_t n_edges_used = 0;
  std::vector<int> classes;  // distinct labels, ascending
};

/// Newman's attribute assortativity over every edge of g. labels[i] >= 0 is
/// node i's class. Throws EmptySubgraph without edges and DegenerateLabels
/// when the edge ends carry a single class.
AssortativityResult attribute_assortativity(const Graph& g, std::span<const int> labels);

constexpr int kSpreaderLabel = 0;
constexpr int kDebunkerLabel = 1;

/// The role an agent played: its color, or its last active color once
/// Inactive. Undeployed agents have no role.
AgentColor effective_role(const AgentSnapshot& a);

struct EchoSubgraph {
  Graph graph;
  std::vector<int> labels;  // kSpreaderLabel or kDebunkerLabel
  std::vector<NodeId> original_ids;
  std::vector<double> thresholds;  // final thresholds
};

/// Agents that spread or debunked (including Inactive ones), joined by the
/// original edges whose endpoint thresholds differ by at most delta_th.
EchoSubgraph echo_subgraph(const Graph& g, std::span<const AgentSnapshot> snapshot,
                           double delta_th);

}  // namespace rumor
