#include "rumor/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "rumor/error.hpp"

namespace rumor {

namespace {

struct MeanSe {
  double mean = 0.0;
  double se = 0.0;
};

MeanSe mean_se(std::span<const double> xs) {
  MeanSe out;
  if (xs.empty()) return out;
  double sum = 0.0;
  for (double x : xs) sum += x;
  out.mean = sum / static_cast<double>(xs.size());
  if (xs.size() > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - out.mean) * (x - out.mean);
    const double sd = std::sqrt(ss / static_cast<double>(xs.size() - 1));
    out.se = sd / std::sqrt(static_cast<double>(xs.size()));
  }
  return out;
}

void require_same_size(std::span<const SimulationTrace> traces) {
  if (traces.empty()) throw InsufficientData("no traces to average");
  for (const auto& t : traces) {
    if (t.node_count() != traces.front().node_count()) {
      throw InvalidParameter("traces come from graphs of different sizes");
    }
  }
}

}  // namespace

AveragedSeries average_series(std::span<const std::vector<double>> runs) {
  if (runs.empty()) throw InsufficientData("no runs to average");
  std::size_t len = 0;
  for (const auto& r : runs) {
    if (r.empty()) throw InsufficientData("empty run in average");
    len = std::max(len, r.size());
  }
  AveragedSeries out;
  out.n_runs = runs.size();
  out.mean.resize(len);
  out.stderr_.resize(len);
  std::vector<double> column(runs.size());
  for (std::size_t t = 0; t < len; ++t) {
    for (std::size_t i = 0; i < runs.size(); ++i) {
      column[i] = t < runs[i].size() ? runs[i][t] : runs[i].back();
    }
    const MeanSe ms = mean_se(column);
    out.mean[t] = ms.mean;
    out.stderr_[t] = ms.se;
  }
  return out;
}

std::vector<double> density(const SimulationTrace& trace,
                            const std::function<std::size_t(const CycleRecord&)>& select) {
  const auto n = static_cast<double>(trace.node_count());
  std::vector<double> out;
  out.reserve(trace.cycles.size());
  for (const auto& c : trace.cycles) out.push_back(n > 0 ? static_cast<double>(select(c)) / n : 0.0);
  return out;
}

std::vector<double> active_density(const SimulationTrace& trace) {
  return density(trace, [](const CycleRecord& c) { return c.active(); });
}

std::vector<double> sir_spreader_density(const SirTrace& trace) {
  const auto n = static_cast<double>(trace.node_count);
  std::vector<double> out;
  out.reserve(trace.cycles.size());
  for (const auto& c : trace.cycles) out.push_back(static_cast<double>(c.counts.spreaders) / n);
  return out;
}

AveragedSeries activation_density_series(std::span<const SimulationTrace> traces) {
  require_same_size(traces);
  std::vector<std::vector<double>> runs;
  for (const auto& t : traces) runs.push_back(active_density(t));
  return average_series(runs);
}

AveragedSeries color_density_series(std::span<const SimulationTrace> traces, AgentColor c) {
  require_same_size(traces);
  std::vector<std::vector<double>> runs;
  for (const auto& t : traces) {
    runs.push_back(density(t, [c](const CycleRecord& r) { return r.count(c); }));
  }
  return average_series(runs);
}

AveragedSeries sir_density_series(std::span<const SirTrace> traces) {
  if (traces.empty()) throw InsufficientData("no SIR traces to average");
  std::vector<std::vector<double>> runs;
  for (const auto& t : traces) runs.push_back(sir_spreader_density(t));
  return average_series(runs);
}

std::size_t time_to_half_peak(std::span<const double> series) {
  if (series.empty()) throw InsufficientData("empty series has no peak");
  const double peak = *std::max_element(series.begin(), series.end());
  if (!(peak > 0.0)) throw InsufficientData("series never rises above zero");
  for (std::size_t t = 0; t < series.size(); ++t) {
    if (series[t] >= 0.5 * peak) return t;
  }
  return series.size() - 1;  // unreachable: the peak itself qualifies
}

DegreeClassDensity density_by_degree(std::span<const RunView> runs) {
  // k -> per-run activated fractions, for the runs where class k exists
  std::map<std::size_t, std::vector<double>> per_class;
  for (const auto& run : runs) {
    const Graph& g = *run.graph;
    const auto& snap = run.trace->final_agents;
    if (snap.size() != g.node_count()) {
      throw InvalidParameter("snapshot size " + std::to_string(snap.size()) +
                             " does not match graph size " + std::to_string(g.node_count()));
    }
    std::map<std::size_t, std::pair<std::size_t, std::size_t>> tally;  // k -> (activated, total)
    for (NodeId i = 0; i < g.node_count(); ++i) {
      auto& [hit, total] = tally[g.degree(i)];
      ++total;
      if (snap[i].activated_at) ++hit;
    }
    for (const auto& [k, ht] : tally) {
      per_class[k].push_back(static_cast<double>(ht.first) / static_cast<double>(ht.second));
    }
  }
  DegreeClassDensity out;
  for (const auto& [k, fs] : per_class) {
    const MeanSe ms = mean_se(fs);
    out.classes.push_back({k, ms.mean, ms.se, fs.size()});
  }
  return out;
}

DegreeClassDensity density_by_degree(std::span<const SimulationTrace> traces, const Graph& g) {
  std::vector<RunView> views;
  for (const auto& t : traces) views.push_back({&g, &t});
  return density_by_degree(views);
}

ThresholdHistogram threshold_histogram(std::span<const std::vector<AgentSnapshot>> snapshots,
                                       std::size_t bins, double reliability) {
  if (bins < 10) throw InvalidParameter("threshold histogram needs at least 10 bins");
  ThresholdHistogram h;
  h.reliability = reliability;
  h.n_runs = snapshots.size();
  h.edges.resize(bins + 1);
  for (std::size_t i = 0; i <= bins; ++i) {
    h.edges[i] = static_cast<double>(i) / static_cast<double>(bins);
  }
  std::vector<std::size_t> counts(bins, 0);
  std::size_t total = 0;
  for (const auto& snap : snapshots) {
    for (const auto& a : snap) {
      const double th = std::clamp(a.threshold, 0.0, 1.0);
      auto b = static_cast<std::size_t>(th * static_cast<double>(bins));
      ++counts[std::min(b, bins - 1)];
      ++total;
    }
  }
  if (total == 0) throw InsufficientData("no thresholds to histogram");
  h.frequency.resize(bins);
  for (std::size_t i = 0; i < bins; ++i) {
    h.frequency[i] = static_cast<double>(counts[i]) / static_cast<double>(total);
  }
  return h;
}

std::vector<double> smooth3(std::span<const double> f) {
  std::vector<double> s(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    const std::size_t lo = i == 0 ? 0 : i - 1;
    const std::size_t hi = std::min(i + 1, f.size() - 1);
    double sum = 0.0;
    for (std::size_t j = lo; j <= hi; ++j) sum += f[j];
    s[i] = sum / static_cast<double>(hi - lo + 1);
  }
  return s;
}

bool is_bimodal(std::span<const double> frequency, double trough_drop) {
  const std::vector<double> s = smooth3(frequency);
  std::vector<std::size_t> peaks;
  for (std::size_t i = 1; i + 1 < s.size(); ++i) {
    if (s[i] > s[i - 1] && s[i] >= s[i + 1]) peaks.push_back(i);
  }
  for (std::size_t a = 0; a < peaks.size(); ++a) {
    for (std::size_t b = a + 1; b < peaks.size(); ++b) {
      const double smaller = std::min(s[peaks[a]], s[peaks[b]]);
      const double trough =
          *std::min_element(s.begin() + static_cast<std::ptrdiff_t>(peaks[a]),
                            s.begin() + static_cast<std::ptrdiff_t>(peaks[b]) + 1);
      if (smaller > 0.0 && trough <= (1.0 - trough_drop) * smaller) return true;
    }
  }
  return false;
}

AssortativityResult attribute_assortativity(const Graph& g, std::span<const int> labels) {
  if (labels.size() != g.node_count()) {
    throw InvalidParameter("need one label per node");
  }
  if (g.edge_count() == 0) throw EmptySubgraph("assortativity of a graph without edges");

  std::vector<int> classes;
  for (NodeId i = 0; i < g.node_count(); ++i) {
    if (labels[i] < 0) throw InvalidParameter("labels must be non-negative");
    if (g.degree(i) > 0) classes.push_back(labels[i]);
  }
  std::sort(classes.begin(), classes.end());
  classes.erase(std::unique(classes.begin(), classes.end()), classes.end());
  if (classes.size() < 2) throw DegenerateLabels("all edge ends share one label");

  const std::size_t c = classes.size();
  auto index = [&](int label) {
    return static_cast<std::size_t>(std::lower_bound(classes.begin(), classes.end(), label) -
                                    classes.begin());
  };
  std::vector<double> e(c * c, 0.0);
  for (const auto& [i, j] : g.edges()) {
    const std::size_t a = index(labels[i]);
    const std::size_t b = index(labels[j]);
    e[a * c + b] += 1.0;
    e[b * c + a] += 1.0;
  }
  const double norm = 2.0 * static_cast<double>(g.edge_count());
  double trace = 0.0;
  double ab = 0.0;
  for (std::size_t a = 0; a < c; ++a) {
    double row = 0.0;
    double col = 0.0;
    for (std::size_t b = 0; b < c; ++b) {
      row += e[a * c + b] / norm;
      col += e[b * c + a] / norm;
    }
    trace += e[a * c + a] / norm;
    ab += row * col;
  }
  if (1.0 - ab <= 0.0) throw DegenerateLabels("assortativity denominator vanishes");

  AssortativityResult out;
  out.r_c = (trace - ab) / (1.0 - ab);
  out.n_edges_used = g.edge_count();
  out.classes = std::move(classes);
  return out;
}

AgentColor effective_role(const AgentSnapshot& a) {
  return a.color == AgentColor::Inactive ? a.last_active : a.color;
}

EchoSubgraph echo_subgraph(const Graph& g, std::span<const AgentSnapshot> snapshot,
                           double delta_th) {
  if (snapshot.size() != g.node_count()) {
    throw InvalidParameter("snapshot does not match the graph");
  }
  if (!(delta_th >= 0.0)) throw InvalidParameter("delta_th must be >= 0");

  EchoSubgraph out;
  std::vector<NodeId> local(g.node_count(), static_cast<NodeId>(-1));
  for (NodeId i = 0; i < g.node_count(); ++i) {
    const AgentColor role = effective_role(snapshot[i]);
    if (!is_active(role)) continue;
    local[i] = static_cast<NodeId>(out.original_ids.size());
    out.original_ids.push_back(i);
    out.labels.push_back(role == AgentColor::Debunker ? kDebunkerLabel : kSpreaderLabel);
    out.thresholds.push_back(snapshot[i].threshold);
  }
  std::vector<std::pair<NodeId, NodeId>> kept;
  for (const auto& [i, j] : g.edges()) {
    if (local[i] == static_cast<NodeId>(-1) || local[j] == static_cast<NodeId>(-1)) continue;
    if (std::abs(snapshot[i].threshold - snapshot[j].threshold) <= delta_th) {
      kept.emplace_back(local[i], local[j]);
    }
  }
  out.graph = Graph(out.original_ids.size(), kept);
  return out;
}

}  // namespace rumor
