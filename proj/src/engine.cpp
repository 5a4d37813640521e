#include "rumor/engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "rumor/error.hpp"

namespace rumor {

namespace {

void activate(AgentState& a, AgentColor color, int t) {
  a.color = color;
  a.activated_at = t;
  if (is_spreader(color)) a.ever_spread = true;
  if (color == AgentColor::Debunker) a.ever_debunked = true;
}

// Returns true when `sender` had not contacted `a` before.
bool record_contact(AgentState& a, NodeId sender) {
  auto it = std::lower_bound(a.contacted_by.begin(), a.contacted_by.end(), sender);
  if (it != a.contacted_by.end() && *it == sender) return false;
  a.contacted_by.insert(it, sender);
  return true;
}

double sample_threshold(const ThresholdDistribution& dist, Rng& rng) {
  if (dist.name == "constant") return std::clamp(dist.a, 0.0, 1.0);
  if (dist.name == "uniform") return std::clamp(rng.uniform(dist.a, dist.b), 0.0, 1.0);
  if (dist.name == "normal") {
    // Box-Muller on 1 - u so the log argument is never zero.
    const double u1 = 1.0 - rng.uniform();
    const double u2 = rng.uniform();
    const double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    return std::clamp(dist.a + dist.b * z, 0.0, 1.0);
  }
  throw ConfigError("unknown threshold distribution '" + dist.name + "'");
}

}  // namespace

std::vector<AgentState> init_population(const Graph& g, const ThresholdDistribution& dist,
                                        std::uint64_t seed) {
  Rng rng(seed);
  std::vector<AgentState> agents(g.node_count());
  for (auto& a : agents) {
    a.threshold = sample_threshold(dist, rng);
    a.threshold_initial = a.threshold;
  }
  return agents;
}

std::size_t hub_degree_cutoff(const Graph& g, double quantile) {
  const auto n = g.node_count();
  const auto count = static_cast<std::size_t>(std::ceil(quantile * static_cast<double>(n)));
  if (count == 0 || n == 0) return std::numeric_limits<std::size_t>::max();
  auto degs = g.degrees();
  const auto nth = degs.begin() + static_cast<std::ptrdiff_t>(std::min(count, n) - 1);
  std::nth_element(degs.begin(), nth, degs.end(), std::greater<>());
  return *nth;
}

std::vector<NodeId> apply_spontaneous(std::span<AgentState> agents, double r, double v,
                                      const ModelParams& params, int t, Rng& rng) {
  std::vector<NodeId> changed;
  if (v <= 0.0) return changed;
  for (NodeId i = 0; i < agents.size(); ++i) {
    auto& a = agents[i];
    if (a.color != AgentColor::Undeployed) continue;
    if (!(rng.uniform() < v)) continue;
    if (r > a.threshold) {
      activate(a, AgentColor::Spontaneous, t);
      changed.push_back(i);
    } else if (params.debunking_enabled && a.threshold - r >= params.debunk_margin) {
      activate(a, AgentColor::Debunker, t);
      changed.push_back(i);
    }
  }
  return changed;
}

std::vector<NodeId> apply_collective_influence(std::span<AgentState> agents, const Graph& g,
                                               std::size_t hub_cutoff, double r,
                                               const ModelParams& params, int t) {
  std::vector<NodeId> pressured;
  for (NodeId i = 0; i < agents.size(); ++i) {
    if (agents[i].color != AgentColor::Undeployed) continue;
    const auto nbrs = g.neighbors(i);
    if (nbrs.empty()) continue;
    std::size_t spreading = 0;
    bool hub_spreading = false;
    for (NodeId j : nbrs) {
      if (!is_spreader(agents[j].color)) continue;
      ++spreading;
      if (g.degree(j) >= hub_cutoff) hub_spreading = true;
    }
    const double fraction = static_cast<double>(spreading) / static_cast<double>(nbrs.size());
    if (fraction > params.influence_fraction || hub_spreading) pressured.push_back(i);
  }
  // Colors only change below, after every agent has been evaluated.
  std::vector<NodeId> changed;
  for (NodeId i : pressured) {
    auto& a = agents[i];
    if (!a.influence_applied) {
      a.threshold = std::max(0.0, a.threshold - params.delta_influence);
      a.influence_applied = true;
    }
    if (r > a.threshold) {
      activate(a, AgentColor::Influenced, t);
      changed.push_back(i);
    }
  }
  return changed;
}

std::vector<NodeId> apply_persuasion(std::span<AgentState> agents, const Graph& g, double r,
                                     const ModelParams& params, int t) {
  std::vector<NodeId> recipients;
  std::vector<char> similar;
  for (NodeId i = 0; i < agents.size(); ++i) {
    auto& a = agents[i];
    if (a.color != AgentColor::Undeployed) continue;
    bool messaged = false;
    bool close = false;
    for (NodeId j : g.neighbors(i)) {
      if (!is_spreader(agents[j].color)) continue;
      messaged = true;
      // Only a sender's first message can move the threshold.
      if (record_contact(a, j) &&
          std::abs(agents[j].threshold - a.threshold) <= params.epsilon_similarity) {
        close = true;
      }
    }
    if (messaged) {
      recipients.push_back(i);
      similar.push_back(close ? 1 : 0);
    }
  }
  std::vector<NodeId> changed;
  for (std::size_t k = 0; k < recipients.size(); ++k) {
    auto& a = agents[recipients[k]];
    if (similar[k]) a.threshold = std::max(0.0, a.threshold - params.delta_persuasion);
    if (r > a.threshold) {
      activate(a, AgentColor::Persuaded, t);
      changed.push_back(recipients[k]);
    }
  }
  return changed;
}

std::vector<NodeId> apply_debunking(std::span<AgentState> agents, const ModelParams& params,
                                    int t) {
  std::vector<char> convert(agents.size(), 0);
  for (const auto& d : agents) {
    if (d.color != AgentColor::Debunker) continue;
    for (NodeId c : d.contacted_by) {
      const auto& target = agents[c];
      if (is_spreader(target.color) &&
          std::abs(target.threshold - d.threshold) <= params.epsilon_similarity) {
        convert[c] = 1;
      }
    }
  }
  std::vector<NodeId> changed;
  for (NodeId i = 0; i < agents.size(); ++i) {
    if (!convert[i]) continue;
    activate(agents[i], AgentColor::Debunker, t);
    changed.push_back(i);
  }
  return changed;
}

std::vector<NodeId> apply_deactivation(std::span<AgentState> agents, int t,
                                       const ModelParams& params) {
  std::vector<NodeId> changed;
  for (NodeId i = 0; i < agents.size(); ++i) {
    auto& a = agents[i];
    if (!is_active(a.color)) continue;
    if (t - *a.activated_at >= params.t_active) {
      a.last_active = a.color;
      a.color = AgentColor::Inactive;
      changed.push_back(i);
    }
  }
  return changed;
}

std::size_t CycleRecord::spreaders() const {
  return count(AgentColor::Spontaneous) + count(AgentColor::Influenced) +
         count(AgentColor::Persuaded);
}

ColorCounts count_colors(std::span<const AgentState> agents) {
  ColorCounts out{};
  for (const auto& a : agents) ++out[static_cast<std::size_t>(a.color)];
  return out;
}

Simulation::Simulation(const Graph& g, std::vector<AgentState> agents, NewsSchedule schedule,
                       ModelParams params, std::uint64_t dynamics_seed)
    : graph_(&g),
      agents_(std::move(agents)),
      schedule_(std::move(schedule)),
      params_(params),
      hub_cutoff_(hub_degree_cutoff(g, params.hub_degree_quantile)),
      rng_(dynamics_seed) {
  params_.validate();
  if (agents_.size() != g.node_count()) {
    throw InvalidParameter("population size does not match graph");
  }
}

StepReport Simulation::step(int t) {
  const auto [r, v] = reliability_at(schedule_, t);
  StepReport rep;
  for (NodeId i : apply_spontaneous(agents_, r, v, params_, t, rng_)) {
    if (agents_[i].color == AgentColor::Debunker) {
      ++rep.debunkers_seen;
    } else {
      ++rep.spontaneous;
    }
  }
  rep.influenced = apply_collective_influence(agents_, *graph_, hub_cutoff_, r, params_, t).size();
  rep.persuaded = apply_persuasion(agents_, *graph_, r, params_, t).size();
  if (params_.debunking_enabled) rep.debunk_conversions = apply_debunking(agents_, params_, t).size();
  rep.deactivated = apply_deactivation(agents_, t, params_).size();
  return rep;
}

bool Simulation::quiescent(int next_cycle, int horizon) const {
  double min_th = std::numeric_limits<double>::infinity();
  double max_th = -std::numeric_limits<double>::infinity();
  for (const auto& a : agents_) {
    if (is_active(a.color)) return false;
    if (a.color == AgentColor::Undeployed) {
      min_th = std::min(min_th, a.threshold);
      max_th = std::max(max_th, a.threshold);
    }
  }
  if (min_th > max_th) return true;  // nobody left Undeployed
  const auto& segs = schedule_.segments();
  for (std::size_t k = 0; k < segs.size(); ++k) {
    const int end = k + 1 < segs.size() ? segs[k + 1].start_cycle : horizon;
    if (end <= next_cycle || segs[k].start_cycle >= horizon) continue;
    const auto& s = segs[k];
    if (s.visualization <= 0.0) continue;
    if (s.reliability > min_th) return false;
    if (params_.debunking_enabled && max_th - s.reliability >= params_.debunk_margin) return false;
  }
  return true;
}

CycleRecord Simulation::record(int t) const {
  CycleRecord rec;
  rec.cycle = t;
  rec.counts = count_colors(agents_);
  const auto nv = reliability_at(schedule_, t);
  rec.reliability = nv.reliability;
  rec.visualization = nv.visualization;
  for (const auto& a : agents_) {
    rec.cum_spreaders += a.ever_spread ? 1 : 0;
    rec.cum_debunkers += a.ever_debunked ? 1 : 0;
  }
  return rec;
}

std::vector<AgentSnapshot> Simulation::snapshot() const {
  std::vector<AgentSnapshot> out;
  out.reserve(agents_.size());
  for (const auto& a : agents_) {
    out.push_back({a.threshold_initial, a.threshold, a.color, a.last_active, a.activated_at});
  }
  return out;
}

SimulationTrace run(const Graph& g, std::vector<AgentState> agents, const NewsSchedule& schedule,
                    const ModelParams& params, int max_cycles, std::uint64_t seed) {
  if (max_cycles < 1) throw InvalidParameter("max_cycles must be >= 1");
  Simulation sim(g, std::move(agents), schedule, params, seed);
  SimulationTrace trace;
  trace.seed = seed;
  trace.params = params;
  trace.schedule = schedule;
  for (int t = 0; t < max_cycles; ++t) {
    sim.step(t);
    trace.cycles.push_back(sim.record(t));
    if (sim.quiescent(t + 1, max_cycles)) break;
  }
  trace.final_agents = sim.snapshot();
  return trace;
}

SimulationTrace run(const Graph& g, const NewsSchedule& schedule, const ModelParams& params,
                    int max_cycles, std::uint64_t seed, const ThresholdDistribution& dist) {
  auto trace = run(g, init_population(g, dist, derive_seed(seed, 0)), schedule, params,
                   max_cycles, derive_seed(seed, 1));
  trace.seed = seed;
  return trace;
}

}  // namespace rumor
