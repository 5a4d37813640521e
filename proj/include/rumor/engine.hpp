#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "rumor/graph.hpp"
#include "rumor/model.hpp"
#include "rumor/random.hpp"

namespace rumor {

/// One agent per node, all Undeployed, thresholds i.i.d. from `dist`.
/// Throws ConfigError for an unknown distribution name.
std::vector<AgentState> init_population(const Graph& g, const ThresholdDistribution& dist,
                                        std::uint64_t seed);

/// Smallest degree that counts as a hub: the degree of the ceil(q*n)-th
/// largest node. Returns SIZE_MAX when q*n rounds up to zero nodes.
std::size_t hub_degree_cutoff(const Graph& g, double quantile);

// Mechanism phases. Each returns the agents it changed, in index order.
// Every decision in a phase reads the state as it stood when the phase began.

/// Each Undeployed agent draws one uniform number (index order, only when
/// v > 0) and sees the news when it falls below v. Seen and r > th makes a
/// Spontaneous spreader; with debunking on, seen and th - r >= debunk_margin
/// makes a Debunker.
std::vector<NodeId> apply_spontaneous(std::span<AgentState> agents, double r, double v,
                                      const ModelParams& params, int t, Rng& rng);

/// More than influence_fraction spreading friends, or a spreading hub
/// friend, puts an agent under pressure. The first time that happens th drops
/// by delta_influence; whenever it happens and r > th the agent is Influenced.
std::vector<NodeId> apply_collective_influence(std::span<AgentState> agents, const Graph& g,
                                               std::size_t hub_cutoff, double r,
                                               const ModelParams& params, int t);

/// Spreaders message every Undeployed friend. A recipient logs the senders
/// and loses delta_persuasion (at most once per cycle) when a sender it had
/// not heard from before is within epsilon_similarity of its threshold. Any
/// messaged recipient with r > th afterwards becomes Persuaded.
std::vector<NodeId> apply_persuasion(std::span<AgentState> agents, const Graph& g, double r,
                                     const ModelParams& params, int t);

/// Debunkers answer everyone in their contacted_by list; a recipient that is
/// still spreading and within epsilon_similarity converts to Debunker.
std::vector<NodeId> apply_debunking(std::span<AgentState> agents, const ModelParams& params,
                                    int t);

/// Active agents with t - activated_at >= t_active turn Inactive for good.
std::vector<NodeId> apply_deactivation(std::span<AgentState> agents, int t,
                                       const ModelParams& params);

struct StepReport {
  std::size_t spontaneous = 0;
  std::size_t influenced = 0;
  std::size_t persuaded = 0;
  std::size_t debunkers_seen = 0;  // Debunkers created by visualization
  std::size_t debunk_conversions = 0;
  std::size_t deactivated = 0;

  std::size_t total() const {
    return spontaneous + influenced + persuaded + debunkers_seen + debunk_conversions +
           deactivated;
  }
};

using ColorCounts = std::array<std::size_t, kColorCount>;

struct CycleRecord {
  int cycle = 0;
  ColorCounts counts{};
  double reliability = 0.0;
  double visualization = 0.0;
  std::size_t cum_spreaders = 0;  // agents that ever spread
  std::size_t cum_debunkers = 0;  // agents that ever debunked

  std::size_t count(AgentColor c) const { return counts[static_cast<std::size_t>(c)]; }
  std::size_t spreaders() const;
  /// Activated and not yet Inactive.
  std::size_t active() const { return spreaders() + count(AgentColor::Debunker); }

  bool operator==(const CycleRecord&) const = default;
};

struct AgentSnapshot {
  double threshold_initial = 0.0;
  double threshold = 0.0;
  AgentColor color = AgentColor::Undeployed;
  AgentColor last_active = AgentColor::Undeployed;
  std::optional<int> activated_at;

  bool operator==(const AgentSnapshot&) const = default;
};

struct SimulationTrace {
  std::vector<CycleRecord> cycles;
  std::vector<AgentSnapshot> final_agents;
  std::uint64_t seed = 0;
  ModelParams params;
  NewsSchedule schedule;

  std::size_t node_count() const { return final_agents.size(); }

  bool operator==(const SimulationTrace&) const = default;
};

ColorCounts count_colors(std::span<const AgentState> agents);

/// Mutable run state: the population and its RNG over a shared graph.
class Simulation {
 public:
  Simulation(const Graph& g, std::vector<AgentState> agents, NewsSchedule schedule,
             ModelParams params, std::uint64_t dynamics_seed);

  /// One synchronous cycle: spontaneous, influence, persuasion, debunking
  /// (when enabled), deactivation.
  StepReport step(int t);

  /// True when nobody is active and no remaining schedule segment before
  /// `horizon` could activate an Undeployed agent.
  bool quiescent(int next_cycle, int horizon) const;

  CycleRecord record(int t) const;
  std::vector<AgentSnapshot> snapshot() const;

  std::span<const AgentState> agents() const { return agents_; }
  std::span<AgentState> agents() { return agents_; }
  const Graph& graph() const { return *graph_; }
  std::size_t hub_cutoff() const { return hub_cutoff_; }

 private:
  const Graph* graph_;
  std::vector<AgentState> agents_;
  NewsSchedule schedule_;
  ModelParams params_;
  std::size_t hub_cutoff_;
  Rng rng_;
};

/// Runs from an explicit population. The trace holds one record per executed
/// cycle (state after that cycle) and stops early once quiescent.
SimulationTrace run(const Graph& g, std::vector<AgentState> agents, const NewsSchedule& schedule,
                    const ModelParams& params, int max_cycles, std::uint64_t seed);

/// Draws the population from `dist` with derive_seed(seed, 0) and drives the
/// dynamics with derive_seed(seed, 1).
SimulationTrace run(const Graph& g, const NewsSchedule& schedule, const ModelParams& params,
                    int max_cycles, std::uint64_t seed,
                    const ThresholdDistribution& dist = {});

}  // namespace rumor
