#include "rumor/engine.hpp"

#include <limits>
#include <map>

#include "gtest/gtest.h"
#include "rumor/analysis.hpp"
#include "rumor/error.hpp"
#include "rumor/netgen.hpp"

namespace rumor {
namespace {

using Edge = std::pair<NodeId, NodeId>;
constexpr std::size_t kNoHub = std::numeric_limits<std::size_t>::max();

std::vector<AgentState> population(std::initializer_list<double> ths) {
  std::vector<AgentState> out;
  for (double th : ths) {
    AgentState a;
    a.threshold = a.threshold_initial = th;
    out.push_back(a);
  }
  return out;
}

void make_active(AgentState& a, AgentColor c, int t = 0) {
  a.color = c;
  a.activated_at = t;
}

Graph star(NodeId leaves) {
  std::vector<Edge> edges;
  for (NodeId i = 1; i <= leaves; ++i) edges.emplace_back(0, i);
  return Graph(leaves + 1, edges);
}

Graph empty_graph(std::size_t n) { return Graph(n, std::span<const Edge>{}); }

TEST(SpontaneousTest, ZeroReliabilityActivatesNobody) {
  auto agents = population({0.1, 0.5, 0.9});
  Rng rng(1);
  EXPECT_TRUE(apply_spontaneous(agents, 0.0, 1.0, ModelParams{}, 0, rng).empty());
  for (const auto& a : agents) EXPECT_EQ(a.color, AgentColor::Undeployed);
}

TEST(SpontaneousTest, HighReliabilityActivatesEveryone) {
  auto agents = population({0.1, 0.5, 0.9, 0.0});
  Rng rng(1);
  EXPECT_EQ(apply_spontaneous(agents, 0.99, 1.0, ModelParams{}, 4, rng).size(), 4u);
  for (const auto& a : agents) {
    EXPECT_EQ(a.color, AgentColor::Spontaneous);
    EXPECT_EQ(a.activated_at, 4);
  }
}

TEST(SpontaneousTest, StrictComparison) {
  auto agents = population({0.5, 0.7, 0.6});
  Rng rng(1);
  const auto changed = apply_spontaneous(agents, 0.6, 1.0, ModelParams{}, 0, rng);
  EXPECT_EQ(changed, std::vector<NodeId>{0});
  EXPECT_EQ(agents[2].color, AgentColor::Undeployed);
}

TEST(SpontaneousTest, SkepticsDebunkWhenEnabled) {
  ModelParams p;
  p.debunking_enabled = true;
  p.debunk_margin = 0.2;
  auto agents = population({0.3, 0.75, 0.85});
  Rng rng(1);
  apply_spontaneous(agents, 0.6, 1.0, p, 0, rng);
  EXPECT_EQ(agents[0].color, AgentColor::Spontaneous);
  EXPECT_EQ(agents[1].color, AgentColor::Undeployed);  // 0.15 < margin
  EXPECT_EQ(agents[2].color, AgentColor::Debunker);
}

TEST(SpontaneousTest, NoDrawsWithoutVisibility) {
  auto agents = population({0.1, 0.2});
  Rng rng(5);
  Rng fresh(5);
  apply_spontaneous(agents, 0.9, 0.0, ModelParams{}, 0, rng);
  EXPECT_EQ(rng.next(), fresh.next());
}

TEST(SpontaneousTest, OneDrawPerUndeployedAgentInOrder) {
  auto agents = population({0.1, 0.2, 0.3});
  make_active(agents[1], AgentColor::Spontaneous);
  Rng rng(5);
  Rng mirror(5);
  const double v = 0.5;
  apply_spontaneous(agents, 0.9, v, ModelParams{}, 0, rng);
  const bool first = mirror.uniform() < v;
  const bool third = mirror.uniform() < v;
  EXPECT_EQ(agents[0].color == AgentColor::Spontaneous, first);
  EXPECT_EQ(agents[2].color == AgentColor::Spontaneous, third);
  EXPECT_EQ(rng.next(), mirror.next());
}

TEST(HubCutoffTest, QuantileOfDegrees) {
  const Graph g = star(4);
  EXPECT_EQ(hub_degree_cutoff(g, 0.2), 4u);   // one hub among five
  EXPECT_EQ(hub_degree_cutoff(g, 0.4), 1u);   // two "hubs": the centre and a leaf
  EXPECT_EQ(hub_degree_cutoff(g, 0.0), kNoHub);
}

TEST(InfluenceTest, IsolatedAgentIsNeverInfluenced) {
  const Graph g = empty_graph(2);
  auto agents = population({0.1, 0.1});
  make_active(agents[1], AgentColor::Spontaneous);
  EXPECT_TRUE(apply_collective_influence(agents, g, kNoHub, 0.9, ModelParams{}, 0).empty());
  EXPECT_DOUBLE_EQ(agents[0].threshold, 0.1);
}

TEST(InfluenceTest, StarCentreLowersAndActivates) {
  const Graph g = star(10);
  auto agents = population({0.55, 0.9, 0.9, 0.9, 0.9, 0.9, 0.9, 0.9, 0.9, 0.9, 0.9});
  for (NodeId i = 1; i <= 4; ++i) make_active(agents[i], AgentColor::Spontaneous);
  ModelParams p;
  p.delta_influence = 0.1;
  const auto changed = apply_collective_influence(agents, g, kNoHub, 0.5, p, 2);
  EXPECT_EQ(changed, std::vector<NodeId>{0});
  EXPECT_NEAR(agents[0].threshold, 0.45, 1e-12);
  EXPECT_EQ(agents[0].color, AgentColor::Influenced);
  EXPECT_EQ(agents[0].activated_at, 2);
}

TEST(InfluenceTest, ExactlyThirtyPercentIsNotEnough) {
  const Graph g = star(10);
  auto agents = population({0.01, 0.9, 0.9, 0.9, 0.9, 0.9, 0.9, 0.9, 0.9, 0.9, 0.9});
  for (NodeId i = 1; i <= 3; ++i) make_active(agents[i], AgentColor::Spontaneous);
  EXPECT_TRUE(apply_collective_influence(agents, g, kNoHub, 0.9, ModelParams{}, 0).empty());
  EXPECT_DOUBLE_EQ(agents[0].threshold, 0.01);
}

TEST(InfluenceTest, SpreadingHubPressuresItsNeighbours) {
  // Node 1 sees one spreading friend out of four, below the fraction rule,
  // but that friend is the hub.
  const std::vector<Edge> edges = {{0, 1}, {1, 2}, {1, 3}, {1, 4}, {0, 5}, {0, 6}, {0, 7}};
  const Graph g(8, edges);
  auto agents = population({0.9, 0.35, 0.9, 0.9, 0.9, 0.9, 0.9, 0.9});
  make_active(agents[0], AgentColor::Spontaneous);
  ModelParams p;
  p.delta_influence = 0.1;
  EXPECT_TRUE(apply_collective_influence(agents, g, kNoHub, 0.3, p, 0).empty());
  EXPECT_DOUBLE_EQ(agents[1].threshold, 0.35);

  const std::size_t cutoff = hub_degree_cutoff(g, 0.125);
  EXPECT_EQ(cutoff, 4u);
  const auto changed = apply_collective_influence(agents, g, cutoff, 0.3, p, 0);
  EXPECT_EQ(changed, std::vector<NodeId>{1});
  EXPECT_NEAR(agents[1].threshold, 0.25, 1e-12);
}

TEST(InfluenceTest, DecrementAppliesOnce) {
  const Graph g = star(2);
  auto agents = population({0.9, 0.9, 0.9});
  make_active(agents[0], AgentColor::Spontaneous);
  ModelParams p;
  p.delta_influence = 0.1;
  apply_collective_influence(agents, g, kNoHub, 0.5, p, 0);
  apply_collective_influence(agents, g, kNoHub, 0.5, p, 1);
  apply_collective_influence(agents, g, kNoHub, 0.5, p, 2);
  EXPECT_NEAR(agents[1].threshold, 0.8, 1e-12);
  EXPECT_TRUE(agents[1].influence_applied);
  // A later rise in reliability still activates the pressured agent.
  EXPECT_EQ(apply_collective_influence(agents, g, kNoHub, 0.85, p, 3).size(), 2u);
}

TEST(InfluenceTest, DecisionsUseThePhaseStartState) {
  // Path 0-1-2: 0 spreads, 1 is influenced this phase, 2 must not see 1.
  const std::vector<Edge> edges = {{0, 1}, {1, 2}};
  const Graph g(3, edges);
  auto agents = population({0.1, 0.1, 0.1});
  make_active(agents[0], AgentColor::Spontaneous);
  const auto changed = apply_collective_influence(agents, g, kNoHub, 0.9, ModelParams{}, 0);
  EXPECT_EQ(changed, std::vector<NodeId>{1});
  EXPECT_EQ(agents[2].color, AgentColor::Undeployed);
}

TEST(PersuasionTest, DissimilarSenderOnlyLeavesATrace) {
  const std::vector<Edge> edges = {{0, 1}};
  const Graph g(2, edges);
  auto agents = population({0.2, 0.9});
  make_active(agents[0], AgentColor::Spontaneous);
  ModelParams p;
  p.epsilon_similarity = 0.3;
  EXPECT_TRUE(apply_persuasion(agents, g, 0.5, p, 0).empty());
  EXPECT_DOUBLE_EQ(agents[1].threshold, 0.9);
  EXPECT_EQ(agents[1].contacted_by, std::vector<NodeId>{0});
}

TEST(PersuasionTest, SimilarSenderLowersAndPersuades) {
  const std::vector<Edge> edges = {{0, 1}};
  const Graph g(2, edges);
  auto agents = population({0.5, 0.6});
  make_active(agents[0], AgentColor::Influenced);
  ModelParams p;
  p.epsilon_similarity = 0.3;
  p.delta_persuasion = 0.15;
  const auto changed = apply_persuasion(agents, g, 0.5, p, 7);
  EXPECT_EQ(changed, std::vector<NodeId>{1});
  EXPECT_NEAR(agents[1].threshold, 0.45, 1e-12);
  EXPECT_EQ(agents[1].color, AgentColor::Persuaded);
  EXPECT_EQ(agents[1].activated_at, 7);
}

TEST(PersuasionTest, ManySendersOneDecrementAndOnlyFirstContactCounts) {
  const Graph g = star(3);
  auto agents = population({0.9, 0.5, 0.5, 0.5});
  for (NodeId i = 1; i <= 3; ++i) make_active(agents[i], AgentColor::Spontaneous);
  ModelParams p;
  p.epsilon_similarity = 0.5;
  p.delta_persuasion = 0.1;
  apply_persuasion(agents, g, 0.2, p, 0);
  EXPECT_NEAR(agents[0].threshold, 0.8, 1e-12);
  EXPECT_EQ(agents[0].contacted_by, (std::vector<NodeId>{1, 2, 3}));
  apply_persuasion(agents, g, 0.2, p, 1);
  EXPECT_NEAR(agents[0].threshold, 0.8, 1e-12);
}

TEST(PersuasionTest, MessagedAgentActivatesWithoutSimilarity) {
  const std::vector<Edge> edges = {{0, 1}};
  const Graph g(2, edges);
  auto agents = population({0.0, 0.6});
  make_active(agents[0], AgentColor::Spontaneous);
  ModelParams p;
  p.epsilon_similarity = 0.1;
  EXPECT_EQ(apply_persuasion(agents, g, 0.7, p, 0).size(), 1u);
  EXPECT_DOUBLE_EQ(agents[1].threshold, 0.6);
}

TEST(PersuasionTest, NoSpreadersNoChange) {
  const Graph g = star(3);
  auto agents = population({0.1, 0.1, 0.1, 0.1});
  make_active(agents[1], AgentColor::Debunker);
  agents[2].color = AgentColor::Inactive;
  agents[2].last_active = AgentColor::Spontaneous;
  EXPECT_TRUE(apply_persuasion(agents, g, 0.9, ModelParams{}, 0).empty());
  EXPECT_TRUE(agents[0].contacted_by.empty());
}

TEST(DebunkingTest, EmptyContactListDoesNothing) {
  auto agents = population({0.8, 0.75});
  make_active(agents[0], AgentColor::Debunker);
  make_active(agents[1], AgentColor::Spontaneous);
  EXPECT_TRUE(apply_debunking(agents, ModelParams{}, 3).empty());
}

TEST(DebunkingTest, SimilarPastContactConverts) {
  auto agents = population({0.8, 0.75, 0.4});
  make_active(agents[0], AgentColor::Debunker);
  make_active(agents[1], AgentColor::Persuaded, 1);
  make_active(agents[2], AgentColor::Spontaneous, 1);
  agents[0].contacted_by = {1, 2};
  ModelParams p;
  p.epsilon_similarity = 0.1;
  const auto changed = apply_debunking(agents, p, 5);
  EXPECT_EQ(changed, std::vector<NodeId>{1});
  EXPECT_EQ(agents[1].color, AgentColor::Debunker);
  EXPECT_EQ(agents[1].activated_at, 5);
  EXPECT_TRUE(agents[1].ever_debunked);
  EXPECT_EQ(agents[2].color, AgentColor::Spontaneous);
}

TEST(DebunkingTest, InactiveContactsStayInactive) {
  auto agents = population({0.8, 0.8});
  make_active(agents[0], AgentColor::Debunker);
  agents[1].color = AgentColor::Inactive;
  agents[1].activated_at = 0;
  agents[0].contacted_by = {1};
  EXPECT_TRUE(apply_debunking(agents, ModelParams{}, 5).empty());
}

TEST(DeactivationTest, FixedLifetime) {
  ModelParams p;
  p.t_active = 15;
  auto agents = population({0.5, 0.5, 0.5});
  make_active(agents[0], AgentColor::Influenced, 3);
  make_active(agents[1], AgentColor::Debunker, 3);
  EXPECT_TRUE(apply_deactivation(agents, 17, p).empty());
  EXPECT_EQ(apply_deactivation(agents, 18, p), (std::vector<NodeId>{0, 1}));
  EXPECT_EQ(agents[0].color, AgentColor::Inactive);
  EXPECT_EQ(agents[0].last_active, AgentColor::Influenced);
  EXPECT_EQ(agents[1].last_active, AgentColor::Debunker);
  EXPECT_EQ(agents[2].color, AgentColor::Undeployed);
  EXPECT_TRUE(apply_deactivation(agents, 1000, p).empty());
}

TEST(StepTest, AllInactiveIsAbsorbing) {
  const Graph g = star(3);
  auto agents = population({0.1, 0.1, 0.1, 0.1});
  for (auto& a : agents) {
    a.color = AgentColor::Inactive;
    a.activated_at = 0;
  }
  Simulation sim(g, agents, NewsSchedule::constant(1.0, 1.0), ModelParams{}, 1);
  EXPECT_EQ(sim.step(3).total(), 0u);
}

TEST(StepTest, StarLeavesFollowTheCentreInOneCycle) {
  const Graph g = star(4);
  auto agents = population({0.5, 0.55, 0.55, 0.55, 0.55});
  make_active(agents[0], AgentColor::Spontaneous);
  ModelParams p;
  p.epsilon_similarity = 0.3;
  p.delta_persuasion = 0.1;
  // Each leaf sees its only neighbour spreading, so collective influence
  // already fires before persuasion.
  Simulation sim(g, agents, NewsSchedule::constant(0.6, 0.0), p, 1);
  const StepReport rep = sim.step(1);
  EXPECT_EQ(rep.influenced, 4u);
  for (NodeId i = 1; i <= 4; ++i) EXPECT_EQ(sim.agents()[i].color, AgentColor::Influenced);

  // With collective influence out of reach, persuasion does the same job.
  p.influence_fraction = 1.0;
  p.hub_degree_quantile = 0.0;
  Simulation sim2(g, agents, NewsSchedule::constant(0.6, 0.0), p, 1);
  const StepReport rep2 = sim2.step(1);
  EXPECT_EQ(rep2.persuaded, 4u);
  for (NodeId i = 1; i <= 4; ++i) {
    EXPECT_EQ(sim2.agents()[i].color, AgentColor::Persuaded);
    EXPECT_NEAR(sim2.agents()[i].threshold, 0.45, 1e-12);
  }
}

TEST(StepTest, FullVisibilityFullReliability) {
  const Graph g = generate_ba(200, 2, 1);
  Simulation sim(g, init_population(g, {}, 3), NewsSchedule::constant(1.0, 1.0), ModelParams{}, 4);
  EXPECT_EQ(sim.step(0).spontaneous, 200u);
}

TEST(RunTest, ZeroReliabilityStaysFlat) {
  const Graph g = generate_ba(300, 2, 1);
  const auto trace = run(g, NewsSchedule::constant(0.0, 0.5), ModelParams{}, 100, 7);
  ASSERT_FALSE(trace.cycles.empty());
  for (const auto& rec : trace.cycles) EXPECT_EQ(rec.count(AgentColor::Undeployed), 300u);
}

TEST(RunTest, ForcedDynamicsTerminateEarly) {
  const Graph g = generate_ba(300, 2, 1);
  ModelParams p;
  p.t_active = 5;
  const auto trace = run(g, NewsSchedule::constant(0.99, 1.0), p, 500, 7,
                         ThresholdDistribution::parse("uniform:0:0.9"));
  EXPECT_EQ(trace.cycles.front().count(AgentColor::Spontaneous), 300u);
  ASSERT_EQ(trace.cycles.size(), 6u);
  EXPECT_EQ(trace.cycles.back().count(AgentColor::Inactive), 300u);
  EXPECT_EQ(trace.cycles.back().cycle, 5);
}

TEST(RunTest, WaitsForALaterSegment) {
  // Nothing can happen before cycle 30, but the run must not stop early.
  const Graph g = generate_ba(100, 2, 1);
  const NewsSchedule s({{0, 0.0, 0.5}, {30, 1.0, 1.0}});
  const auto trace = run(g, s, ModelParams{}, 500, 7);
  ASSERT_GT(trace.cycles.size(), 30u);
  EXPECT_EQ(trace.cycles[30].count(AgentColor::Spontaneous), 100u);
}

TEST(RunTest, RejectsBadArguments) {
  const Graph g = generate_ba(10, 2, 1);
  EXPECT_THROW(run(g, NewsSchedule::constant(0.5, 0.5), ModelParams{}, 0, 1), InvalidParameter);
  ModelParams bad;
  bad.t_active = 0;
  EXPECT_THROW(run(g, NewsSchedule::constant(0.5, 0.5), bad, 10, 1), InvalidParameter);
  EXPECT_THROW(run(g, population({0.1}), NewsSchedule::constant(0.5, 0.5), ModelParams{}, 10, 1),
               InvalidParameter);
}

TEST(RunTest, SameSeedSameTrace) {
  const Graph g = generate_ba(500, 2, 1);
  const NewsSchedule s({{0, 0.67, 0.15}, {3, 0.48, 0.6}});
  ModelParams p;
  p.debunking_enabled = true;
  EXPECT_EQ(run(g, s, p, 500, 11), run(g, s, p, 500, 11));
  EXPECT_NE(run(g, s, p, 500, 11), run(g, s, p, 500, 12));
}

TEST(RunTest, HigherReliabilityReachesMore) {
  const Graph g = generate_ba(1000, 2, 21);
  double low = 0.0;
  double high = 0.0;
  for (std::uint64_t s = 0; s < 20; ++s) {
    low += static_cast<double>(run(g, NewsSchedule::constant(0.5, 0.1), ModelParams{}, 500, s)
                                   .cycles.back()
                                   .cum_spreaders);
    high += static_cast<double>(run(g, NewsSchedule::constant(0.9, 0.1), ModelParams{}, 500, s)
                                    .cycles.back()
                                    .cum_spreaders);
  }
  EXPECT_GE(high, low);
}

TEST(RunTest, WellConnectedClassesActivateMore) {
  const Graph g = generate_ba(1000, 2, 8);
  for (double r : {0.5, 0.7, 0.9}) {
    std::vector<SimulationTrace> traces;
    for (std::uint64_t s = 0; s < 20; ++s) {
      traces.push_back(run(g, NewsSchedule::constant(r, 0.1), ModelParams{}, 500, s));
    }
    const auto d = density_by_degree(traces, g);
    double hi = 0, lo = 0;
    int n_hi = 0, n_lo = 0;
    for (const auto& c : d.classes) {
      if (c.k >= 10) {
        hi += c.mean;
        ++n_hi;
      } else if (c.k <= 3) {
        lo += c.mean;
        ++n_lo;
      }
    }
    ASSERT_GT(n_hi, 0);
    ASSERT_GT(n_lo, 0);
    EXPECT_GE(hi / n_hi, lo / n_lo) << "r=" << r;
  }
}

}  // namespace
}  // namespace rumor
