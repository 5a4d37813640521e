#include "rumor/analysis.hpp"

#include <cmath>
#include <numeric>

#include "gtest/gtest.h"
#include "rumor/error.hpp"
#include "rumor/netgen.hpp"
#include "rumor/random.hpp"

namespace rumor {
namespace {

using Edge = std::pair<NodeId, NodeId>;

SimulationTrace trace_from_active(std::size_t n, const std::vector<std::size_t>& active) {
  SimulationTrace t;
  t.final_agents.resize(n);
  int c = 0;
  for (std::size_t a : active) {
    CycleRecord r;
    r.cycle = c++;
    r.counts[static_cast<std::size_t>(AgentColor::Spontaneous)] = a;
    r.counts[static_cast<std::size_t>(AgentColor::Undeployed)] = n - a;
    t.cycles.push_back(r);
  }
  return t;
}

TEST(AverageSeriesTest, OneRunHasNoError) {
  const std::vector<std::vector<double>> runs = {{0.1, 0.5, 0.2}};
  const auto s = average_series(runs);
  EXPECT_EQ(s.mean, runs[0]);
  EXPECT_EQ(s.stderr_, (std::vector<double>{0, 0, 0}));
  EXPECT_EQ(s.n_runs, 1u);
}

TEST(AverageSeriesTest, IdenticalRunsHaveNoError) {
  const std::vector<std::vector<double>> runs = {{0.1, 0.5}, {0.1, 0.5}};
  const auto s = average_series(runs);
  EXPECT_EQ(s.stderr_, (std::vector<double>{0, 0}));
}

TEST(AverageSeriesTest, PadsShortRunsWithTheirLastValue) {
  const std::vector<std::vector<double>> runs = {{0.2, 0.4}, {0.0, 0.2, 0.6, 0.8}};
  const auto s = average_series(runs);
  ASSERT_EQ(s.size(), 4u);
  EXPECT_DOUBLE_EQ(s.mean[3], (0.4 + 0.8) / 2);
  // Sample sd of {0.4, 0.8} is 0.2*sqrt(2); divided by sqrt(2).
  EXPECT_NEAR(s.stderr_[3], 0.2, 1e-12);
}

TEST(AverageSeriesTest, EmptyInputThrows) {
  EXPECT_THROW(average_series(std::vector<std::vector<double>>{}), InsufficientData);
  EXPECT_THROW(average_series(std::vector<std::vector<double>>{{}}), InsufficientData);
  EXPECT_THROW(activation_density_series(std::vector<SimulationTrace>{}), InsufficientData);
}

TEST(ActivationDensityTest, DividesByNodeCount) {
  const std::vector<SimulationTrace> ts = {trace_from_active(10, {1, 5, 2}),
                                           trace_from_active(10, {3, 7})};
  const auto s = activation_density_series(ts);
  ASSERT_EQ(s.size(), 3u);
  EXPECT_DOUBLE_EQ(s.mean[0], 0.2);
  EXPECT_DOUBLE_EQ(s.mean[1], 0.6);
  EXPECT_DOUBLE_EQ(s.mean[2], 0.45);
  const std::vector<SimulationTrace> mixed = {trace_from_active(10, {1}), trace_from_active(11, {1})};
  EXPECT_THROW(activation_density_series(mixed), InvalidParameter);
}

TEST(TimeToHalfPeakTest, FirstCrossing) {
  const std::vector<double> s = {0.0, 0.1, 0.3, 0.6, 0.4, 0.0};
  EXPECT_EQ(time_to_half_peak(s), 2u);  // 0.3 is exactly half of 0.6
  const std::vector<double> t = {0.0, 0.1, 0.29, 0.31, 0.6};
  EXPECT_EQ(time_to_half_peak(t), 3u);
  EXPECT_THROW(time_to_half_peak(std::vector<double>{}), InsufficientData);
  EXPECT_THROW(time_to_half_peak(std::vector<double>{0, 0}), InsufficientData);
}

TEST(DensityByDegreeTest, NoneAndAll) {
  const Graph g = generate_ba(100, 2, 1);
  SimulationTrace none;
  none.final_agents.resize(100);
  SimulationTrace all = none;
  for (auto& a : all.final_agents) {
    a.color = AgentColor::Inactive;
    a.last_active = AgentColor::Spontaneous;
    a.activated_at = 0;
  }
  const std::vector<SimulationTrace> n1 = {none}, a1 = {all, all};
  for (const auto& c : density_by_degree(n1, g).classes) EXPECT_EQ(c.mean, 0.0);
  for (const auto& c : density_by_degree(a1, g).classes) {
    EXPECT_EQ(c.mean, 1.0);
    EXPECT_EQ(c.stderr_, 0.0);
    EXPECT_EQ(c.n_occurrences, 2u);
  }
}

TEST(DensityByDegreeTest, ClassesOnlyCountRunsWhereTheyExist) {
  const std::vector<Edge> e1 = {{0, 1}, {0, 2}};  // degrees 2,1,1
  const std::vector<Edge> e2 = {{0, 1}, {1, 2}, {0, 2}};  // degrees 2,2,2
  const Graph g1(3, e1), g2(3, e2);
  SimulationTrace t1, t2;
  t1.final_agents.resize(3);
  t2.final_agents.resize(3);
  t1.final_agents[1].activated_at = 0;
  t2.final_agents[0].activated_at = 0;
  const std::vector<RunView> runs = {{&g1, &t1}, {&g2, &t2}};
  const auto d = density_by_degree(runs);
  ASSERT_EQ(d.classes.size(), 2u);
  EXPECT_EQ(d.classes[0].k, 1u);
  EXPECT_EQ(d.classes[0].n_occurrences, 1u);
  EXPECT_DOUBLE_EQ(d.classes[0].mean, 0.5);
  EXPECT_EQ(d.classes[1].k, 2u);
  EXPECT_EQ(d.classes[1].n_occurrences, 2u);
  EXPECT_DOUBLE_EQ(d.classes[1].mean, (0.0 + 1.0 / 3.0) / 2);
}

std::vector<AgentSnapshot> snapshot_with(const std::vector<double>& ths) {
  std::vector<AgentSnapshot> out(ths.size());
  for (std::size_t i = 0; i < ths.size(); ++i) out[i].threshold = ths[i];
  return out;
}

TEST(ThresholdHistogramTest, SingleValue) {
  const std::vector<std::vector<AgentSnapshot>> snaps = {snapshot_with(std::vector<double>(50, 0.5))};
  const auto h = threshold_histogram(snaps, 20, 0.7);
  ASSERT_EQ(h.bins(), 20u);
  EXPECT_EQ(h.frequency[10], 1.0);
  EXPECT_DOUBLE_EQ(h.edges[10], 0.5);
  EXPECT_DOUBLE_EQ(h.reliability, 0.7);
  EXPECT_THROW(threshold_histogram(snaps, 9, 0.7), InvalidParameter);
}

TEST(ThresholdHistogramTest, EndpointsLandInOuterBins) {
  const std::vector<std::vector<AgentSnapshot>> snaps = {snapshot_with({0.0, 1.0, 0.999})};
  const auto h = threshold_histogram(snaps, 10, 0.5);
  EXPECT_NEAR(h.frequency[0], 1.0 / 3, 1e-12);
  EXPECT_NEAR(h.frequency[9], 2.0 / 3, 1e-12);
}

TEST(ThresholdHistogramTest, UniformSampleIsFlat) {
  Rng rng(4);
  std::vector<double> ths(10000);
  for (auto& t : ths) t = rng.uniform();
  const std::vector<std::vector<AgentSnapshot>> snaps = {snapshot_with(ths)};
  const std::size_t bins = 20;
  const auto h = threshold_histogram(snaps, bins, 0.0);
  const double sum = std::accumulate(h.frequency.begin(), h.frequency.end(), 0.0);
  EXPECT_NEAR(sum, 1.0, 1e-9);
  const double bound = 5.0 * std::sqrt(1.0 / (10000.0 * bins));
  for (double f : h.frequency) EXPECT_LT(std::abs(f - 1.0 / bins), bound);
}

TEST(BimodalTest, TwoHumpsAndOne) {
  std::vector<double> two(20, 0.0);
  two[4] = 0.2;
  two[5] = 0.2;
  two[6] = 0.1;
  two[14] = 0.15;
  two[15] = 0.25;
  two[16] = 0.1;
  EXPECT_TRUE(is_bimodal(two));

  std::vector<double> one(20, 0.0);
  for (int i = 6; i <= 12; ++i) one[i] = 1.0 / 7;
  EXPECT_FALSE(is_bimodal(one));

  // A pile-up in the first bin is not a peak of its own.
  std::vector<double> edge(20, 0.02);
  edge[0] = 0.5;
  edge[10] = 0.12;
  EXPECT_FALSE(is_bimodal(edge));
}

TEST(BimodalTest, ShallowTroughDoesNotCount) {
  std::vector<double> f(20, 0.0);
  for (int i = 3; i <= 16; ++i) f[i] = 0.07;
  f[5] = 0.1;
  f[14] = 0.1;
  EXPECT_FALSE(is_bimodal(f));
}

TEST(AssortativityTest, SeparateCliquesArePerfectlyAssortative) {
  std::vector<Edge> e;
  for (NodeId a = 0; a < 4; ++a) {
    for (NodeId b = a + 1; b < 4; ++b) {
      e.emplace_back(a, b);
      e.emplace_back(a + 4, b + 4);
    }
  }
  const Graph g(8, e);
  const std::vector<int> labels = {0, 0, 0, 0, 1, 1, 1, 1};
  const auto r = attribute_assortativity(g, labels);
  EXPECT_NEAR(r.r_c, 1.0, 1e-12);
  EXPECT_EQ(r.n_edges_used, 12u);
  EXPECT_EQ(r.classes, (std::vector<int>{0, 1}));
}

TEST(AssortativityTest, BalancedBipartiteIsDisassortative) {
  std::vector<Edge> e;
  for (NodeId a = 0; a < 3; ++a) {
    for (NodeId b = 3; b < 6; ++b) e.emplace_back(a, b);
  }
  const std::vector<int> labels = {0, 0, 0, 1, 1, 1};
  EXPECT_NEAR(attribute_assortativity(Graph(6, e), labels).r_c, -1.0, 1e-12);
}

TEST(AssortativityTest, FourNodePath) {
  const std::vector<Edge> e = {{0, 1}, {1, 2}, {2, 3}};
  const std::vector<int> labels = {0, 0, 1, 1};
  // e = [[1/3, 1/6], [1/6, 1/3]], a = b = [1/2, 1/2].
  EXPECT_NEAR(attribute_assortativity(Graph(4, e), labels).r_c, 1.0 / 3.0, 1e-12);
}

TEST(AssortativityTest, Errors) {
  const std::vector<Edge> e = {{0, 1}};
  EXPECT_THROW(attribute_assortativity(Graph(2, e), std::vector<int>{1, 1}), DegenerateLabels);
  EXPECT_THROW(attribute_assortativity(Graph(3, std::span<const Edge>{}), std::vector<int>{0, 1, 0}),
               EmptySubgraph);
  EXPECT_THROW(attribute_assortativity(Graph(2, e), std::vector<int>{0}), InvalidParameter);
}

TEST(AssortativityTest, RelabelAndReorderInvariance) {
  const Graph g = generate_ba(300, 2, 5);
  Rng rng(6);
  std::vector<int> labels(300);
  for (auto& l : labels) l = static_cast<int>(rng.below(3));
  const double base = attribute_assortativity(g, labels).r_c;

  std::vector<int> swapped = labels;
  for (auto& l : swapped) l = (l + 1) % 3 + 10;
  EXPECT_NEAR(attribute_assortativity(g, swapped).r_c, base, 1e-12);

  std::vector<NodeId> perm(300);
  std::iota(perm.begin(), perm.end(), 0);
  rng.shuffle(std::span<NodeId>(perm));
  std::vector<Edge> moved;
  for (auto [a, b] : g.edges()) moved.emplace_back(perm[a], perm[b]);
  std::vector<int> moved_labels(300);
  for (NodeId i = 0; i < 300; ++i) moved_labels[perm[i]] = labels[i];
  EXPECT_NEAR(attribute_assortativity(Graph(300, moved), moved_labels).r_c, base, 1e-12);
}

TEST(AssortativityTest, ShuffledLabelsAverageToZero) {
  const Graph g = generate_ba(1000, 2, 12);
  std::vector<int> labels(1000);
  for (std::size_t i = 0; i < labels.size(); ++i) labels[i] = i < 400 ? 0 : 1;
  Rng rng(13);
  double sum = 0;
  for (int k = 0; k < 200; ++k) {
    rng.shuffle(std::span<int>(labels));
    sum += attribute_assortativity(g, labels).r_c;
  }
  EXPECT_LT(std::abs(sum / 200), 0.05);
}

std::vector<AgentSnapshot> roles(const std::vector<std::pair<AgentColor, double>>& spec) {
  std::vector<AgentSnapshot> out;
  for (auto [c, th] : spec) {
    AgentSnapshot a;
    a.threshold = th;
    a.color = c;
    if (c != AgentColor::Undeployed) a.activated_at = 0;
    out.push_back(a);
  }
  return out;
}

TEST(EchoSubgraphTest, SelectsActorsAndFiltersEdges) {
  const std::vector<Edge> e = {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {0, 4}, {1, 4}};
  const Graph g(5, e);
  auto snap = roles({{AgentColor::Spontaneous, 0.1},
                     {AgentColor::Debunker, 0.3},
                     {AgentColor::Undeployed, 0.3},
                     {AgentColor::Inactive, 0.9},
                     {AgentColor::Inactive, 0.5}});
  snap[3].last_active = AgentColor::Persuaded;
  snap[4].last_active = AgentColor::Debunker;

  const auto wide = echo_subgraph(g, snap, 1.0);
  EXPECT_EQ(wide.original_ids, (std::vector<NodeId>{0, 1, 3, 4}));
  EXPECT_EQ(wide.labels, (std::vector<int>{kSpreaderLabel, kDebunkerLabel, kSpreaderLabel, kDebunkerLabel}));
  // Edges among {0,1,3,4}: 0-1, 3-4, 0-4, 1-4.
  EXPECT_EQ(wide.graph.edge_count(), 4u);

  const auto narrow = echo_subgraph(g, snap, 0.2);
  // |0.1-0.3| = 0.2 keeps 0-1; 1-4 is 0.2 too; 3-4 and 0-4 go.
  EXPECT_EQ(narrow.graph.edge_count(), 2u);

  const auto none = echo_subgraph(g, snap, 0.0);
  EXPECT_EQ(none.graph.edge_count(), 0u);
  EXPECT_EQ(none.graph.node_count(), 4u);
}

TEST(EchoSubgraphTest, VacuousFilterEqualsInducedSubgraph) {
  const Graph g = generate_ba(400, 2, 3);
  Rng rng(2);
  std::vector<AgentSnapshot> snap(400);
  std::vector<int> keep;
  for (NodeId i = 0; i < 400; ++i) {
    snap[i].threshold = rng.uniform();
    const auto pick = rng.below(4);
    snap[i].color = pick == 0 ? AgentColor::Undeployed : pick == 1 ? AgentColor::Influenced : AgentColor::Debunker;
    if (snap[i].color != AgentColor::Undeployed) snap[i].activated_at = 0;
  }
  const auto sub = echo_subgraph(g, snap, 1.0);
  // Induced subgraph built directly.
  std::vector<NodeId> local(400, 0xFFFFFFFF);
  std::vector<int> labels;
  NodeId next = 0;
  for (NodeId i = 0; i < 400; ++i) {
    if (snap[i].color == AgentColor::Undeployed) continue;
    local[i] = next++;
    labels.push_back(snap[i].color == AgentColor::Debunker ? 1 : 0);
  }
  std::vector<Edge> induced;
  for (auto [a, b] : g.edges()) {
    if (local[a] != 0xFFFFFFFF && local[b] != 0xFFFFFFFF) induced.emplace_back(local[a], local[b]);
  }
  const Graph direct(next, induced);
  EXPECT_EQ(sub.graph, direct);
  EXPECT_DOUBLE_EQ(attribute_assortativity(sub.graph, sub.labels).r_c,
                   attribute_assortativity(direct, labels).r_c);
}

}  // namespace
}  // namespace rumor
