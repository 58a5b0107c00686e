#include <gtest/gtest.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <random>
#include <sstream>

#include "rcons/errors.hpp"
#include "rcons/graph.hpp"

using namespace rcons;

namespace {

// Independent brute force over bitmasks, straight from the definition.
bool robust_oracle(const DirectedGraph& g, int r, int s) {
  const int n = g.size();
  auto reach = [&](unsigned set) {
    int count = 0;
    for (int i = 0; i < n; ++i) {
      if (!(set >> i & 1u)) continue;
      int outside = 0;
      for (int j = 0; j < n; ++j)
        if (!(set >> j & 1u) && g.has_edge(j, i)) ++outside;
      if (outside >= r) ++count;
    }
    return count;
  };
  const unsigned full = 1u << n;
  for (unsigned a = 1; a < full; ++a)
    for (unsigned b = 1; b < full; ++b) {
      if (a & b) continue;
      const int ra = reach(a), rb = reach(b);
      if (ra == std::popcount(a) || rb == std::popcount(b) || ra + rb >= s) continue;
      return false;
    }
  return true;
}

}  // namespace

TEST(Neighbors, Examples) {
  auto two = DirectedGraph::from_edges(2, {{0, 1}});
  EXPECT_EQ(neighbors(two, 1), (std::vector<NodeId>{0}));
  EXPECT_TRUE(neighbors(two, 0).empty());
  EXPECT_TRUE(neighbors(DirectedGraph(3), 1).empty());
  EXPECT_EQ(neighbors(DirectedGraph::complete(4), 2), (std::vector<NodeId>{0, 1, 3}));
}

TEST(Graph, RejectsSelfLoopsAndBadIds) {
  DirectedGraph g(3);
  EXPECT_THROW(g.add_edge(1, 1), UsageError);
  EXPECT_THROW(g.add_edge(0, 3), UsageError);
  EXPECT_THROW(g.set_weight(0, 1, 0.2), UsageError);
  g.add_edge(0, 1);
  g.add_edge(0, 1);
  EXPECT_EQ(g.edge_count(), 1u);
}

TEST(Robustness, Examples) {
  auto c4 = DirectedGraph::cycle(4);
  auto v = check_robustness(c4, 2, 1);
  EXPECT_FALSE(v.holds);
  ASSERT_TRUE(v.witness);
  EXPECT_TRUE(check_robustness(DirectedGraph::complete(4), 2, 1).holds);
  EXPECT_TRUE(check_robustness(DirectedGraph::complete(5), 3, 1).holds);
}

TEST(Robustness, WitnessFailsAllConditions) {
  auto g = DirectedGraph::cycle(6);
  const int r = 2, s = 1;
  auto v = check_robustness(g, r, s);
  ASSERT_FALSE(v.holds);
  const auto& w = *v.witness;
  ASSERT_FALSE(w.first.empty());
  ASSERT_FALSE(w.second.empty());
  for (auto a : w.first)
    for (auto b : w.second) EXPECT_NE(a, b);
  const int ra = count_reachable_from_outside(g, w.first, r);
  const int rb = count_reachable_from_outside(g, w.second, r);
  EXPECT_LT(ra, static_cast<int>(w.first.size()));
  EXPECT_LT(rb, static_cast<int>(w.second.size()));
  EXPECT_LT(ra + rb, s);
}

TEST(Robustness, MatchesBruteForceOnRandomGraphs) {
  std::mt19937_64 rng(5);
  std::bernoulli_distribution coin(0.55);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 2 + trial % 6;
    DirectedGraph g(n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (i != j && coin(rng)) g.add_edge(i, j);
    for (int r = 1; r < std::min(n, 4); ++r)
      for (int s = 1; s < std::min(n, 3); ++s)
        EXPECT_EQ(check_robustness(g, r, s).holds, robust_oracle(g, r, s)) << "n=" << n << " r=" << r << " s=" << s;
  }
}

TEST(Robustness, RefusesLargeGraphs) {
  EXPECT_THROW(check_robustness(DirectedGraph::complete(17), 2, 1), CapacityError);
  EXPECT_THROW(check_robustness(DirectedGraph::complete(3), 0, 1), UsageError);
  EXPECT_THROW(check_robustness(DirectedGraph::complete(3), 3, 1), UsageError);
}

TEST(RandomGeometric, Examples) {
  auto one = random_geometric(1, 0.3, 9);
  EXPECT_EQ(one.size(), 1);
  EXPECT_EQ(one.edge_count(), 0u);
  auto full = random_geometric(5, std::sqrt(2.0), 9);
  EXPECT_EQ(full.edge_count(), 20u);
  EXPECT_THROW(random_geometric(5, 0.0, 1), UsageError);
  EXPECT_THROW(random_geometric(5, 1.5, 1), UsageError);
}

TEST(RandomGeometric, MostlyConnectedAtRange04) {
  int connected = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) connected += is_connected(random_geometric(100, 0.4, seed));
  EXPECT_GT(connected, 90);
}

TEST(RandomGeometric, DeterministicAndSymmetric) {
  auto a = random_geometric(30, 0.3, 77);
  auto b = random_geometric(30, 0.3, 77);
  EXPECT_EQ(a, b);
  for (const auto& e : a.edges()) EXPECT_TRUE(a.has_edge(e.to, e.from));
  EXPECT_TRUE(weight_violations(a, min_nonzero_weight(a)).empty());
}

TEST(RandomGeometric, LinkProbabilityMatchesMonteCarlo) {
  std::mt19937_64 rng(123);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (double range : {0.1, 0.4, 0.8, 1.2}) {
    const int samples = 400000;
    int hits = 0;
    for (int k = 0; k < samples; ++k) {
      const double dx = u(rng) - u(rng), dy = u(rng) - u(rng);
      hits += dx * dx + dy * dy <= range * range;
    }
    EXPECT_NEAR(geometric_link_probability(range), static_cast<double>(hits) / samples, 3e-3) << range;
  }
  EXPECT_DOUBLE_EQ(geometric_link_probability(std::sqrt(2.0)), 1.0);
}

TEST(RandomGeometric, RangeForMeanDegreeInverts) {
  const double r = range_for_mean_degree(40, 39 * geometric_link_probability(0.3));
  EXPECT_NEAR(r, 0.3, 1e-9);
}

TEST(UniformWeights, Examples) {
  DirectedGraph star(5);
  for (int j = 1; j < 5; ++j) star.add_bidirectional(0, j);
  star = assign_uniform_weights(star);
  for (int j = 1; j < 5; ++j) EXPECT_DOUBLE_EQ(star.weight(0, j), 0.2);
  EXPECT_NEAR(star.self_weight(0), 0.2, 1e-15);

  auto iso = assign_uniform_weights(DirectedGraph(1));
  EXPECT_DOUBLE_EQ(iso.self_weight(0), 1.0);

  auto pair = assign_uniform_weights(DirectedGraph::from_undirected(2, {{0, 1}}));
  EXPECT_DOUBLE_EQ(pair.weight(0, 1), 0.5);
  EXPECT_DOUBLE_EQ(pair.weight(1, 0), 0.5);
  EXPECT_DOUBLE_EQ(min_nonzero_weight(pair), 0.5);
}

TEST(UniformWeights, ValidForAnyGraph) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto g = assign_uniform_weights(random_geometric(25, 0.35, seed));
    const double alpha = min_nonzero_weight(g);
    EXPECT_GT(alpha, 0.0);
    EXPECT_LE(alpha, 0.5 + 1e-15);
    EXPECT_TRUE(weight_violations(g, alpha).empty());
  }
}

TEST(Weights, ViolationsReported) {
  auto g = DirectedGraph::from_undirected(3, {{0, 1}, {0, 2}});
  g.set_weight(0, 1, 0.6);
  g.set_weight(0, 2, 0.3);
  EXPECT_FALSE(weight_violations(g, 0.2).empty());  // self-weight 0.1
}

TEST(Connectivity, Examples) {
  EXPECT_TRUE(is_connected(DirectedGraph(1)));
  EXPECT_FALSE(is_connected(DirectedGraph(2)));
  EXPECT_TRUE(is_connected(DirectedGraph::cycle(4)));
  EXPECT_FALSE(is_connected(DirectedGraph::from_edges(2, {{0, 1}})));
}

TEST(Adjacency, CsvRows) {
  auto g = assign_uniform_weights(DirectedGraph::from_undirected(2, {{0, 1}}));
  std::ostringstream out;
  write_adjacency_csv(g, out);
  EXPECT_EQ(out.str(), "from,to,weight\n0,1,0.5\n1,0,0.5\n");
}
