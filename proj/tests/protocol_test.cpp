#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "rcons/engine.hpp"
#include "rcons/errors.hpp"
#include "rcons/protocol.hpp"

using namespace rcons;

namespace {

// Agent 0 listening to agent 1 with a_01 = 0.5.
DirectedGraph pair_graph() { return assign_uniform_weights(DirectedGraph::from_undirected(2, {{0, 1}})); }

AgentState listener(ProtocolKind kind, double x, double heard) {
  auto a = initial_agent_state(0, x, Control::Zero, kind);
  a.stored[1] = heard;
  return a;
}

}  // namespace

TEST(Deadzone, Examples) {
  EXPECT_EQ(deadzone(0.05, 0.1), 0.0);
  EXPECT_EQ(deadzone(0.1, 0.1), 0.1);
  EXPECT_EQ(deadzone(-0.1, 0.1), -0.1);
  EXPECT_EQ(deadzone(0.0, 0.3), 0.0);
  EXPECT_EQ(sign_of(-2.0), Control::Minus);
  EXPECT_EQ(sign_of(0.0), Control::Zero);
}

TEST(WeightedAverage, Examples) {
  auto g = pair_graph();
  auto a = listener(ProtocolKind::ResilientSelfTriggered, 0.0, 1.0);
  EXPECT_EQ(weighted_average(a, g, {}, 0.0), 0.0);
  std::vector<NodeId> one{1};
  EXPECT_DOUBLE_EQ(weighted_average(a, g, one, 0.0), 0.5);

  DirectedGraph star(3);
  star.add_bidirectional(0, 1);
  star.add_bidirectional(0, 2);
  star.set_weight(0, 1, 0.2);
  star.set_weight(0, 2, 0.2);
  AgentState b = initial_agent_state(0, 0.5, Control::Zero, ProtocolKind::ResilientSelfTriggered);
  b.stored = {{1, 0.9}, {2, 0.1}};
  std::vector<NodeId> both{1, 2};
  EXPECT_NEAR(weighted_average(b, star, both, 0.5), 0.0, 1e-15);

  std::vector<NodeId> missing{1};
  AgentState c = initial_agent_state(0, 0.0, Control::Zero, ProtocolKind::ResilientSelfTriggered);
  EXPECT_THROW(weighted_average(c, g, missing, 0.0), InternalError);
}

TEST(SelfTriggeredFire, Examples) {
  auto g = pair_graph();
  const auto kind = ProtocolKind::ResilientSelfTriggered;

  auto fixed = listener(kind, 0.4, 0.4);
  auto out = self_triggered_fire(fixed, g, 0, 0.1, kind, 0.0);
  EXPECT_EQ(fixed.u, Control::Zero);
  EXPECT_DOUBLE_EQ(*fixed.timer, 0.1);
  EXPECT_FALSE(out.broadcast);  // previous control was 0

  auto small = listener(kind, 0.0, 0.1);  // ave = 0.05
  self_triggered_fire(small, g, 0, 0.1, kind, 0.0);
  EXPECT_EQ(small.u, Control::Zero);
  EXPECT_DOUBLE_EQ(*small.timer, 0.1);

  auto big = listener(kind, 0.0, 0.6);  // ave = 0.3
  out = self_triggered_fire(big, g, 0, 0.1, kind, 0.0);
  EXPECT_EQ(big.u, Control::Plus);
  EXPECT_DOUBLE_EQ(*big.timer, 0.3);
  EXPECT_DOUBLE_EQ(out.average, 0.3);
}

TEST(SelfTriggeredFire, BroadcastsWhenMoving) {
  auto g = pair_graph();
  const auto kind = ProtocolKind::BaselineSelfTriggered;
  auto a = listener(kind, 0.0, 1.0);
  a.u = Control::Plus;
  auto out = self_triggered_fire(a, g, 0, 0.1, kind, 0.0);
  ASSERT_TRUE(out.broadcast);
  EXPECT_EQ(*out.broadcast, 0.0);
}

TEST(SelfTriggeredFire, ResilientTrimsOutlier) {
  auto g = assign_uniform_weights(DirectedGraph::complete(4));
  const auto kind = ProtocolKind::ResilientSelfTriggered;
  auto a = initial_agent_state(0, 0.0, Control::Zero, kind);
  a.stored = {{1, 0.0}, {2, 0.0}, {3, 100.0}};
  self_triggered_fire(a, g, 1, 0.1, kind, 0.0);
  EXPECT_EQ(a.u, Control::Zero);
  auto b = initial_agent_state(0, 0.0, Control::Zero, ProtocolKind::BaselineSelfTriggered);
  b.stored = a.stored;
  self_triggered_fire(b, g, 1, 0.1, ProtocolKind::BaselineSelfTriggered, 0.0);
  EXPECT_EQ(b.u, Control::Plus);
}

TEST(EventTriggeredReceive, Examples) {
  auto g = pair_graph();
  const auto kind = ProtocolKind::ResilientEventTriggered;

  auto same = listener(kind, 0.3, 0.3);
  same.last_broadcast = 0.3;
  event_triggered_receive(same, g, 0, 0.1, 0.0);
  EXPECT_EQ(same.u, Control::Zero);
  EXPECT_DOUBLE_EQ(*same.threshold, 0.1);

  auto up = listener(kind, 0.0, 1.0);
  auto out = event_triggered_receive(up, g, 0, 0.1, 0.0);
  EXPECT_DOUBLE_EQ(out.average, 0.5);
  EXPECT_EQ(up.u, Control::Plus);
  EXPECT_DOUBLE_EQ(*up.threshold, 0.5);

  auto down = listener(kind, 0.0, -0.4);  // ave = -0.2
  event_triggered_receive(down, g, 0, 0.1, 0.0);
  EXPECT_EQ(down.u, Control::Minus);
  EXPECT_DOUBLE_EQ(*down.threshold, 0.2);
}

TEST(EventTriggeredReceive, ReferencesLastBroadcast) {
  auto g = pair_graph();
  auto a = listener(ProtocolKind::ResilientEventTriggered, 5.0, 1.0);
  a.last_broadcast = 0.0;
  auto out = event_triggered_receive(a, g, 0, 0.1, 0.0);
  EXPECT_DOUBLE_EQ(out.average, 0.5);
}

TEST(ThresholdFire, Examples) {
  auto a = initial_agent_state(0, 0.0, Control::Plus, ProtocolKind::ResilientEventTriggered);
  a.threshold = 0.2;
  auto when = schedule_threshold_cross(a, 0.0);
  ASSERT_TRUE(when);
  EXPECT_DOUBLE_EQ(*when, 0.2);
  advance_state(a, 0.2);
  a.last_update_time = 0.2;
  EXPECT_DOUBLE_EQ(event_triggered_threshold_fire(a, 0.2), 0.2);
  EXPECT_DOUBLE_EQ(a.last_broadcast, 0.2);

  auto still = initial_agent_state(0, 0.0, Control::Zero, ProtocolKind::ResilientEventTriggered);
  still.threshold = 0.2;
  EXPECT_FALSE(schedule_threshold_cross(still, 3.0));

  auto down = initial_agent_state(0, 1.0, Control::Minus, ProtocolKind::ResilientEventTriggered);
  down.threshold = 0.1;
  down.last_broadcast = 1.0;
  when = schedule_threshold_cross(down, 0.0);
  ASSERT_TRUE(when);
  advance_state(down, *when);
  down.last_update_time = *when;
  EXPECT_NEAR(event_triggered_threshold_fire(down, *when), 0.9, 1e-12);
}

TEST(ThresholdFire, RefusesEarlyFire) {
  auto a = initial_agent_state(0, 0.0, Control::Plus, ProtocolKind::ResilientEventTriggered);
  a.threshold = 0.2;
  EXPECT_THROW(event_triggered_threshold_fire(a, 0.0), InternalError);
}

TEST(AdvanceState, Examples) {
  auto a = initial_agent_state(0, 0.5, Control::Zero, ProtocolKind::ResilientSelfTriggered);
  a.timer = 5.0;
  advance_state(a, 2.0);
  EXPECT_EQ(a.x, 0.5);
  a.u = Control::Plus;
  advance_state(a, 0.3);
  EXPECT_DOUBLE_EQ(a.x, 0.8);
  a.timer = 0.4;
  advance_state(a, 0.4);
  EXPECT_EQ(*a.timer, 0.0);
  EXPECT_THROW(advance_state(a, -0.1), InternalError);
}

TEST(EpsilonBound, Examples) {
  EXPECT_DOUBLE_EQ(epsilon_bound(0.5, 2, 0, 1.0), 0.5);
  EXPECT_EQ(epsilon_bound(0.3, 4, 1, 0.0), 0.0);
  const double p = std::pow(0.2, 4);
  EXPECT_DOUBLE_EQ(epsilon_bound(0.2, 5, 0, 1.0), p * 0.8 / (1 - p));
  EXPECT_NEAR(epsilon_bound(0.2, 5, 0, 1.0), 1.282e-3, 1e-6);
  EXPECT_THROW(epsilon_bound(1.0, 3, 0, 1.0), UsageError);
  EXPECT_THROW(epsilon_bound(0.5, 1, 0, 1.0), UsageError);
}

TEST(EpsilonBound, DecreasesWithDelayAndSize) {
  EXPECT_LT(epsilon_bound(0.3, 4, 1, 1.0), epsilon_bound(0.3, 4, 0, 1.0));
  EXPECT_LT(epsilon_bound(0.3, 5, 0, 1.0), epsilon_bound(0.3, 4, 0, 1.0));
}

TEST(DelayMatrix, Examples) {
  auto pair = pair_graph();
  auto w = build_delay_augmented_matrix(pair, {}, {0, 0}, 0);
  ASSERT_EQ(w.cols, 2);
  EXPECT_DOUBLE_EQ(w(0, 0), 0.5);
  EXPECT_DOUBLE_EQ(w(0, 1), 0.5);

  auto iso = build_delay_augmented_matrix(DirectedGraph(2), {}, {1, 0}, 2);
  EXPECT_EQ(iso(0, 0), 1.0);
  EXPECT_EQ(iso(1, 1), 1.0);

  DelayAssignment delays{{{0, 1}, 1}};
  auto shifted = build_delay_augmented_matrix(pair, delays, {1, 0}, 2);
  EXPECT_DOUBLE_EQ(shifted(0, 2 * 2 + 1), 0.5);
  EXPECT_THROW(build_delay_augmented_matrix(pair, delays, {2, 0}, 2), UsageError);
}

TEST(DelayMatrix, RowsStochastic) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    auto g = assign_uniform_weights(random_geometric(6, 0.6, trial));
    const int tau = trial % 3;
    std::uniform_int_distribution<int> d(0, tau);
    std::vector<int> e(6);
    DelayAssignment delays;
    for (auto& v : e) v = d(rng);
    for (const auto& edge : g.edges())
      delays[{edge.to, edge.from}] = std::uniform_int_distribution<int>(0, tau - e[edge.to])(rng);
    auto w = build_delay_augmented_matrix(g, delays, e, tau);
    for (int r = 0; r < w.rows; ++r) {
      double sum = 0.0;
      for (int c = 0; c < w.cols; ++c) {
        EXPECT_GE(w(r, c), 0.0);
        sum += w(r, c);
      }
      EXPECT_NEAR(sum, 1.0, 1e-12);
    }
  }
}

TEST(Protocol, NamesRoundTrip) {
  for (auto k : {ProtocolKind::BaselineSelfTriggered, ProtocolKind::ResilientSelfTriggered,
                 ProtocolKind::ResilientEventTriggered})
    EXPECT_EQ(parse_protocol(to_string(k)), k);
  EXPECT_FALSE(parse_protocol("gossip"));
}
