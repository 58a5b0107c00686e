#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "rcons/engine.hpp"
#include "rcons/errors.hpp"
#include "rcons/metrics.hpp"

using namespace rcons;

namespace {

Scenario two_node(ProtocolKind kind) {
  Scenario sc;
  sc.graph = assign_uniform_weights(DirectedGraph::from_undirected(2, {{0, 1}}));
  sc.protocol = kind;
  sc.epsilon = 0.1;
  sc.c = 0.2;
  sc.initial_states = {0.0, 1.0};
  sc.horizon = 5.0;
  return sc;
}

Scenario random_scenario(std::uint64_t seed, ProtocolKind kind, int adversaries) {
  Scenario sc;
  sc.graph = random_geometric(10, 0.7, seed);
  sc.protocol = kind;
  sc.F = adversaries;
  sc.epsilon = 0.05;
  sc.c = 0.1;
  sc.delay = UniformDelay{0.05};
  sc.delay_bound = 0.05;
  for (int k = 0; k < adversaries; ++k)
    sc.adversaries.push_back({9 - k, k % 2 ? AdversaryBehavior{RandomControl{-3, 3}} : AdversaryBehavior{SineWave{}}, 0.05});
  for (int i = 0; i < 10; ++i) sc.initial_states.push_back(0.1 * i);
  sc.horizon = 8.0;
  sc.seed = seed;
  return sc;
}

std::string csv_of(const RunRecord& r) {
  std::ostringstream out;
  write_trajectories_csv(r, out);
  write_events_csv(r, out);
  write_counters_csv(r, out);
  return out.str();
}

}  // namespace

TEST(DrawDelay, Examples) {
  std::mt19937_64 rng(42);
  EXPECT_EQ(draw_delay(ZeroDelay{}, rng), 0.0);
  EXPECT_EQ(draw_delay(FixedDelay{0.1}, rng), 0.1);
  std::mt19937_64 a(42), b(42);
  const double d = draw_delay(UniformDelay{0.1}, a);
  EXPECT_EQ(d, draw_delay(UniformDelay{0.1}, b));
  EXPECT_EQ(d, 0.075515553295453897);
  EXPECT_EQ(max_delay(UniformDelay{0.3}), 0.3);
}

TEST(EventOrder, TimeThenTypeThenAgentThenSeq) {
  SimEventLater later;
  SimEvent a{1.0, EventType::ThresholdCross, 0};
  SimEvent b{1.0, EventType::Delivery, 5};
  EXPECT_TRUE(later(a, b));
  SimEvent c{0.5, EventType::ThresholdCross, 9};
  EXPECT_TRUE(later(b, c));
  SimEvent d{1.0, EventType::Delivery, 2};
  EXPECT_TRUE(later(b, d));
  SimEvent e{1.0, EventType::Delivery, 2, -1, 0.0, 0.0, 7};
  EXPECT_TRUE(later(e, d));
  SimEvent f{1.0, EventType::AdversarySend, 0};
  SimEvent g{1.0, EventType::TimerExpiry, 0};
  EXPECT_TRUE(later(g, f));
  EXPECT_TRUE(later(f, d));
}

TEST(ScheduleThresholdCross, Examples) {
  auto a = initial_agent_state(0, 0.0, Control::Zero, ProtocolKind::ResilientEventTriggered);
  a.threshold = 0.2;
  a.last_update_time = 1.0;
  EXPECT_FALSE(schedule_threshold_cross(a, 1.0));
  a.u = Control::Plus;
  EXPECT_DOUBLE_EQ(*schedule_threshold_cross(a, 1.0), 1.2);
  a.x = 0.1;
  a.u = Control::Minus;
  EXPECT_DOUBLE_EQ(*schedule_threshold_cross(a, 1.0), 1.3);
  a.x = 0.5;
  EXPECT_EQ(*schedule_threshold_cross(a, 1.0), 1.0);  // already past
  a.threshold = 0.0;
  EXPECT_FALSE(schedule_threshold_cross(a, 1.0));
}

TEST(Run, SingleNode) {
  for (auto kind : {ProtocolKind::BaselineSelfTriggered, ProtocolKind::ResilientSelfTriggered,
                    ProtocolKind::ResilientEventTriggered}) {
    Scenario sc;
    sc.graph = DirectedGraph(1);
    sc.protocol = kind;
    sc.initial_states = {0.3};
    sc.horizon = 2.0;
    auto r = run(sc);
    EXPECT_EQ(r.final_states[0], 0.3);
    EXPECT_EQ(r.final_controls[0], Control::Zero);
    EXPECT_LE(r.counters[0].transmissions, 1);
    EXPECT_TRUE(structural_violations(r).empty());
  }
}

TEST(Run, TwoNodeBaselineHandTrace) {
  auto r = run(two_node(ProtocolKind::BaselineSelfTriggered));
  // Both head for 0.5; agent 0 fires first on the stale value 1 and overshoots.
  EXPECT_DOUBLE_EQ(state_at(r, 0, 0.5), 0.5);
  EXPECT_DOUBLE_EQ(state_at(r, 1, 0.5), 0.5);
  EXPECT_DOUBLE_EQ(state_at(r, 0, 0.75), 0.75);
  ASSERT_EQ(r.segments[0].size(), 3u);
  EXPECT_DOUBLE_EQ(r.segments[0][2].t_start, 0.875);
  EXPECT_DOUBLE_EQ(r.final_states[0], 0.625);
  EXPECT_DOUBLE_EQ(r.final_states[1], 0.625);
  // Including the broadcast at t = 0.
  EXPECT_EQ(r.counters[0].transmissions, 4);
  EXPECT_EQ(r.counters[1].transmissions, 3);
  for (double t = 0.0; t <= 5.0; t += 0.01)
    EXPECT_LE(std::abs(state_at(r, 0, t) - state_at(r, 1, t)), 1.0);
  auto v = evaluate(r, 0.2);
  EXPECT_TRUE(v.quiesced);
  EXPECT_TRUE(v.consensus_at_c);
  EXPECT_LT(v.final_spread, 1.0);
  EXPECT_TRUE(structural_violations(r).empty());
}

TEST(Run, TwoNodeEventTriggeredMeetsAtOnce) {
  auto r = run(two_node(ProtocolKind::ResilientEventTriggered));
  EXPECT_DOUBLE_EQ(r.final_states[0], 0.5);
  EXPECT_DOUBLE_EQ(r.final_states[1], 0.5);
  EXPECT_EQ(r.counters[0].transmissions, 2);
  EXPECT_TRUE(structural_violations(r).empty());
}

TEST(Run, Deterministic) {
  for (auto kind : {ProtocolKind::BaselineSelfTriggered, ProtocolKind::ResilientEventTriggered}) {
    auto sc = random_scenario(17, kind, 1);
    EXPECT_EQ(csv_of(run(sc)), csv_of(run(sc)));
  }
}

TEST(Run, StructuralInvariantsHold) {
  for (std::uint64_t seed = 0; seed < 12; ++seed)
    for (auto kind : {ProtocolKind::BaselineSelfTriggered, ProtocolKind::ResilientSelfTriggered,
                      ProtocolKind::ResilientEventTriggered}) {
      auto r = run(random_scenario(seed, kind, static_cast<int>(seed % 3)));
      const auto problems = structural_violations(r);
      EXPECT_TRUE(problems.empty()) << "seed " << seed << ": " << (problems.empty() ? "" : problems.front());
    }
}

TEST(Run, BaselineEqualsResilientWithoutTrimming) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    auto a = random_scenario(seed, ProtocolKind::BaselineSelfTriggered, 0);
    auto b = a;
    b.protocol = ProtocolKind::ResilientSelfTriggered;
    std::ostringstream ea, eb;
    write_events_csv(run(a), ea);
    write_events_csv(run(b), eb);
    EXPECT_EQ(ea.str(), eb.str());
  }
}

TEST(Run, EventsRecordedOptionally) {
  auto sc = random_scenario(3, ProtocolKind::ResilientSelfTriggered, 1);
  auto full = run(sc);
  auto lean = run(sc, RunOptions{false});
  EXPECT_TRUE(lean.events.empty());
  EXPECT_EQ(lean.final_states, full.final_states);
  EXPECT_EQ(lean.counters, full.counters);
}

TEST(Run, EventBudgetEnforced) {
  RunOptions opts;
  opts.max_events = 10;
  EXPECT_THROW(run(random_scenario(1, ProtocolKind::ResilientSelfTriggered, 0), opts), CapacityError);
}

TEST(Run, ValidationCollectsEveryProblem) {
  Scenario sc = two_node(ProtocolKind::ResilientSelfTriggered);
  sc.epsilon = -1.0;
  sc.initial_states = {0.0};
  sc.horizon = -2.0;
  try {
    run(sc);
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_GE(e.problems().size(), 3u);
  }
}

TEST(Run, StateAtInterpolates) {
  auto r = run(two_node(ProtocolKind::ResilientEventTriggered));
  EXPECT_DOUBLE_EQ(state_at(r, 0, 0.25), 0.25);
  EXPECT_DOUBLE_EQ(state_at(r, 1, 0.25), 0.75);
}

TEST(Run, DeliveriesWithinDelayBound) {
  auto sc = random_scenario(6, ProtocolKind::ResilientEventTriggered, 1);
  auto r = run(sc);
  for (const auto& e : r.events)
    if (e.kind == LogKind::Delivery) {
      EXPECT_GE(e.time, e.sent_at);
      EXPECT_LE(e.time - e.sent_at, sc.delay_bound + 1e-12);
    }
}
