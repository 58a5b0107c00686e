#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "rcons/adversary.hpp"
#include "rcons/graph.hpp"
#include "rcons/protocol.hpp"

namespace rcons {

struct ZeroDelay {};
struct FixedDelay {
  double delay = 0.0;
};
struct UniformDelay {
  double max = 0.0;
};
using DelayModel = std::variant<ZeroDelay, FixedDelay, UniformDelay>;

double draw_delay(const DelayModel& model, std::mt19937_64& rng);
// Largest delay the model can produce.
double max_delay(const DelayModel& model);

/// Fully materialized input of a single run: concrete weighted graph,
/// adversary placement and one initial value per node.
struct Scenario {
  DirectedGraph graph;
  ProtocolKind protocol = ProtocolKind::ResilientSelfTriggered;
  int F = 0;
  double epsilon = 0.1;
  double c = 0.2;
  DelayModel delay = ZeroDelay{};
  double delay_bound = 0.0;
  std::vector<AdversarySpec> adversaries;
  // One entry per node. Adversary entries are the starting point of RandomControl.
  std::vector<double> initial_states;
  // One entry per node; adversary entries are ignored.
  std::vector<Control> initial_controls;
  double horizon = 20.0;
  std::uint64_t seed = 0;
  std::uint64_t trial = 0;
};

std::vector<std::string> validate(const Scenario& scenario);
std::vector<char> adversary_mask(const Scenario& scenario);

enum class EventType : std::uint8_t { Delivery = 0, AdversarySend = 1, TimerExpiry = 2, ThresholdCross = 3 };

struct SimEvent {
  double time = 0.0;
  EventType type = EventType::Delivery;
  NodeId agent = 0;  // receiver for deliveries
  NodeId from = -1;
  double value = 0.0;
  double sent_at = 0.0;
  std::uint64_t seq = 0;
  std::uint64_t generation = 0;  // timers and crossings; stale generations are skipped
};

// Pop order: time, then type priority, then agent, then insertion order.
struct SimEventLater {
  bool operator()(const SimEvent& a, const SimEvent& b) const;
};

// Piece of a trajectory: x(t) = x_start + rate * (t - t_start) until the next piece.
struct Segment {
  double t_start = 0.0;
  double x_start = 0.0;
  double rate = 0.0;
};

enum class LogKind : std::uint8_t { Update, Broadcast, Delivery, AdversaryBroadcast };
std::string_view to_string(LogKind kind);

struct LogEntry {
  double time = 0.0;
  LogKind kind = LogKind::Update;
  NodeId agent = 0;
  NodeId from = -1;
  NodeId to = -1;
  double value = 0.0;
  double sent_at = 0.0;  // deliveries only
};

struct AgentCounters {
  std::int64_t updates = 0;
  std::int64_t transmissions = 0;

  friend bool operator==(const AgentCounters&, const AgentCounters&) = default;
};

struct RunRecord {
  std::vector<std::vector<Segment>> segments;  // per agent
  std::vector<LogEntry> events;
  std::vector<AgentCounters> counters;
  std::vector<double> final_states;
  std::vector<Control> final_controls;
  std::vector<char> adversary;
  std::int64_t processed_events = 0;
  Scenario config_echo;
};

// x of `agent` at time t, reconstructed from its segments.
double state_at(const RunRecord& record, NodeId agent, double t);
std::vector<NodeId> regular_agents(const RunRecord& record);

struct RunOptions {
  bool record_events = true;
  std::int64_t max_events = 200'000'000;
};

/// Deterministic discrete-event simulation over [0, horizon].
///
/// Trajectories are piecewise linear, so every event time is computed in
/// closed form and states are advanced exactly between events. At t = 0 all
/// agents broadcast their initial value with zero delay, which fills every
/// neighbor store before the first timer fires; afterwards each message is
/// delayed according to the delay model. Identical scenarios give identical
/// records. Throws ConfigError on invalid input and InternalError if a
/// scheduling invariant breaks.
RunRecord run(const Scenario& scenario, const RunOptions& options = {});

/// Next time the event-triggered error |x - last_broadcast| reaches the
/// threshold under the current control: `now` if it already has, nothing if
/// u = 0 or the agent has not received anything yet (threshold 0).
std::optional<double> schedule_threshold_cross(const AgentState& agent, double now);

// Row layout for the CSV writers. With `trial` set, every row is prefixed by a trial column.
struct CsvRows {
  std::optional<std::int64_t> trial;
  bool header = true;
};

// agent,t_start,x_start,u
void write_trajectories_csv(const RunRecord& record, std::ostream& out, const CsvRows& rows = {});
// time,kind,agent,from,to,value
void write_events_csv(const RunRecord& record, std::ostream& out, const CsvRows& rows = {});
// agent,role,updates,transmissions
void write_counters_csv(const RunRecord& record, std::ostream& out, const CsvRows& rows = {});

}  // namespace rcons
