#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rcons/engine.hpp"

namespace rcons {

enum class ConsensusOutcome { Reached, NotReached, Inconclusive };
std::string_view to_string(ConsensusOutcome outcome);

struct SafetyInterval {
  double lo = 0.0;
  double hi = 0.0;
};

// Absolute slack for floating-point rounding when comparing trajectories against the interval.
inline constexpr double kSafetyTolerance = 1e-9;

// Hull of the regular agents' initial states.
SafetyInterval safety_interval(const RunRecord& record, std::span<const NodeId> regular);

/// True iff every regular trajectory stays inside the safety interval on
/// [0, until] (default: the horizon). Segments are linear, so checking
/// their endpoints is exact.
bool check_safety(const RunRecord& record, std::span<const NodeId> regular, double tolerance = kSafetyTolerance,
                  std::optional<double> until = {});

// max - min of the regular final states.
double final_spread(const RunRecord& record, std::span<const NodeId> regular);

struct Quiescence {
  bool quiesced = false;
  // Last time any regular control changed; every control is 0 from here on when quiesced.
  double since = 0.0;
};

// Default settle window: the second half of the run.
double default_settle_window(const RunRecord& record);

/// Quiesced iff every regular control is 0 at the horizon and has not
/// changed during the final `settle` time units. A momentary pause of an
/// agent still chasing the adversary does not count.
Quiescence quiescence(const RunRecord& record, std::span<const NodeId> regular, std::optional<double> settle = {});

// Inconclusive unless quiesced; then Reached iff the final spread is <= c.
ConsensusOutcome check_consensus(const RunRecord& record, std::span<const NodeId> regular, double c,
                                 std::optional<double> settle = {});

// Broadcasts by regular agents strictly after time t.
std::int64_t regular_transmissions_after(const RunRecord& record, std::span<const NodeId> regular, double t);

struct ConsensusVerdict {
  bool safety_holds = false;
  SafetyInterval safety_interval;
  double final_spread = 0.0;
  bool consensus_at_c = false;
  ConsensusOutcome outcome = ConsensusOutcome::Inconclusive;
  bool quiesced = false;
  double quiescence_time = 0.0;
  std::int64_t transmissions_after_quiescence = 0;
  std::vector<AgentCounters> per_agent_counters;
};

ConsensusVerdict evaluate(const RunRecord& record, double c, std::optional<double> settle = {});

struct CounterMeans {
  double updates = 0.0;
  double transmissions = 0.0;
};

// Means over every (record, regular agent) pair; each record uses its own regular set.
CounterMeans aggregate_counters(std::span<const RunRecord> records);
CounterMeans aggregate_counters(std::span<const RunRecord> records, std::span<const NodeId> regular);

// Fraction of Reached outcomes.
double success_rate(std::span<const ConsensusOutcome> outcomes);

/// Checks every structural run invariant against the record and returns a
/// description of each violation: ternary controls, contiguous segments,
/// minimum spacing eps between updates (self-triggered) or transmissions
/// (event-triggered), counters matching the event log, time-ordered log,
/// causal deliveries, and malicious-model conformance (one value per
/// adversary send, delivered to its out-neighbors). Needs the event log.
std::vector<std::string> structural_violations(const RunRecord& record);

// safety_holds,safety_lo,safety_hi,final_spread,c,consensus_at_c,outcome,quiesced,quiescence_time,transmissions_after_quiescence
void write_verdict_csv(const ConsensusVerdict& verdict, double c, std::ostream& out, const CsvRows& rows = {});

}  // namespace rcons
