#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "rcons/filter.hpp"
#include "rcons/graph.hpp"

namespace rcons {

enum class ProtocolKind { BaselineSelfTriggered, ResilientSelfTriggered, ResilientEventTriggered };

std::string_view to_string(ProtocolKind kind);
std::optional<ProtocolKind> parse_protocol(std::string_view name);
bool is_self_triggered(ProtocolKind kind);

// Ternary control input; the agent's state moves at rate -1, 0 or +1.
enum class Control : std::int8_t { Minus = -1, Zero = 0, Plus = 1 };

inline double rate(Control u) { return static_cast<double>(static_cast<int>(u)); }

// Hybrid state of one regular agent.
struct AgentState {
  NodeId id = 0;
  double x = 0.0;
  Control u = Control::Zero;
  std::optional<double> timer;      // self-triggered clock, counts down at rate 1
  std::optional<double> threshold;  // event-triggered trigger level
  std::map<NodeId, double> stored;  // latest delivered value per neighbor
  double last_broadcast = 0.0;
  double last_update_time = 0.0;
};

// Fresh state at t = 0 for the given protocol: timer 0 or threshold 0.
AgentState initial_agent_state(NodeId id, double x0, Control u0, ProtocolKind kind);

/// z when |z| >= eps, else 0.
double deadzone(double z, double eps);

Control sign_of(double z);

std::vector<ValueWithSource> stored_values(const AgentState& agent);

// sum over members of a_ij * (stored[j] - reference). Throws InternalError
// when a member has no stored value.
double weighted_average(const AgentState& agent, const DirectedGraph& g, std::span<const NodeId> members,
                        double reference);

struct FireOutcome {
  std::optional<double> broadcast;
  double average = 0.0;
  std::vector<NodeId> members;
};

/// Discrete update of a self-triggered agent whose timer has run out.
///
/// Broadcasts the current state when the control in force was nonzero, then
/// recomputes the control from the (trimmed, unless baseline) stored values:
/// u = sign(deadzone(ave)), timer = max(|ave|, eps). State x is unchanged.
FireOutcome self_triggered_fire(AgentState& agent, const DirectedGraph& g, int F, double eps,
                                ProtocolKind kind, double now);

/// Recomputes control and threshold from the trimmed stored values,
/// referenced to the last broadcast value. Runs after every delivery and
/// right after the agent's own broadcast, which moves the reference.
FireOutcome event_triggered_receive(AgentState& agent, const DirectedGraph& g, int F, double eps,
                                    double now);

// The drift since the last broadcast has reached the threshold: broadcast x.
// The caller follows up with event_triggered_receive against the new reference.
double event_triggered_threshold_fire(AgentState& agent, double now);

/// Exact flow over an event-free interval: x += u * dt, timer -= dt.
/// Throws InternalError if the timer would go negative.
void advance_state(AgentState& agent, double dt);

// Right-hand side of the sufficient condition on eps for error level c,
// with omega the smallest nonzero update weight and tau the discrete delay bound.
double epsilon_bound(double omega, int n, int tau, double c);

struct DenseMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<double> values;  // row-major

  double operator()(int r, int c) const { return values[static_cast<std::size_t>(r) * cols + c]; }
  double& operator()(int r, int c) { return values[static_cast<std::size_t>(r) * cols + c]; }
};

// Delay of the value j -> i, keyed by (i, j).
using DelayAssignment = std::map<std::pair<NodeId, NodeId>, int>;

/// n x (tau+1)n update matrix of the delayed discrete-time system.
///
/// Block 0 holds I - D + A_0, block l holds A_l, where a_ij lands in block
/// e_i + tau_ij. Missing delay entries count as 0. Rows are convex
/// combinations. Throws UsageError if e_i + tau_ij exceeds tau anywhere.
DenseMatrix build_delay_augmented_matrix(const DirectedGraph& g, const DelayAssignment& delays,
                                         const std::vector<int>& since_update, int tau);

}  // namespace rcons
