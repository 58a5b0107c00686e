#include "rcons/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "rcons/errors.hpp"

namespace rcons {

namespace {

// Timer and threshold checks absorb rounding from recomputing event times.
constexpr double kTimeSlack = 1e-9;

void require_current(const AgentState& agent, double now, const char* where) {
  if (std::abs(agent.last_update_time - now) > kTimeSlack * std::max(1.0, std::abs(now))) {
    std::ostringstream msg;
    msg << where << ": agent " << agent.id << " last advanced at " << agent.last_update_time
        << " but event time is " << now;
    throw InternalError(msg.str());
  }
}

}  // namespace

std::string_view to_string(ProtocolKind kind) {
  switch (kind) {
    case ProtocolKind::BaselineSelfTriggered:
      return "baseline_self_triggered";
    case ProtocolKind::ResilientSelfTriggered:
      return "resilient_self_triggered";
    case ProtocolKind::ResilientEventTriggered:
      return "resilient_event_triggered";
  }
  return "unknown";
}

std::optional<ProtocolKind> parse_protocol(std::string_view name) {
  for (auto kind : {ProtocolKind::BaselineSelfTriggered, ProtocolKind::ResilientSelfTriggered,
                    ProtocolKind::ResilientEventTriggered})
    if (name == to_string(kind)) return kind;
  return std::nullopt;
}

bool is_self_triggered(ProtocolKind kind) { return kind != ProtocolKind::ResilientEventTriggered; }

AgentState initial_agent_state(NodeId id, double x0, Control u0, ProtocolKind kind) {
  AgentState s;
  s.id = id;
  s.x = x0;
  s.u = u0;
  s.last_broadcast = x0;
  if (is_self_triggered(kind))
    s.timer = 0.0;
  else
    s.threshold = 0.0;
  return s;
}

double deadzone(double z, double eps) { return std::abs(z) >= eps ? z : 0.0; }

Control sign_of(double z) {
  if (z > 0.0) return Control::Plus;
  if (z < 0.0) return Control::Minus;
  return Control::Zero;
}

std::vector<ValueWithSource> stored_values(const AgentState& agent) {
  std::vector<ValueWithSource> out;
  out.reserve(agent.stored.size());
  for (const auto& [source, value] : agent.stored) out.push_back({source, value});
  return out;
}

double weighted_average(const AgentState& agent, const DirectedGraph& g, std::span<const NodeId> members,
                        double reference) {
  double sum = 0.0;
  for (NodeId j : members) {
    auto it = agent.stored.find(j);
    if (it == agent.stored.end()) {
      std::ostringstream msg;
      msg << "agent " << agent.id << " has no stored value from member " << j;
      throw InternalError(msg.str());
    }
    sum += g.weight(agent.id, j) * (it->second - reference);
  }
  return sum;
}

FireOutcome self_triggered_fire(AgentState& agent, const DirectedGraph& g, int F, double eps,
                                ProtocolKind kind, double now) {
  if (!agent.timer) throw InternalError("timer fire on an agent without a clock");
  if (*agent.timer > 0.0) {
    std::ostringstream msg;
    msg << "timer fire for agent " << agent.id << " with " << *agent.timer << " remaining";
    throw InternalError(msg.str());
  }
  require_current(agent, now, "self_triggered_fire");

  FireOutcome out;
  if (agent.u != Control::Zero) {
    out.broadcast = agent.x;
    agent.last_broadcast = agent.x;
  }
  const auto candidates = stored_values(agent);
  if (kind == ProtocolKind::BaselineSelfTriggered) {
    for (const auto& c : candidates) out.members.push_back(c.source);
  } else {
    out.members = msr_trim(agent.x, candidates, F);
  }
  out.average = weighted_average(agent, g, out.members, agent.x);
  agent.u = sign_of(deadzone(out.average, eps));
  agent.timer = std::max(std::abs(out.average), eps);
  return out;
}

FireOutcome event_triggered_receive(AgentState& agent, const DirectedGraph& g, int F, double eps,
                                    double now) {
  if (!agent.threshold) throw InternalError("reception update on an agent without a threshold");
  require_current(agent, now, "event_triggered_receive");

  FireOutcome out;
  const double reference = agent.last_broadcast;
  out.members = msr_trim(reference, stored_values(agent), F);
  out.average = weighted_average(agent, g, out.members, reference);
  agent.u = sign_of(deadzone(out.average, eps));
  agent.threshold = std::max(std::abs(out.average), eps);
  return out;
}

double event_triggered_threshold_fire(AgentState& agent, double now) {
  if (!agent.threshold) throw InternalError("threshold fire on an agent without a threshold");
  require_current(agent, now, "event_triggered_threshold_fire");
  const double h = std::abs(agent.x - agent.last_broadcast) - *agent.threshold;
  if (h < -kTimeSlack * std::max(1.0, *agent.threshold)) {
    std::ostringstream msg;
    msg << "threshold fire for agent " << agent.id << " before crossing (h = " << h << ")";
    throw InternalError(msg.str());
  }
  agent.last_broadcast = agent.x;
  return agent.x;
}

void advance_state(AgentState& agent, double dt) {
  if (dt < 0.0) throw InternalError("negative time step");
  agent.x += rate(agent.u) * dt;
  agent.last_update_time += dt;
  if (agent.timer) {
    double left = *agent.timer - dt;
    if (left < 0.0) {
      if (left < -kTimeSlack * std::max(1.0, dt)) {
        std::ostringstream msg;
        msg << "agent " << agent.id << " advanced " << dt << " past its timer (" << *agent.timer << ")";
        throw InternalError(msg.str());
      }
      left = 0.0;
    }
    agent.timer = left;
  }
}

double epsilon_bound(double omega, int n, int tau, double c) {
  if (!(omega > 0.0 && omega < 1.0)) throw UsageError("omega must lie in (0, 1)");
  if (n < 1 || tau < 0) throw UsageError("epsilon bound needs n >= 1 and tau >= 0");
  const double p = std::pow(omega, (tau + 1) * n - 1);
  if (p >= 1.0) throw UsageError("epsilon bound undefined for a single-node, zero-delay system");
  return p * (1.0 - omega) * c / (1.0 - p);
}

DenseMatrix build_delay_augmented_matrix(const DirectedGraph& g, const DelayAssignment& delays,
                                         const std::vector<int>& since_update, int tau) {
  const int n = g.size();
  if (tau < 0) throw UsageError("delay bound tau must be nonnegative");
  if (static_cast<int>(since_update.size()) != n)
    throw UsageError("need one time-since-update entry per node");

  DenseMatrix w{n, (tau + 1) * n, std::vector<double>(static_cast<std::size_t>(n) * (tau + 1) * n, 0.0)};
  for (NodeId i = 0; i < n; ++i) {
    if (since_update[i] < 0) throw UsageError("time since update must be nonnegative");
    w(i, i) += g.self_weight(i);
    for (NodeId j : g.in_neighbors(i)) {
      auto it = delays.find({i, j});
      const int delay = it == delays.end() ? 0 : it->second;
      const int block = since_update[i] + delay;
      if (delay < 0 || block > tau) {
        std::ostringstream msg;
        msg << "delay bound violated at (" << i << "," << j << "): e + delay = " << block << " > tau = " << tau;
        throw UsageError(msg.str());
      }
      w(i, block * n + j) += g.weight(i, j);
    }
  }
  return w;
}

}  // namespace rcons
