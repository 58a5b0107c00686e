#include "rcons/engine.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <queue>
#include <set>
#include <sstream>

#include "rcons/errors.hpp"
#include "rcons/random.hpp"

namespace rcons {

double draw_delay(const DelayModel& model, std::mt19937_64& rng) {
  if (const auto* fixed = std::get_if<FixedDelay>(&model)) return fixed->delay;
  if (const auto* uniform = std::get_if<UniformDelay>(&model))
    return std::uniform_real_distribution<double>(0.0, uniform->max)(rng);
  return 0.0;
}

double max_delay(const DelayModel& model) {
  if (const auto* fixed = std::get_if<FixedDelay>(&model)) return fixed->delay;
  if (const auto* uniform = std::get_if<UniformDelay>(&model)) return uniform->max;
  return 0.0;
}

std::vector<char> adversary_mask(const Scenario& scenario) {
  std::vector<char> mask(std::max(0, scenario.graph.size()), 0);
  for (const auto& a : scenario.adversaries)
    if (a.agent >= 0 && a.agent < scenario.graph.size()) mask[a.agent] = 1;
  return mask;
}

std::vector<std::string> validate(const Scenario& sc) {
  std::vector<std::string> problems;
  auto fail = [&](auto&&... parts) {
    std::ostringstream msg;
    (msg << ... << parts);
    problems.push_back(msg.str());
  };

  const int n = sc.graph.size();
  if (n < 1) fail("graph must have at least one node");
  if (!(sc.epsilon > 0.0)) fail("epsilon must be positive (got ", sc.epsilon, ")");
  if (!(sc.horizon > 0.0)) fail("horizon must be positive (got ", sc.horizon, ")");
  if (!(sc.c >= 0.0)) fail("error level c must be nonnegative (got ", sc.c, ")");
  if (sc.F < 0) fail("F must be nonnegative (got ", sc.F, ")");
  if (static_cast<int>(sc.initial_states.size()) != n)
    fail("expected ", n, " initial states, got ", sc.initial_states.size());
  if (!sc.initial_controls.empty() && static_cast<int>(sc.initial_controls.size()) != n)
    fail("expected ", n, " initial controls, got ", sc.initial_controls.size());

  std::set<NodeId> seen;
  for (const auto& a : sc.adversaries) {
    if (a.agent < 0 || a.agent >= n) {
      fail("adversary id ", a.agent, " out of range");
      continue;
    }
    if (!seen.insert(a.agent).second) fail("adversary ", a.agent, " declared twice");
    if (!(a.send_interval >= sc.epsilon)) fail("adversary ", a.agent, " send interval ", a.send_interval, " below epsilon");
    if (const auto* rc = std::get_if<RandomControl>(&a.behavior); rc && rc->lo > rc->hi)
      fail("adversary ", a.agent, " random control needs lo <= hi");
    if (const auto* sw = std::get_if<SineWave>(&a.behavior); sw && !(sw->period > 0.0))
      fail("adversary ", a.agent, " sine period must be positive");
  }

  const double delay = max_delay(sc.delay);
  if (delay < 0.0) fail("delays must be nonnegative");
  if (delay > sc.delay_bound) fail("delay model maximum ", delay, " exceeds the delay bound ", sc.delay_bound);

  double alpha = 1.0;
  bool any_edge = false;
  for (NodeId i = 0; i < n; ++i)
    for (NodeId j : sc.graph.in_neighbors(i)) {
      alpha = std::min(alpha, sc.graph.weight(i, j));
      any_edge = true;
    }
  if (any_edge)
    for (auto& p : weight_violations(sc.graph, alpha)) problems.push_back(std::move(p));
  return problems;
}

bool SimEventLater::operator()(const SimEvent& a, const SimEvent& b) const {
  if (a.time != b.time) return a.time > b.time;
  if (a.type != b.type) return a.type > b.type;
  if (a.agent != b.agent) return a.agent > b.agent;
  return a.seq > b.seq;
}

std::string_view to_string(LogKind kind) {
  switch (kind) {
    case LogKind::Update:
      return "update";
    case LogKind::Broadcast:
      return "broadcast";
    case LogKind::Delivery:
      return "delivery";
    case LogKind::AdversaryBroadcast:
      return "adversary_broadcast";
  }
  return "unknown";
}

double state_at(const RunRecord& record, NodeId agent, double t) {
  const auto& segs = record.segments.at(agent);
  auto it = std::upper_bound(segs.begin(), segs.end(), t,
                             [](double time, const Segment& s) { return time < s.t_start; });
  if (it == segs.begin()) return segs.front().x_start;
  --it;
  return it->x_start + it->rate * (t - it->t_start);
}

std::vector<NodeId> regular_agents(const RunRecord& record) {
  std::vector<NodeId> out;
  for (NodeId i = 0; i < static_cast<NodeId>(record.adversary.size()); ++i)
    if (!record.adversary[i]) out.push_back(i);
  return out;
}

std::optional<double> schedule_threshold_cross(const AgentState& agent, double now) {
  if (!agent.threshold || *agent.threshold <= 0.0) return std::nullopt;
  const double x = agent.x + rate(agent.u) * (now - agent.last_update_time);
  const double error = x - agent.last_broadcast;
  const double eta = *agent.threshold;
  if (std::abs(error) >= eta) return now;
  if (agent.u == Control::Zero) return std::nullopt;
  // Solve error + u * dt = sign(u) * eta with |u| = 1.
  return now + (eta - rate(agent.u) * error);
}

namespace {

constexpr double kSlack = 1e-9;

double sine_at(const SineWave& s, double t) {
  return s.offset + s.amplitude * std::sin(2.0 * std::numbers::pi * t / s.period);
}

class Simulation {
 public:
  Simulation(const Scenario& sc, const RunOptions& options)
      : sc_(sc), options_(options), delay_rng_(make_stream(sc.seed, sc.trial, StreamPurpose::Delay)) {}

  RunRecord execute();

 private:
  void push(SimEvent e) {
    e.seq = seq_++;
    queue_.push(e);
  }
  void log(double t, LogKind kind, NodeId agent, NodeId from, NodeId to, double value, double sent_at = 0.0) {
    if (options_.record_events) rec_.events.push_back({t, kind, agent, from, to, value, sent_at});
  }
  void start_segment(NodeId agent, double t, double x, double r) {
    auto& segs = rec_.segments[agent];
    if (!segs.empty() && segs.back().t_start == t)
      segs.back() = {t, x, r};
    else
      segs.push_back({t, x, r});
  }
  void broadcast(NodeId from, double value, double now, bool zero_delay, LogKind kind);
  void bring_to(AgentState& agent, double now) {
    advance_state(agent, now - agent.last_update_time);
    agent.last_update_time = now;  // exact, not an accumulated sum
  }
  void reschedule_threshold(AgentState& agent, double now);
  void note_transmission(NodeId i, double now);
  void schedule_adversary_send(NodeId i, std::int64_t k);

  void on_delivery(const SimEvent& e);
  void on_adversary_send(const SimEvent& e);
  void on_timer(const SimEvent& e);
  void on_threshold(const SimEvent& e);

  const Scenario& sc_;
  RunOptions options_;
  std::mt19937_64 delay_rng_;
  std::priority_queue<SimEvent, std::vector<SimEvent>, SimEventLater> queue_;
  std::uint64_t seq_ = 0;
  std::vector<std::optional<AgentState>> agents_;
  std::vector<std::optional<AdversaryProcess>> adversaries_;
  std::vector<std::uint64_t> generation_;
  std::vector<std::optional<double>> last_fire_;
  std::vector<std::optional<double>> last_transmit_;
  RunRecord rec_;
};

void Simulation::broadcast(NodeId from, double value, double now, bool zero_delay, LogKind kind) {
  log(now, kind, from, from, -1, value);
  ++rec_.counters[from].transmissions;
  for (NodeId to : sc_.graph.out_neighbors(from)) {
    SimEvent e;
    e.time = now + (zero_delay ? 0.0 : draw_delay(sc_.delay, delay_rng_));
    e.type = EventType::Delivery;
    e.agent = to;
    e.from = from;
    e.value = value;
    e.sent_at = now;
    push(e);
  }
}

void Simulation::note_transmission(NodeId i, double now) {
  // Event-triggered transmissions need the error to grow by at least eps at unit speed.
  if (last_transmit_[i] && now - *last_transmit_[i] < sc_.epsilon * (1.0 - kSlack)) {
    std::ostringstream msg;
    msg << "agent " << i << " transmitted at " << *last_transmit_[i] << " and again at " << now;
    throw InternalError(msg.str());
  }
  last_transmit_[i] = now;
}

void Simulation::reschedule_threshold(AgentState& agent, double now) {
  const auto gen = ++generation_[agent.id];
  const auto when = schedule_threshold_cross(agent, now);
  if (!when || *when > sc_.horizon) return;
  SimEvent e;
  e.time = *when;
  e.type = EventType::ThresholdCross;
  e.agent = agent.id;
  e.generation = gen;
  push(e);
}

void Simulation::schedule_adversary_send(NodeId i, std::int64_t k) {
  const double t = adversaries_[i]->send_time(k);
  if (t > sc_.horizon) return;
  SimEvent e;
  e.time = t;
  e.type = EventType::AdversarySend;
  e.agent = i;
  e.generation = static_cast<std::uint64_t>(k);
  push(e);
}

void Simulation::on_delivery(const SimEvent& e) {
  log(e.time, LogKind::Delivery, e.agent, e.from, e.agent, e.value, e.sent_at);
  if (!agents_[e.agent]) return;
  auto& agent = *agents_[e.agent];
  agent.stored[e.from] = e.value;
  if (is_self_triggered(sc_.protocol)) return;

  bring_to(agent, e.time);
  const auto before = agent.u;
  const auto out = event_triggered_receive(agent, sc_.graph, sc_.F, sc_.epsilon, e.time);
  ++rec_.counters[agent.id].updates;
  log(e.time, LogKind::Update, agent.id, -1, -1, out.average);
  if (agent.u != before) start_segment(agent.id, e.time, agent.x, rate(agent.u));
  reschedule_threshold(agent, e.time);
}

void Simulation::on_adversary_send(const SimEvent& e) {
  auto& proc = *adversaries_[e.agent];
  const auto k = static_cast<std::int64_t>(e.generation);
  const double value = proc.value(e.time);
  double slope = proc.current_rate();
  if (const auto* sw = std::get_if<SineWave>(&proc.spec().behavior))
    slope = (sine_at(*sw, proc.send_time(k + 1)) - value) / proc.spec().send_interval;
  start_segment(e.agent, e.time, value, slope);
  // The t = 0 send is part of the initial exchange and arrives immediately.
  broadcast(e.agent, value, e.time, k == 0, LogKind::AdversaryBroadcast);
  schedule_adversary_send(e.agent, k + 1);
}

void Simulation::on_timer(const SimEvent& e) {
  if (e.generation != generation_[e.agent]) return;
  auto& agent = *agents_[e.agent];
  bring_to(agent, e.time);
  if (*agent.timer > kSlack * std::max(1.0, e.time)) {
    std::ostringstream msg;
    msg << "timer event for agent " << agent.id << " at " << e.time << " with " << *agent.timer << " left";
    throw InternalError(msg.str());
  }
  agent.timer = 0.0;
  if (last_fire_[agent.id] && e.time - *last_fire_[agent.id] < sc_.epsilon * (1.0 - kSlack)) {
    std::ostringstream msg;
    msg << "agent " << agent.id << " fired at " << *last_fire_[agent.id] << " and again at " << e.time;
    throw InternalError(msg.str());
  }
  last_fire_[agent.id] = e.time;

  const auto before = agent.u;
  const auto out = self_triggered_fire(agent, sc_.graph, sc_.F, sc_.epsilon, sc_.protocol, e.time);
  ++rec_.counters[agent.id].updates;
  log(e.time, LogKind::Update, agent.id, -1, -1, out.average);
  if (out.broadcast) broadcast(agent.id, *out.broadcast, e.time, false, LogKind::Broadcast);
  if (agent.u != before) start_segment(agent.id, e.time, agent.x, rate(agent.u));

  SimEvent next;
  next.time = e.time + *agent.timer;
  next.type = EventType::TimerExpiry;
  next.agent = agent.id;
  next.generation = ++generation_[agent.id];
  if (next.time <= sc_.horizon) push(next);
}

void Simulation::on_threshold(const SimEvent& e) {
  if (e.generation != generation_[e.agent]) return;
  auto& agent = *agents_[e.agent];
  bring_to(agent, e.time);
  const double value = event_triggered_threshold_fire(agent, e.time);
  note_transmission(agent.id, e.time);
  broadcast(agent.id, value, e.time, false, LogKind::Broadcast);
  // Without this the agent would keep its control until some neighbor speaks,
  // however far it has moved past them.
  const auto before = agent.u;
  const auto out = event_triggered_receive(agent, sc_.graph, sc_.F, sc_.epsilon, e.time);
  ++rec_.counters[agent.id].updates;
  log(e.time, LogKind::Update, agent.id, -1, -1, out.average);
  if (agent.u != before) start_segment(agent.id, e.time, agent.x, rate(agent.u));
  reschedule_threshold(agent, e.time);
}

RunRecord Simulation::execute() {
  if (auto problems = validate(sc_); !problems.empty()) throw ConfigError(std::move(problems));

  const int n = sc_.graph.size();
  rec_.config_echo = sc_;
  rec_.adversary = adversary_mask(sc_);
  rec_.segments.assign(n, {});
  rec_.counters.assign(n, {});
  agents_.assign(n, std::nullopt);
  adversaries_.assign(n, std::nullopt);
  generation_.assign(n, 0);
  last_fire_.assign(n, std::nullopt);
  last_transmit_.assign(n, std::nullopt);

  for (const auto& spec : sc_.adversaries)
    adversaries_[spec.agent].emplace(spec, sc_.initial_states[spec.agent],
                                     make_stream(sc_.seed, sc_.trial, StreamPurpose::Adversary,
                                                 static_cast<std::uint64_t>(spec.agent)));
  for (NodeId i = 0; i < n; ++i) {
    if (rec_.adversary[i]) continue;
    const Control u0 = sc_.initial_controls.empty() ? Control::Zero : sc_.initial_controls[i];
    agents_[i] = initial_agent_state(i, sc_.initial_states[i], u0, sc_.protocol);
    rec_.segments[i].push_back({0.0, sc_.initial_states[i], rate(u0)});
  }

  // Initial exchange: every agent announces its starting value at t = 0.
  for (NodeId i = 0; i < n; ++i) {
    if (adversaries_[i]) {
      schedule_adversary_send(i, 0);
      continue;
    }
    broadcast(i, sc_.initial_states[i], 0.0, true, LogKind::Broadcast);
    last_transmit_[i] = 0.0;
    if (is_self_triggered(sc_.protocol)) {
      SimEvent e;
      e.type = EventType::TimerExpiry;
      e.agent = i;
      push(e);
    }
  }

  while (!queue_.empty() && queue_.top().time <= sc_.horizon) {
    const SimEvent e = queue_.top();
    queue_.pop();
    if (++rec_.processed_events > options_.max_events)
      throw CapacityError("simulation exceeded the configured event budget");
    switch (e.type) {
      case EventType::Delivery:
        on_delivery(e);
        break;
      case EventType::AdversarySend:
        on_adversary_send(e);
        break;
      case EventType::TimerExpiry:
        on_timer(e);
        break;
      case EventType::ThresholdCross:
        on_threshold(e);
        break;
    }
  }

  rec_.final_states.assign(n, 0.0);
  rec_.final_controls.assign(n, Control::Zero);
  for (NodeId i = 0; i < n; ++i) {
    if (agents_[i]) {
      bring_to(*agents_[i], sc_.horizon);
      rec_.final_states[i] = agents_[i]->x;
      rec_.final_controls[i] = agents_[i]->u;
    } else {
      rec_.final_states[i] = state_at(rec_, i, sc_.horizon);
    }
  }
  return std::move(rec_);
}

void trial_prefix(std::ostream& out, const CsvRows& rows) {
  if (rows.trial) out << *rows.trial << ',';
}

void header(std::ostream& out, const CsvRows& rows, const char* columns) {
  if (!rows.header) return;
  if (rows.trial) out << "trial,";
  out << columns << '\n';
}

}  // namespace

RunRecord run(const Scenario& scenario, const RunOptions& options) {
  return Simulation(scenario, options).execute();
}

void write_trajectories_csv(const RunRecord& record, std::ostream& out, const CsvRows& rows) {
  header(out, rows, "agent,t_start,x_start,u");
  out << std::setprecision(17);
  for (NodeId i = 0; i < static_cast<NodeId>(record.segments.size()); ++i)
    for (const auto& s : record.segments[i]) {
      trial_prefix(out, rows);
      out << i << ',' << s.t_start << ',' << s.x_start << ',' << s.rate << '\n';
    }
}

void write_events_csv(const RunRecord& record, std::ostream& out, const CsvRows& rows) {
  header(out, rows, "time,kind,agent,from,to,value");
  out << std::setprecision(17);
  for (const auto& e : record.events) {
    trial_prefix(out, rows);
    out << e.time << ',' << to_string(e.kind) << ',' << e.agent << ',';
    if (e.from >= 0) out << e.from;
    out << ',';
    if (e.to >= 0) out << e.to;
    out << ',' << e.value << '\n';
  }
}

void write_counters_csv(const RunRecord& record, std::ostream& out, const CsvRows& rows) {
  header(out, rows, "agent,role,updates,transmissions");
  for (NodeId i = 0; i < static_cast<NodeId>(record.counters.size()); ++i) {
    trial_prefix(out, rows);
    out << i << ',' << (record.adversary[i] ? "adversary" : "regular") << ',' << record.counters[i].updates << ','
        << record.counters[i].transmissions << '\n';
  }
}

}  // namespace rcons
