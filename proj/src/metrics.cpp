#include "rcons/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

namespace rcons {

std::string_view to_string(ConsensusOutcome outcome) {
  switch (outcome) {
    case ConsensusOutcome::Reached:
      return "reached";
    case ConsensusOutcome::NotReached:
      return "not_reached";
    case ConsensusOutcome::Inconclusive:
      return "inconclusive";
  }
  return "unknown";
}

SafetyInterval safety_interval(const RunRecord& record, std::span<const NodeId> regular) {
  if (regular.empty()) return {};
  SafetyInterval s{record.segments.at(regular.front()).front().x_start,
                   record.segments.at(regular.front()).front().x_start};
  for (NodeId i : regular) {
    const double x0 = record.segments.at(i).front().x_start;
    s.lo = std::min(s.lo, x0);
    s.hi = std::max(s.hi, x0);
  }
  return s;
}

bool check_safety(const RunRecord& record, std::span<const NodeId> regular, double tolerance,
                  std::optional<double> until) {
  const auto interval = safety_interval(record, regular);
  const double end = std::min(until.value_or(record.config_echo.horizon), record.config_echo.horizon);
  auto inside = [&](double x) { return x >= interval.lo - tolerance && x <= interval.hi + tolerance; };
  for (NodeId i : regular) {
    const auto& segs = record.segments.at(i);
    for (std::size_t k = 0; k < segs.size(); ++k) {
      const auto& s = segs[k];
      if (s.t_start > end) break;
      if (!inside(s.x_start)) return false;
      const double stop = k + 1 < segs.size() ? std::min(segs[k + 1].t_start, end) : end;
      if (!inside(s.x_start + s.rate * (stop - s.t_start))) return false;
    }
  }
  return true;
}

double final_spread(const RunRecord& record, std::span<const NodeId> regular) {
  if (regular.empty()) return 0.0;
  double lo = record.final_states.at(regular.front());
  double hi = lo;
  for (NodeId i : regular) {
    lo = std::min(lo, record.final_states.at(i));
    hi = std::max(hi, record.final_states.at(i));
  }
  return hi - lo;
}

double default_settle_window(const RunRecord& record) { return 0.5 * record.config_echo.horizon; }

Quiescence quiescence(const RunRecord& record, std::span<const NodeId> regular, std::optional<double> settle) {
  Quiescence q{true, 0.0};
  bool stopped = true;
  for (NodeId i : regular) {
    const auto& last = record.segments.at(i).back();
    if (last.rate != 0.0) stopped = false;
    q.since = std::max(q.since, last.t_start);
  }
  const double window = settle.value_or(default_settle_window(record));
  q.quiesced = stopped && q.since <= record.config_echo.horizon - window;
  return q;
}

ConsensusOutcome check_consensus(const RunRecord& record, std::span<const NodeId> regular, double c,
                                 std::optional<double> settle) {
  if (!quiescence(record, regular, settle).quiesced) return ConsensusOutcome::Inconclusive;
  return final_spread(record, regular) <= c ? ConsensusOutcome::Reached : ConsensusOutcome::NotReached;
}

std::int64_t regular_transmissions_after(const RunRecord& record, std::span<const NodeId> regular, double t) {
  std::set<NodeId> members(regular.begin(), regular.end());
  std::int64_t count = 0;
  for (const auto& e : record.events)
    if (e.kind == LogKind::Broadcast && e.time > t && members.contains(e.agent)) ++count;
  return count;
}

ConsensusVerdict evaluate(const RunRecord& record, double c, std::optional<double> settle) {
  const auto regular = regular_agents(record);
  ConsensusVerdict v;
  v.safety_interval = safety_interval(record, regular);
  v.safety_holds = check_safety(record, regular);
  v.final_spread = final_spread(record, regular);
  v.consensus_at_c = v.final_spread <= c;
  const auto q = quiescence(record, regular, settle);
  v.quiesced = q.quiesced;
  v.quiescence_time = q.since;
  v.outcome = check_consensus(record, regular, c, settle);
  v.transmissions_after_quiescence = regular_transmissions_after(record, regular, q.since);
  v.per_agent_counters = record.counters;
  return v;
}

CounterMeans aggregate_counters(std::span<const RunRecord> records) {
  CounterMeans sum;
  std::int64_t agents = 0;
  for (const auto& r : records)
    for (NodeId i : regular_agents(r)) {
      sum.updates += static_cast<double>(r.counters[i].updates);
      sum.transmissions += static_cast<double>(r.counters[i].transmissions);
      ++agents;
    }
  if (agents == 0) return {};
  return {sum.updates / agents, sum.transmissions / agents};
}

CounterMeans aggregate_counters(std::span<const RunRecord> records, std::span<const NodeId> regular) {
  CounterMeans sum;
  std::int64_t agents = 0;
  for (const auto& r : records)
    for (NodeId i : regular) {
      sum.updates += static_cast<double>(r.counters.at(i).updates);
      sum.transmissions += static_cast<double>(r.counters.at(i).transmissions);
      ++agents;
    }
  if (agents == 0) return {};
  return {sum.updates / agents, sum.transmissions / agents};
}

double success_rate(std::span<const ConsensusOutcome> outcomes) {
  if (outcomes.empty()) return 0.0;
  const auto hits = std::count(outcomes.begin(), outcomes.end(), ConsensusOutcome::Reached);
  return static_cast<double>(hits) / static_cast<double>(outcomes.size());
}

std::vector<std::string> structural_violations(const RunRecord& record) {
  std::vector<std::string> problems;
  auto fail = [&](auto&&... parts) {
    std::ostringstream msg;
    msg << std::setprecision(17);
    (msg << ... << parts);
    problems.push_back(msg.str());
  };
  const auto& sc = record.config_echo;
  const double eps = sc.epsilon;
  const double spacing = eps * (1.0 - 1e-9);
  const int n = static_cast<int>(record.segments.size());

  for (NodeId i = 0; i < n; ++i) {
    const auto& segs = record.segments[i];
    if (segs.empty() || segs.front().t_start != 0.0) fail("agent ", i, " trajectory does not start at t = 0");
    for (std::size_t k = 0; k < segs.size(); ++k) {
      const auto& s = segs[k];
      if (!record.adversary[i] && s.rate != -1.0 && s.rate != 0.0 && s.rate != 1.0)
        fail("agent ", i, " control ", s.rate, " at t = ", s.t_start, " is not ternary");
      if (k + 1 < segs.size()) {
        const auto& next = segs[k + 1];
        if (next.t_start < s.t_start) fail("agent ", i, " segments out of order at t = ", next.t_start);
        const double predicted = s.x_start + s.rate * (next.t_start - s.t_start);
        if (!record.adversary[i] && std::abs(predicted - next.x_start) > 1e-9 * std::max(1.0, std::abs(predicted)))
          fail("agent ", i, " trajectory jumps at t = ", next.t_start, " (", predicted, " vs ", next.x_start, ")");
      }
    }
  }

  std::vector<AgentCounters> tally(n);
  std::vector<std::optional<double>> last_update(n);
  std::vector<std::optional<double>> last_broadcast(n);
  const bool self_triggered = is_self_triggered(sc.protocol);
  double previous = 0.0;
  // adversary -> sent_at -> (value, recipients)
  std::map<NodeId, std::map<double, double>> adversary_sends;
  std::map<std::pair<NodeId, double>, std::vector<NodeId>> adversary_deliveries;

  for (const auto& e : record.events) {
    if (e.time < previous) fail("event log goes back in time at ", e.time);
    previous = e.time;
    switch (e.kind) {
      case LogKind::Update:
        ++tally[e.agent].updates;
        if (self_triggered && last_update[e.agent] && e.time - *last_update[e.agent] < spacing)
          fail("agent ", e.agent, " updated at ", *last_update[e.agent], " and ", e.time, " (closer than eps)");
        last_update[e.agent] = e.time;
        break;
      case LogKind::Broadcast:
        ++tally[e.agent].transmissions;
        if (!self_triggered && last_broadcast[e.agent] && e.time - *last_broadcast[e.agent] < spacing)
          fail("agent ", e.agent, " transmitted at ", *last_broadcast[e.agent], " and ", e.time, " (closer than eps)");
        last_broadcast[e.agent] = e.time;
        break;
      case LogKind::AdversaryBroadcast:
        ++tally[e.agent].transmissions;
        adversary_sends[e.agent][e.time] = e.value;
        break;
      case LogKind::Delivery:
        if (e.time < e.sent_at) fail("delivery to ", e.to, " at ", e.time, " precedes its send at ", e.sent_at);
        if (e.time - e.sent_at > sc.delay_bound * (1.0 + 1e-12) + 1e-12)
          fail("delivery to ", e.to, " delayed ", e.time - e.sent_at, " beyond the bound ", sc.delay_bound);
        if (!sc.graph.has_edge(e.from, e.to)) fail("delivery over missing edge ", e.from, "->", e.to);
        if (record.adversary[e.from]) {
          auto sends = adversary_sends.find(e.from);
          if (sends == adversary_sends.end() || !sends->second.contains(e.sent_at)) {
            fail("adversary ", e.from, " delivery without a matching send at ", e.sent_at);
          } else if (sends->second.at(e.sent_at) != e.value) {
            fail("adversary ", e.from, " sent different values at ", e.sent_at);
          }
          adversary_deliveries[{e.from, e.sent_at}].push_back(e.to);
        }
        break;
    }
  }

  for (NodeId i = 0; i < n; ++i)
    if (!(tally[i] == record.counters[i]))
      fail("agent ", i, " counters (", record.counters[i].updates, ", ", record.counters[i].transmissions,
           ") disagree with the event log (", tally[i].updates, ", ", tally[i].transmissions, ")");

  const double latest_delay = max_delay(sc.delay);
  for (const auto& [agent, sends] : adversary_sends)
    for (const auto& [t, value] : sends) {
      auto recipients = adversary_deliveries[{agent, t}];
      std::sort(recipients.begin(), recipients.end());
      const auto& outs = sc.graph.out_neighbors(agent);
      const bool complete = t + latest_delay <= sc.horizon;
      if (std::adjacent_find(recipients.begin(), recipients.end()) != recipients.end())
        fail("adversary ", agent, " delivered twice to one neighbor for the send at ", t);
      if (complete && recipients != outs)
        fail("adversary ", agent, " send at ", t, " did not reach exactly its out-neighbors");
    }
  return problems;
}

void write_verdict_csv(const ConsensusVerdict& v, double c, std::ostream& out, const CsvRows& rows) {
  if (rows.header) {
    if (rows.trial) out << "trial,";
    out << "safety_holds,safety_lo,safety_hi,final_spread,c,consensus_at_c,outcome,quiesced,quiescence_time,"
           "transmissions_after_quiescence\n";
  }
  out << std::setprecision(17);
  if (rows.trial) out << *rows.trial << ',';
  out << (v.safety_holds ? "true" : "false") << ',' << v.safety_interval.lo << ',' << v.safety_interval.hi << ','
      << v.final_spread << ',' << c << ',' << (v.consensus_at_c ? "true" : "false") << ',' << to_string(v.outcome)
      << ',' << (v.quiesced ? "true" : "false") << ',' << v.quiescence_time << ',' << v.transmissions_after_quiescence
      << '\n';
}

}  // namespace rcons
