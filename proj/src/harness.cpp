#include "rcons/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <sstream>
#include <thread>

#include "rcons/errors.hpp"

namespace rcons {

namespace fs = std::filesystem;

namespace {

constexpr int kCertifyLimit = 12;

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  return out;
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw IoError("cannot create output directory '" + dir.string() + "'");
}

void config_line(std::ostream& out, const nlohmann::json& config) { out << "# config=" << config.dump() << '\n'; }

void finish(std::ofstream& out, const fs::path& path) {
  out.flush();
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

std::optional<int> certify(const DirectedGraph& g) {
  if (g.size() < 2 || g.size() > kCertifyLimit) return std::nullopt;
  int best = 0;
  for (int r = 1; r < g.size(); ++r) {
    if (!check_robustness(g, r, 1).holds) break;
    best = r;
  }
  return best;
}

const char* yes_no(bool b) { return b ? "true" : "false"; }

}  // namespace

void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& body) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> stop{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count && !stop; i = next++) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
          stop = true;
        }
      }
    });
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

ScenarioReport run_scenario(const ScenarioConfig& config, const HarnessOptions& options) {
  ScenarioReport report;
  report.config = config;
  const auto trials = static_cast<std::size_t>(config.trials);
  std::vector<Scenario> scenarios;
  scenarios.reserve(trials);
  for (std::size_t t = 0; t < trials; ++t) scenarios.push_back(resolve(config, t));
  for (const auto& w : theorem_scope_problems(scenarios.front())) report.warnings.push_back(w);
  report.certified_robustness = certify(scenarios.front().graph);

  report.records.resize(trials);
  report.verdicts.resize(trials);
  RunOptions run_options;
  run_options.record_events = options.record_events;
  parallel_for(trials, options.threads, [&](std::size_t t) {
    report.records[t] = run(scenarios[t], run_options);
    report.verdicts[t] = evaluate(report.records[t], config.c, config.settle_window);
  });
  return report;
}

void write_scenario_outputs(const ScenarioReport& report, const fs::path& dir) {
  ensure_dir(dir);
  const auto config = to_json(report.config);
  const bool many = report.records.size() > 1;
  auto rows = [&](std::size_t t) {
    CsvRows r;
    if (many) r.trial = static_cast<std::int64_t>(t);
    r.header = t == 0;
    return r;
  };

  {
    const auto path = dir / "config.resolved";
    auto out = open_output(path);
    out << config.dump(2) << '\n';
    finish(out, path);
  }
  auto write_each = [&](const char* name, auto&& writer) {
    const auto path = dir / name;
    auto out = open_output(path);
    config_line(out, config);
    for (std::size_t t = 0; t < report.records.size(); ++t) writer(t, out, rows(t));
    finish(out, path);
  };
  write_each("trajectories.csv", [&](std::size_t t, std::ostream& out, const CsvRows& r) {
    write_trajectories_csv(report.records[t], out, r);
  });
  write_each("events.csv", [&](std::size_t t, std::ostream& out, const CsvRows& r) {
    write_events_csv(report.records[t], out, r);
  });
  write_each("counters.csv", [&](std::size_t t, std::ostream& out, const CsvRows& r) {
    write_counters_csv(report.records[t], out, r);
  });
  write_each("verdicts.csv", [&](std::size_t t, std::ostream& out, const CsvRows& r) {
    write_verdict_csv(report.verdicts[t], report.config.c, out, r);
  });

  const auto path = dir / "summary.txt";
  auto out = open_output(path);
  out << std::setprecision(6);
  const auto& first = report.records.front().config_echo;
  out << "protocol: " << to_string(report.config.protocol) << '\n'
      << "nodes: " << first.graph.size() << ", adversaries: " << first.adversaries.size() << ", F: " << first.F << '\n'
      << "epsilon: " << first.epsilon << ", c: " << first.c << ", horizon: " << first.horizon << '\n'
      << "seed: " << report.config.seed << ", trials: " << report.records.size() << '\n';
  if (report.certified_robustness)
    out << "graph certified " << *report.certified_robustness << "-robust (exhaustive check)\n";
  for (const auto& w : report.warnings) out << "warning: " << w << '\n';
  int safe = 0, reached = 0, quiesced = 0, silent = 0;
  for (const auto& v : report.verdicts) {
    safe += v.safety_holds;
    reached += v.outcome == ConsensusOutcome::Reached;
    quiesced += v.quiesced;
    silent += v.quiesced && v.transmissions_after_quiescence == 0;
  }
  const auto n = report.verdicts.size();
  out << "safety held: " << safe << "/" << n << '\n'
      << "consensus reached at c: " << reached << "/" << n << '\n'
      << "quiesced: " << quiesced << "/" << n << '\n'
      << "silent after quiescence: " << silent << "/" << n << '\n';
  for (std::size_t t = 0; t < n; ++t) {
    const auto& v = report.verdicts[t];
    out << "trial " << t << ": outcome=" << to_string(v.outcome) << " safety=" << yes_no(v.safety_holds)
        << " spread=" << v.final_spread << " quiesced=" << yes_no(v.quiesced);
    if (v.quiesced) out << " since=" << v.quiescence_time;
    out << '\n';
  }
  finish(out, path);
}

std::vector<SweepPoint> sweep_points(const ScenarioConfig& config) {
  if (!config.sweep) throw UsageError("config has no sweep section");
  const auto& s = *config.sweep;
  std::vector<std::optional<double>> ranges;
  if (s.mean_degree)
    ranges.push_back(range_for_mean_degree(node_count(config), *s.mean_degree));
  for (double r : s.ranges) ranges.push_back(r);
  if (ranges.empty()) ranges.push_back(std::nullopt);

  std::vector<SweepPoint> points;
  for (const auto& r : ranges)
    for (int a : s.n_adversaries)
      for (auto p : s.protocols) points.push_back({r, a, p, s.f_tracks_adversaries ? a : config.F});
  return points;
}

ScenarioConfig point_config(const ScenarioConfig& config, const SweepPoint& point) {
  ScenarioConfig cfg = config;
  cfg.sweep.reset();
  if (point.range) cfg.graph = GeometricGraph{node_count(config), *point.range};
  RandomPlacement placement;
  if (const auto* p = std::get_if<RandomPlacement>(&config.adversaries)) placement = *p;
  placement.count = point.n_adversaries;
  cfg.adversaries = placement;
  cfg.protocol = point.protocol;
  cfg.F = point.F;
  return cfg;
}

SweepReport run_sweep(const ScenarioConfig& config, const HarnessOptions& options) {
  SweepReport report;
  report.config = config;
  const auto points = sweep_points(config);
  const auto trials = static_cast<std::size_t>(config.trials);
  std::vector<ScenarioConfig> configs;
  for (const auto& p : points) configs.push_back(point_config(config, p));

  report.trials.resize(points.size() * trials);
  parallel_for(report.trials.size(), options.threads, [&](std::size_t k) {
    const std::size_t point = k / trials;
    const std::uint64_t trial = k % trials;
    const auto sc = resolve(configs[point], trial);
    const auto rec = run(sc, RunOptions{false});
    const auto v = evaluate(rec, config.c, config.settle_window);
    auto& row = report.trials[k];
    row.point = point;
    row.trial = trial;
    row.outcome = v.outcome;
    row.connected = is_connected(sc.graph);
    row.safety_holds = v.safety_holds;
    row.final_spread = v.final_spread;
    const std::vector<RunRecord> one{rec};
    row.counters = aggregate_counters(one);
  });

  for (std::size_t p = 0; p < points.size(); ++p) {
    SweepPointResult res;
    res.point = points[p];
    std::vector<ConsensusOutcome> outcomes;
    double updates = 0.0, transmissions = 0.0, agents = 0.0;
    const double regular = node_count(config) - points[p].n_adversaries;
    for (std::size_t t = 0; t < trials; ++t) {
      const auto& row = report.trials[p * trials + t];
      outcomes.push_back(row.outcome);
      res.connected += row.connected;
      res.inconclusive += row.outcome == ConsensusOutcome::Inconclusive;
      res.safety_violations += !row.safety_holds;
      updates += row.counters.updates * regular;
      transmissions += row.counters.transmissions * regular;
      agents += regular;
    }
    res.trials = static_cast<int>(trials);
    res.success_rate = success_rate(outcomes);
    res.successes = static_cast<int>(std::lround(res.success_rate * res.trials));
    res.connectivity_rate = static_cast<double>(res.connected) / res.trials;
    if (agents > 0) res.counters = {updates / agents, transmissions / agents};
    report.points.push_back(res);
  }
  return report;
}

void write_sweep_outputs(const SweepReport& report, const fs::path& dir) {
  ensure_dir(dir);
  const auto config = to_json(report.config);
  {
    const auto path = dir / "config.resolved";
    auto out = open_output(path);
    out << config.dump(2) << '\n';
    finish(out, path);
  }
  auto range_cell = [](std::ostream& out, const SweepPoint& p) {
    if (p.range) out << *p.range;
  };
  {
    const auto path = dir / "success_rates.csv";
    auto out = open_output(path);
    config_line(out, config);
    out << "range,n_adversaries,protocol,F,trials,successes,success_rate,connectivity_rate,inconclusive,"
           "safety_violations\n";
    out << std::setprecision(17);
    for (const auto& r : report.points) {
      range_cell(out, r.point);
      out << ',' << r.point.n_adversaries << ',' << to_string(r.point.protocol) << ',' << r.point.F << ','
          << r.trials << ',' << r.successes << ',' << r.success_rate << ',' << r.connectivity_rate << ','
          << r.inconclusive << ',' << r.safety_violations << '\n';
    }
    finish(out, path);
  }
  {
    // One row per (range, n_adversaries); protocol x metric columns.
    const auto path = dir / "counter_table.csv";
    auto out = open_output(path);
    config_line(out, config);
    const auto& protocols = report.config.sweep->protocols;
    out << "range,n_adversaries";
    for (auto p : protocols) out << ',' << to_string(p) << "_updates," << to_string(p) << "_transmissions";
    out << '\n' << std::setprecision(17);
    for (std::size_t k = 0; k < report.points.size(); k += protocols.size()) {
      range_cell(out, report.points[k].point);
      out << ',' << report.points[k].point.n_adversaries;
      for (std::size_t q = 0; q < protocols.size(); ++q)
        out << ',' << report.points[k + q].counters.updates << ',' << report.points[k + q].counters.transmissions;
      out << '\n';
    }
    finish(out, path);
  }
  {
    const auto path = dir / "trials.csv";
    auto out = open_output(path);
    config_line(out, config);
    out << "range,n_adversaries,protocol,trial,outcome,connected,safety_holds,final_spread,mean_updates,"
           "mean_transmissions\n";
    out << std::setprecision(17);
    for (const auto& row : report.trials) {
      const auto& p = report.points[row.point].point;
      range_cell(out, p);
      out << ',' << p.n_adversaries << ',' << to_string(p.protocol) << ',' << row.trial << ','
          << to_string(row.outcome) << ',' << yes_no(row.connected) << ',' << yes_no(row.safety_holds) << ','
          << row.final_spread << ',' << row.counters.updates << ',' << row.counters.transmissions << '\n';
    }
    finish(out, path);
  }
  const auto path = dir / "summary.txt";
  auto out = open_output(path);
  out << "success: consensus check at c = " << report.config.c << " after a settle window of "
      << report.config.settle_window.value_or(0.5 * report.config.horizon) << " (horizon " << report.config.horizon
      << ")\n"
      << std::setprecision(4);
  for (const auto& r : report.points) {
    out << "range=";
    if (r.point.range)
      out << *r.point.range;
    else
      out << "-";
    out << " n_A=" << r.point.n_adversaries << " " << to_string(r.point.protocol) << ": success "
        << r.success_rate << ", connected " << r.connectivity_rate << ", updates " << r.counters.updates
        << ", transmissions " << r.counters.transmissions << '\n';
  }
  finish(out, path);
}

GraphReport check_graph(const ScenarioConfig& config, std::optional<int> r, std::optional<int> s) {
  GraphReport report;
  ScenarioConfig cfg = config;
  cfg.theorem_scoped = false;
  report.graph = resolve(cfg, 0).graph;
  report.r = r.value_or(2 * config.F + 1);
  report.s = s.value_or(1);
  report.verdict = check_robustness(report.graph, report.r, report.s);
  report.connected = is_connected(report.graph);
  report.min_in_degree = min_in_degree(report.graph);
  report.omega = min_nonzero_weight(report.graph);
  report.config = to_json(config);
  return report;
}

void write_graph_outputs(const GraphReport& report, const fs::path& dir) {
  ensure_dir(dir);
  {
    const auto path = dir / "graph.csv";
    auto out = open_output(path);
    config_line(out, report.config);
    write_adjacency_csv(report.graph, out);
    finish(out, path);
  }
  const auto path = dir / "robustness.txt";
  auto out = open_output(path);
  out << "# config=" << report.config.dump() << '\n'
      << "nodes: " << report.graph.size() << '\n'
      << "edges: " << report.graph.edge_count() << '\n'
      << "strongly connected: " << yes_no(report.connected) << '\n'
      << "min in-degree: " << report.min_in_degree << '\n'
      << "omega: " << std::setprecision(17) << report.omega << '\n'
      << "(" << report.r << "," << report.s << ")-robust: " << yes_no(report.verdict.holds) << '\n';
  if (report.verdict.witness) {
    auto list = [&](const std::vector<NodeId>& v) {
      out << '{';
      for (std::size_t k = 0; k < v.size(); ++k) out << (k ? "," : "") << v[k];
      out << '}';
    };
    out << "witness: ";
    list(report.verdict.witness->first);
    out << ' ';
    list(report.verdict.witness->second);
    out << '\n';
  }
  finish(out, path);
}

}  // namespace rcons
