#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "rcons/metrics.hpp"
#include "rcons/scenario.hpp"

namespace rcons {

struct HarnessOptions {
  unsigned threads = 0;  // 0: one per hardware thread
  bool record_events = true;
};

/// Runs body(0) .. body(count - 1) on a bounded pool. Results must be
/// written by index; the first exception is rethrown after all workers stop.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& body);

struct ScenarioReport {
  ScenarioConfig config;
  std::vector<RunRecord> records;  // one per trial
  std::vector<ConsensusVerdict> verdicts;
  std::vector<std::string> warnings;
  // Largest r with the first trial's graph r-robust; empty when too large to certify.
  std::optional<int> certified_robustness;
};

ScenarioReport run_scenario(const ScenarioConfig& config, const HarnessOptions& options = {});

/// config.resolved, trajectories.csv, events.csv, counters.csv,
/// verdicts.csv and summary.txt. CSV files start with a `# config=` line.
void write_scenario_outputs(const ScenarioReport& report, const std::filesystem::path& dir);

struct SweepPoint {
  std::optional<double> range;
  int n_adversaries = 0;
  ProtocolKind protocol = ProtocolKind::ResilientSelfTriggered;
  int F = 0;
};

struct SweepTrial {
  std::size_t point = 0;
  std::uint64_t trial = 0;
  ConsensusOutcome outcome = ConsensusOutcome::Inconclusive;
  bool connected = false;
  bool safety_holds = false;
  double final_spread = 0.0;
  CounterMeans counters;  // mean over the regular agents of this run
};

struct SweepPointResult {
  SweepPoint point;
  int trials = 0;
  int successes = 0;
  int connected = 0;
  int inconclusive = 0;
  int safety_violations = 0;
  double success_rate = 0.0;
  double connectivity_rate = 0.0;
  CounterMeans counters;  // pooled over every regular agent of every trial
};

struct SweepReport {
  ScenarioConfig config;
  std::vector<SweepPointResult> points;
  std::vector<SweepTrial> trials;
};

// Points in the order range, adversary count, protocol.
std::vector<SweepPoint> sweep_points(const ScenarioConfig& config);
// Config of one sweep point; resolve() it per trial.
ScenarioConfig point_config(const ScenarioConfig& config, const SweepPoint& point);

SweepReport run_sweep(const ScenarioConfig& config, const HarnessOptions& options = {});

// success_rates.csv, counter_table.csv, trials.csv, config.resolved, summary.txt
void write_sweep_outputs(const SweepReport& report, const std::filesystem::path& dir);

struct GraphReport {
  DirectedGraph graph;
  int r = 1;
  int s = 1;
  RobustnessVerdict verdict;
  bool connected = false;
  int min_in_degree = 0;
  double omega = 0.0;
  nlohmann::json config;
};

// Default r is 2F + 1, default s is 1. Random graphs use trial 0.
GraphReport check_graph(const ScenarioConfig& config, std::optional<int> r = {}, std::optional<int> s = {});

// graph.csv and robustness.txt
void write_graph_outputs(const GraphReport& report, const std::filesystem::path& dir);

}  // namespace rcons
