#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "rcons/engine.hpp"

namespace rcons {

// Explicit edge list; weights default to 1/(d_i + 1) unless overridden.
struct LiteralGraph {
  DirectedGraph graph;
};
struct GeometricGraph {
  int n = 0;
  double range = 0.0;
};
struct CompleteGraph {
  int n = 0;
};
using GraphSource = std::variant<LiteralGraph, GeometricGraph, CompleteGraph>;

// Adversaries placed at random per trial.
struct RandomPlacement {
  int count = 0;
  AdversaryBehavior behavior = RandomControl{};
  std::optional<double> send_interval;  // default: epsilon
};
using AdversarySource = std::variant<std::vector<AdversarySpec>, RandomPlacement>;

struct UniformInitial {
  double lo = 0.0;
  double hi = 1.0;
};
// Either one value per regular agent (or per node), or a distribution.
using InitialSource = std::variant<std::vector<double>, UniformInitial>;

struct SweepSpec {
  std::vector<double> ranges;
  std::optional<double> mean_degree;  // alternative to ranges for geometric graphs
  std::vector<int> n_adversaries{0};
  std::vector<ProtocolKind> protocols;
  bool f_tracks_adversaries = true;
};

struct ScenarioConfig {
  GraphSource graph = CompleteGraph{1};
  ProtocolKind protocol = ProtocolKind::ResilientSelfTriggered;
  int F = 0;
  double epsilon = 0.1;
  double c = 0.2;
  DelayModel delay = ZeroDelay{};
  std::optional<double> delay_bound;  // default: the delay model's maximum
  AdversarySource adversaries = std::vector<AdversarySpec>{};
  InitialSource initial_states = UniformInitial{};
  std::vector<Control> initial_controls;
  double horizon = 20.0;
  std::optional<double> settle_window;  // default: half the horizon
  std::uint64_t seed = 0;
  int trials = 1;
  bool theorem_scoped = false;
  std::optional<SweepSpec> sweep;
};

int node_count(const ScenarioConfig& config);

/// Parses and checks a config document. Collects every problem found and
/// throws ConfigError listing all of them.
ScenarioConfig parse_config(const nlohmann::json& doc);
ScenarioConfig load_config(const std::string& path);

// Config with every default materialized, in the same schema parse_config reads.
nlohmann::json to_json(const ScenarioConfig& config);

/// Concrete run for one trial. Random graph, adversary placement and
/// initial values come from streams keyed by (seed, trial), so trials are
/// independent of execution order. Throws ConfigError on theorem-scope
/// violations.
Scenario resolve(const ScenarioConfig& config, std::uint64_t trial);

// Integer delay bound seen by the discrete-time analysis: largest tau below n * delay_bound / epsilon.
int induced_tau(int n, double delay_bound, double epsilon);

// Largest epsilon allowed by the convergence condition for this scenario.
double scenario_epsilon_bound(const Scenario& scenario);

/// Convergence-hypothesis problems of a resolved scenario: more adversaries
/// than F, or epsilon above its bound. Errors for theorem-scoped configs,
/// warnings otherwise.
std::vector<std::string> theorem_scope_problems(const Scenario& scenario);

}  // namespace rcons
