// Command-line front end. Talks to the simulator only through the C API.
#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "rcons/rcons.h"

namespace {

int exit_code(rc_status status) {
  switch (status) {
    case RC_OK:
      return 0;
    case RC_ERR_USAGE:
    case RC_ERR_CONFIG:
    case RC_ERR_CAPACITY:
      return 1;
    case RC_ERR_IO:
      return 2;
    case RC_ERR_INTERNAL:
      return 3;
  }
  return 3;
}

int report(rc_status status, const char* command) {
  if (status != RC_OK) std::fprintf(stderr, "%s failed:\n%s\n", command, rc_last_error());
  return exit_code(status);
}

struct Common {
  std::string config;
  std::string out = "out";
  std::optional<std::uint64_t> seed;
  std::optional<int> trials;
  unsigned threads = 0;

  rc_overrides overrides() const {
    rc_overrides o{};
    o.has_seed = seed.has_value();
    o.seed = seed.value_or(0);
    o.has_trials = trials.has_value();
    o.trials = trials.value_or(0);
    o.threads = threads;
    return o;
  }
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("config", c.config, "Scenario config (JSON)")->required();
  cmd->add_option("--out", c.out, "Output directory")->capture_default_str();
  cmd->add_option("--seed", c.seed, "Override the config seed");
  cmd->add_option("--trials", c.trials, "Override the config trial count")->check(CLI::PositiveNumber);
  cmd->add_option("--threads", c.threads, "Worker threads (0: all cores)")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Resilient self-/event-triggered consensus simulator"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(rc_version()));

  Common run_args, sweep_args, graph_args;
  int r = 0, s = 0;
  auto* run_cmd = app.add_subcommand("run", "Simulate every trial of a scenario and write its artifacts");
  add_common(run_cmd, run_args);
  auto* sweep_cmd = app.add_subcommand("sweep", "Run a Monte Carlo sweep and write aggregate tables");
  add_common(sweep_cmd, sweep_args);
  auto* graph_cmd = app.add_subcommand("check-graph", "Certify (r, s)-robustness of the scenario graph");
  add_common(graph_cmd, graph_args);
  graph_cmd->add_option("--r", r, "r (default 2F + 1)");
  graph_cmd->add_option("--s", s, "s (default 1)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  if (*run_cmd) {
    const auto o = run_args.overrides();
    const int code = report(rc_run_scenario_file(run_args.config.c_str(), run_args.out.c_str(), &o), "run");
    if (code == 0) std::printf("wrote %s\n", run_args.out.c_str());
    return code;
  }
  if (*sweep_cmd) {
    const auto o = sweep_args.overrides();
    const int code = report(rc_run_sweep_file(sweep_args.config.c_str(), sweep_args.out.c_str(), &o), "sweep");
    if (code == 0) std::printf("wrote %s\n", sweep_args.out.c_str());
    return code;
  }
  const auto o = graph_args.overrides();
  int holds = 0;
  const int code = report(
      rc_check_graph_file(graph_args.config.c_str(), graph_args.out.c_str(), &o, r, s, &holds), "check-graph");
  if (code == 0) std::printf("robust: %s (details in %s)\n", holds ? "yes" : "no", graph_args.out.c_str());
  return code;
}
