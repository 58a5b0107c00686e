#include "rcons/rcons.h"

#include <fstream>
#include <string>

#include "rcons/errors.hpp"
#include "rcons/harness.hpp"

struct rc_graph {
  rcons::DirectedGraph graph;
};

struct rc_scenario {
  rcons::ScenarioConfig config;
};

struct rc_run {
  rcons::RunRecord record;
  rcons::ConsensusVerdict verdict;
};

namespace {

thread_local std::string last_error;

template <class F>
rc_status guarded(F&& body) {
  last_error.clear();
  try {
    body();
    return RC_OK;
  } catch (const rcons::ConfigError& e) {
    for (const auto& p : e.problems()) {
      if (!last_error.empty()) last_error += '\n';
      last_error += p;
    }
    return RC_ERR_CONFIG;
  } catch (const rcons::UsageError& e) {
    last_error = e.what();
    return RC_ERR_USAGE;
  } catch (const rcons::IoError& e) {
    last_error = e.what();
    return RC_ERR_IO;
  } catch (const rcons::CapacityError& e) {
    last_error = e.what();
    return RC_ERR_CAPACITY;
  } catch (const std::exception& e) {
    last_error = e.what();
    return RC_ERR_INTERNAL;
  } catch (...) {
    last_error = "unknown error";
    return RC_ERR_INTERNAL;
  }
}

template <class T>
T& must(T* p, const char* what) {
  if (!p) throw rcons::UsageError(std::string(what) + " must not be null");
  return *p;
}

const char* text(const char* p, const char* what) {
  if (!p) throw rcons::UsageError(std::string(what) + " must not be null");
  return p;
}

const rcons::RunRecord& record_of(const rc_run* run) { return must(run, "run").record; }

void check_agent(const rc_run* run, int agent) {
  if (agent < 0 || agent >= static_cast<int>(record_of(run).final_states.size()))
    throw rcons::UsageError("agent id out of range");
}

void apply(rcons::ScenarioConfig& config, const rc_overrides* ov) {
  if (!ov) return;
  if (ov->has_seed) config.seed = ov->seed;
  if (ov->has_trials) {
    if (ov->trials < 1) throw rcons::ConfigError({"trials: must be at least 1"});
    config.trials = ov->trials;
  }
}

rcons::HarnessOptions harness_options(const rc_overrides* ov) {
  rcons::HarnessOptions o;
  if (ov) o.threads = ov->threads;
  return o;
}

}  // namespace

extern "C" {

const char* rc_last_error(void) { return last_error.c_str(); }
const char* rc_version(void) { return "1.0.0"; }

rc_status rc_graph_create(int n, rc_graph** out) {
  return guarded([&] {
    must(out, "out");
    if (n < 0) throw rcons::UsageError("node count must be nonnegative");
    *out = new rc_graph{rcons::DirectedGraph(n)};
  });
}

rc_status rc_graph_random_geometric(int n, double range, uint64_t seed, rc_graph** out) {
  return guarded([&] {
    must(out, "out");
    *out = new rc_graph{rcons::random_geometric(n, range, seed)};
  });
}

void rc_graph_destroy(rc_graph* graph) { delete graph; }

rc_status rc_graph_add_edge(rc_graph* graph, int from, int to) {
  return guarded([&] { must(graph, "graph").graph.add_edge(from, to); });
}

rc_status rc_graph_set_weight(rc_graph* graph, int i, int j, double a_ij) {
  return guarded([&] { must(graph, "graph").graph.set_weight(i, j, a_ij); });
}

rc_status rc_graph_uniform_weights(rc_graph* graph) {
  return guarded([&] {
    auto& g = must(graph, "graph");
    g.graph = rcons::assign_uniform_weights(std::move(g.graph));
  });
}

rc_status rc_graph_size(const rc_graph* graph, int* out) {
  return guarded([&] { must(out, "out") = must(graph, "graph").graph.size(); });
}

rc_status rc_graph_edge_count(const rc_graph* graph, int* out) {
  return guarded([&] { must(out, "out") = static_cast<int>(must(graph, "graph").graph.edge_count()); });
}

rc_status rc_graph_is_connected(const rc_graph* graph, int* out) {
  return guarded([&] { must(out, "out") = rcons::is_connected(must(graph, "graph").graph); });
}

rc_status rc_graph_check_robustness(const rc_graph* graph, int r, int s, int* holds) {
  return guarded([&] { must(holds, "holds") = rcons::check_robustness(must(graph, "graph").graph, r, s).holds; });
}

rc_status rc_graph_write_csv(const rc_graph* graph, const char* path) {
  return guarded([&] {
    const auto& g = must(graph, "graph");
    std::ofstream out(text(path, "path"));
    if (!out) throw rcons::IoError(std::string("cannot write '") + path + "'");
    rcons::write_adjacency_csv(g.graph, out);
    if (!out) throw rcons::IoError(std::string("failed writing '") + path + "'");
  });
}

rc_status rc_scenario_load(const char* path, rc_scenario** out) {
  return guarded([&] {
    must(out, "out");
    *out = new rc_scenario{rcons::load_config(text(path, "path"))};
  });
}

rc_status rc_scenario_parse(const char* json_text, rc_scenario** out) {
  return guarded([&] {
    must(out, "out");
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(text(json_text, "json_text"), nullptr, true, true);
    } catch (const nlohmann::json::parse_error& e) {
      throw rcons::ConfigError({e.what()});
    }
    *out = new rc_scenario{rcons::parse_config(doc)};
  });
}

void rc_scenario_destroy(rc_scenario* scenario) { delete scenario; }

rc_status rc_scenario_set_seed(rc_scenario* scenario, uint64_t seed) {
  return guarded([&] { must(scenario, "scenario").config.seed = seed; });
}

rc_status rc_scenario_set_trials(rc_scenario* scenario, int trials) {
  return guarded([&] {
    if (trials < 1) throw rcons::UsageError("trials must be at least 1");
    must(scenario, "scenario").config.trials = trials;
  });
}

rc_status rc_scenario_node_count(const rc_scenario* scenario, int* out) {
  return guarded([&] { must(out, "out") = rcons::node_count(must(scenario, "scenario").config); });
}

rc_status rc_simulate(const rc_scenario* scenario, uint64_t trial, rc_run** out) {
  return guarded([&] {
    must(out, "out");
    const auto& cfg = must(scenario, "scenario").config;
    auto record = rcons::run(rcons::resolve(cfg, trial));
    auto verdict = rcons::evaluate(record, cfg.c, cfg.settle_window);
    *out = new rc_run{std::move(record), std::move(verdict)};
  });
}

void rc_run_destroy(rc_run* run) { delete run; }

rc_status rc_run_node_count(const rc_run* run, int* out) {
  return guarded([&] { must(out, "out") = static_cast<int>(record_of(run).final_states.size()); });
}

rc_status rc_run_is_adversary(const rc_run* run, int agent, int* out) {
  return guarded([&] {
    check_agent(run, agent);
    must(out, "out") = record_of(run).adversary[agent] != 0;
  });
}

rc_status rc_run_final_state(const rc_run* run, int agent, double* out) {
  return guarded([&] {
    check_agent(run, agent);
    must(out, "out") = record_of(run).final_states[agent];
  });
}

rc_status rc_run_state_at(const rc_run* run, int agent, double t, double* out) {
  return guarded([&] {
    check_agent(run, agent);
    must(out, "out") = rcons::state_at(record_of(run), agent, t);
  });
}

rc_status rc_run_counters(const rc_run* run, int agent, int64_t* updates, int64_t* transmissions) {
  return guarded([&] {
    check_agent(run, agent);
    const auto& c = record_of(run).counters[agent];
    must(updates, "updates") = c.updates;
    must(transmissions, "transmissions") = c.transmissions;
  });
}

rc_status rc_run_verdict(const rc_run* run, rc_verdict* out) {
  return guarded([&] {
    const auto& v = must(run, "run").verdict;
    auto& o = must(out, "out");
    o.safety_holds = v.safety_holds;
    o.safety_lo = v.safety_interval.lo;
    o.safety_hi = v.safety_interval.hi;
    o.final_spread = v.final_spread;
    o.consensus_at_c = v.consensus_at_c;
    o.outcome = static_cast<rc_outcome>(v.outcome);
    o.quiesced = v.quiesced;
    o.quiescence_time = v.quiescence_time;
    o.transmissions_after_quiescence = v.transmissions_after_quiescence;
  });
}

rc_status rc_run_write_csv(const rc_run* run, const char* dir) {
  return guarded([&] {
    const auto& r = must(run, "run");
    rcons::ScenarioReport report;
    report.records.push_back(r.record);
    report.verdicts.push_back(r.verdict);
    report.config.c = r.record.config_echo.c;
    rcons::write_scenario_outputs(report, text(dir, "dir"));
  });
}

rc_status rc_run_scenario_file(const char* config_path, const char* out_dir, const rc_overrides* overrides) {
  return guarded([&] {
    auto config = rcons::load_config(text(config_path, "config_path"));
    apply(config, overrides);
    const auto report = rcons::run_scenario(config, harness_options(overrides));
    rcons::write_scenario_outputs(report, text(out_dir, "out_dir"));
  });
}

rc_status rc_run_sweep_file(const char* config_path, const char* out_dir, const rc_overrides* overrides) {
  return guarded([&] {
    auto config = rcons::load_config(text(config_path, "config_path"));
    apply(config, overrides);
    if (!config.sweep) throw rcons::ConfigError({"config has no 'sweep' section"});
    const auto report = rcons::run_sweep(config, harness_options(overrides));
    rcons::write_sweep_outputs(report, text(out_dir, "out_dir"));
  });
}

rc_status rc_check_graph_file(const char* config_path, const char* out_dir, const rc_overrides* overrides, int r,
                              int s, int* holds) {
  return guarded([&] {
    auto config = rcons::load_config(text(config_path, "config_path"));
    apply(config, overrides);
    const auto report = rcons::check_graph(config, r > 0 ? std::optional<int>(r) : std::nullopt,
                                           s > 0 ? std::optional<int>(s) : std::nullopt);
    rcons::write_graph_outputs(report, text(out_dir, "out_dir"));
    if (holds) *holds = report.verdict.holds;
  });
}

}  // extern "C"
