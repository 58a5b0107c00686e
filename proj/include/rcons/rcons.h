/* C interface to the resilient consensus simulator.
 *
 * Every call returns an rc_status. On failure, rc_last_error() describes
 * the problem; for configuration errors it lists every violated rule, one
 * per line. Handles are opaque and owned by the caller, who releases them
 * with the matching *_destroy function (passing NULL is allowed).
 */
#ifndef RCONS_RCONS_H
#define RCONS_RCONS_H

#include <stdint.h>

#if defined(_WIN32)
#define RC_API __declspec(dllexport)
#else
#define RC_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum rc_status {
  RC_OK = 0,
  RC_ERR_USAGE = 1,
  RC_ERR_CONFIG = 2,
  RC_ERR_IO = 3,
  RC_ERR_CAPACITY = 4,
  RC_ERR_INTERNAL = 5
} rc_status;

typedef enum rc_outcome { RC_REACHED = 0, RC_NOT_REACHED = 1, RC_INCONCLUSIVE = 2 } rc_outcome;

typedef struct rc_graph rc_graph;
typedef struct rc_scenario rc_scenario;
typedef struct rc_run rc_run;

typedef struct rc_verdict {
  int safety_holds;
  double safety_lo;
  double safety_hi;
  double final_spread;
  int consensus_at_c;
  rc_outcome outcome;
  int quiesced;
  double quiescence_time;
  int64_t transmissions_after_quiescence;
} rc_verdict;

/* Optional command-line style overrides; zero-initialize for none. */
typedef struct rc_overrides {
  int has_seed;
  uint64_t seed;
  int has_trials;
  int trials;
  unsigned threads; /* 0: one per hardware thread */
} rc_overrides;

/* Message for the last failed call on this thread; empty after success. */
RC_API const char* rc_last_error(void);
RC_API const char* rc_version(void);

/* Graphs. Edge (from, to) means `from` sends to `to`. */
RC_API rc_status rc_graph_create(int n, rc_graph** out);
RC_API rc_status rc_graph_random_geometric(int n, double range, uint64_t seed, rc_graph** out);
RC_API void rc_graph_destroy(rc_graph* graph);
RC_API rc_status rc_graph_add_edge(rc_graph* graph, int from, int to);
RC_API rc_status rc_graph_set_weight(rc_graph* graph, int i, int j, double a_ij);
RC_API rc_status rc_graph_uniform_weights(rc_graph* graph);
RC_API rc_status rc_graph_size(const rc_graph* graph, int* out);
RC_API rc_status rc_graph_edge_count(const rc_graph* graph, int* out);
RC_API rc_status rc_graph_is_connected(const rc_graph* graph, int* out);
RC_API rc_status rc_graph_check_robustness(const rc_graph* graph, int r, int s, int* holds);
RC_API rc_status rc_graph_write_csv(const rc_graph* graph, const char* path);

/* Scenarios (JSON config documents). */
RC_API rc_status rc_scenario_load(const char* path, rc_scenario** out);
RC_API rc_status rc_scenario_parse(const char* json_text, rc_scenario** out);
RC_API void rc_scenario_destroy(rc_scenario* scenario);
RC_API rc_status rc_scenario_set_seed(rc_scenario* scenario, uint64_t seed);
RC_API rc_status rc_scenario_set_trials(rc_scenario* scenario, int trials);
RC_API rc_status rc_scenario_node_count(const rc_scenario* scenario, int* out);

/* Single runs. */
RC_API rc_status rc_simulate(const rc_scenario* scenario, uint64_t trial, rc_run** out);
RC_API void rc_run_destroy(rc_run* run);
RC_API rc_status rc_run_node_count(const rc_run* run, int* out);
RC_API rc_status rc_run_is_adversary(const rc_run* run, int agent, int* out);
RC_API rc_status rc_run_final_state(const rc_run* run, int agent, double* out);
RC_API rc_status rc_run_state_at(const rc_run* run, int agent, double t, double* out);
RC_API rc_status rc_run_counters(const rc_run* run, int agent, int64_t* updates, int64_t* transmissions);
RC_API rc_status rc_run_verdict(const rc_run* run, rc_verdict* out);
/* Writes trajectories.csv, events.csv, counters.csv and verdicts.csv into dir. */
RC_API rc_status rc_run_write_csv(const rc_run* run, const char* dir);

/* File-level drivers behind the command-line tool. */
RC_API rc_status rc_run_scenario_file(const char* config_path, const char* out_dir, const rc_overrides* overrides);
RC_API rc_status rc_run_sweep_file(const char* config_path, const char* out_dir, const rc_overrides* overrides);
/* r or s <= 0 selects the default (2F + 1 and 1). Sets *holds to the verdict. */
RC_API rc_status rc_check_graph_file(const char* config_path, const char* out_dir, const rc_overrides* overrides,
                                     int r, int s, int* holds);

#ifdef __cplusplus
}
#endif

#endif /* RCONS_RCONS_H */
