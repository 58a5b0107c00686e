// Exercises the shared library through its C header only.
#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "rcons/rcons.h"

namespace fs = std::filesystem;

namespace {

const char* kTwoNode = R"({
  "graph": {"type": "literal", "n": 2, "bidirectional": true, "edges": [[0, 1]]},
  "protocol": "baseline_self_triggered",
  "epsilon": 0.1, "c": 0.2,
  "initial_states": [0, 1],
  "horizon": 5
})";

}  // namespace

TEST(CApi, GraphLifecycle) {
  rc_graph* g = nullptr;
  ASSERT_EQ(rc_graph_create(4, &g), RC_OK);
  for (int i = 0; i < 4; ++i) {
    ASSERT_EQ(rc_graph_add_edge(g, i, (i + 1) % 4), RC_OK);
    ASSERT_EQ(rc_graph_add_edge(g, (i + 1) % 4, i), RC_OK);
  }
  int n = 0, edges = 0, connected = 0, holds = 1;
  EXPECT_EQ(rc_graph_size(g, &n), RC_OK);
  EXPECT_EQ(rc_graph_edge_count(g, &edges), RC_OK);
  EXPECT_EQ(rc_graph_is_connected(g, &connected), RC_OK);
  EXPECT_EQ(rc_graph_check_robustness(g, 2, 1, &holds), RC_OK);
  EXPECT_EQ(n, 4);
  EXPECT_EQ(edges, 8);
  EXPECT_EQ(connected, 1);
  EXPECT_EQ(holds, 0);
  EXPECT_EQ(rc_graph_check_robustness(g, 1, 1, &holds), RC_OK);
  EXPECT_EQ(holds, 1);
  rc_graph_destroy(g);
  rc_graph_destroy(nullptr);
}

TEST(CApi, ErrorsCarryMessages) {
  rc_graph* g = nullptr;
  ASSERT_EQ(rc_graph_create(2, &g), RC_OK);
  EXPECT_EQ(rc_graph_add_edge(g, 1, 1), RC_ERR_USAGE);
  EXPECT_STRNE(rc_last_error(), "");
  EXPECT_EQ(rc_graph_add_edge(g, 0, 1), RC_OK);
  EXPECT_STREQ(rc_last_error(), "");
  EXPECT_EQ(rc_graph_size(g, nullptr), RC_ERR_USAGE);
  EXPECT_EQ(rc_graph_create(2, nullptr), RC_ERR_USAGE);
  rc_graph_destroy(g);

  rc_graph* big = nullptr;
  ASSERT_EQ(rc_graph_random_geometric(20, 1.4, 1, &big), RC_OK);
  int holds = 0;
  EXPECT_EQ(rc_graph_check_robustness(big, 2, 1, &holds), RC_ERR_CAPACITY);
  rc_graph_destroy(big);
}

TEST(CApi, ConfigErrorsListEveryProblem) {
  rc_scenario* s = nullptr;
  EXPECT_EQ(rc_scenario_parse(R"({"graph": {"type": "complete", "n": 2}, "epsilon": -1, "horizon": -1})", &s),
            RC_ERR_CONFIG);
  EXPECT_EQ(s, nullptr);
  const std::string msg = rc_last_error();
  EXPECT_NE(msg.find("epsilon"), std::string::npos);
  EXPECT_NE(msg.find("horizon"), std::string::npos);
  EXPECT_NE(msg.find('\n'), std::string::npos);
  EXPECT_EQ(rc_scenario_load("/nonexistent.json", &s), RC_ERR_IO);
}

TEST(CApi, SimulateTwoNodes) {
  rc_scenario* s = nullptr;
  ASSERT_EQ(rc_scenario_parse(kTwoNode, &s), RC_OK);
  int n = 0;
  EXPECT_EQ(rc_scenario_node_count(s, &n), RC_OK);
  EXPECT_EQ(n, 2);
  rc_run* run = nullptr;
  ASSERT_EQ(rc_simulate(s, 0, &run), RC_OK);
  double x0 = 0, x1 = 0, mid = 0;
  EXPECT_EQ(rc_run_final_state(run, 0, &x0), RC_OK);
  EXPECT_EQ(rc_run_final_state(run, 1, &x1), RC_OK);
  EXPECT_EQ(rc_run_state_at(run, 0, 0.5, &mid), RC_OK);
  EXPECT_DOUBLE_EQ(x0, 0.625);
  EXPECT_DOUBLE_EQ(x1, 0.625);
  EXPECT_DOUBLE_EQ(mid, 0.5);
  int64_t updates = 0, transmissions = 0;
  EXPECT_EQ(rc_run_counters(run, 0, &updates, &transmissions), RC_OK);
  EXPECT_EQ(transmissions, 4);
  rc_verdict v{};
  EXPECT_EQ(rc_run_verdict(run, &v), RC_OK);
  EXPECT_EQ(v.outcome, RC_REACHED);
  EXPECT_EQ(v.quiesced, 1);
  EXPECT_EQ(v.safety_holds, 1);
  int adv = 1;
  EXPECT_EQ(rc_run_is_adversary(run, 1, &adv), RC_OK);
  EXPECT_EQ(adv, 0);
  EXPECT_EQ(rc_run_final_state(run, 5, &x0), RC_ERR_USAGE);

  auto dir = fs::temp_directory_path() / "rcons_capi_run";
  fs::remove_all(dir);
  EXPECT_EQ(rc_run_write_csv(run, dir.string().c_str()), RC_OK);
  EXPECT_TRUE(fs::exists(dir / "events.csv"));
  rc_run_destroy(run);
  rc_scenario_destroy(s);
}

TEST(CApi, FileDrivers) {
  auto dir = fs::temp_directory_path() / "rcons_capi_files";
  fs::remove_all(dir);
  fs::create_directories(dir);
  std::ofstream(dir / "two.json") << kTwoNode;
  const auto cfg = (dir / "two.json").string();
  rc_overrides o{};
  o.has_trials = 1;
  o.trials = 2;
  o.threads = 1;
  EXPECT_EQ(rc_run_scenario_file(cfg.c_str(), (dir / "a").string().c_str(), &o), RC_OK);
  EXPECT_TRUE(fs::exists(dir / "a" / "summary.txt"));
  int holds = 0;
  EXPECT_EQ(rc_check_graph_file(cfg.c_str(), (dir / "g").string().c_str(), nullptr, 1, 1, &holds), RC_OK);
  EXPECT_EQ(holds, 1);
  EXPECT_EQ(rc_run_sweep_file(cfg.c_str(), (dir / "s").string().c_str(), nullptr), RC_ERR_CONFIG);
  EXPECT_STRNE(rc_version(), "");
}
