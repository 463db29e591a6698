#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "doctest.h"
#include "robustnet/checkpoint.hpp"
#include "robustnet/graph.hpp"
#include "robustnet/harness.hpp"

using namespace robustnet;
namespace fs = std::filesystem;

namespace {

const fs::path kRoot = fs::temp_directory_path() / "robustnet_harness_test";

std::string slurp(const fs::path& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

int line_count(const std::string& text) {
  int lines = 0;
  for (char c : text)
    if (c == '\n') ++lines;
  return lines;
}

std::string write_file(const std::string& name, const std::string& body) {
  fs::create_directories(kRoot);
  const std::string path = (kRoot / name).string();
  std::ofstream out(path);
  out << body;
  return path;
}

}  // namespace

TEST_CASE("agent names round-trip and classify") {
  for (AgentKind k : {AgentKind::Random, AgentKind::Ldp, AgentKind::Fv, AgentKind::ERes,
                      AgentKind::Greedy, AgentKind::Sl, AgentKind::Dqn})
    CHECK(agent_from_name(agent_name(k)) == k);
  CHECK(agent_name(AgentKind::ERes) == "eres");
  CHECK_THROWS_AS(agent_from_name("bogus"), std::invalid_argument);
  CHECK(agent_is_trained(AgentKind::Sl));
  CHECK(agent_is_trained(AgentKind::Dqn));
  CHECK_FALSE(agent_is_trained(AgentKind::Greedy));
  CHECK_FALSE(agent_is_trained(AgentKind::Random));
}

TEST_CASE("doubles format to shortest round-tripping decimal") {
  CHECK(format_double(0.0) == "0");
  CHECK(format_double(0.5) == "0.5");
  CHECK(format_double(-2.0) == "-2");
  for (double x : {1.0 / 3.0, 0.1, 1e-17, -2.5e300, 7.0 / 9.0, 5e-324}) {
    const std::string s = format_double(x);
    CHECK(std::strtod(s.c_str(), nullptr) == x);
    CHECK(format_double(x) == s);
  }
}

TEST_CASE("data specs label themselves by family and size") {
  DataSpec d;
  CHECK(d.label() == "ba20");
  d.family = GraphFamily::ER;
  d.n = 35;
  CHECK(d.label() == "er35");
  d.dataset_paths = {"x.edges"};
  CHECK(d.file_mode());
  CHECK(d.label() == "dataset");
}

TEST_CASE("config parsing: full document") {
  const std::string text = R"({
    "objective": "random",
    "data": {"family": "er", "n": 14, "er_edge_fraction": 0.3, "ba_m": 3,
             "train_size": 7, "validation_size": 4, "test_size": 6},
    "budgets": [1, 3],
    "agents": ["random", "ldp", "dqn"],
    "n_seeds": 2,
    "seed": 99,
    "n_sims": 25,
    "net": {"embed_dim": 8, "hidden": 12, "rounds": 2},
    "schedule": {"total_steps": 500, "batch_size": 10, "target_sync_every": 20,
                 "gamma": 0.9, "reward_scale": 50.0, "lr": 0.001,
                 "eps_start": 0.8, "eps_end": 0.2, "eps_decay_fraction": 0.4,
                 "validation_every": 100, "replay_capacity": 300, "sl_patience": 40},
    "sweep": {"sizes": [10, 20], "base_n": 10, "expensive_agent_max_n": 15},
    "model_paths": {"dqn": "m.ckpt"},
    "out_dir": "results",
    "workers": 2
  })";
  ExperimentConfig cfg = parse_experiment_config(text);
  CHECK(cfg.objective == Objective::RandomRemoval);
  CHECK(cfg.data.family == GraphFamily::ER);
  CHECK(cfg.data.n == 14);
  CHECK(cfg.data.er_edge_fraction == 0.3);
  CHECK(cfg.data.ba_m == 3);
  CHECK(cfg.data.train_size == 7);
  CHECK(cfg.data.validation_size == 4);
  CHECK(cfg.data.test_size == 6);
  CHECK(cfg.budgets == std::vector<int>{1, 3});
  CHECK(cfg.agents == std::vector<AgentKind>{AgentKind::Random, AgentKind::Ldp, AgentKind::Dqn});
  CHECK(cfg.n_seeds == 2);
  CHECK(cfg.seed == 99);
  CHECK(cfg.n_sims == 25);
  CHECK(cfg.net.embed_dim == 8);
  CHECK(cfg.net.hidden == 12);
  CHECK(cfg.net.rounds == 2);
  CHECK(cfg.schedule.total_steps == 500);
  CHECK(cfg.schedule.batch_size == 10);
  CHECK(cfg.schedule.target_sync_every == 20);
  CHECK(cfg.schedule.gamma == 0.9);
  CHECK(cfg.schedule.reward_scale == 50.0);
  CHECK(cfg.schedule.lr == 0.001);
  CHECK(cfg.schedule.eps_start == 0.8);
  CHECK(cfg.schedule.eps_end == 0.2);
  CHECK(cfg.schedule.eps_decay_fraction == 0.4);
  CHECK(cfg.schedule.validation_every == 100);
  CHECK(cfg.schedule.replay_capacity == 300);
  CHECK(cfg.schedule.sl_patience == 40);
  CHECK(cfg.sweep.sizes == std::vector<int>{10, 20});
  CHECK(cfg.sweep.base_n == 10);
  CHECK(cfg.sweep.expensive_agent_max_n == 15);
  CHECK(cfg.model_paths.at("dqn") == "m.ckpt");
  CHECK(cfg.out_dir == "results");
  CHECK(cfg.workers == 2);
}

TEST_CASE("config parsing: defaults and errors") {
  ExperimentConfig cfg =
      parse_experiment_config(R"({"objective": "targeted", "agents": ["random"]})");
  CHECK(cfg.objective == Objective::TargetedRemoval);
  CHECK(cfg.data.family == GraphFamily::BA);
  CHECK(cfg.data.n == 20);
  CHECK(cfg.budgets == std::vector<int>{2});
  CHECK(cfg.n_seeds == 1);
  CHECK(cfg.seed == 1);
  CHECK(cfg.out_dir == "out");

  CHECK_THROWS(parse_experiment_config("not json"));
  CHECK_THROWS(parse_experiment_config(R"({"agents": ["random"]})"));  // no objective
  CHECK_THROWS_AS(parse_experiment_config(R"({"objective": "both", "agents": ["random"]})"),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      parse_experiment_config(R"({"objective": "targeted", "agents": ["bogus"]})"),
      std::invalid_argument);
  CHECK_THROWS_AS(parse_experiment_config(R"({"objective": "targeted", "agents": []})"),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      parse_experiment_config(R"({"objective": "targeted", "agents": ["random"], "budgets": []})"),
      std::invalid_argument);
  CHECK_THROWS_AS(
      parse_experiment_config(
          R"({"objective": "targeted", "agents": ["random"], "budgets": [0]})"),
      std::invalid_argument);
  CHECK_THROWS_AS(
      parse_experiment_config(
          R"({"objective": "targeted", "agents": ["random"], "n_seeds": 0})"),
      std::invalid_argument);
  CHECK_THROWS_AS(
      parse_experiment_config(
          R"({"objective": "targeted", "agents": ["random"], "net": {"embed_dim": 0}})"),
      std::invalid_argument);
  CHECK_THROWS_AS(
      parse_experiment_config(
          R"({"objective": "targeted", "agents": ["random"], "schedule": {"lr": 0.0}})"),
      std::invalid_argument);
  CHECK_THROWS_AS(
      parse_experiment_config(
          R"({"objective": "targeted", "agents": ["random"], "data": {"family": "tree"}})"),
      std::invalid_argument);
}

TEST_CASE("configs load from disk") {
  const std::string path =
      write_file("cfg.json", R"({"objective": "targeted", "agents": ["ldp"], "seed": 5})");
  ExperimentConfig cfg = load_experiment_config(path);
  CHECK(cfg.seed == 5);
  CHECK(cfg.agents == std::vector<AgentKind>{AgentKind::Ldp});
  CHECK_THROWS_AS(load_experiment_config((kRoot / "absent.json").string()), std::runtime_error);
}

TEST_CASE("datasets are determined by seed and spec alone") {
  DataSpec d;
  d.family = GraphFamily::BA;
  d.n = 9;
  d.train_size = 3;
  d.validation_size = 2;
  d.test_size = 4;
  DatasetSplit a = build_dataset(d, 42);
  CHECK(a.train.size() == 3);
  CHECK(a.validation.size() == 2);
  CHECK(a.test.size() == 4);
  for (const Graph& g : a.test) {
    CHECK(g.node_count() == 9);
    CHECK(g.is_connected());
  }

  DatasetSplit b = build_dataset(d, 42);
  CHECK(a.train == b.train);
  CHECK(a.validation == b.validation);
  CHECK(a.test == b.test);

  // The test set never depends on how many training graphs were asked for.
  DataSpec wider = d;
  wider.train_size = 6;
  DatasetSplit c = build_dataset(wider, 42);
  CHECK(a.test == c.test);
  CHECK(a.train == std::vector<Graph>(c.train.begin(), c.train.begin() + 3));

  DatasetSplit other = build_dataset(d, 43);
  CHECK_FALSE(a.test == other.test);
}

TEST_CASE("file-mode datasets reuse the imported graphs for every split") {
  // Imported graphs must land in the accepted component-size window [20, 50].
  std::string cycle_text;
  for (int v = 0; v < 20; ++v)
    cycle_text += std::to_string(v) + " " + std::to_string((v + 1) % 20) + "\n";
  std::string path_text;
  for (int v = 0; v + 1 < 21; ++v)
    path_text += std::to_string(v) + " " + std::to_string(v + 1) + "\n";
  const std::string p1 = write_file("ds1.edges", cycle_text);
  const std::string p2 = write_file("ds2.edges", path_text);
  DataSpec d;
  d.dataset_paths = {p1, p2};
  DatasetSplit split = build_dataset(d, 1);
  REQUIRE(split.test.size() == 2);
  CHECK(split.test[0] == cycle_graph(20));
  CHECK(split.test[1] == path_graph(21));
  CHECK(split.train == split.test);
  CHECK(split.validation == split.test);

  // Undersized inputs are rejected, matching the ingestion contract.
  const std::string tiny = write_file("tiny.edges", "0 1\n1 2\n2 3\n3 0\n");
  DataSpec bad;
  bad.dataset_paths = {tiny};
  CHECK_THROWS_AS(build_dataset(bad, 1), std::runtime_error);
}

namespace {

ExperimentConfig smoke_config(const std::string& out_name) {
  ExperimentConfig cfg;
  cfg.objective = Objective::TargetedRemoval;
  cfg.data.family = GraphFamily::BA;
  cfg.data.n = 10;
  cfg.data.train_size = 2;
  cfg.data.validation_size = 2;
  cfg.data.test_size = 4;
  cfg.budgets = {1};
  cfg.agents = {AgentKind::Random, AgentKind::Ldp};
  cfg.n_seeds = 2;
  cfg.seed = 7;
  cfg.n_sims = 10;
  cfg.out_dir = (kRoot / out_name).string();
  cfg.workers = 1;
  return cfg;
}

}  // namespace

TEST_CASE("comparison tables: shape, files, reproducibility") {
  ExperimentConfig cfg = smoke_config("table_a");
  std::vector<TableCell> cells = run_table(cfg);
  REQUIRE(cells.size() == 2);
  for (const TableCell& c : cells) {
    CHECK(c.data_label == "ba10");
    CHECK(c.budget == 1);
    CHECK(c.n_seeds == 2);
    CHECK(std::isfinite(c.mean));
    CHECK(c.ci95 >= 0.0);
    CHECK(c.best >= c.mean - 1e-15);
  }
  CHECK(cells[0].agent == AgentKind::Random);
  CHECK(cells[1].agent == AgentKind::Ldp);

  const std::string summary = slurp(fs::path(cfg.out_dir) / "summary.csv");
  CHECK(line_count(summary) == 3);  // header + one row per cell
  CHECK(summary.substr(0, summary.find('\n')) == "data,budget,agent,n_seeds,mean,ci95,best");
  const std::string raw = slurp(fs::path(cfg.out_dir) / "raw.csv");
  CHECK(line_count(raw) == 1 + 2 * 2 * 4);  // agents x seeds x graphs
  CHECK(raw.substr(0, raw.find('\n')) == "data,budget,agent,seed,graph,reward");

  // Identical config, fresh directory: byte-identical outputs.
  ExperimentConfig again = smoke_config("table_b");
  run_table(again);
  CHECK(slurp(fs::path(again.out_dir) / "summary.csv") == summary);
  CHECK(slurp(fs::path(again.out_dir) / "raw.csv") == raw);
}

TEST_CASE("tables with trained agents persist checkpoints and logs") {
  ExperimentConfig cfg = smoke_config("table_trained");
  cfg.data.n = 8;
  cfg.data.train_size = 3;
  cfg.data.validation_size = 2;
  cfg.data.test_size = 3;
  cfg.agents = {AgentKind::Dqn, AgentKind::Sl};
  cfg.n_seeds = 1;
  cfg.n_sims = 6;
  cfg.net = NetConfig{4, 4, 1};
  cfg.schedule.total_steps = 30;
  cfg.schedule.batch_size = 4;
  cfg.schedule.target_sync_every = 10;
  cfg.schedule.validation_every = 10;
  cfg.schedule.lr = 1e-3;

  std::vector<TableCell> cells = run_table(cfg);
  REQUIRE(cells.size() == 2);

  for (const char* stem : {"dqn_L1_seed0", "sl_L1_seed0"}) {
    const fs::path ckpt = fs::path(cfg.out_dir) / "models" / (std::string(stem) + ".ckpt");
    REQUIRE(fs::exists(ckpt));
    Checkpoint ck = load_checkpoint(ckpt.string());
    CHECK(ck.config == cfg.net);

    const fs::path log = fs::path(cfg.out_dir) / "logs" / (std::string(stem) + ".csv");
    REQUIRE(fs::exists(log));
    const std::string text = slurp(log);
    CHECK(text.substr(0, text.find('\n')) == "step,loss,epsilon,validation_score");
    CHECK(line_count(text) >= 3);
  }
}

TEST_CASE("size sweeps scale the budget and can skip expensive agents") {
  ExperimentConfig cfg = smoke_config("sweep_a");
  cfg.data.test_size = 3;
  cfg.n_seeds = 1;
  cfg.n_sims = 8;
  cfg.sweep.sizes = {8, 12};
  cfg.sweep.base_n = 8;
  cfg.budgets = {1};
  std::vector<SweepCell> cells = run_size_sweep(cfg);
  REQUIRE(cells.size() == 4);  // 2 sizes x 2 agents
  CHECK(cells[0].n == 8);
  CHECK(cells[0].budget == 1);
  CHECK(cells[2].n == 12);
  CHECK(cells[2].budget == 2);  // round(1 * 12 / 8)
  const std::string sweep = slurp(fs::path(cfg.out_dir) / "sweep.csv");
  CHECK(line_count(sweep) == 5);
  CHECK(sweep.substr(0, sweep.find('\n')) == "data,n,budget,agent,n_seeds,mean,ci95,best");

  // Greedy is dropped beyond the cost ceiling.
  ExperimentConfig pricey = smoke_config("sweep_b");
  pricey.data.test_size = 2;
  pricey.n_seeds = 1;
  pricey.n_sims = 6;
  pricey.agents = {AgentKind::Greedy};
  pricey.sweep.sizes = {8, 12};
  pricey.sweep.base_n = 8;
  pricey.sweep.expensive_agent_max_n = 8;
  std::vector<SweepCell> pc = run_size_sweep(pricey);
  REQUIRE(pc.size() == 1);
  CHECK(pc[0].n == 8);

  ExperimentConfig bad = smoke_config("sweep_c");
  bad.sweep.sizes = {};
  CHECK_THROWS_AS(run_size_sweep(bad), std::invalid_argument);
  bad.sweep.sizes = {1};
  CHECK_THROWS_AS(run_size_sweep(bad), std::invalid_argument);
}

TEST_CASE("validation curves align seeds on the logging cadence") {
  ExperimentConfig cfg = smoke_config("curve_a");
  cfg.data.n = 8;
  cfg.data.train_size = 3;
  cfg.data.validation_size = 2;
  cfg.data.test_size = 2;
  cfg.agents = {AgentKind::Dqn};
  cfg.n_seeds = 2;
  cfg.n_sims = 6;
  cfg.net = NetConfig{4, 4, 1};
  cfg.schedule.total_steps = 30;
  cfg.schedule.batch_size = 4;
  cfg.schedule.target_sync_every = 10;
  cfg.schedule.validation_every = 10;
  cfg.schedule.lr = 1e-3;

  run_validation_curve(cfg);
  const std::string raw = slurp(fs::path(cfg.out_dir) / "curve_raw.csv");
  CHECK(raw.substr(0, raw.find('\n')) == "seed,step,loss,epsilon,validation_score");
  CHECK(line_count(raw) == 1 + 2 * 4);  // two seeds, rows at steps 0/10/20/30
  const std::string summary = slurp(fs::path(cfg.out_dir) / "curve_summary.csv");
  CHECK(summary.substr(0, summary.find('\n')) == "step,mean_validation_score,ci95");
  CHECK(line_count(summary) == 5);

  ExperimentConfig again = cfg;
  again.out_dir = (kRoot / "curve_b").string();
  run_validation_curve(again);
  CHECK(slurp(fs::path(again.out_dir) / "curve_raw.csv") == raw);
}

TEST_CASE("dot export lists every live node and edge") {
  std::ostringstream out;
  export_dot(path_graph(3), out);
  CHECK(out.str() == "graph g {\n  0;\n  1;\n  2;\n  0 -- 1;\n  1 -- 2;\n}\n");

  Graph g = star_graph(4);
  g.remove_node(3);
  std::ostringstream out2;
  export_dot(g, out2);
  CHECK(out2.str() == "graph g {\n  0;\n  1;\n  2;\n  0 -- 1;\n  0 -- 2;\n}\n");

  const std::string path = (kRoot / "g.dot").string();
  fs::create_directories(kRoot);
  export_dot_file(path_graph(3), path);
  CHECK(slurp(path) == out.str());
  CHECK_THROWS_AS(export_dot_file(path_graph(3), (kRoot / "nodir" / "g.dot").string()),
                  std::runtime_error);
}
