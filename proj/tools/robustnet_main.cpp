#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "robustnet/agents.hpp"
#include "robustnet/baselines.hpp"
#include "robustnet/checkpoint.hpp"
#include "robustnet/datagen.hpp"
#include "robustnet/graph_io.hpp"
#include "robustnet/harness.hpp"
#include "robustnet/mdp.hpp"
#include "robustnet/robustness.hpp"
#include "robustnet/stats.hpp"

namespace fs = std::filesystem;
using namespace robustnet;

namespace {

struct GenerateArgs {
  std::string family = "ba";
  int n = 20;
  int count = 1;
  std::uint64_t seed = 1;
  int ba_m = 2;
  double er_fraction = 0.2;
  std::string out_dir = ".";
};

void cmd_generate(const GenerateArgs& a) {
  GeneratorSpec spec;
  spec.family = a.family == "er" ? GraphFamily::ER : GraphFamily::BA;
  spec.n = a.n;
  spec.ba_m = a.ba_m;
  spec.er_edge_fraction = a.er_fraction;
  spec.validate();
  fs::create_directories(a.out_dir);
  for (int i = 0; i < a.count; ++i) {
    Rng rng(Rng::derive(a.seed, static_cast<std::uint64_t>(i)));
    const Graph g = generate(spec, rng);
    const fs::path path =
        fs::path(a.out_dir) / (a.family + std::to_string(a.n) + "_" + std::to_string(i) + ".edges");
    write_edge_list_file(g, path.string());
    std::cout << path.string() << '\n';
  }
}

struct EstimateArgs {
  std::string graph;
  std::string objective = "targeted";
  int n_sims = 0;
  std::uint64_t seed = 1;
  int workers = 0;
};

void cmd_estimate(const EstimateArgs& a) {
  const Graph g = read_edge_list_file(a.graph);
  const Objective obj =
      a.objective == "random" ? Objective::RandomRemoval : Objective::TargetedRemoval;
  const int sims = a.n_sims > 0 ? a.n_sims : 2 * g.live_node_count();
  Rng rng(a.seed);
  const RobustnessEstimate est =
      estimate_robustness(g, strategy_for(obj), sims, rng, a.workers > 0 ? a.workers : -1);
  std::cout << "mean,std_error,n_sims\n"
            << format_double(est.mean) << ',' << format_double(est.std_error) << ',' << est.n_sims
            << '\n';
}

struct BaselineArgs {
  std::string graph;
  std::string agent = "ldp";
  std::string objective = "targeted";
  int budget = 1;
  int n_sims = 0;
  std::uint64_t seed = 1;
  int workers = 0;
};

void cmd_baseline(const BaselineArgs& a) {
  const Graph g = read_edge_list_file(a.graph);
  const AgentKind kind = agent_from_name(a.agent);
  if (agent_is_trained(kind))
    throw std::invalid_argument("baseline: use the evaluate subcommand for trained agents");

  EpisodeConfig cfg;
  cfg.objective = a.objective == "random" ? Objective::RandomRemoval : Objective::TargetedRemoval;
  cfg.budget = a.budget;
  cfg.n_sims = a.n_sims;
  cfg.workers = a.workers > 0 ? a.workers : -1;

  Rng rng(a.seed);
  std::vector<StepRecord> trace;
  const int sims = cfg.n_sims > 0 ? cfg.n_sims : 2 * g.live_node_count();
  BaselineKind bk;
  switch (kind) {
    case AgentKind::Random: bk = BaselineKind::Random; break;
    case AgentKind::Ldp: bk = BaselineKind::Ldp; break;
    case AgentKind::Fv: bk = BaselineKind::Fv; break;
    case AgentKind::ERes: bk = BaselineKind::ERes; break;
    default: bk = BaselineKind::Greedy; break;
  }
  const EpisodeResult result = run_episode(
      g, edge_policy(selector_for(bk, cfg.objective, sims, cfg.workers)), cfg, rng, &trace);
  for (const StepRecord& r : trace) {
    if (r.stub.has_value()) std::cout << "edge," << *r.stub << ',' << r.action << '\n';
  }
  std::cout << "reward," << format_double(result.total_reward) << '\n';
}

struct TrainArgs {
  std::string config;
  std::string agent = "dqn";
  std::string out = "model.ckpt";
  std::string log;
  int seed_index = 0;
};

void cmd_train(const TrainArgs& a) {
  const ExperimentConfig cfg = load_experiment_config(a.config);
  const AgentKind kind = agent_from_name(a.agent);
  if (!agent_is_trained(kind)) throw std::invalid_argument("train: agent must be sl or dqn");

  DatasetSplit data = build_dataset(cfg.data, cfg.seed);
  EpisodeConfig ecfg;
  ecfg.objective = cfg.objective;
  ecfg.budget = cfg.budgets.front();
  ecfg.n_sims = cfg.n_sims > 0 ? cfg.n_sims : (cfg.data.file_mode() ? 40 : 0);
  ecfg.workers = cfg.workers;

  const std::uint64_t train_seed = Rng::derive(
      Rng::derive(cfg.seed, 4 /* training stream */),
      (static_cast<std::uint64_t>(kind) << 16) ^ static_cast<std::uint64_t>(a.seed_index));
  DatasetSplit copy{data.train, data.validation, {}};
  const TrainResult result =
      kind == AgentKind::Dqn ? train_dqn(std::move(copy), ecfg, cfg.net, cfg.schedule, train_seed)
                             : train_sl(std::move(copy), ecfg, cfg.net, cfg.schedule, train_seed);
  save_checkpoint(a.out, result.best_params, cfg.net);
  if (!a.log.empty()) {
    std::ofstream log(a.log);
    if (!log) throw std::runtime_error("cannot open " + a.log + " for writing");
    log << "step,loss,epsilon,validation_score\n";
    for (const TrainLogRow& row : result.log)
      log << row.step << ',' << format_double(row.loss) << ',' << format_double(row.epsilon)
          << ',' << format_double(row.validation_score) << '\n';
  }
  std::cout << "best_step," << result.best_step << '\n'
            << "best_validation," << format_double(result.best_validation) << '\n'
            << "model," << a.out << '\n';
}

struct EvaluateArgs {
  std::string config;
  std::string agent;
  std::string model;
};

void cmd_evaluate(const EvaluateArgs& a) {
  const ExperimentConfig cfg = load_experiment_config(a.config);
  const AgentKind kind = agent_from_name(a.agent);
  const DatasetSplit data = build_dataset(cfg.data, cfg.seed);
  if (data.test.empty()) throw std::invalid_argument("evaluate: empty test set");

  std::cout << "agent,budget,mean,std_error,n_graphs\n";
  for (std::size_t bi = 0; bi < cfg.budgets.size(); ++bi) {
    EpisodeConfig ecfg;
    ecfg.objective = cfg.objective;
    ecfg.budget = cfg.budgets[bi];
    ecfg.n_sims = cfg.n_sims > 0 ? cfg.n_sims : (cfg.data.file_mode() ? 40 : 0);
    ecfg.workers = cfg.workers;

    PolicyFactory factory;
    if (agent_is_trained(kind)) {
      if (a.model.empty())
        throw std::invalid_argument("evaluate: trained agents need --model <checkpoint>");
      Checkpoint ck = load_checkpoint(a.model);
      factory = kind == AgentKind::Dqn ? greedy_q_policy_factory(ck.params, ck.config)
                                       : sl_policy_factory(ck.params, ck.config);
    } else {
      BaselineKind bk;
      switch (kind) {
        case AgentKind::Random: bk = BaselineKind::Random; break;
        case AgentKind::Ldp: bk = BaselineKind::Ldp; break;
        case AgentKind::Fv: bk = BaselineKind::Fv; break;
        case AgentKind::ERes: bk = BaselineKind::ERes; break;
        default: bk = BaselineKind::Greedy; break;
      }
      const int sims = ecfg.resolve_n_sims(data.test.front());
      factory = baseline_policy_factory(bk, cfg.objective, sims, cfg.workers);
    }

    const std::uint64_t eval_seed =
        Rng::derive(Rng::derive(cfg.seed, 5 /* evaluation stream */),
                    (static_cast<std::uint64_t>(bi) << 32) ^ static_cast<std::uint64_t>(kind));
    const std::vector<double> rewards =
        evaluate_policies(data.test, factory, ecfg, eval_seed, cfg.workers);
    std::cout << agent_name(kind) << ',' << cfg.budgets[bi] << ','
              << format_double(mean_of(rewards)) << ',' << format_double(std_error_of(rewards))
              << ',' << rewards.size() << '\n';
  }
}

void cmd_table(const std::string& config_path) {
  const ExperimentConfig cfg = load_experiment_config(config_path);
  const std::vector<TableCell> cells = run_table(cfg);
  std::cout << "data,budget,agent,n_seeds,mean,ci95,best\n";
  for (const TableCell& c : cells)
    std::cout << c.data_label << ',' << c.budget << ',' << agent_name(c.agent) << ',' << c.n_seeds
              << ',' << format_double(c.mean) << ',' << format_double(c.ci95) << ','
              << format_double(c.best) << '\n';
}

void cmd_sweep(const std::string& config_path) {
  const ExperimentConfig cfg = load_experiment_config(config_path);
  const std::vector<SweepCell> cells = run_size_sweep(cfg);
  std::cout << "n,budget,agent,n_seeds,mean,ci95,best\n";
  for (const SweepCell& c : cells)
    std::cout << c.n << ',' << c.budget << ',' << agent_name(c.agent) << ',' << c.n_seeds << ','
              << format_double(c.mean) << ',' << format_double(c.ci95) << ','
              << format_double(c.best) << '\n';
}

void cmd_curve(const std::string& config_path) {
  const ExperimentConfig cfg = load_experiment_config(config_path);
  run_validation_curve(cfg);
  std::cout << "wrote " << (fs::path(cfg.out_dir) / "curve_raw.csv").string() << " and "
            << (fs::path(cfg.out_dir) / "curve_summary.csv").string() << '\n';
}

void cmd_dot(const std::string& graph_path, const std::string& out_path) {
  const Graph g = read_edge_list_file(graph_path);
  if (out_path.empty()) {
    export_dot(g, std::cout);
  } else {
    export_dot_file(g, out_path);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"robustnet: improving graph robustness to node removal by adding edges"};
  app.require_subcommand(1);

  GenerateArgs gen;
  auto* generate = app.add_subcommand("generate", "Generate synthetic graphs as edge lists");
  generate->add_option("--family", gen.family, "ba or er")->check(CLI::IsMember({"ba", "er"}));
  generate->add_option("--n", gen.n, "nodes per graph");
  generate->add_option("--count", gen.count, "number of graphs");
  generate->add_option("--seed", gen.seed, "master seed");
  generate->add_option("--ba-m", gen.ba_m, "edges per arriving node (ba)");
  generate->add_option("--er-fraction", gen.er_fraction, "edge fraction (er)");
  generate->add_option("--out-dir", gen.out_dir, "output directory");
  generate->callback([&gen] { cmd_generate(gen); });

  EstimateArgs est;
  auto* estimate = app.add_subcommand("estimate", "Monte Carlo robustness estimate of a graph");
  estimate->add_option("--graph", est.graph, "edge list file")->required();
  estimate->add_option("--objective", est.objective, "random or targeted")
      ->check(CLI::IsMember({"random", "targeted"}));
  estimate->add_option("--n-sims", est.n_sims, "simulations (0: twice the node count)");
  estimate->add_option("--seed", est.seed, "seed");
  estimate->add_option("--workers", est.workers, "worker threads");
  estimate->callback([&est] { cmd_estimate(est); });

  BaselineArgs base;
  auto* baseline = app.add_subcommand("baseline", "Run a baseline edge-addition episode");
  baseline->add_option("--graph", base.graph, "edge list file")->required();
  baseline->add_option("--agent", base.agent, "random|ldp|fv|eres|greedy");
  baseline->add_option("--objective", base.objective, "random or targeted")
      ->check(CLI::IsMember({"random", "targeted"}));
  baseline->add_option("--budget", base.budget, "edges to add");
  baseline->add_option("--n-sims", base.n_sims, "simulations per estimate");
  baseline->add_option("--seed", base.seed, "seed");
  baseline->add_option("--workers", base.workers, "worker threads");
  baseline->callback([&base] { cmd_baseline(base); });

  TrainArgs tr;
  auto* train = app.add_subcommand("train", "Train a dqn or sl agent from a config");
  train->add_option("--config", tr.config, "experiment config JSON")->required();
  train->add_option("--agent", tr.agent, "dqn or sl")->check(CLI::IsMember({"dqn", "sl"}));
  train->add_option("--out", tr.out, "checkpoint output path");
  train->add_option("--log", tr.log, "training log CSV path");
  train->add_option("--seed-index", tr.seed_index, "which training repetition");
  train->callback([&tr] { cmd_train(tr); });

  EvaluateArgs ev;
  auto* evaluate = app.add_subcommand("evaluate", "Score an agent on a config's test set");
  evaluate->add_option("--config", ev.config, "experiment config JSON")->required();
  evaluate->add_option("--agent", ev.agent, "agent name")->required();
  evaluate->add_option("--model", ev.model, "checkpoint for sl/dqn");
  evaluate->callback([&ev] { cmd_evaluate(ev); });

  std::string table_config;
  auto* table = app.add_subcommand("table", "Full agent-by-budget comparison grid");
  table->add_option("--config", table_config, "experiment config JSON")->required();
  table->callback([&table_config] { cmd_table(table_config); });

  std::string sweep_config;
  auto* sweep = app.add_subcommand("sweep", "Score agents across graph sizes");
  sweep->add_option("--config", sweep_config, "experiment config JSON")->required();
  sweep->callback([&sweep_config] { cmd_sweep(sweep_config); });

  std::string curve_config;
  auto* curve = app.add_subcommand("curve", "Training validation curves for dqn");
  curve->add_option("--config", curve_config, "experiment config JSON")->required();
  curve->callback([&curve_config] { cmd_curve(curve_config); });

  std::string dot_graph, dot_out;
  auto* dot = app.add_subcommand("dot", "Export a graph as Graphviz dot");
  dot->add_option("--graph", dot_graph, "edge list file")->required();
  dot->add_option("--out", dot_out, "output path (default stdout)");
  dot->callback([&dot_graph, &dot_out] { cmd_dot(dot_graph, dot_out); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
