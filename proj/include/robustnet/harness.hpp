#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "robustnet/agents.hpp"
#include "robustnet/datagen.hpp"
#include "robustnet/mdp.hpp"

namespace robustnet {

enum class AgentKind { Random, Ldp, Fv, ERes, Greedy, Sl, Dqn };

std::string agent_name(AgentKind kind);
AgentKind agent_from_name(const std::string& name);
bool agent_is_trained(AgentKind kind);

struct DataSpec {
  GraphFamily family = GraphFamily::BA;
  int n = 20;
  double er_edge_fraction = 0.20;
  int ba_m = 2;
  int train_size = 500;
  int validation_size = 50;
  int test_size = 100;
  std::vector<std::string> dataset_paths;  // non-empty switches to file mode

  bool file_mode() const { return !dataset_paths.empty(); }
  std::string label() const;
};

struct SweepSpec {
  std::vector<int> sizes;
  int base_n = 20;
  int expensive_agent_max_n = 50;  // greedy and sl are skipped above this
};

struct ExperimentConfig {
  Objective objective = Objective::TargetedRemoval;
  DataSpec data;
  std::vector<int> budgets = {2};
  std::vector<AgentKind> agents;
  int n_seeds = 1;
  std::uint64_t seed = 1;
  int n_sims = 0;  // 0 means 2 * |V| per estimate
  NetConfig net;
  TrainSchedule schedule;
  SweepSpec sweep;
  std::map<std::string, std::string> model_paths;  // agent name -> checkpoint
  std::string out_dir = "out";
  int workers = 0;
};

ExperimentConfig parse_experiment_config(const std::string& json_text);
ExperimentConfig load_experiment_config(const std::string& path);

// Deterministic dataset construction: the split depends only on the config
// seed and data spec, never on which agents run.
DatasetSplit build_dataset(const DataSpec& data, std::uint64_t master_seed);

struct TableCell {
  std::string data_label;
  int budget;
  AgentKind agent;
  int n_seeds;
  double mean;   // of per-seed mean test rewards
  double ci95;   // 1.96 * std / sqrt(n_seeds)
  double best;   // best per-seed mean
};

// Full comparison grid: every agent at every budget, n_seeds repetitions.
// Writes summary.csv, raw.csv, trained-agent checkpoints and training logs
// under out_dir. Returns the summary rows.
std::vector<TableCell> run_table(const ExperimentConfig& cfg);

struct SweepCell {
  int n;
  int budget;
  AgentKind agent;
  int n_seeds;
  double mean;
  double ci95;
  double best;
};

// Generalization across sizes: trained agents learn at sweep.base_n, every
// agent is then scored on freshly generated test sets of each size, with
// the budget scaled linearly in |V|. Writes sweep.csv under out_dir.
std::vector<SweepCell> run_size_sweep(const ExperimentConfig& cfg);

// Per-seed learning curves (step vs validation score) for the dqn agent at
// budgets[0]. Writes curve_raw.csv and curve_summary.csv under out_dir.
void run_validation_curve(const ExperimentConfig& cfg);

// Graphviz undirected dot with every live node declared.
void export_dot(const Graph& g, std::ostream& out);
void export_dot_file(const Graph& g, const std::string& path);

// Shortest decimal text that round-trips a double; deterministic output.
std::string format_double(double x);

}  // namespace robustnet
