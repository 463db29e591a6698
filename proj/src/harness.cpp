#include "robustnet/harness.hpp"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "robustnet/checkpoint.hpp"
#include "robustnet/stats.hpp"

namespace robustnet {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr std::array<std::pair<AgentKind, const char*>, 7> kAgentNames = {{
    {AgentKind::Random, "random"},
    {AgentKind::Ldp, "ldp"},
    {AgentKind::Fv, "fv"},
    {AgentKind::ERes, "eres"},
    {AgentKind::Greedy, "greedy"},
    {AgentKind::Sl, "sl"},
    {AgentKind::Dqn, "dqn"},
}};

BaselineKind baseline_of(AgentKind kind) {
  switch (kind) {
    case AgentKind::Random: return BaselineKind::Random;
    case AgentKind::Ldp: return BaselineKind::Ldp;
    case AgentKind::Fv: return BaselineKind::Fv;
    case AgentKind::ERes: return BaselineKind::ERes;
    case AgentKind::Greedy: return BaselineKind::Greedy;
    default: throw std::logic_error("baseline_of: not a baseline agent");
  }
}

// Seed streams: purpose then index, both one-way mixed, so adding a new
// purpose never perturbs existing ones.
std::uint64_t stream_seed(std::uint64_t master, std::uint64_t purpose, std::uint64_t index) {
  return Rng::derive(Rng::derive(master, purpose), index);
}

constexpr std::uint64_t kPurposeTestSet = 1;
constexpr std::uint64_t kPurposeTrainSet = 2;
constexpr std::uint64_t kPurposeValidationSet = 3;
constexpr std::uint64_t kPurposeTraining = 4;
constexpr std::uint64_t kPurposeEvaluation = 5;
constexpr std::uint64_t kPurposeSweepTestSet = 6;

std::uint64_t case_key(std::size_t budget_index, AgentKind agent, int seed_index) {
  return (static_cast<std::uint64_t>(budget_index) << 32) ^
         (static_cast<std::uint64_t>(agent) << 16) ^ static_cast<std::uint64_t>(seed_index);
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  return out;
}

void finish_out(std::ofstream& out, const fs::path& path) {
  out.flush();
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

Objective objective_from_name(const std::string& name) {
  if (name == "random") return Objective::RandomRemoval;
  if (name == "targeted") return Objective::TargetedRemoval;
  throw std::invalid_argument("unknown objective '" + name + "' (random|targeted)");
}

GraphFamily family_from_name(const std::string& name) {
  if (name == "ba") return GraphFamily::BA;
  if (name == "er") return GraphFamily::ER;
  throw std::invalid_argument("unknown graph family '" + name + "' (ba|er)");
}

void write_training_log(const fs::path& path, const TrainResult& result) {
  std::ofstream out = open_out(path);
  out << "step,loss,epsilon,validation_score\n";
  for (const TrainLogRow& row : result.log)
    out << row.step << ',' << format_double(row.loss) << ',' << format_double(row.epsilon) << ','
        << format_double(row.validation_score) << '\n';
  finish_out(out, path);
}

}  // namespace

std::string agent_name(AgentKind kind) {
  for (const auto& [k, name] : kAgentNames)
    if (k == kind) return name;
  throw std::logic_error("agent_name: unknown agent");
}

AgentKind agent_from_name(const std::string& name) {
  for (const auto& [k, n] : kAgentNames)
    if (name == n) return k;
  throw std::invalid_argument("unknown agent '" + name +
                              "' (random|ldp|fv|eres|greedy|sl|dqn)");
}

bool agent_is_trained(AgentKind kind) {
  return kind == AgentKind::Sl || kind == AgentKind::Dqn;
}

std::string DataSpec::label() const {
  if (file_mode()) return "dataset";
  return (family == GraphFamily::BA ? "ba" : "er") + std::to_string(n);
}

std::string format_double(double x) {
  std::array<char, 64> buf;
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  if (ec != std::errc()) throw std::runtime_error("format_double failed");
  return std::string(buf.data(), ptr);
}

ExperimentConfig parse_experiment_config(const std::string& json_text) {
  const json j = json::parse(json_text);
  ExperimentConfig cfg;

  cfg.objective = objective_from_name(j.at("objective").get<std::string>());

  if (j.contains("data")) {
    const json& d = j.at("data");
    if (d.contains("family")) cfg.data.family = family_from_name(d.at("family").get<std::string>());
    cfg.data.n = d.value("n", cfg.data.n);
    cfg.data.er_edge_fraction = d.value("er_edge_fraction", cfg.data.er_edge_fraction);
    cfg.data.ba_m = d.value("ba_m", cfg.data.ba_m);
    cfg.data.train_size = d.value("train_size", cfg.data.train_size);
    cfg.data.validation_size = d.value("validation_size", cfg.data.validation_size);
    cfg.data.test_size = d.value("test_size", cfg.data.test_size);
    if (d.contains("dataset_paths"))
      cfg.data.dataset_paths = d.at("dataset_paths").get<std::vector<std::string>>();
  }

  if (j.contains("budgets")) cfg.budgets = j.at("budgets").get<std::vector<int>>();
  if (cfg.budgets.empty()) throw std::invalid_argument("config: budgets must be non-empty");
  for (int b : cfg.budgets)
    if (b < 1) throw std::invalid_argument("config: budgets must be >= 1");

  for (const auto& name : j.at("agents").get<std::vector<std::string>>())
    cfg.agents.push_back(agent_from_name(name));
  if (cfg.agents.empty()) throw std::invalid_argument("config: agents must be non-empty");

  cfg.n_seeds = j.value("n_seeds", cfg.n_seeds);
  if (cfg.n_seeds < 1) throw std::invalid_argument("config: n_seeds must be >= 1");
  cfg.seed = j.value("seed", cfg.seed);
  cfg.n_sims = j.value("n_sims", cfg.n_sims);
  cfg.out_dir = j.value("out_dir", cfg.out_dir);
  cfg.workers = j.value("workers", cfg.workers);

  if (j.contains("net")) {
    const json& n = j.at("net");
    cfg.net.embed_dim = n.value("embed_dim", cfg.net.embed_dim);
    cfg.net.hidden = n.value("hidden", cfg.net.hidden);
    cfg.net.rounds = n.value("rounds", cfg.net.rounds);
    cfg.net.validate();
  }

  if (j.contains("schedule")) {
    const json& s = j.at("schedule");
    cfg.schedule.total_steps = s.value("total_steps", cfg.schedule.total_steps);
    cfg.schedule.batch_size = s.value("batch_size", cfg.schedule.batch_size);
    cfg.schedule.target_sync_every = s.value("target_sync_every", cfg.schedule.target_sync_every);
    cfg.schedule.gamma = s.value("gamma", cfg.schedule.gamma);
    cfg.schedule.reward_scale = s.value("reward_scale", cfg.schedule.reward_scale);
    cfg.schedule.lr = s.value("lr", cfg.schedule.lr);
    cfg.schedule.eps_start = s.value("eps_start", cfg.schedule.eps_start);
    cfg.schedule.eps_end = s.value("eps_end", cfg.schedule.eps_end);
    cfg.schedule.eps_decay_fraction = s.value("eps_decay_fraction", cfg.schedule.eps_decay_fraction);
    cfg.schedule.validation_every = s.value("validation_every", cfg.schedule.validation_every);
    cfg.schedule.replay_capacity =
        s.value("replay_capacity", static_cast<std::uint64_t>(cfg.schedule.replay_capacity));
    cfg.schedule.sl_patience = s.value("sl_patience", cfg.schedule.sl_patience);
    cfg.schedule.validate();
  }

  if (j.contains("sweep")) {
    const json& s = j.at("sweep");
    if (s.contains("sizes")) cfg.sweep.sizes = s.at("sizes").get<std::vector<int>>();
    cfg.sweep.base_n = s.value("base_n", cfg.sweep.base_n);
    cfg.sweep.expensive_agent_max_n =
        s.value("expensive_agent_max_n", cfg.sweep.expensive_agent_max_n);
  }

  if (j.contains("model_paths"))
    cfg.model_paths = j.at("model_paths").get<std::map<std::string, std::string>>();

  return cfg;
}

ExperimentConfig load_experiment_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_experiment_config(buf.str());
}

DatasetSplit build_dataset(const DataSpec& data, std::uint64_t master_seed) {
  DatasetSplit split;
  if (data.file_mode()) {
    for (const std::string& path : data.dataset_paths)
      split.test.push_back(load_and_prepare(path).graph);
    split.train = split.test;
    split.validation = split.test;
    return split;
  }

  GeneratorSpec spec;
  spec.family = data.family;
  spec.n = data.n;
  spec.er_edge_fraction = data.er_edge_fraction;
  spec.ba_m = data.ba_m;
  spec.validate();

  auto make = [&](std::uint64_t purpose, int count) {
    std::vector<Graph> graphs;
    graphs.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
      Rng rng(stream_seed(master_seed, purpose, static_cast<std::uint64_t>(i)));
      graphs.push_back(generate(spec, rng));
    }
    return graphs;
  };
  split.test = make(kPurposeTestSet, data.test_size);
  split.train = make(kPurposeTrainSet, data.train_size);
  split.validation = make(kPurposeValidationSet, data.validation_size);
  return split;
}

namespace {

struct SeedRun {
  std::vector<double> rewards;  // per test graph
};

// One agent at one budget for one seed: train if needed, then score the
// test set. Saves checkpoints/logs for trained agents when out_dir given.
SeedRun run_case(const ExperimentConfig& cfg, const DatasetSplit& data,
                 const EpisodeConfig& ecfg, std::size_t budget_index, AgentKind agent,
                 int seed_index, const fs::path* out_dir) {
  const std::uint64_t key = case_key(budget_index, agent, seed_index);
  const std::uint64_t eval_seed = stream_seed(cfg.seed, kPurposeEvaluation, key);

  PolicyFactory factory;
  if (!agent_is_trained(agent)) {
    const int sims = ecfg.resolve_n_sims(data.test.front());
    factory = baseline_policy_factory(baseline_of(agent), cfg.objective, sims, cfg.workers);
  } else {
    const std::uint64_t train_seed = stream_seed(cfg.seed, kPurposeTraining, key);
    DatasetSplit copy{data.train, data.validation, {}};
    TrainResult result = agent == AgentKind::Dqn
                             ? train_dqn(std::move(copy), ecfg, cfg.net, cfg.schedule, train_seed)
                             : train_sl(std::move(copy), ecfg, cfg.net, cfg.schedule, train_seed);
    if (out_dir) {
      const std::string stem = agent_name(agent) + "_L" + std::to_string(ecfg.budget) + "_seed" +
                               std::to_string(seed_index);
      save_checkpoint((*out_dir / "models" / (stem + ".ckpt")).string(), result.best_params,
                      cfg.net);
      write_training_log(*out_dir / "logs" / (stem + ".csv"), result);
    }
    factory = agent == AgentKind::Dqn
                  ? greedy_q_policy_factory(std::move(result.best_params), cfg.net)
                  : sl_policy_factory(std::move(result.best_params), cfg.net);
  }

  SeedRun run;
  run.rewards = evaluate_policies(data.test, factory, ecfg, eval_seed, cfg.workers);
  return run;
}

EpisodeConfig episode_config_for(const ExperimentConfig& cfg, int budget) {
  EpisodeConfig ecfg;
  ecfg.objective = cfg.objective;
  ecfg.budget = budget;
  // File mode defaults to a fixed 40 draws (sizes vary across graphs);
  // synthetic mode keeps the 2|V| rule via n_sims = 0.
  ecfg.n_sims = cfg.n_sims > 0 ? cfg.n_sims : (cfg.data.file_mode() ? 40 : 0);
  ecfg.workers = cfg.workers;
  return ecfg;
}

}  // namespace

std::vector<TableCell> run_table(const ExperimentConfig& cfg) {
  const fs::path out_dir(cfg.out_dir);
  fs::create_directories(out_dir);
  const bool any_trained =
      std::any_of(cfg.agents.begin(), cfg.agents.end(), agent_is_trained);
  if (any_trained) {
    fs::create_directories(out_dir / "models");
    fs::create_directories(out_dir / "logs");
  }

  const DatasetSplit data = build_dataset(cfg.data, cfg.seed);
  if (data.test.empty()) throw std::invalid_argument("run_table: empty test set");

  std::ofstream raw = open_out(out_dir / "raw.csv");
  raw << "data,budget,agent,seed,graph,reward\n";

  std::vector<TableCell> cells;
  for (std::size_t bi = 0; bi < cfg.budgets.size(); ++bi) {
    const EpisodeConfig ecfg = episode_config_for(cfg, cfg.budgets[bi]);
    for (const AgentKind agent : cfg.agents) {
      std::vector<double> seed_means;
      for (int s = 0; s < cfg.n_seeds; ++s) {
        const SeedRun run = run_case(cfg, data, ecfg, bi, agent, s, &out_dir);
        for (std::size_t gi = 0; gi < run.rewards.size(); ++gi)
          raw << cfg.data.label() << ',' << cfg.budgets[bi] << ',' << agent_name(agent) << ','
              << s << ',' << gi << ',' << format_double(run.rewards[gi]) << '\n';
        seed_means.push_back(mean_of(run.rewards));
      }
      TableCell cell;
      cell.data_label = cfg.data.label();
      cell.budget = cfg.budgets[bi];
      cell.agent = agent;
      cell.n_seeds = cfg.n_seeds;
      cell.mean = mean_of(seed_means);
      cell.ci95 = ci95_halfwidth(seed_means);
      cell.best = *std::max_element(seed_means.begin(), seed_means.end());
      cells.push_back(cell);
    }
  }
  finish_out(raw, out_dir / "raw.csv");

  std::ofstream summary = open_out(out_dir / "summary.csv");
  summary << "data,budget,agent,n_seeds,mean,ci95,best\n";
  for (const TableCell& c : cells)
    summary << c.data_label << ',' << c.budget << ',' << agent_name(c.agent) << ',' << c.n_seeds
            << ',' << format_double(c.mean) << ',' << format_double(c.ci95) << ','
            << format_double(c.best) << '\n';
  finish_out(summary, out_dir / "summary.csv");
  return cells;
}

std::vector<SweepCell> run_size_sweep(const ExperimentConfig& cfg) {
  if (cfg.sweep.sizes.empty())
    throw std::invalid_argument("run_size_sweep: sweep.sizes must be non-empty");
  if (cfg.data.file_mode())
    throw std::invalid_argument("run_size_sweep: size sweeps need synthetic data");
  const fs::path out_dir(cfg.out_dir);
  fs::create_directories(out_dir);

  const int base_n = cfg.sweep.base_n;
  const int base_budget = cfg.budgets.front();

  // Trained agents learn once per seed at the base size (or come from
  // checkpoints); the same parameters then score every size.
  struct TrainedModels {
    std::vector<NetworkParams> per_seed;
    NetConfig net;
  };
  std::map<AgentKind, TrainedModels> models;

  DataSpec base_data = cfg.data;
  base_data.n = base_n;
  const EpisodeConfig base_ecfg = episode_config_for(cfg, base_budget);

  for (const AgentKind agent : cfg.agents) {
    if (!agent_is_trained(agent)) continue;
    TrainedModels tm;
    const auto it = cfg.model_paths.find(agent_name(agent));
    if (it != cfg.model_paths.end()) {
      Checkpoint ck = load_checkpoint(it->second);
      tm.net = ck.config;
      tm.per_seed.assign(static_cast<std::size_t>(cfg.n_seeds), ck.params);
    } else {
      const DatasetSplit base_split = build_dataset(base_data, cfg.seed);
      tm.net = cfg.net;
      for (int s = 0; s < cfg.n_seeds; ++s) {
        const std::uint64_t train_seed =
            stream_seed(cfg.seed, kPurposeTraining, case_key(9999, agent, s));
        DatasetSplit copy{base_split.train, base_split.validation, {}};
        TrainResult result =
            agent == AgentKind::Dqn
                ? train_dqn(std::move(copy), base_ecfg, cfg.net, cfg.schedule, train_seed)
                : train_sl(std::move(copy), base_ecfg, cfg.net, cfg.schedule, train_seed);
        tm.per_seed.push_back(std::move(result.best_params));
      }
    }
    models.emplace(agent, std::move(tm));
  }

  std::vector<SweepCell> cells;
  for (std::size_t si = 0; si < cfg.sweep.sizes.size(); ++si) {
    const int n = cfg.sweep.sizes[si];
    if (n < 2) throw std::invalid_argument("run_size_sweep: sizes must be >= 2");
    // Budget scales linearly with the node count.
    const int budget = std::max(
        1, static_cast<int>(std::llround(static_cast<double>(base_budget) * n / base_n)));

    DataSpec sized = cfg.data;
    sized.n = n;
    GeneratorSpec spec;
    spec.family = sized.family;
    spec.n = n;
    spec.er_edge_fraction = sized.er_edge_fraction;
    spec.ba_m = sized.ba_m;
    std::vector<Graph> test;
    test.reserve(static_cast<std::size_t>(cfg.data.test_size));
    for (int i = 0; i < cfg.data.test_size; ++i) {
      Rng rng(stream_seed(cfg.seed, kPurposeSweepTestSet,
                          (static_cast<std::uint64_t>(si) << 32) | static_cast<std::uint64_t>(i)));
      test.push_back(generate(spec, rng));
    }

    EpisodeConfig ecfg = episode_config_for(cfg, budget);
    for (const AgentKind agent : cfg.agents) {
      const bool expensive = agent == AgentKind::Greedy || agent == AgentKind::Sl;
      if (expensive && n > cfg.sweep.expensive_agent_max_n) continue;

      std::vector<double> seed_means;
      for (int s = 0; s < cfg.n_seeds; ++s) {
        const std::uint64_t eval_seed =
            stream_seed(cfg.seed, kPurposeEvaluation,
                        case_key(1000 + si, agent, s));
        PolicyFactory factory;
        if (agent_is_trained(agent)) {
          const TrainedModels& tm = models.at(agent);
          factory = agent == AgentKind::Dqn
                        ? greedy_q_policy_factory(tm.per_seed[static_cast<std::size_t>(s)], tm.net)
                        : sl_policy_factory(tm.per_seed[static_cast<std::size_t>(s)], tm.net);
        } else {
          const int sims = ecfg.resolve_n_sims(test.front());
          factory = baseline_policy_factory(baseline_of(agent), cfg.objective, sims, cfg.workers);
        }
        seed_means.push_back(mean_of(evaluate_policies(test, factory, ecfg, eval_seed, cfg.workers)));
      }

      SweepCell cell;
      cell.n = n;
      cell.budget = budget;
      cell.agent = agent;
      cell.n_seeds = cfg.n_seeds;
      cell.mean = mean_of(seed_means);
      cell.ci95 = ci95_halfwidth(seed_means);
      cell.best = *std::max_element(seed_means.begin(), seed_means.end());
      cells.push_back(cell);
    }
  }

  std::ofstream out = open_out(out_dir / "sweep.csv");
  out << "data,n,budget,agent,n_seeds,mean,ci95,best\n";
  for (const SweepCell& c : cells)
    out << cfg.data.label() << ',' << c.n << ',' << c.budget << ',' << agent_name(c.agent) << ','
        << c.n_seeds << ',' << format_double(c.mean) << ',' << format_double(c.ci95) << ','
        << format_double(c.best) << '\n';
  finish_out(out, out_dir / "sweep.csv");
  return cells;
}

void run_validation_curve(const ExperimentConfig& cfg) {
  const fs::path out_dir(cfg.out_dir);
  fs::create_directories(out_dir);

  const DatasetSplit data = build_dataset(cfg.data, cfg.seed);
  const EpisodeConfig ecfg = episode_config_for(cfg, cfg.budgets.front());

  std::vector<std::vector<TrainLogRow>> logs;
  std::ofstream raw = open_out(out_dir / "curve_raw.csv");
  raw << "seed,step,loss,epsilon,validation_score\n";
  for (int s = 0; s < cfg.n_seeds; ++s) {
    const std::uint64_t train_seed =
        stream_seed(cfg.seed, kPurposeTraining, case_key(0, AgentKind::Dqn, s));
    DatasetSplit copy{data.train, data.validation, {}};
    TrainResult result = train_dqn(std::move(copy), ecfg, cfg.net, cfg.schedule, train_seed);
    for (const TrainLogRow& row : result.log)
      raw << s << ',' << row.step << ',' << format_double(row.loss) << ','
          << format_double(row.epsilon) << ',' << format_double(row.validation_score) << '\n';
    logs.push_back(std::move(result.log));
  }
  finish_out(raw, out_dir / "curve_raw.csv");

  // The log cadence is schedule-determined, so rows align across seeds.
  std::ofstream summary = open_out(out_dir / "curve_summary.csv");
  summary << "step,mean_validation_score,ci95\n";
  for (std::size_t r = 0; r < logs.front().size(); ++r) {
    std::vector<double> scores;
    for (const auto& log : logs) {
      if (r < log.size() && log[r].step == logs.front()[r].step)
        scores.push_back(log[r].validation_score);
    }
    if (scores.size() != logs.size()) continue;
    summary << logs.front()[r].step << ',' << format_double(mean_of(scores)) << ','
            << format_double(ci95_halfwidth(scores)) << '\n';
  }
  finish_out(summary, out_dir / "curve_summary.csv");
}

void export_dot(const Graph& g, std::ostream& out) {
  out << "graph g {\n";
  for (int v : g.live_nodes()) out << "  " << v << ";\n";
  for (const NodePair& e : g.edges()) out << "  " << e.u << " -- " << e.v << ";\n";
  out << "}\n";
}

void export_dot_file(const Graph& g, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  export_dot(g, out);
  out.flush();
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace robustnet
