#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "robustnet/baselines.hpp"
#include "robustnet/graph.hpp"
#include "robustnet/mdp.hpp"
#include "robustnet/neural.hpp"
#include "robustnet/rng.hpp"

namespace robustnet {

struct Transition {
  std::shared_ptr<const Graph> graph;
  std::optional<int> stub;
  int action;
  double reward;  // already scaled
  std::shared_ptr<const Graph> next_graph;
  std::optional<int> next_stub;
  bool next_terminal;
};

// Fixed-capacity ring; pushing into a full buffer overwrites the oldest
// entry. at(i) addresses the i-th oldest.
class ReplayBuffer {
public:
  explicit ReplayBuffer(std::size_t capacity);

  std::size_t capacity() const { return capacity_; }
  std::size_t size() const { return data_.size(); }
  void push(Transition t);
  const Transition& at(std::size_t i) const;

  // k distinct indices into [0, size()), uniform over subsets.
  std::vector<std::size_t> sample_indices(std::size_t k, Rng& rng) const;

private:
  std::vector<Transition> data_;
  std::size_t capacity_;
  std::size_t head_ = 0;  // oldest entry once full
};

struct TrainSchedule {
  long long total_steps = 40000;
  int batch_size = 50;
  int target_sync_every = 50;
  double gamma = 1.0;
  double reward_scale = 100.0;
  double lr = 1e-4;
  double eps_start = 1.0;
  double eps_end = 0.1;
  double eps_decay_fraction = 0.5;  // anneal over this fraction of total_steps
  long long validation_every = 0;   // 0 means total_steps / 100, at least 1
  std::size_t replay_capacity = 0;  // 0 means total_steps
  long long sl_patience = 10000;    // early-stop window for the regressor

  long long resolved_validation_every() const;
  std::size_t resolved_replay_capacity() const;
  void validate() const;
};

// Linear from eps_start at step 0 to eps_end after
// total_steps * eps_decay_fraction steps, flat afterwards.
double epsilon_at(long long step, const TrainSchedule& sched);

struct DatasetSplit {
  std::vector<Graph> train;
  std::vector<Graph> validation;
  std::vector<Graph> test;
};

struct TrainLogRow {
  long long step;
  double loss;     // most recent batch loss (0 before the first update)
  double epsilon;  // exploration rate at this step (0 for the regressor)
  double validation_score;
};

struct TrainResult {
  NetConfig config;
  NetworkParams best_params;
  double best_validation;  // higher is better (regressor logs negated MSE)
  long long best_step;
  std::vector<TrainLogRow> log;
};

using PolicyFactory = std::function<Policy()>;

// Episode policies. The Q policy is stateless; the others carry per-episode
// state, so evaluation asks the factory for a fresh instance per episode.
PolicyFactory greedy_q_policy_factory(NetworkParams params, NetConfig cfg);
PolicyFactory sl_policy_factory(NetworkParams params, NetConfig cfg);
PolicyFactory baseline_policy_factory(BaselineKind kind, Objective objective, int n_sims,
                                      int workers = -1);
PolicyFactory uniform_random_policy_factory();

// Per-graph episode rewards; episode i runs on a stream derived from
// (master_seed, i), identical for any worker count.
std::vector<double> evaluate_policies(std::span<const Graph> graphs,
                                      const PolicyFactory& make_policy, const EpisodeConfig& cfg,
                                      std::uint64_t master_seed, int workers = -1);

// Deep Q-learning driver, exposed stepwise so tests can watch the replay
// buffer and target network honour their contracts.
class DqnTrainer {
public:
  DqnTrainer(DatasetSplit data, EpisodeConfig env_cfg, NetConfig net_cfg, TrainSchedule sched,
             std::uint64_t seed);

  bool done() const { return step_ >= sched_.total_steps; }
  void step_once();
  void run();

  long long current_step() const { return step_; }
  const NetworkParams& online_params() const { return online_; }
  const NetworkParams& target_params() const { return target_; }
  const ReplayBuffer& replay() const { return replay_; }
  double last_loss() const { return last_loss_; }

  TrainResult take_result();

private:
  void validate_and_log();

  DatasetSplit data_;
  EpisodeConfig env_cfg_;
  NetConfig net_cfg_;
  TrainSchedule sched_;
  Rng rng_;
  NetworkParams online_, target_;
  AdamState adam_;
  ReplayBuffer replay_;
  std::optional<EnvState> cur_;
  long long step_ = 0;
  double last_loss_ = 0.0;
  TrainResult result_;
};

TrainResult train_dqn(DatasetSplit data, const EpisodeConfig& env_cfg, const NetConfig& net_cfg,
                      const TrainSchedule& sched, std::uint64_t seed);

// Supervised regressor: graphs labelled with Monte Carlo objective values
// after 0..budget uniform random edge additions, trained on mean squared
// error, early-stopped on validation loss.
TrainResult train_sl(DatasetSplit data, const EpisodeConfig& env_cfg, const NetConfig& net_cfg,
                     const TrainSchedule& sched, std::uint64_t seed);

}  // namespace robustnet
