#include "robustnet/agents.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "robustnet/parallel.hpp"
#include "robustnet/stats.hpp"

namespace robustnet {

ReplayBuffer::ReplayBuffer(std::size_t capacity) : capacity_(capacity) {
  if (capacity == 0) throw std::invalid_argument("ReplayBuffer: capacity must be >= 1");
  data_.reserve(std::min<std::size_t>(capacity, 1 << 20));
}

void ReplayBuffer::push(Transition t) {
  if (data_.size() < capacity_) {
    data_.push_back(std::move(t));
    return;
  }
  data_[head_] = std::move(t);
  head_ = (head_ + 1) % capacity_;
}

const Transition& ReplayBuffer::at(std::size_t i) const {
  if (i >= data_.size()) throw std::out_of_range("ReplayBuffer: index out of range");
  if (data_.size() < capacity_) return data_[i];
  return data_[(head_ + i) % capacity_];
}

std::vector<std::size_t> ReplayBuffer::sample_indices(std::size_t k, Rng& rng) const {
  if (k > data_.size())
    throw std::invalid_argument("ReplayBuffer: cannot sample " + std::to_string(k) + " of " +
                                std::to_string(data_.size()));
  // Floyd's algorithm: uniform k-subsets without building [0, n).
  std::vector<std::size_t> out;
  out.reserve(k);
  for (std::size_t j = data_.size() - k; j < data_.size(); ++j) {
    const std::size_t t = static_cast<std::size_t>(rng.uniform_below(j + 1));
    if (std::find(out.begin(), out.end(), t) == out.end()) {
      out.push_back(t);
    } else {
      out.push_back(j);
    }
  }
  return out;
}

long long TrainSchedule::resolved_validation_every() const {
  if (validation_every > 0) return validation_every;
  return std::max<long long>(1, total_steps / 100);
}

std::size_t TrainSchedule::resolved_replay_capacity() const {
  return replay_capacity > 0 ? replay_capacity : static_cast<std::size_t>(total_steps);
}

void TrainSchedule::validate() const {
  if (total_steps < 1) throw std::invalid_argument("TrainSchedule: total_steps must be >= 1");
  if (batch_size < 1) throw std::invalid_argument("TrainSchedule: batch_size must be >= 1");
  if (target_sync_every < 1)
    throw std::invalid_argument("TrainSchedule: target_sync_every must be >= 1");
  if (gamma < 0.0 || gamma > 1.0) throw std::invalid_argument("TrainSchedule: gamma outside [0, 1]");
  if (reward_scale <= 0.0) throw std::invalid_argument("TrainSchedule: reward_scale must be > 0");
  if (lr <= 0.0) throw std::invalid_argument("TrainSchedule: lr must be > 0");
  if (eps_start < 0.0 || eps_start > 1.0 || eps_end < 0.0 || eps_end > eps_start)
    throw std::invalid_argument("TrainSchedule: need 0 <= eps_end <= eps_start <= 1");
  if (eps_decay_fraction < 0.0 || eps_decay_fraction > 1.0)
    throw std::invalid_argument("TrainSchedule: eps_decay_fraction outside [0, 1]");
  if (sl_patience < 1) throw std::invalid_argument("TrainSchedule: sl_patience must be >= 1");
}

double epsilon_at(long long step, const TrainSchedule& sched) {
  if (step < 0) throw std::invalid_argument("epsilon_at: negative step");
  const long long anneal =
      std::llround(static_cast<double>(sched.total_steps) * sched.eps_decay_fraction);
  if (step >= anneal || anneal == 0) return sched.eps_end;
  return sched.eps_start + (sched.eps_end - sched.eps_start) * static_cast<double>(step) /
                               static_cast<double>(anneal);
}

namespace {

std::size_t argmax_first(const std::vector<double>& xs) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < xs.size(); ++i)
    if (xs[i] > xs[best]) best = i;
  return best;
}

}  // namespace

PolicyFactory greedy_q_policy_factory(NetworkParams params, NetConfig cfg) {
  auto shared = std::make_shared<const NetworkParams>(std::move(params));
  return [shared, cfg]() -> Policy {
    return [shared, cfg](const EnvState& s, const std::vector<int>& moves, Rng&) {
      const std::vector<double> qs = q_values(s.graph, s.edge_stub, moves, *shared, cfg);
      return moves[argmax_first(qs)];
    };
  };
}

PolicyFactory sl_policy_factory(NetworkParams params, NetConfig cfg) {
  auto shared = std::make_shared<const NetworkParams>(std::move(params));
  EdgeSelector selector = [shared, cfg](const Graph& g, Rng&) {
    return select_edge_greedy_with(
        g, [&](const Graph& h) { return sl_value(h, *shared, cfg); });
  };
  return [selector]() { return edge_policy(selector); };
}

PolicyFactory baseline_policy_factory(BaselineKind kind, Objective objective, int n_sims,
                                      int workers) {
  return [kind, objective, n_sims, workers]() {
    return edge_policy(selector_for(kind, objective, n_sims, workers));
  };
}

PolicyFactory uniform_random_policy_factory() {
  return []() -> Policy {
    return [](const EnvState&, const std::vector<int>& moves, Rng& rng) {
      return moves[static_cast<std::size_t>(rng.uniform_below(moves.size()))];
    };
  };
}

std::vector<double> evaluate_policies(std::span<const Graph> graphs,
                                      const PolicyFactory& make_policy, const EpisodeConfig& cfg,
                                      std::uint64_t master_seed, int workers) {
  std::vector<double> rewards(graphs.size());
  parallel_for(graphs.size(), workers, [&](std::size_t i) {
    Rng rng(Rng::derive(master_seed, static_cast<std::uint64_t>(i)));
    const Policy policy = make_policy();
    rewards[i] = run_episode(graphs[i], policy, cfg, rng).total_reward;
  });
  return rewards;
}

namespace {

TrainSchedule validated(TrainSchedule sched) {
  sched.validate();
  return sched;
}

}  // namespace

DqnTrainer::DqnTrainer(DatasetSplit data, EpisodeConfig env_cfg, NetConfig net_cfg,
                       TrainSchedule sched, std::uint64_t seed)
    : data_(std::move(data)),
      env_cfg_(env_cfg),
      net_cfg_(net_cfg),
      sched_(validated(sched)),
      rng_(seed),
      online_(NetworkParams::glorot(net_cfg, rng_)),
      target_(online_),
      adam_(AdamState::init(net_cfg, sched.lr)),
      replay_(sched_.resolved_replay_capacity()) {
  net_cfg_.validate();
  if (data_.train.empty()) throw std::invalid_argument("DqnTrainer: no training graphs");
  if (data_.validation.empty()) throw std::invalid_argument("DqnTrainer: no validation graphs");
  for (const Graph& g : data_.train) env_cfg_.validate(g);
  for (const Graph& g : data_.validation) env_cfg_.validate(g);

  result_.config = net_cfg_;
  result_.best_validation = -std::numeric_limits<double>::infinity();
  result_.best_step = 0;
  validate_and_log();
}

void DqnTrainer::validate_and_log() {
  const std::uint64_t eval_seed = rng_.next_u64();
  const std::vector<double> rewards = evaluate_policies(
      data_.validation, greedy_q_policy_factory(online_, net_cfg_), env_cfg_, eval_seed,
      env_cfg_.workers);
  const double score = mean_of(rewards);
  if (score > result_.best_validation) {
    result_.best_validation = score;
    result_.best_params = online_;
    result_.best_step = step_;
  }
  result_.log.push_back(TrainLogRow{step_, last_loss_, epsilon_at(step_, sched_), score});
}

void DqnTrainer::step_once() {
  if (done()) throw std::logic_error("DqnTrainer: training already finished");

  if (!cur_.has_value()) {
    const std::size_t pick = static_cast<std::size_t>(rng_.uniform_below(data_.train.size()));
    cur_ = reset_env(data_.train[pick], env_cfg_, rng_);
  }

  const std::vector<int> moves = valid_actions(*cur_, env_cfg_);
  const double eps = epsilon_at(step_, sched_);
  int action;
  if (rng_.uniform01() < eps) {
    action = moves[static_cast<std::size_t>(rng_.uniform_below(moves.size()))];
  } else {
    const std::vector<double> qs = q_values(cur_->graph, cur_->edge_stub, moves, online_, net_cfg_);
    action = moves[argmax_first(qs)];
  }

  StepOutcome out = step(*cur_, action, env_cfg_, rng_);
  Transition tr;
  tr.graph = std::make_shared<const Graph>(cur_->graph);
  tr.stub = cur_->edge_stub;
  tr.action = action;
  tr.reward = out.reward * sched_.reward_scale;
  tr.next_graph = std::make_shared<const Graph>(out.next.graph);
  tr.next_stub = out.next.edge_stub;
  tr.next_terminal = out.terminal;
  replay_.push(std::move(tr));

  if (out.terminal) {
    cur_.reset();
  } else {
    cur_ = std::move(out.next);
  }
  ++step_;

  if (replay_.size() >= static_cast<std::size_t>(sched_.batch_size)) {
    const std::vector<std::size_t> idx =
        replay_.sample_indices(static_cast<std::size_t>(sched_.batch_size), rng_);
    std::vector<TdSample> batch;
    batch.reserve(idx.size());
    for (std::size_t i : idx) {
      const Transition& t = replay_.at(i);
      double target = t.reward;
      if (!t.next_terminal) {
        const std::vector<int> next_moves = valid_moves(*t.next_graph, t.next_stub);
        const std::vector<double> qs =
            q_values(*t.next_graph, t.next_stub, next_moves, target_, net_cfg_);
        target += sched_.gamma * *std::max_element(qs.begin(), qs.end());
      }
      batch.push_back(TdSample{t.graph.get(), t.stub, t.action, target});
    }
    const LossGrads lg = grad_td_loss(batch, online_, net_cfg_);
    adam_step(online_, lg.grads, adam_);
    last_loss_ = lg.loss;
  }

  if (step_ % sched_.target_sync_every == 0) target_ = online_;

  const long long ve = sched_.resolved_validation_every();
  if (step_ % ve == 0 || step_ == sched_.total_steps) validate_and_log();
}

void DqnTrainer::run() {
  while (!done()) step_once();
}

TrainResult DqnTrainer::take_result() { return std::move(result_); }

TrainResult train_dqn(DatasetSplit data, const EpisodeConfig& env_cfg, const NetConfig& net_cfg,
                      const TrainSchedule& sched, std::uint64_t seed) {
  DqnTrainer trainer(std::move(data), env_cfg, net_cfg, sched, seed);
  trainer.run();
  return trainer.take_result();
}

namespace {

struct LabelledGraph {
  Graph graph;
  double value;
};

// Perturbed copies labelled with their objective estimate: apply 0..budget
// uniform random edge additions, then measure.
std::vector<LabelledGraph> make_regression_set(const std::vector<Graph>& graphs,
                                               const EpisodeConfig& cfg, std::uint64_t master,
                                               int workers) {
  std::vector<LabelledGraph> out(graphs.size(), LabelledGraph{Graph(1), 0.0});
  parallel_for(graphs.size(), workers, [&](std::size_t i) {
    Rng rng(Rng::derive(master, static_cast<std::uint64_t>(i)));
    Graph g = graphs[i];
    const int additions = rng.uniform_int(0, cfg.budget);
    for (int a = 0; a < additions; ++a) {
      const std::vector<NodePair> missing = g.non_edges();
      if (missing.empty()) break;
      g.add_edge(missing[static_cast<std::size_t>(rng.uniform_below(missing.size()))]);
    }
    const double value =
        estimate_robustness(g, strategy_for(cfg.objective), cfg.resolve_n_sims(g), rng, 1).mean;
    out[i] = LabelledGraph{std::move(g), value};
  });
  return out;
}

double sl_validation_loss(const std::vector<LabelledGraph>& samples, const NetworkParams& params,
                          const NetConfig& cfg) {
  double loss = 0.0;
  for (const LabelledGraph& s : samples) {
    const double err = sl_value(s.graph, params, cfg) - s.value;
    loss += err * err;
  }
  return loss / static_cast<double>(samples.size());
}

}  // namespace

TrainResult train_sl(DatasetSplit data, const EpisodeConfig& env_cfg, const NetConfig& net_cfg,
                     const TrainSchedule& sched, std::uint64_t seed) {
  sched.validate();
  net_cfg.validate();
  if (data.train.empty()) throw std::invalid_argument("train_sl: no training graphs");
  if (data.validation.empty()) throw std::invalid_argument("train_sl: no validation graphs");
  for (const Graph& g : data.train) env_cfg.validate(g);
  for (const Graph& g : data.validation) env_cfg.validate(g);

  Rng rng(seed);
  const std::uint64_t train_label_seed = rng.next_u64();
  const std::uint64_t val_label_seed = rng.next_u64();
  const std::vector<LabelledGraph> train_set =
      make_regression_set(data.train, env_cfg, train_label_seed, env_cfg.workers);
  const std::vector<LabelledGraph> val_set =
      make_regression_set(data.validation, env_cfg, val_label_seed, env_cfg.workers);

  NetworkParams params = NetworkParams::glorot(net_cfg, rng);
  AdamState adam = AdamState::init(net_cfg, sched.lr);

  TrainResult result;
  result.config = net_cfg;
  result.best_validation = -sl_validation_loss(val_set, params, net_cfg);
  result.best_params = params;
  result.best_step = 0;
  result.log.push_back(TrainLogRow{0, 0.0, 0.0, result.best_validation});

  const long long ve = sched.resolved_validation_every();
  double last_loss = 0.0;
  for (long long step = 1; step <= sched.total_steps; ++step) {
    std::vector<SlSample> batch;
    batch.reserve(static_cast<std::size_t>(sched.batch_size));
    for (int b = 0; b < sched.batch_size; ++b) {
      const LabelledGraph& s =
          train_set[static_cast<std::size_t>(rng.uniform_below(train_set.size()))];
      batch.push_back(SlSample{&s.graph, s.value});
    }
    const LossGrads lg = grad_sl_loss(batch, params, net_cfg);
    adam_step(params, lg.grads, adam);
    last_loss = lg.loss;

    if (step % ve == 0 || step == sched.total_steps) {
      const double score = -sl_validation_loss(val_set, params, net_cfg);
      if (score > result.best_validation) {
        result.best_validation = score;
        result.best_params = params;
        result.best_step = step;
      }
      result.log.push_back(TrainLogRow{step, last_loss, 0.0, score});
      if (step - result.best_step >= sched.sl_patience) break;
    }
  }
  return result;
}

}  // namespace robustnet
