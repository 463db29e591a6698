#include "robustnet/mdp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace robustnet {

RemovalStrategy strategy_for(Objective objective) {
  return objective == Objective::RandomRemoval ? RemovalStrategy::random()
                                               : RemovalStrategy::targeted();
}

int EpisodeConfig::resolve_n_sims(const Graph& g) const {
  return n_sims > 0 ? n_sims : 2 * g.live_node_count();
}

void EpisodeConfig::validate(const Graph& g0) const {
  if (budget < 1) throw std::invalid_argument("EpisodeConfig: budget must be >= 1");
  if (!g0.is_connected()) throw std::invalid_argument("EpisodeConfig: start graph must be connected");
  const long long n = g0.live_node_count();
  const long long missing = n * (n - 1) / 2 - g0.edge_count();
  if (budget > missing)
    throw std::invalid_argument("EpisodeConfig: budget " + std::to_string(budget) +
                                " exceeds the " + std::to_string(missing) +
                                " addable edges");
}

int budget_from_edge_percent(double tau_percent, int n) {
  if (tau_percent <= 0.0) throw std::invalid_argument("budget_from_edge_percent: tau must be > 0");
  if (n < 2) throw std::invalid_argument("budget_from_edge_percent: need n >= 2");
  const double complete = static_cast<double>(n) * (n - 1) / 2.0;
  const int budget = static_cast<int>(std::llround(tau_percent / 100.0 * complete));
  return std::max(1, budget);
}

std::vector<int> valid_moves(const Graph& g, std::optional<int> stub) {
  std::vector<int> moves;
  if (!stub.has_value()) {
    const int full = g.live_node_count() - 1;
    for (int v : g.live_nodes())
      if (g.degree(v) < full) moves.push_back(v);
    return moves;
  }
  const int s = *stub;
  for (int v : g.live_nodes())
    if (v != s && !g.has_edge(s, v)) moves.push_back(v);
  return moves;
}

bool is_terminal(const EnvState& s, const EpisodeConfig& cfg) {
  return s.t >= 2 * cfg.budget || (!s.edge_stub.has_value() && s.graph.complete());
}

std::vector<int> valid_actions(const EnvState& s, const EpisodeConfig& cfg) {
  if (is_terminal(s, cfg)) throw std::logic_error("valid_actions: episode is over");
  return valid_moves(s.graph, s.edge_stub);
}

EnvState reset_env(const Graph& g0, const EpisodeConfig& cfg, Rng& rng) {
  cfg.validate(g0);
  const double f0 = estimate_robustness(g0, strategy_for(cfg.objective), cfg.resolve_n_sims(g0),
                                        rng, cfg.workers)
                        .mean;
  return EnvState{g0, std::nullopt, 0, f0};
}

StepOutcome step(const EnvState& s, int action, const EpisodeConfig& cfg, Rng& rng) {
  if (is_terminal(s, cfg)) throw std::logic_error("step: episode is over");
  if (action < 0 || action >= s.graph.node_count() || !s.graph.is_alive(action))
    throw std::invalid_argument("step: action " + std::to_string(action) + " is not a live node");

  StepOutcome out{EnvState{s.graph, std::nullopt, s.t + 1, s.f_initial}, 0.0, false};
  if (!s.edge_stub.has_value()) {
    if (s.graph.degree(action) >= s.graph.live_node_count() - 1)
      throw std::invalid_argument("step: node " + std::to_string(action) +
                                  " is already connected to every other node");
    out.next.edge_stub = action;
  } else {
    const int stub = *s.edge_stub;
    if (action == stub || s.graph.has_edge(stub, action))
      throw std::invalid_argument("step: (" + std::to_string(stub) + ", " +
                                  std::to_string(action) + ") is not an addable edge");
    out.next.graph.add_edge(NodePair::of(stub, action));
  }

  out.terminal = is_terminal(out.next, cfg);
  if (out.terminal) {
    const double f_final =
        estimate_robustness(out.next.graph, strategy_for(cfg.objective),
                            cfg.resolve_n_sims(out.next.graph), rng, cfg.workers)
            .mean;
    out.reward = f_final - s.f_initial;
  }
  return out;
}

EpisodeResult run_episode(const Graph& g0, const Policy& policy, const EpisodeConfig& cfg,
                          Rng& rng, std::vector<StepRecord>* trace) {
  EnvState state = reset_env(g0, cfg, rng);
  double total = 0.0;
  while (!is_terminal(state, cfg)) {
    const std::vector<int> moves = valid_actions(state, cfg);
    const int action = policy(state, moves, rng);
    StepOutcome out = step(state, action, cfg, rng);
    if (trace) trace->push_back(StepRecord{state.t, state.edge_stub, action, out.reward});
    total += out.reward;
    state = std::move(out.next);
  }
  return EpisodeResult{std::move(state.graph), total};
}

}  // namespace robustnet
