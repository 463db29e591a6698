#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "robustnet/graph.hpp"
#include "robustnet/robustness.hpp"
#include "robustnet/rng.hpp"

namespace robustnet {

enum class Objective { RandomRemoval, TargetedRemoval };

// Removal strategy an objective is scored with.
RemovalStrategy strategy_for(Objective objective);

struct EpisodeConfig {
  Objective objective = Objective::RandomRemoval;
  int budget = 1;   // edges to add (L); episode lasts 2L node selections
  int n_sims = 0;   // Monte Carlo draws per estimate; 0 means 2 * |V|
  int workers = -1; // threads for the estimates; <= 0 means default

  int resolve_n_sims(const Graph& g) const;
  void validate(const Graph& g0) const;
};

// Edge budget for a percentage tau of the complete graph's edge count.
int budget_from_edge_percent(double tau_percent, int n);

struct EnvState {
  Graph graph;
  std::optional<int> edge_stub;  // first endpoint, present at odd t
  int t = 0;                     // node selections made so far
  double f_initial = 0.0;        // objective estimate of the start graph
};

// Nodes selectable from a graph and pending stub: any live node that still
// has a non-neighbour when no stub is pending, otherwise the stub's live
// non-neighbours. Sorted ascending.
std::vector<int> valid_moves(const Graph& g, std::optional<int> stub);

// valid_moves plus the terminal guard (throws on a finished episode).
std::vector<int> valid_actions(const EnvState& s, const EpisodeConfig& cfg);

bool is_terminal(const EnvState& s, const EpisodeConfig& cfg);

// Start state: the graph untouched, t = 0, f_initial freshly estimated.
EnvState reset_env(const Graph& g0, const EpisodeConfig& cfg, Rng& rng);

struct StepOutcome {
  EnvState next;
  double reward;  // 0 until the terminal step; then F(final) - F(initial)
  bool terminal;
};

// One node selection. Odd steps record a stub; even steps add the edge
// (stub, action). The terminal reward uses a fresh Monte Carlo estimate.
StepOutcome step(const EnvState& s, int action, const EpisodeConfig& cfg, Rng& rng);

struct StepRecord {
  int t;                    // time index before the move
  std::optional<int> stub;  // pending stub before the move
  int action;
  double reward;
};

using Policy = std::function<int(const EnvState&, const std::vector<int>&, Rng&)>;

struct EpisodeResult {
  Graph final_graph;
  double total_reward;
};

EpisodeResult run_episode(const Graph& g0, const Policy& policy, const EpisodeConfig& cfg,
                          Rng& rng, std::vector<StepRecord>* trace = nullptr);

}  // namespace robustnet
