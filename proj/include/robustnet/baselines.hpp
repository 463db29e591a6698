#pragma once

#include <functional>

#include "robustnet/graph.hpp"
#include "robustnet/mdp.hpp"
#include "robustnet/rng.hpp"

namespace robustnet {

enum class BaselineKind { Random, Greedy, Ldp, Fv, ERes };

// Uniform draw over the graph's absent edges.
NodePair select_edge_random(const Graph& g, Rng& rng);

// Absent edge minimizing degree(u) * degree(v); ties lexicographic.
NodePair select_edge_ldp(const Graph& g);

// Absent edge maximizing |fiedler[u] - fiedler[v]|; ties lexicographic.
NodePair select_edge_fv(const Graph& g);

// Absent edge maximizing effective resistance; ties lexicographic.
NodePair select_edge_eres(const Graph& g);

// Absent edge whose addition maximizes value_of(g + e); ties go to the
// lexicographically first pair. value_of must be deterministic per call.
NodePair select_edge_greedy_with(const Graph& g,
                                 const std::function<double(const Graph&)>& value_of);

// Greedy one-step lookahead on the Monte Carlo objective estimate. Each
// candidate edge gets an independent stream derived from one master draw,
// so the choice is reproducible for any worker count.
NodePair select_edge_greedy(const Graph& g, Objective objective, int n_sims, Rng& rng,
                            int workers = -1);

using EdgeSelector = std::function<NodePair(const Graph&, Rng&)>;

EdgeSelector selector_for(BaselineKind kind, Objective objective, int n_sims, int workers = -1);

// Adapts an edge selector to the two-selections-per-edge episode protocol:
// on even steps it picks an edge and plays its first endpoint, on odd steps
// it plays the remembered second endpoint.
Policy edge_policy(EdgeSelector selector);

EpisodeResult run_baseline(const Graph& g0, BaselineKind kind, const EpisodeConfig& cfg, Rng& rng);

}  // namespace robustnet
