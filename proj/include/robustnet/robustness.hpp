#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "robustnet/graph.hpp"
#include "robustnet/rng.hpp"

namespace robustnet {

enum class RemovalKind { Random, Targeted };

// How equal-degree nodes are ordered under targeted removal.
enum class TieBreak { UniformRandom, DescendingLabel };

struct RemovalStrategy {
  RemovalKind kind = RemovalKind::Random;
  TieBreak tie_break = TieBreak::UniformRandom;

  static RemovalStrategy random() { return {RemovalKind::Random, TieBreak::UniformRandom}; }
  static RemovalStrategy targeted(TieBreak tb = TieBreak::UniformRandom) {
    return {RemovalKind::Targeted, tb};
  }
};

// Removal order over the live nodes of g.
//  Random:   uniform permutation.
//  Targeted: descending by degree in g (degrees are NOT recomputed as nodes
//            drop out); ties broken per strategy.tie_break.
std::vector<int> generate_permutation(const Graph& g, RemovalStrategy strategy, Rng& rng);

// Fraction j/n where j is the number of nodes removed (in perm order) when
// the residual graph first has more than one connected component; 1.0 if no
// prefix of removals ever disconnects it. Requires g connected and perm a
// permutation of its live nodes. O(n + m) via reverse union-find.
double critical_fraction(const Graph& g, std::span<const int> perm);

struct RobustnessEstimate {
  double mean;
  double std_error;  // sample std / sqrt(n_sims); 0 when all draws agree
  int n_sims;
};

// Monte Carlo estimate of the expected critical fraction under the given
// removal strategy. Simulation i runs on an independent stream derived from
// one master draw off rng, so results are identical for any worker count.
RobustnessEstimate estimate_robustness(const Graph& g, RemovalStrategy strategy, int n_sims,
                                       Rng& rng, int workers = -1);

// Exact expectation by enumeration; live node count must be <= max_nodes.
// Accumulates in integer arithmetic, so equal-by-construction cases compare
// exactly (e.g. 7/9 comes out as the double nearest 7/9).
double exact_robustness(const Graph& g, RemovalStrategy strategy, int max_nodes = 8);

}  // namespace robustnet
