#include "robustnet/baselines.hpp"

#include <cmath>
#include <memory>
#include <stdexcept>
#include <vector>

#include "robustnet/parallel.hpp"
#include "robustnet/spectral.hpp"

namespace robustnet {

namespace {

std::vector<NodePair> candidates_or_throw(const Graph& g) {
  std::vector<NodePair> c = g.non_edges();
  if (c.empty()) throw std::invalid_argument("edge selection: graph is already complete");
  return c;
}

// Lexicographically first argmax of score over candidates (candidates are
// already sorted, so the first strict improvement wins).
template <class Score>
NodePair best_pair(const std::vector<NodePair>& candidates, Score&& score) {
  NodePair best = candidates.front();
  double best_score = score(best);
  for (std::size_t i = 1; i < candidates.size(); ++i) {
    const double s = score(candidates[i]);
    if (s > best_score) {
      best_score = s;
      best = candidates[i];
    }
  }
  return best;
}

}  // namespace

NodePair select_edge_random(const Graph& g, Rng& rng) {
  const std::vector<NodePair> c = candidates_or_throw(g);
  return c[static_cast<std::size_t>(rng.uniform_below(c.size()))];
}

NodePair select_edge_ldp(const Graph& g) {
  const std::vector<NodePair> c = candidates_or_throw(g);
  // Minimize the degree product: maximize its negation.
  return best_pair(c, [&g](NodePair e) {
    return -static_cast<double>(g.degree(e.u)) * static_cast<double>(g.degree(e.v));
  });
}

NodePair select_edge_fv(const Graph& g) {
  const std::vector<NodePair> c = candidates_or_throw(g);
  const Vector fv = fiedler_vector(g);
  return best_pair(c, [&fv](NodePair e) { return std::fabs(fv(e.u) - fv(e.v)); });
}

NodePair select_edge_eres(const Graph& g) {
  const std::vector<NodePair> c = candidates_or_throw(g);
  const Matrix lpinv = laplacian_pseudoinverse(g);
  return best_pair(c, [&lpinv](NodePair e) { return effective_resistance(lpinv, e.u, e.v); });
}

NodePair select_edge_greedy_with(const Graph& g,
                                 const std::function<double(const Graph&)>& value_of) {
  const std::vector<NodePair> c = candidates_or_throw(g);
  return best_pair(c, [&](NodePair e) { return value_of(g.with_edge(e)); });
}

NodePair select_edge_greedy(const Graph& g, Objective objective, int n_sims, Rng& rng,
                            int workers) {
  const std::vector<NodePair> c = candidates_or_throw(g);
  const std::uint64_t master = rng.next_u64();
  const RemovalStrategy strategy = strategy_for(objective);

  std::vector<double> value(c.size());
  parallel_for(c.size(), workers, [&](std::size_t i) {
    Rng cand_rng(Rng::derive(master, static_cast<std::uint64_t>(i)));
    value[i] = estimate_robustness(g.with_edge(c[i]), strategy, n_sims, cand_rng, 1).mean;
  });

  std::size_t best = 0;
  for (std::size_t i = 1; i < c.size(); ++i)
    if (value[i] > value[best]) best = i;
  return c[best];
}

EdgeSelector selector_for(BaselineKind kind, Objective objective, int n_sims, int workers) {
  switch (kind) {
    case BaselineKind::Random:
      return [](const Graph& g, Rng& rng) { return select_edge_random(g, rng); };
    case BaselineKind::Ldp:
      return [](const Graph& g, Rng&) { return select_edge_ldp(g); };
    case BaselineKind::Fv:
      return [](const Graph& g, Rng&) { return select_edge_fv(g); };
    case BaselineKind::ERes:
      return [](const Graph& g, Rng&) { return select_edge_eres(g); };
    case BaselineKind::Greedy:
      return [objective, n_sims, workers](const Graph& g, Rng& rng) {
        return select_edge_greedy(g, objective, n_sims, rng, workers);
      };
  }
  throw std::logic_error("selector_for: unknown baseline");
}

Policy edge_policy(EdgeSelector selector) {
  auto pending = std::make_shared<std::optional<int>>();
  return [selector = std::move(selector), pending](const EnvState& s,
                                                   const std::vector<int>& moves, Rng& rng) {
    if (!s.edge_stub.has_value()) {
      const NodePair e = selector(s.graph, rng);
      *pending = e.v;
      return e.u;
    }
    if (!pending->has_value())
      throw std::logic_error("edge_policy: stub pending but no stored endpoint");
    const int second = **pending;
    pending->reset();
    if (!std::binary_search(moves.begin(), moves.end(), second))
      throw std::logic_error("edge_policy: stored endpoint is no longer valid");
    return second;
  };
}

EpisodeResult run_baseline(const Graph& g0, BaselineKind kind, const EpisodeConfig& cfg,
                           Rng& rng) {
  return run_episode(
      g0, edge_policy(selector_for(kind, cfg.objective, cfg.resolve_n_sims(g0), cfg.workers)),
      cfg, rng);
}

}  // namespace robustnet
