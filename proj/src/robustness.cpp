#include "robustnet/robustness.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

#include "robustnet/parallel.hpp"

namespace robustnet {

namespace {

struct PercolationScratch {
  std::vector<int> pos;     // position of node in perm, -1 if absent
  std::vector<int> parent;  // union-find forest over added nodes
  std::vector<int> size;
};

int uf_find(std::vector<int>& parent, int x) {
  while (parent[x] != x) {
    parent[x] = parent[parent[x]];
    x = parent[x];
  }
  return x;
}

bool uf_unite(PercolationScratch& s, int a, int b) {
  a = uf_find(s.parent, a);
  b = uf_find(s.parent, b);
  if (a == b) return false;
  if (s.size[a] < s.size[b]) std::swap(a, b);
  s.parent[b] = a;
  s.size[a] += s.size[b];
  return true;
}

// Number of removals at the first disconnection, or 0 if no prefix of
// removals disconnects g. Runs the process backwards: nodes are inserted in
// reverse perm order and merged with already-inserted neighbours, so the
// component count of every suffix comes out of one O(n + m) pass.
int critical_prefix(const Graph& g, std::span<const int> perm, PercolationScratch& s) {
  const int label_count = g.node_count();
  const int n = g.live_node_count();
  if (static_cast<int>(perm.size()) != n)
    throw std::invalid_argument("critical_fraction: permutation size " +
                                std::to_string(perm.size()) + " != live node count " +
                                std::to_string(n));

  s.pos.assign(static_cast<std::size_t>(label_count), -1);
  for (int k = 0; k < n; ++k) {
    const int v = perm[static_cast<std::size_t>(k)];
    if (v < 0 || v >= label_count || !g.is_alive(v))
      throw std::invalid_argument("critical_fraction: permutation entry " + std::to_string(v) +
                                  " is not a live node");
    if (s.pos[static_cast<std::size_t>(v)] != -1)
      throw std::invalid_argument("critical_fraction: duplicate permutation entry " +
                                  std::to_string(v));
    s.pos[static_cast<std::size_t>(v)] = k;
  }

  s.parent.assign(static_cast<std::size_t>(label_count), -1);
  s.size.assign(static_cast<std::size_t>(label_count), 0);

  int components = 0;
  int first_disconnection = 0;  // j of the first disconnected residual
  for (int k = n - 1; k >= 0; --k) {
    const int v = perm[static_cast<std::size_t>(k)];
    s.parent[static_cast<std::size_t>(v)] = v;
    s.size[static_cast<std::size_t>(v)] = 1;
    ++components;
    for (int u : g.neighbors(v)) {
      if (s.pos[static_cast<std::size_t>(u)] > k && uf_unite(s, v, u)) --components;
    }
    // The residual after removing perm[0..k-1] is exactly the nodes added
    // so far; k >= 1 means at least one node was actually removed.
    if (k >= 1 && components > 1) first_disconnection = k;
  }
  if (components != 1)
    throw std::invalid_argument("critical_fraction: input graph is disconnected");
  return first_disconnection;
}

}  // namespace

std::vector<int> generate_permutation(const Graph& g, RemovalStrategy strategy, Rng& rng) {
  std::vector<int> order = g.live_nodes();
  if (strategy.kind == RemovalKind::Random) {
    rng.shuffle(order);
    return order;
  }
  // Targeted: degrees taken once from g, not recomputed during removal.
  if (strategy.tie_break == TieBreak::UniformRandom) {
    rng.shuffle(order);
  } else {
    std::sort(order.begin(), order.end(), std::greater<int>());
  }
  std::stable_sort(order.begin(), order.end(),
                   [&g](int a, int b) { return g.degree(a) > g.degree(b); });
  return order;
}

double critical_fraction(const Graph& g, std::span<const int> perm) {
  PercolationScratch scratch;
  const int j = critical_prefix(g, perm, scratch);
  if (j == 0) return 1.0;
  return static_cast<double>(j) / static_cast<double>(g.live_node_count());
}

RobustnessEstimate estimate_robustness(const Graph& g, RemovalStrategy strategy, int n_sims,
                                       Rng& rng, int workers) {
  if (n_sims < 1) throw std::invalid_argument("estimate_robustness: n_sims must be >= 1");
  if (!g.is_connected())
    throw std::invalid_argument("estimate_robustness: input graph is disconnected");

  const std::uint64_t master = rng.next_u64();
  const int n = g.live_node_count();
  std::vector<double> values(static_cast<std::size_t>(n_sims));

  parallel_for(static_cast<std::size_t>(n_sims), workers, [&](std::size_t i) {
    thread_local PercolationScratch scratch;
    Rng sim_rng(Rng::derive(master, static_cast<std::uint64_t>(i)));
    const std::vector<int> perm = generate_permutation(g, strategy, sim_rng);
    const int j = critical_prefix(g, perm, scratch);
    values[i] = j == 0 ? 1.0 : static_cast<double>(j) / static_cast<double>(n);
  });

  // All draws identical: report the common value exactly, not a rounded sum.
  const auto [mn, mx] = std::minmax_element(values.begin(), values.end());
  if (*mn == *mx) return {values.front(), 0.0, n_sims};

  double sum = 0.0;
  for (double v : values) sum += v;
  const double mean = sum / static_cast<double>(n_sims);
  double ss = 0.0;
  for (double v : values) {
    const double d = v - mean;
    ss += d * d;
  }
  const double std_dev = std::sqrt(ss / static_cast<double>(n_sims - 1));
  return {mean, std_dev / std::sqrt(static_cast<double>(n_sims)), n_sims};
}

double exact_robustness(const Graph& g, RemovalStrategy strategy, int max_nodes) {
  const int n = g.live_node_count();
  if (n > max_nodes)
    throw std::invalid_argument("exact_robustness: " + std::to_string(n) +
                                " live nodes exceeds enumeration limit " +
                                std::to_string(max_nodes));
  if (!g.is_connected())
    throw std::invalid_argument("exact_robustness: input graph is disconnected");

  PercolationScratch scratch;
  long long numerator = 0;  // sum over orders of (j or n)
  long long orders = 0;

  auto accumulate = [&](std::span<const int> perm) {
    const int j = critical_prefix(g, perm, scratch);
    numerator += j == 0 ? n : j;
    ++orders;
  };

  if (strategy.kind == RemovalKind::Random) {
    std::vector<int> order = g.live_nodes();
    do {
      accumulate(order);
    } while (std::next_permutation(order.begin(), order.end()));
  } else if (strategy.tie_break == TieBreak::DescendingLabel) {
    std::vector<int> order = g.live_nodes();
    std::sort(order.begin(), order.end(), std::greater<int>());
    std::stable_sort(order.begin(), order.end(),
                     [&g](int a, int b) { return g.degree(a) > g.degree(b); });
    accumulate(order);
  } else {
    // Targeted with uniform tie-break: every order consistent with the
    // degree ranking is equally likely, i.e. the product of permutations
    // within each equal-degree group.
    std::vector<int> live = g.live_nodes();
    std::stable_sort(live.begin(), live.end(),
                     [&g](int a, int b) { return g.degree(a) > g.degree(b); });
    std::vector<std::vector<int>> groups;
    for (int v : live) {
      if (groups.empty() || g.degree(groups.back().front()) != g.degree(v)) groups.push_back({});
      groups.back().push_back(v);
    }
    std::vector<int> perm;
    perm.reserve(static_cast<std::size_t>(n));
    std::function<void(std::size_t)> rec = [&](std::size_t gi) {
      if (gi == groups.size()) {
        accumulate(perm);
        return;
      }
      std::vector<int> grp = groups[gi];  // ascending: next_permutation cycles all orders
      do {
        perm.insert(perm.end(), grp.begin(), grp.end());
        rec(gi + 1);
        perm.resize(perm.size() - grp.size());
      } while (std::next_permutation(grp.begin(), grp.end()));
    };
    rec(0);
  }

  return static_cast<double>(numerator) / (static_cast<double>(orders) * static_cast<double>(n));
}

}  // namespace robustnet
