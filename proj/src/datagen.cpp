#include "robustnet/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <stdexcept>

#include "robustnet/graph_io.hpp"

namespace robustnet {

void GeneratorSpec::validate() const {
  if (n < 2) throw std::invalid_argument("GeneratorSpec: n must be >= 2");
  if (family == GraphFamily::ER) {
    if (er_edge_fraction <= 0.0 || er_edge_fraction > 1.0)
      throw std::invalid_argument("GeneratorSpec: er_edge_fraction outside (0, 1]");
  } else {
    if (ba_m < 1 || ba_m >= n)
      throw std::invalid_argument("GeneratorSpec: ba_m must satisfy 1 <= m < n");
  }
}

int er_edge_count(int n, double fraction) {
  const double complete = static_cast<double>(n) * (n - 1) / 2.0;
  return static_cast<int>(std::llround(fraction * complete));
}

Graph generate_er_connected(int n, double edge_fraction, Rng& rng) {
  GeneratorSpec spec{GraphFamily::ER, n, edge_fraction, 1};
  spec.validate();
  const int m = er_edge_count(n, edge_fraction);
  if (m < n - 1)
    throw std::invalid_argument("generate_er_connected: " + std::to_string(m) +
                                " edges cannot connect " + std::to_string(n) + " nodes");

  std::vector<NodePair> all_pairs;
  all_pairs.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) all_pairs.push_back(NodePair{u, v});

  constexpr int kMaxAttempts = 100000;
  std::vector<std::size_t> idx(all_pairs.size());
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    // Partial Fisher-Yates: the first m slots become a uniform m-subset.
    for (int i = 0; i < m; ++i) {
      const std::size_t j =
          static_cast<std::size_t>(i) +
          static_cast<std::size_t>(rng.uniform_below(idx.size() - static_cast<std::size_t>(i)));
      std::swap(idx[static_cast<std::size_t>(i)], idx[j]);
    }
    Graph g(n);
    for (int i = 0; i < m; ++i) g.add_edge(all_pairs[idx[static_cast<std::size_t>(i)]]);
    if (g.is_connected()) return g;
  }
  throw std::runtime_error("generate_er_connected: no connected draw in 100000 attempts");
}

Graph generate_ba(int n, int m, Rng& rng) {
  GeneratorSpec spec{GraphFamily::BA, n, 0.2, m};
  spec.validate();

  Graph g(n);
  for (int u = 0; u < m; ++u)
    for (int v = u + 1; v < m; ++v) g.add_edge(NodePair{u, v});

  std::vector<int> chosen;
  for (int v = m; v < n; ++v) {
    // Attachment weights are the degrees before v arrives.
    std::vector<long long> cumulative(static_cast<std::size_t>(v));
    long long total = 0;
    for (int u = 0; u < v; ++u) {
      total += g.degree(u);
      cumulative[static_cast<std::size_t>(u)] = total;
    }

    chosen.clear();
    while (static_cast<int>(chosen.size()) < m) {
      int pick;
      if (total == 0) {
        // Degenerate seed (m = 1): no degrees yet, fall back to uniform.
        pick = static_cast<int>(rng.uniform_below(static_cast<std::uint64_t>(v)));
      } else {
        const long long r = static_cast<long long>(rng.uniform_below(static_cast<std::uint64_t>(total)));
        pick = static_cast<int>(
            std::upper_bound(cumulative.begin(), cumulative.end(), r) - cumulative.begin());
      }
      if (std::find(chosen.begin(), chosen.end(), pick) == chosen.end()) chosen.push_back(pick);
    }
    for (int u : chosen) g.add_edge(NodePair::of(u, v));
  }
  return g;
}

Graph generate(const GeneratorSpec& spec, Rng& rng) {
  spec.validate();
  return spec.family == GraphFamily::ER
             ? generate_er_connected(spec.n, spec.er_edge_fraction, rng)
             : generate_ba(spec.n, spec.ba_m, rng);
}

PreparedGraph load_and_prepare(const std::string& path, int min_n, int max_n) {
  const Graph raw = read_edge_list_file(path);
  const int n = raw.node_count();

  // Largest connected component; ties keep the one found first, i.e. the
  // one containing the smallest label.
  std::vector<int> component(static_cast<std::size_t>(n), -1);
  int best_root = -1, best_size = 0, comp_id = 0;
  std::vector<int> stack;
  for (int s = 0; s < n; ++s) {
    if (component[static_cast<std::size_t>(s)] != -1 || !raw.is_alive(s)) continue;
    int size = 0;
    component[static_cast<std::size_t>(s)] = comp_id;
    stack.push_back(s);
    while (!stack.empty()) {
      const int v = stack.back();
      stack.pop_back();
      ++size;
      for (int u : raw.neighbors(v)) {
        if (component[static_cast<std::size_t>(u)] == -1) {
          component[static_cast<std::size_t>(u)] = comp_id;
          stack.push_back(u);
        }
      }
    }
    if (size > best_size) {
      best_size = size;
      best_root = comp_id;
    }
    ++comp_id;
  }

  if (best_size < min_n || best_size > max_n)
    throw std::runtime_error("load_and_prepare: largest component of " + path + " has " +
                             std::to_string(best_size) + " nodes, outside [" +
                             std::to_string(min_n) + ", " + std::to_string(max_n) + "]");

  PreparedGraph out{Graph(best_size), {}};
  out.original_labels.reserve(static_cast<std::size_t>(best_size));
  std::vector<int> new_label(static_cast<std::size_t>(n), -1);
  for (int v = 0; v < n; ++v) {
    if (component[static_cast<std::size_t>(v)] == best_root) {
      new_label[static_cast<std::size_t>(v)] = static_cast<int>(out.original_labels.size());
      out.original_labels.push_back(v);
    }
  }
  for (int v = 0; v < n; ++v) {
    if (component[static_cast<std::size_t>(v)] != best_root) continue;
    for (int u : raw.neighbors(v)) {
      if (v < u)
        out.graph.add_edge(NodePair{new_label[static_cast<std::size_t>(v)],
                                    new_label[static_cast<std::size_t>(u)]});
    }
  }
  return out;
}

void write_label_map_csv(const PreparedGraph& pg, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open file for writing: " + path);
  out << "new_label,original_label\n";
  for (std::size_t i = 0; i < pg.original_labels.size(); ++i)
    out << i << ',' << pg.original_labels[i] << '\n';
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace robustnet
