#pragma once

#include <string>
#include <vector>

#include "robustnet/graph.hpp"
#include "robustnet/rng.hpp"

namespace robustnet {

enum class GraphFamily { ER, BA };

struct GeneratorSpec {
  GraphFamily family = GraphFamily::BA;
  int n = 20;
  double er_edge_fraction = 0.20;  // edges as a fraction of n*(n-1)/2
  int ba_m = 2;                    // edges per arriving node

  void validate() const;
};

// Number of edges an ER draw gets: round(fraction * n*(n-1)/2).
int er_edge_count(int n, double fraction);

// G(n, m): m distinct edges uniform over all edge sets; redrawn until
// connected (throws after 100000 rejected draws).
Graph generate_er_connected(int n, double edge_fraction, Rng& rng);

// Barabasi-Albert: seed clique on {0..m-1}, then nodes m..n-1 attach to m
// distinct existing nodes drawn proportionally to their current degree.
Graph generate_ba(int n, int m, Rng& rng);

Graph generate(const GeneratorSpec& spec, Rng& rng);

struct PreparedGraph {
  Graph graph;
  std::vector<int> original_labels;  // original_labels[new] = label in the input file
};

// Reads an edge list, keeps the largest connected component (ties broken by
// smallest member label), relabels it contiguously preserving label order,
// and enforces min_n <= |V| <= max_n.
PreparedGraph load_and_prepare(const std::string& path, int min_n = 20, int max_n = 50);

// CSV "new_label,original_label" mapping rows, header included.
void write_label_map_csv(const PreparedGraph& pg, const std::string& path);

}  // namespace robustnet
