#pragma once

#include <compare>
#include <span>
#include <vector>

namespace robustnet {

// Unordered node pair stored canonically with u < v.
struct NodePair {
  int u;
  int v;

  static NodePair of(int a, int b);
  auto operator<=>(const NodePair&) const = default;
};

// Simple undirected graph over a fixed label space {0, ..., N-1}.
// Node removal is logical: a removed node stays a valid label but is no
// longer alive, and it is pruned from every adjacency list, so degree(v)
// always equals the number of live neighbors. Adjacency lists are kept
// sorted ascending.
class Graph {
public:
  explicit Graph(int n);
  static Graph from_edges(int n, const std::vector<NodePair>& edges);

  int node_count() const { return static_cast<int>(adj_.size()); }
  int live_node_count() const { return live_count_; }
  int edge_count() const { return edge_count_; }

  bool is_alive(int v) const;
  int degree(int v) const;
  std::span<const int> neighbors(int v) const;
  bool has_edge(int u, int v) const;

  // True when every pair of live nodes is adjacent.
  bool complete() const;

  void add_edge(NodePair e);
  Graph with_edge(NodePair e) const;

  void remove_node(int v);
  Graph without_node(int v) const;

  std::vector<int> live_nodes() const;
  std::vector<NodePair> edges() const;          // sorted lexicographically
  std::vector<NodePair> non_edges() const;      // live non-adjacent pairs, sorted

  int connected_component_count() const;
  bool is_connected() const;                    // live part nonempty and one component

  bool operator==(const Graph& other) const;

private:
  void check_label(int v) const;
  void check_live(int v) const;

  std::vector<std::vector<int>> adj_;
  std::vector<char> alive_;
  int edge_count_ = 0;
  int live_count_ = 0;
};

// Small named families; handy for experiments and exact checks.
Graph path_graph(int n);
Graph cycle_graph(int n);
Graph star_graph(int n);      // node 0 is the center
Graph complete_graph(int n);

}  // namespace robustnet
