#include "robustnet/graph.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace robustnet {

NodePair NodePair::of(int a, int b) {
  if (a == b) throw std::invalid_argument("NodePair: self loop (" + std::to_string(a) + ")");
  if (a < 0 || b < 0) throw std::invalid_argument("NodePair: negative node label");
  return a < b ? NodePair{a, b} : NodePair{b, a};
}

Graph::Graph(int n) {
  if (n < 1) throw std::invalid_argument("Graph: node count must be >= 1");
  adj_.resize(static_cast<std::size_t>(n));
  alive_.assign(static_cast<std::size_t>(n), 1);
  live_count_ = n;
}

Graph Graph::from_edges(int n, const std::vector<NodePair>& edges) {
  Graph g(n);
  for (const NodePair& e : edges) g.add_edge(e);
  return g;
}

void Graph::check_label(int v) const {
  if (v < 0 || v >= node_count())
    throw std::out_of_range("Graph: node label " + std::to_string(v) + " outside [0, " +
                            std::to_string(node_count()) + ")");
}

void Graph::check_live(int v) const {
  check_label(v);
  if (!alive_[static_cast<std::size_t>(v)])
    throw std::invalid_argument("Graph: node " + std::to_string(v) + " has been removed");
}

bool Graph::is_alive(int v) const {
  check_label(v);
  return alive_[static_cast<std::size_t>(v)] != 0;
}

int Graph::degree(int v) const {
  check_live(v);
  return static_cast<int>(adj_[static_cast<std::size_t>(v)].size());
}

std::span<const int> Graph::neighbors(int v) const {
  check_live(v);
  const auto& nb = adj_[static_cast<std::size_t>(v)];
  return {nb.data(), nb.size()};
}

bool Graph::has_edge(int u, int v) const {
  check_live(u);
  check_live(v);
  if (u == v) return false;
  const auto& nb = adj_[static_cast<std::size_t>(u)];
  return std::binary_search(nb.begin(), nb.end(), v);
}

bool Graph::complete() const {
  const long long n = live_count_;
  return 2LL * edge_count_ == n * (n - 1);
}

void Graph::add_edge(NodePair e) {
  check_live(e.u);
  check_live(e.v);
  auto& nu = adj_[static_cast<std::size_t>(e.u)];
  auto it = std::lower_bound(nu.begin(), nu.end(), e.v);
  if (it != nu.end() && *it == e.v)
    throw std::invalid_argument("Graph: edge (" + std::to_string(e.u) + ", " +
                                std::to_string(e.v) + ") already present");
  nu.insert(it, e.v);
  auto& nv = adj_[static_cast<std::size_t>(e.v)];
  nv.insert(std::lower_bound(nv.begin(), nv.end(), e.u), e.u);
  ++edge_count_;
}

Graph Graph::with_edge(NodePair e) const {
  Graph g = *this;
  g.add_edge(e);
  return g;
}

void Graph::remove_node(int v) {
  check_live(v);
  auto& nb = adj_[static_cast<std::size_t>(v)];
  for (int u : nb) {
    auto& nu = adj_[static_cast<std::size_t>(u)];
    nu.erase(std::lower_bound(nu.begin(), nu.end(), v));
  }
  edge_count_ -= static_cast<int>(nb.size());
  nb.clear();
  nb.shrink_to_fit();
  alive_[static_cast<std::size_t>(v)] = 0;
  --live_count_;
}

Graph Graph::without_node(int v) const {
  Graph g = *this;
  g.remove_node(v);
  return g;
}

std::vector<int> Graph::live_nodes() const {
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(live_count_));
  for (int v = 0; v < node_count(); ++v)
    if (alive_[static_cast<std::size_t>(v)]) out.push_back(v);
  return out;
}

std::vector<NodePair> Graph::edges() const {
  std::vector<NodePair> out;
  out.reserve(static_cast<std::size_t>(edge_count_));
  for (int v = 0; v < node_count(); ++v) {
    if (!alive_[static_cast<std::size_t>(v)]) continue;
    for (int u : adj_[static_cast<std::size_t>(v)])
      if (v < u) out.push_back(NodePair{v, u});
  }
  return out;
}

std::vector<NodePair> Graph::non_edges() const {
  std::vector<NodePair> out;
  const std::vector<int> live = live_nodes();
  for (std::size_t i = 0; i < live.size(); ++i) {
    const auto& nb = adj_[static_cast<std::size_t>(live[i])];
    for (std::size_t j = i + 1; j < live.size(); ++j) {
      if (!std::binary_search(nb.begin(), nb.end(), live[j]))
        out.push_back(NodePair{live[i], live[j]});
    }
  }
  return out;
}

int Graph::connected_component_count() const {
  const int n = node_count();
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  std::vector<int> stack;
  int components = 0;
  for (int s = 0; s < n; ++s) {
    if (!alive_[static_cast<std::size_t>(s)] || seen[static_cast<std::size_t>(s)]) continue;
    ++components;
    seen[static_cast<std::size_t>(s)] = 1;
    stack.push_back(s);
    while (!stack.empty()) {
      const int v = stack.back();
      stack.pop_back();
      for (int u : adj_[static_cast<std::size_t>(v)]) {
        if (!seen[static_cast<std::size_t>(u)]) {
          seen[static_cast<std::size_t>(u)] = 1;
          stack.push_back(u);
        }
      }
    }
  }
  return components;
}

bool Graph::is_connected() const {
  return live_count_ > 0 && connected_component_count() == 1;
}

bool Graph::operator==(const Graph& other) const {
  return alive_ == other.alive_ && adj_ == other.adj_;
}

Graph path_graph(int n) {
  Graph g(n);
  for (int v = 0; v + 1 < n; ++v) g.add_edge(NodePair::of(v, v + 1));
  return g;
}

Graph cycle_graph(int n) {
  if (n < 3) throw std::invalid_argument("cycle_graph: need n >= 3");
  Graph g = path_graph(n);
  g.add_edge(NodePair::of(0, n - 1));
  return g;
}

Graph star_graph(int n) {
  if (n < 2) throw std::invalid_argument("star_graph: need n >= 2");
  Graph g(n);
  for (int v = 1; v < n; ++v) g.add_edge(NodePair::of(0, v));
  return g;
}

Graph complete_graph(int n) {
  Graph g(n);
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) g.add_edge(NodePair{u, v});
  return g;
}

}  // namespace robustnet
