#include "robustnet/graph_io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace robustnet {

namespace {

[[noreturn]] void parse_fail(long line_no, const std::string& why) {
  throw std::runtime_error("edge list parse error at line " + std::to_string(line_no) + ": " + why);
}

}  // namespace

Graph read_edge_list(std::istream& in) {
  std::vector<NodePair> pairs;
  std::vector<long> lines;
  int max_label = -1;
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string tok;
    if (!(ls >> tok) || tok[0] == '#') continue;

    long long u, v;
    std::istringstream pair_stream(line);
    if (!(pair_stream >> u >> v)) parse_fail(line_no, "expected two integers, got '" + line + "'");
    std::string extra;
    if (pair_stream >> extra && extra[0] != '#')
      parse_fail(line_no, "trailing token '" + extra + "'");
    if (u < 0 || v < 0) parse_fail(line_no, "negative node label");
    if (u == v) parse_fail(line_no, "self loop on node " + std::to_string(u));
    if (u > 1'000'000'000 || v > 1'000'000'000) parse_fail(line_no, "node label too large");

    pairs.push_back(NodePair::of(static_cast<int>(u), static_cast<int>(v)));
    lines.push_back(line_no);
    max_label = std::max(max_label, static_cast<int>(std::max(u, v)));
  }
  if (max_label < 0) throw std::runtime_error("edge list parse error: no edges found");

  Graph g(max_label + 1);
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    try {
      g.add_edge(pairs[i]);
    } catch (const std::invalid_argument&) {
      parse_fail(lines[i], "duplicate edge (" + std::to_string(pairs[i].u) + ", " +
                               std::to_string(pairs[i].v) + ")");
    }
  }
  return g;
}

Graph read_edge_list_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open edge list file: " + path);
  return read_edge_list(in);
}

void write_edge_list(const Graph& g, std::ostream& out) {
  for (const NodePair& e : g.edges()) out << e.u << ' ' << e.v << '\n';
}

void write_edge_list_file(const Graph& g, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open file for writing: " + path);
  write_edge_list(g, out);
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace robustnet
