#pragma once

#include <iosfwd>
#include <string>

#include "robustnet/graph.hpp"

namespace robustnet {

// Edge-list text format: one "u v" pair of non-negative integers per line,
// whitespace separated; blank lines and lines starting with '#' are ignored.
// Node count is inferred as (max label + 1). Parse failures report the line.
Graph read_edge_list(std::istream& in);
Graph read_edge_list_file(const std::string& path);

// Writes edges as "u v" lines (u < v), sorted. Round-trips through
// read_edge_list for graphs whose highest label has at least one edge.
void write_edge_list(const Graph& g, std::ostream& out);
void write_edge_list_file(const Graph& g, const std::string& path);

}  // namespace robustnet
