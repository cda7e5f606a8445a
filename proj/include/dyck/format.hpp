#pragma once

#include <iosfwd>
#include <string>

#include "dyck/graph.hpp"

namespace dyck {

/// Parses the line-oriented `dyckgraph 1` format:
///
///   dyckgraph 1
///   k <int>
///   mode general|bidirected
///   node <name> [method=<int>]
///   edge <src> <dst> <label>     # label in {eps, o<i>, c<i>}
///
/// '#' starts a comment. Undeclared nodes appearing in edges are
/// auto-declared without a method tag. In bidirected mode mirror edges are
/// synthesized. Throws ParseError (with line number), DuplicateEdge,
/// BadLabelIndex.
LabeledGraph read_graph(const std::string& text);
LabeledGraph read_graph_file(const std::string& path);

/// Canonical text form; read(write(g)) == g up to node ordering.
/// Bidirected graphs emit one direction per mirror pair.
std::string write_graph(const LabeledGraph& g);
void write_graph_file(const LabeledGraph& g, const std::string& path);

Label parse_label(const std::string& token);  // throws ParseError

} // namespace dyck
