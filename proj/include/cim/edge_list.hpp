#pragma once

#include <istream>
#include <ostream>
#include <string>

#include "cim/graph.hpp"

namespace cim {

enum class EdgeDirection { Undirected, Directed };

/// Reads a SNAP-style edge list: one `u v` integer pair per line, `#` starts
/// a comment line, blank lines are ignored. Undirected input yields both
/// directed edges. All probabilities are 0 until weights are assigned.
/// Throws ParseError naming the offending line.
WeightedDigraph parse_edge_list(std::istream& in, EdgeDirection direction = EdgeDirection::Undirected);
WeightedDigraph parse_edge_list(const std::string& text, EdgeDirection direction = EdgeDirection::Undirected);

/// Reads directed `u v p` lines with p in [0, 1].
WeightedDigraph parse_weighted_edge_list(std::istream& in);

/// Writes one `u v p` line per directed edge using original labels; p is
/// printed with 17 significant digits so it round-trips exactly.
void write_weighted_edge_list(const WeightedDigraph& g, std::ostream& out);

/// Opens `path` and dispatches to the parsers above.
WeightedDigraph load_edge_list(const std::string& path, EdgeDirection direction = EdgeDirection::Undirected);
WeightedDigraph load_weighted_edge_list(const std::string& path);

}  // namespace cim
