#include "cim/edge_list.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string_view>
#include <vector>

namespace cim {
namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\v' || c == '\f'; }

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && is_space(line[i])) ++i;
    std::size_t start = i;
    while (i < line.size() && !is_space(line[i])) ++i;
    if (i > start) fields.push_back(line.substr(start, i - start));
  }
  return fields;
}

NodeLabel parse_label(std::string_view token, std::size_t line_no) {
  NodeLabel value = 0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size()) {
    throw ParseError(line_no, "expected integer node label, got '" + std::string(token) + "'");
  }
  return value;
}

double parse_probability(std::string_view token, std::size_t line_no) {
  // from_chars for double is missing in some standard libraries; strtod on a
  // bounded copy is equivalent here.
  std::string copy(token);
  char* end = nullptr;
  double p = std::strtod(copy.c_str(), &end);
  if (end != copy.c_str() + copy.size()) {
    throw ParseError(line_no, "expected probability, got '" + copy + "'");
  }
  if (!(p >= 0.0 && p <= 1.0)) throw ParseError(line_no, "probability " + copy + " outside [0, 1]");
  return p;
}

template <class OnFields>
void for_each_record(std::istream& in, OnFields&& on_fields) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view(line);
    std::size_t first = 0;
    while (first < view.size() && is_space(view[first])) ++first;
    if (first == view.size() || view[first] == '#') continue;
    on_fields(split_fields(view), line_no);
  }
}

}  // namespace

WeightedDigraph parse_edge_list(std::istream& in, EdgeDirection direction) {
  GraphBuilder builder;
  for_each_record(in, [&](const std::vector<std::string_view>& fields, std::size_t line_no) {
    if (fields.size() != 2) {
      throw ParseError(line_no, "expected 2 fields, got " + std::to_string(fields.size()));
    }
    NodeLabel u = parse_label(fields[0], line_no);
    NodeLabel v = parse_label(fields[1], line_no);
    builder.add_edge(u, v);
    if (direction == EdgeDirection::Undirected) builder.add_edge(v, u);
  });
  return std::move(builder).build();
}

WeightedDigraph parse_edge_list(const std::string& text, EdgeDirection direction) {
  std::istringstream in(text);
  return parse_edge_list(in, direction);
}

WeightedDigraph parse_weighted_edge_list(std::istream& in) {
  GraphBuilder builder;
  for_each_record(in, [&](const std::vector<std::string_view>& fields, std::size_t line_no) {
    if (fields.size() != 3) {
      throw ParseError(line_no, "expected 3 fields, got " + std::to_string(fields.size()));
    }
    builder.add_edge(parse_label(fields[0], line_no), parse_label(fields[1], line_no),
                     parse_probability(fields[2], line_no));
  });
  return std::move(builder).build();
}

void write_weighted_edge_list(const WeightedDigraph& g, std::ostream& out) {
  char buf[32];
  for (NodeId u = 0; u < g.node_count(); ++u) {
    auto nbrs = g.out_neighbors(u);
    auto probs = g.out_probabilities(u);
    for (std::size_t i = 0; i < nbrs.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%.17g", probs[i]);
      out << g.label(u) << ' ' << g.label(nbrs[i]) << ' ' << buf << '\n';
    }
  }
}

WeightedDigraph load_edge_list(const std::string& path, EdgeDirection direction) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open edge list '" + path + "'");
  return parse_edge_list(in, direction);
}

WeightedDigraph load_weighted_edge_list(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open weighted edge list '" + path + "'");
  return parse_weighted_edge_list(in);
}

}  // namespace cim
