#include "cim/community.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <unordered_map>

#include "cim/rng.hpp"

namespace cim {

Partition::Partition(std::vector<CommunityId> assignment) : assignment_(std::move(assignment)) {
  std::vector<bool> used;
  for (CommunityId c : assignment_) {
    if (c >= used.size()) used.resize(c + 1, false);
    used[c] = true;
  }
  if (std::find(used.begin(), used.end(), false) != used.end()) {
    throw Error("community ids are not contiguous");
  }
  community_count_ = used.size();
}

Partition Partition::from_labels(std::span<const std::uint64_t> labels) {
  std::unordered_map<std::uint64_t, CommunityId> remap;
  std::vector<CommunityId> assignment(labels.size());
  for (std::size_t v = 0; v < labels.size(); ++v) {
    auto [it, inserted] = remap.try_emplace(labels[v], static_cast<CommunityId>(remap.size()));
    assignment[v] = it->second;
  }
  return Partition(std::move(assignment));
}

Partition Partition::single(std::size_t node_count) {
  return Partition(std::vector<CommunityId>(node_count, 0));
}

Partition Partition::singletons(std::size_t node_count) {
  std::vector<CommunityId> assignment(node_count);
  for (std::size_t v = 0; v < node_count; ++v) assignment[v] = static_cast<CommunityId>(v);
  return Partition(std::move(assignment));
}

std::vector<std::vector<NodeId>> Partition::members() const {
  std::vector<std::vector<NodeId>> out(community_count_);
  for (std::size_t v = 0; v < assignment_.size(); ++v) out[assignment_[v]].push_back(static_cast<NodeId>(v));
  return out;
}

UndirectedView undirected_view(const WeightedDigraph& g) {
  std::vector<std::pair<NodeId, NodeId>> pairs;
  pairs.reserve(g.edge_count());
  for (NodeId u = 0; u < g.node_count(); ++u) {
    for (NodeId v : g.out_neighbors(u)) pairs.emplace_back(std::min(u, v), std::max(u, v));
  }
  std::sort(pairs.begin(), pairs.end());
  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());

  UndirectedView view;
  view.offsets.assign(g.node_count() + 1, 0);
  for (auto [a, b] : pairs) {
    ++view.offsets[a + 1];
    ++view.offsets[b + 1];
  }
  for (std::size_t v = 0; v < g.node_count(); ++v) view.offsets[v + 1] += view.offsets[v];
  view.neighbors.resize(2 * pairs.size());
  std::vector<std::size_t> cursor(view.offsets.begin(), view.offsets.end() - 1);
  for (auto [a, b] : pairs) {
    view.neighbors[cursor[a]++] = b;
    view.neighbors[cursor[b]++] = a;
  }
  return view;
}

double modularity(const UndirectedView& g, const Partition& part, double gamma) {
  if (part.node_count() != g.node_count()) throw Error("partition does not cover the graph");
  const double m = static_cast<double>(g.edge_count());
  if (m == 0.0) throw Error("modularity undefined: graph has no edges");
  std::vector<double> internal(part.community_count(), 0.0);
  std::vector<double> degree_sum(part.community_count(), 0.0);
  for (NodeId v = 0; v < g.node_count(); ++v) {
    CommunityId c = part.community_of(v);
    degree_sum[c] += static_cast<double>(g.degree(v));
    for (NodeId u : g.adjacent(v)) {
      if (u > v && part.community_of(u) == c) internal[c] += 1.0;
    }
  }
  double q = 0.0;
  for (std::size_t c = 0; c < internal.size(); ++c) {
    q += internal[c] - gamma * degree_sum[c] * degree_sum[c] / (4.0 * m);
  }
  return q;
}

double modularity(const WeightedDigraph& g, const Partition& part, double gamma) {
  return modularity(undirected_view(g), part, gamma);
}

double normalized_modularity(const UndirectedView& g, const Partition& part) {
  return modularity(g, part, 1.0) / static_cast<double>(g.edge_count());
}

double normalized_modularity(const WeightedDigraph& g, const Partition& part) {
  return normalized_modularity(undirected_view(g), part);
}

double move_delta(const UndirectedView& g, const Partition& part, NodeId v, CommunityId target, double gamma) {
  const CommunityId source = part.community_of(v);
  if (target == source) return 0.0;
  const double m = static_cast<double>(g.edge_count());
  if (m == 0.0) throw Error("modularity undefined: graph has no edges");
  double to_source = 0.0;
  double to_target = 0.0;
  for (NodeId u : g.adjacent(v)) {
    if (part.community_of(u) == source) to_source += 1.0;
    if (part.community_of(u) == target) to_target += 1.0;
  }
  double source_sum = 0.0;
  double target_sum = 0.0;
  for (NodeId u = 0; u < g.node_count(); ++u) {
    if (part.community_of(u) == source) source_sum += static_cast<double>(g.degree(u));
    if (part.community_of(u) == target) target_sum += static_cast<double>(g.degree(u));
  }
  const double d = static_cast<double>(g.degree(v));
  return (to_target - to_source) - gamma * d * (target_sum - source_sum + d) / (2.0 * m);
}

namespace {

// Weighted undirected multigraph used across aggregation levels.
struct LevelGraph {
  std::vector<std::size_t> offsets;
  std::vector<NodeId> targets;
  std::vector<double> weights;
  std::vector<double> self_weight;  // internal edge weight collapsed into the node
  std::vector<double> degree;       // incident weight, self loops counted twice
  double total_weight = 0.0;        // m

  std::size_t size() const { return degree.size(); }
};

LevelGraph level_from_view(const UndirectedView& view) {
  LevelGraph lg;
  lg.offsets = view.offsets;
  lg.targets = view.neighbors;
  lg.weights.assign(view.neighbors.size(), 1.0);
  lg.self_weight.assign(view.node_count(), 0.0);
  lg.degree.resize(view.node_count());
  for (NodeId v = 0; v < view.node_count(); ++v) lg.degree[v] = static_cast<double>(view.degree(v));
  lg.total_weight = static_cast<double>(view.edge_count());
  return lg;
}

std::vector<NodeId> visit_order(std::size_t n, std::uint64_t key) {
  std::vector<NodeId> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = static_cast<NodeId>(i);
  SplitMix64 rng(key);
  for (std::size_t i = n; i > 1; --i) {
    auto j = static_cast<std::size_t>(scale_to(rng(), i));
    std::swap(order[i - 1], order[j]);
  }
  return order;
}

// Repeated passes of greedy single-node moves. Returns true if any node moved.
bool local_moving(const LevelGraph& g, std::vector<CommunityId>& community, double gamma, double min_gain,
                  std::span<const NodeId> order) {
  const std::size_t n = g.size();
  const double two_m = 2.0 * g.total_weight;
  std::vector<double> total(n, 0.0);
  for (NodeId v = 0; v < n; ++v) total[community[v]] += g.degree[v];

  std::vector<double> link(n, 0.0);
  std::vector<CommunityId> touched;
  bool moved_any = false;
  constexpr std::size_t kMaxPasses = 1000;

  for (std::size_t pass = 0; pass < kMaxPasses; ++pass) {
    double pass_gain = 0.0;
    for (NodeId v : order) {
      const CommunityId own = community[v];
      const double d = g.degree[v];
      touched.clear();
      for (std::size_t e = g.offsets[v]; e < g.offsets[v + 1]; ++e) {
        CommunityId c = community[g.targets[e]];
        if (link[c] == 0.0) touched.push_back(c);
        link[c] += g.weights[e];
      }
      total[own] -= d;
      const double stay = link[own] - gamma * d * total[own] / two_m;
      CommunityId best = own;
      double best_gain = stay;
      for (CommunityId c : touched) {
        double gain = link[c] - gamma * d * total[c] / two_m;
        if (gain > best_gain + 1e-12) {
          best = c;
          best_gain = gain;
        }
      }
      total[best] += d;
      if (best != own) {
        community[v] = best;
        pass_gain += best_gain - stay;
        moved_any = true;
      }
      for (CommunityId c : touched) link[c] = 0.0;
      link[own] = 0.0;
    }
    if (pass_gain / g.total_weight < min_gain) break;
  }
  return moved_any;
}

// Splits each community into connected components; returns contiguous ids.
std::vector<CommunityId> split_components(const LevelGraph& g, std::span<const CommunityId> community) {
  constexpr CommunityId kUnset = std::numeric_limits<CommunityId>::max();
  std::vector<CommunityId> refined(g.size(), kUnset);
  std::vector<NodeId> stack;
  CommunityId next = 0;
  for (NodeId start = 0; start < g.size(); ++start) {
    if (refined[start] != kUnset) continue;
    refined[start] = next;
    stack.push_back(start);
    while (!stack.empty()) {
      NodeId v = stack.back();
      stack.pop_back();
      for (std::size_t e = g.offsets[v]; e < g.offsets[v + 1]; ++e) {
        NodeId u = g.targets[e];
        if (refined[u] == kUnset && community[u] == community[v]) {
          refined[u] = next;
          stack.push_back(u);
        }
      }
    }
    ++next;
  }
  return refined;
}

LevelGraph aggregate(const LevelGraph& g, std::span<const CommunityId> community, std::size_t count) {
  LevelGraph out;
  out.total_weight = g.total_weight;
  out.self_weight.assign(count, 0.0);
  out.degree.assign(count, 0.0);

  std::vector<std::vector<NodeId>> members(count);
  for (NodeId v = 0; v < g.size(); ++v) members[community[v]].push_back(v);

  std::vector<double> link(count, 0.0);
  std::vector<CommunityId> touched;
  out.offsets.push_back(0);
  for (CommunityId c = 0; c < count; ++c) {
    touched.clear();
    for (NodeId v : members[c]) {
      out.self_weight[c] += g.self_weight[v];
      out.degree[c] += g.degree[v];
      for (std::size_t e = g.offsets[v]; e < g.offsets[v + 1]; ++e) {
        CommunityId t = community[g.targets[e]];
        if (t == c) {
          out.self_weight[c] += 0.5 * g.weights[e];  // each internal edge is seen from both ends
          continue;
        }
        if (link[t] == 0.0) touched.push_back(t);
        link[t] += g.weights[e];
      }
    }
    std::sort(touched.begin(), touched.end());
    for (CommunityId t : touched) {
      out.targets.push_back(t);
      out.weights.push_back(link[t]);
      link[t] = 0.0;
    }
    out.offsets.push_back(out.targets.size());
  }
  return out;
}

Partition relabel_in_node_order(std::span<const CommunityId> ids) {
  std::vector<std::uint64_t> labels(ids.begin(), ids.end());
  return Partition::from_labels(labels);
}

}  // namespace

Partition detect_communities(const WeightedDigraph& g, const DetectionOptions& options) {
  if (!(options.gamma > 0.0) || !std::isfinite(options.gamma)) throw Error("resolution gamma must be finite and > 0");
  if (g.node_count() == 0) throw Error("cannot partition an empty graph");
  const UndirectedView view = undirected_view(g);
  if (view.edge_count() == 0) return Partition::singletons(g.node_count());

  LevelGraph level = level_from_view(view);
  // node_map[v] = node of the current level graph that original node v belongs to
  std::vector<NodeId> node_map(g.node_count());
  for (NodeId v = 0; v < g.node_count(); ++v) node_map[v] = v;

  for (std::size_t depth = 0; depth < options.max_levels; ++depth) {
    std::vector<CommunityId> community(level.size());
    for (NodeId v = 0; v < level.size(); ++v) community[v] = v;
    auto order = visit_order(level.size(), derive_stream(options.seed, depth));
    bool moved = local_moving(level, community, options.gamma, options.min_gain, order);
    if (!moved) break;

    auto refined = split_components(level, community);
    std::size_t count = *std::max_element(refined.begin(), refined.end()) + 1;
    if (count == level.size()) break;
    for (auto& node : node_map) node = refined[node];
    level = aggregate(level, refined, count);
  }

  // Final connectivity split on the input graph.
  LevelGraph base = level_from_view(view);
  std::vector<CommunityId> assignment(node_map.begin(), node_map.end());
  auto connected = split_components(base, assignment);
  Partition result = relabel_in_node_order(connected);

  // Connected components as communities dominate the all-in-one partition.
  auto components = split_components(base, std::vector<CommunityId>(g.node_count(), 0));
  Partition fallback = relabel_in_node_order(components);
  if (modularity(view, result, options.gamma) < modularity(view, fallback, options.gamma)) return fallback;
  return result;
}

Partition detect_communities(const WeightedDigraph& g, double gamma, std::uint64_t seed) {
  DetectionOptions options;
  options.gamma = gamma;
  options.seed = seed;
  return detect_communities(g, options);
}

void write_partition(const WeightedDigraph& g, const Partition& part, std::ostream& out) {
  if (part.node_count() != g.node_count()) throw Error("partition does not cover the graph");
  for (NodeId v = 0; v < g.node_count(); ++v) out << g.label(v) << ' ' << part.community_of(v) << '\n';
}

Partition parse_partition(const WeightedDigraph& g, std::istream& in) {
  constexpr CommunityId kUnset = std::numeric_limits<CommunityId>::max();
  std::vector<CommunityId> assignment(g.node_count(), kUnset);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream fields(line);
    NodeLabel label = 0;
    long long id = 0;
    std::string extra;
    if (!(fields >> label)) {
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      throw ParseError(line_no, "expected 'node_label community_id'");
    }
    if (!(fields >> id) || (fields >> extra) || id < 0 || id >= static_cast<long long>(kUnset)) {
      throw ParseError(line_no, "expected 'node_label community_id'");
    }
    auto v = g.find(label);
    if (!v) throw ParseError(line_no, "unknown node label " + std::to_string(label));
    if (assignment[*v] != kUnset) throw ParseError(line_no, "node " + std::to_string(label) + " assigned twice");
    assignment[*v] = static_cast<CommunityId>(id);
  }
  for (NodeId v = 0; v < g.node_count(); ++v) {
    if (assignment[v] == kUnset) throw Error("partition file has no entry for node " + std::to_string(g.label(v)));
  }
  return Partition(std::move(assignment));
}

std::vector<InducedSubgraph> community_subgraphs(const WeightedDigraph& g, const Partition& part) {
  if (part.node_count() != g.node_count()) throw Error("partition does not cover the graph");
  auto members = part.members();
  std::vector<GraphBuilder> builders(members.size());
  std::vector<InducedSubgraph> out(members.size());
  for (CommunityId c = 0; c < members.size(); ++c) {
    for (NodeId v : members[c]) builders[c].add_node(static_cast<NodeLabel>(v));
    out[c].parent_nodes = members[c];
  }
  for (NodeId v = 0; v < g.node_count(); ++v) {
    const CommunityId c = part.community_of(v);
    auto nbrs = g.out_neighbors(v);
    auto probs = g.out_probabilities(v);
    for (std::size_t i = 0; i < nbrs.size(); ++i) {
      if (part.community_of(nbrs[i]) != c) continue;
      builders[c].add_edge(v, nbrs[i], probs[i]);
      out[c].parent_edges.push_back(g.first_edge(v) + i);
    }
  }
  for (CommunityId c = 0; c < members.size(); ++c) out[c].graph = std::move(builders[c]).build();
  return out;
}

void save_partition(const WeightedDigraph& g, const Partition& part, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write partition '" + path + "'");
  write_partition(g, part, out);
}

Partition load_partition(const WeightedDigraph& g, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open partition '" + path + "'");
  return parse_partition(g, in);
}

}  // namespace cim
