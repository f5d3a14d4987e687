#pragma once

#include <cstdint>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "cim/graph.hpp"

namespace cim {

/// Hard assignment of every node to one community; ids are contiguous and
/// every id in [0, community_count) is used.
class Partition {
 public:
  Partition() = default;
  /// Validates the invariants; throws Error otherwise.
  explicit Partition(std::vector<CommunityId> assignment);

  /// Relabels arbitrary ids to 0..c-1 in order of first appearance.
  static Partition from_labels(std::span<const std::uint64_t> labels);
  static Partition single(std::size_t node_count);
  static Partition singletons(std::size_t node_count);

  std::size_t node_count() const noexcept { return assignment_.size(); }
  std::size_t community_count() const noexcept { return community_count_; }
  CommunityId community_of(NodeId v) const noexcept { return assignment_[v]; }
  std::span<const CommunityId> assignment() const noexcept { return assignment_; }

  /// Members of every community, each list ascending.
  std::vector<std::vector<NodeId>> members() const;

  friend bool operator==(const Partition&, const Partition&) = default;

 private:
  std::vector<CommunityId> assignment_;
  std::size_t community_count_ = 0;
};

/// Undirected, unit-weight view of a directed graph: each unordered pair
/// {u, v} connected in either direction counts as one edge.
struct UndirectedView {
  std::vector<std::size_t> offsets;
  std::vector<NodeId> neighbors;

  std::size_t node_count() const noexcept { return offsets.size() - 1; }
  std::size_t edge_count() const noexcept { return neighbors.size() / 2; }
  std::size_t degree(NodeId v) const noexcept { return offsets[v + 1] - offsets[v]; }
  std::span<const NodeId> adjacent(NodeId v) const noexcept {
    return {neighbors.data() + offsets[v], neighbors.data() + offsets[v + 1]};
  }
};

UndirectedView undirected_view(const WeightedDigraph& g);

/// Sum over communities of (internal edges - gamma * K^2 / (4m)), where K is
/// the community's degree sum and m the edge count of the undirected view.
/// Throws Error when m = 0.
double modularity(const WeightedDigraph& g, const Partition& part, double gamma);
double modularity(const UndirectedView& g, const Partition& part, double gamma);

/// modularity(g, part, 1) / m, the conventional normalized score.
double normalized_modularity(const WeightedDigraph& g, const Partition& part);
double normalized_modularity(const UndirectedView& g, const Partition& part);

/// Change in modularity(g, part, gamma) when node v moves to `target`.
/// Computed locally from v's adjacency and community degree sums.
double move_delta(const UndirectedView& g, const Partition& part, NodeId v, CommunityId target, double gamma);

struct DetectionOptions {
  double gamma = 1.0;
  std::uint64_t seed = 0;
  /// Local moving stops when a pass improves normalized modularity by less.
  double min_gain = 1e-9;
  std::size_t max_levels = 100;
};

/// Modularity maximization by local moving and aggregation. Before each
/// aggregation every community is split into its connected components, and
/// the final partition is split again on the input graph, so every
/// community is connected. Deterministic in (graph, gamma, seed).
Partition detect_communities(const WeightedDigraph& g, const DetectionOptions& options);
Partition detect_communities(const WeightedDigraph& g, double gamma, std::uint64_t seed);

/// `node_label community_id` per line, in dense node order.
void write_partition(const WeightedDigraph& g, const Partition& part, std::ostream& out);
/// Inverse of write_partition. Every node must appear exactly once, labels
/// must exist in g, and ids must be contiguous from 0.
Partition parse_partition(const WeightedDigraph& g, std::istream& in);

/// Induced subgraph of every community, built in one O(n + m) sweep.
std::vector<InducedSubgraph> community_subgraphs(const WeightedDigraph& g, const Partition& part);

void save_partition(const WeightedDigraph& g, const Partition& part, const std::string& path);
Partition load_partition(const WeightedDigraph& g, const std::string& path);

}  // namespace cim
