#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "cim/types.hpp"

namespace cim {

/// Directed graph with one activation probability per edge, stored as CSR.
///
/// Nodes are dense indices assigned in first-seen order; the original labels
/// are kept for output. The topology is shared between copies, so producing
/// a reweighted graph only copies the probability vector. Instances are
/// immutable and safe to read concurrently.
class WeightedDigraph {
 public:
  WeightedDigraph();

  std::size_t node_count() const noexcept { return topo_->labels.size(); }
  std::size_t edge_count() const noexcept { return topo_->targets.size(); }

  std::span<const NodeId> out_neighbors(NodeId v) const noexcept {
    return {topo_->targets.data() + topo_->offsets[v], topo_->targets.data() + topo_->offsets[v + 1]};
  }
  std::span<const double> out_probabilities(NodeId v) const noexcept {
    return {probs_.data() + topo_->offsets[v], probs_.data() + topo_->offsets[v + 1]};
  }
  /// Index of v's first out-edge; v's edges are [first_edge(v), first_edge(v + 1)).
  EdgeId first_edge(NodeId v) const noexcept { return topo_->offsets[v]; }
  std::size_t out_degree(NodeId v) const noexcept { return topo_->offsets[v + 1] - topo_->offsets[v]; }
  std::size_t in_degree(NodeId v) const noexcept { return topo_->in_degree[v]; }

  NodeId edge_target(EdgeId e) const noexcept { return topo_->targets[e]; }
  double edge_probability(EdgeId e) const noexcept { return probs_[e]; }
  std::span<const double> probabilities() const noexcept { return probs_; }

  NodeLabel label(NodeId v) const noexcept { return topo_->labels[v]; }
  std::span<const NodeLabel> labels() const noexcept { return topo_->labels; }
  std::optional<NodeId> find(NodeLabel label) const;

  bool has_edge(NodeId from, NodeId to) const noexcept;

  /// Same topology, new probabilities (one per edge, each in [0, 1]).
  WeightedDigraph with_probabilities(std::vector<double> probabilities) const;

 private:
  friend class GraphBuilder;

  struct Topology {
    std::vector<EdgeId> offsets{0};
    std::vector<NodeId> targets;
    std::vector<std::uint32_t> in_degree;
    std::vector<NodeLabel> labels;
    std::unordered_map<NodeLabel, NodeId> index;
  };

  WeightedDigraph(std::shared_ptr<const Topology> topo, std::vector<double> probs);

  std::shared_ptr<const Topology> topo_;
  std::vector<double> probs_;
};

/// Accumulates labelled edges and produces a WeightedDigraph.
///
/// Self-loops are dropped and repeated (source, target) pairs keep their
/// first occurrence. Out-edges of a node keep insertion order.
class GraphBuilder {
 public:
  /// Registers a node without edges; returns its dense index.
  NodeId add_node(NodeLabel label);
  /// Returns false if the edge was dropped (self-loop or duplicate).
  bool add_edge(NodeLabel from, NodeLabel to, double probability = 0.0);

  std::size_t node_count() const noexcept { return labels_.size(); }
  WeightedDigraph build() &&;

 private:
  struct PendingEdge {
    NodeId from;
    NodeId to;
    double probability;
  };

  std::vector<NodeLabel> labels_;
  std::unordered_map<NodeLabel, NodeId> index_;
  std::unordered_set<std::uint64_t> seen_;
  std::vector<PendingEdge> edges_;
};

/// Nodes other than v reachable from v by a directed path of length at most
/// two, in ascending order.
std::vector<NodeId> two_hop_neighbors(const WeightedDigraph& g, NodeId v);

/// Subgraph induced by a node subset, remembering where each piece came from.
struct InducedSubgraph {
  WeightedDigraph graph;
  /// Local node index -> parent node index (ascending).
  std::vector<NodeId> parent_nodes;
  /// Local edge index -> parent edge index.
  std::vector<EdgeId> parent_edges;
};

/// Keeps edges with both endpoints in `nodes`. Local order follows ascending
/// parent index, so relative tie-breaking is preserved.
InducedSubgraph induced_subgraph(const WeightedDigraph& g, std::span<const NodeId> nodes);

}  // namespace cim
