#include "cim/graph.hpp"

#include <algorithm>
#include <string>

namespace cim {

WeightedDigraph::WeightedDigraph() : topo_(std::make_shared<const Topology>()) {}

WeightedDigraph::WeightedDigraph(std::shared_ptr<const Topology> topo, std::vector<double> probs)
    : topo_(std::move(topo)), probs_(std::move(probs)) {}

std::optional<NodeId> WeightedDigraph::find(NodeLabel label) const {
  auto it = topo_->index.find(label);
  if (it == topo_->index.end()) return std::nullopt;
  return it->second;
}

bool WeightedDigraph::has_edge(NodeId from, NodeId to) const noexcept {
  auto nbrs = out_neighbors(from);
  return std::find(nbrs.begin(), nbrs.end(), to) != nbrs.end();
}

WeightedDigraph WeightedDigraph::with_probabilities(std::vector<double> probabilities) const {
  if (probabilities.size() != edge_count()) {
    throw Error("probability vector has " + std::to_string(probabilities.size()) + " entries, graph has " +
                std::to_string(edge_count()) + " edges");
  }
  for (double p : probabilities) {
    if (!(p >= 0.0 && p <= 1.0)) throw Error("edge probability " + std::to_string(p) + " outside [0, 1]");
  }
  return WeightedDigraph(topo_, std::move(probabilities));
}

NodeId GraphBuilder::add_node(NodeLabel label) {
  auto [it, inserted] = index_.try_emplace(label, static_cast<NodeId>(labels_.size()));
  if (inserted) labels_.push_back(label);
  return it->second;
}

bool GraphBuilder::add_edge(NodeLabel from, NodeLabel to, double probability) {
  NodeId u = add_node(from);
  NodeId v = add_node(to);
  if (u == v) return false;
  std::uint64_t key = (static_cast<std::uint64_t>(u) << 32) | v;
  if (!seen_.insert(key).second) return false;
  edges_.push_back({u, v, probability});
  return true;
}

WeightedDigraph GraphBuilder::build() && {
  auto topo = std::make_shared<WeightedDigraph::Topology>();
  const std::size_t n = labels_.size();
  topo->offsets.assign(n + 1, 0);
  topo->in_degree.assign(n, 0);
  for (const auto& e : edges_) {
    ++topo->offsets[e.from + 1];
    ++topo->in_degree[e.to];
  }
  for (std::size_t v = 0; v < n; ++v) topo->offsets[v + 1] += topo->offsets[v];

  topo->targets.resize(edges_.size());
  std::vector<double> probs(edges_.size());
  std::vector<EdgeId> cursor(topo->offsets.begin(), topo->offsets.end() - 1);
  for (const auto& e : edges_) {
    EdgeId slot = cursor[e.from]++;
    topo->targets[slot] = e.to;
    probs[slot] = e.probability;
  }
  topo->labels = std::move(labels_);
  topo->index = std::move(index_);
  edges_.clear();
  seen_.clear();

  for (double p : probs) {
    if (!(p >= 0.0 && p <= 1.0)) throw Error("edge probability " + std::to_string(p) + " outside [0, 1]");
  }
  return WeightedDigraph(std::move(topo), std::move(probs));
}

std::vector<NodeId> two_hop_neighbors(const WeightedDigraph& g, NodeId v) {
  if (v >= g.node_count()) throw Error("node " + std::to_string(v) + " out of range");
  std::vector<NodeId> out;
  for (NodeId w : g.out_neighbors(v)) {
    out.push_back(w);
    for (NodeId u : g.out_neighbors(w)) {
      if (u != v) out.push_back(u);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

InducedSubgraph induced_subgraph(const WeightedDigraph& g, std::span<const NodeId> nodes) {
  std::vector<NodeId> members(nodes.begin(), nodes.end());
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());

  constexpr NodeId kAbsent = ~NodeId{0};
  std::vector<NodeId> local(g.node_count(), kAbsent);
  for (std::size_t i = 0; i < members.size(); ++i) {
    if (members[i] >= g.node_count()) throw Error("node " + std::to_string(members[i]) + " out of range");
    local[members[i]] = static_cast<NodeId>(i);
  }

  // Labels of the subgraph are the parent's dense indices; adding nodes in
  // ascending order first makes local index i correspond to members[i].
  GraphBuilder builder;
  for (NodeId v : members) builder.add_node(static_cast<NodeLabel>(v));
  std::vector<EdgeId> parent_edges;
  for (NodeId v : members) {
    auto nbrs = g.out_neighbors(v);
    auto probs = g.out_probabilities(v);
    for (std::size_t i = 0; i < nbrs.size(); ++i) {
      if (local[nbrs[i]] == kAbsent) continue;
      builder.add_edge(v, nbrs[i], probs[i]);
      parent_edges.push_back(g.first_edge(v) + i);
    }
  }
  return {std::move(builder).build(), std::move(members), std::move(parent_edges)};
}

}  // namespace cim
