#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "cim/graph.hpp"

namespace cim {

/// Monte Carlo influence over a fixed set of live-edge worlds, with the
/// coverage of the current seed set cached per world.
///
/// World j is sample_world(seed, j, edge_ids), the same worlds that
/// estimate_influence uses, so value() after adding S equals
/// estimate_influence(g, S, samples, seed).mean whenever no bonus is set.
/// Because the worlds are fixed, value() is monotone and submodular in S,
/// and marginal_gain(v) only explores nodes not yet reached by S.
///
/// Activating node v is worth 1 + bonus[v] (bonus empty means 0).
class SampledInfluence {
 public:
  SampledInfluence(WeightedDigraph g, std::size_t samples, std::uint64_t seed, std::vector<double> bonus = {},
                   std::vector<EdgeId> edge_ids = {});

  std::size_t candidate_count() const noexcept { return graph_.node_count(); }
  std::size_t samples() const noexcept { return samples_; }

  /// Estimated value(S + v) - value(S). Thread-safe; does not modify state.
  double marginal_gain(NodeId v) const;
  void add_seed(NodeId v);

  double value() const noexcept { return total_ / static_cast<double>(samples_); }
  std::span<const NodeId> seeds() const noexcept { return seeds_; }
  const WeightedDigraph& graph() const noexcept { return graph_; }

 private:
  double expand(NodeId v, std::size_t j, std::vector<std::uint32_t>& mark, std::uint32_t epoch,
                std::vector<NodeId>& queue, std::vector<std::uint64_t>* commit) const;

  bool covered(std::size_t j, NodeId v) const noexcept {
    std::size_t bit = j * graph_.node_count() + v;
    return (covered_[bit >> 6] >> (bit & 63)) & 1;
  }

  WeightedDigraph graph_;
  std::size_t samples_;
  std::uint64_t seed_;
  std::vector<double> bonus_;
  std::vector<EdgeId> edge_ids_;
  std::vector<std::uint64_t> covered_;
  std::vector<NodeId> seeds_;
  double total_ = 0.0;
};

}  // namespace cim
