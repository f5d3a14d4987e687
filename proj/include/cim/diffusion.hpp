#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "cim/community.hpp"
#include "cim/graph.hpp"
#include "cim/rng.hpp"

namespace cim {

/// One realization of the edge coins of an independent cascade.
///
/// Edge e is live iff to_unit(splitmix_at(key, id(e))) < p(e), where id(e)
/// is e itself or, for a subgraph, the parent edge it came from. Coins are
/// evaluated lazily on first attempt, which is the same distribution as
/// sampling the whole live-edge graph up front.
class LiveEdgeWorld {
 public:
  explicit LiveEdgeWorld(std::uint64_t key, std::span<const EdgeId> edge_ids = {}) noexcept
      : key_(key), edge_ids_(edge_ids) {}

  bool is_live(EdgeId e, double p) const noexcept {
    EdgeId id = edge_ids_.empty() ? e : edge_ids_[e];
    return to_unit(splitmix_at(key_, id)) < p;
  }

 private:
  std::uint64_t key_;
  std::span<const EdgeId> edge_ids_;
};

/// World j of an estimate seeded with `seed`.
inline LiveEdgeWorld sample_world(std::uint64_t seed, std::uint64_t j, std::span<const EdgeId> edge_ids = {}) {
  return LiveEdgeWorld(derive_stream(seed, j), edge_ids);
}

struct CascadeResult {
  /// Activated nodes in activation order; seeds first.
  std::vector<NodeId> activated;
  /// activation_round[i] is the round at which activated[i] became active.
  std::vector<std::uint32_t> activation_round;
};

/// Runs the progressive cascade from `seeds` (duplicates ignored) until no
/// new node activates. Throws Error on out-of-range seeds.
CascadeResult simulate_cascade(const WeightedDigraph& g, std::span<const NodeId> seeds, const LiveEdgeWorld& world);

struct InfluenceEstimate {
  double mean = 0.0;
  std::size_t samples = 0;
  /// 1.96 * sample standard deviation / sqrt(samples).
  double ci95_halfwidth = 0.0;
};

/// Average cascade size over `samples` worlds; world j is
/// sample_world(seed, j), so the result does not depend on scheduling.
InfluenceEstimate estimate_influence(const WeightedDigraph& g, std::span<const NodeId> seeds, std::size_t samples,
                                     std::uint64_t seed);

/// Exact expected cascade size by enumerating all live-edge subsets.
/// Test oracle; throws Error("oracle limit ...") above kExactEdgeLimit edges.
inline constexpr std::size_t kExactEdgeLimit = 20;
double exact_influence(const WeightedDigraph& g, std::span<const NodeId> seeds);

/// Mean over samples of sum_{v activated} (1 + h(v)) for cascades run on the
/// subgraph induced by community `community`, seeded with the seeds that lie
/// inside it. `bonus` is indexed by node of g.
double estimate_influence_in_community(const WeightedDigraph& g, const Partition& part, CommunityId community,
                                       std::span<const NodeId> seeds, std::size_t samples, std::uint64_t seed,
                                       std::span<const double> bonus);

}  // namespace cim
