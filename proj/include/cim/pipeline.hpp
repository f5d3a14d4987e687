#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cim/community.hpp"
#include "cim/diffusion.hpp"
#include "cim/graph.hpp"
#include "cim/seeding.hpp"

namespace cim {

enum class Algorithm { Degree, Celf, CommunityIm, CommunityImPlusPlus };

/// "degree", "celf", "community-im", "community-im++".
std::string algorithm_name(Algorithm algorithm);
/// Inverse of algorithm_name; also accepts "cim" / "cimpp".
Algorithm parse_algorithm(const std::string& name);

struct PipelineConfig {
  Algorithm algorithm = Algorithm::CommunityImPlusPlus;
  std::size_t budget = 5;
  double gamma = 1.0;
  /// Worlds used for marginal gains during selection.
  std::size_t samples_select = 1000;
  /// Cascades used to report the influence of the final seed set.
  std::size_t samples_eval = 10000;
  std::uint64_t rng_seed = 0;
};

struct PipelineResult {
  std::vector<NodeId> seeds;
  InfluenceEstimate influence;
  /// Wall time of seed selection (partitioning and scoring included, final
  /// evaluation excluded).
  double seconds = 0.0;
  std::optional<Partition> partition;
  std::optional<BudgetAllocation> allocation;
};

/// Stream used for the final evaluation so that it is independent of the
/// worlds seen during selection.
std::uint64_t evaluation_seed(std::uint64_t rng_seed);

/// Selects seeds with the configured algorithm and evaluates them on the
/// full graph. Community algorithms detect communities with (gamma,
/// rng_seed) unless `partition` is given.
PipelineResult run_pipeline(const WeightedDigraph& g, const PipelineConfig& config,
                            const Partition* partition = nullptr);

}  // namespace cim
