#include "cim/pipeline.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>

#include "cim/heuristics.hpp"

namespace cim {

std::string algorithm_name(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::Degree: return "degree";
    case Algorithm::Celf: return "celf";
    case Algorithm::CommunityIm: return "community-im";
    case Algorithm::CommunityImPlusPlus: return "community-im++";
  }
  return "unknown";
}

Algorithm parse_algorithm(const std::string& name) {
  std::string s(name);
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  if (s == "degree") return Algorithm::Degree;
  if (s == "celf") return Algorithm::Celf;
  if (s == "community-im" || s == "cim") return Algorithm::CommunityIm;
  if (s == "community-im++" || s == "cimpp") return Algorithm::CommunityImPlusPlus;
  throw Error("unknown algorithm '" + name + "' (expected degree, celf, community-im or community-im++)");
}

std::uint64_t evaluation_seed(std::uint64_t rng_seed) {
  return derive_stream(rng_seed, 0x6576616c75617465ULL);  // "evaluate"
}

PipelineResult run_pipeline(const WeightedDigraph& g, const PipelineConfig& config, const Partition* partition) {
  if (config.budget == 0) throw Error("budget must be >= 1");
  if (config.samples_select == 0 || config.samples_eval == 0) throw Error("sample counts must be >= 1");
  if (partition != nullptr && partition->node_count() != g.node_count()) {
    throw Error("partition does not cover the graph");
  }

  PipelineResult result;
  const auto start = std::chrono::steady_clock::now();
  switch (config.algorithm) {
    case Algorithm::Degree:
      result.seeds = degree_seeds(g, config.budget);
      break;
    case Algorithm::Celf:
      result.seeds = celf(g, config.budget, config.samples_select, config.rng_seed).nodes;
      break;
    case Algorithm::CommunityIm:
    case Algorithm::CommunityImPlusPlus: {
      Partition part = partition != nullptr ? *partition : detect_communities(g, config.gamma, config.rng_seed);
      const auto heuristic = config.algorithm == Algorithm::CommunityIm ? CandidateHeuristic::None
                                                                        : CandidateHeuristic::CommunityDiffusionDegree;
      auto candidates = community_candidates(g, part, config.budget, config.samples_select, config.rng_seed, heuristic);
      BudgetAllocation alloc = progressive_budget(std::span<CommunitySolution>(candidates), config.budget);
      result.seeds = alloc.seeds;
      result.allocation = std::move(alloc);
      result.partition = std::move(part);
      break;
    }
  }
  result.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  result.influence = estimate_influence(g, result.seeds, config.samples_eval, evaluation_seed(config.rng_seed));
  return result;
}

}  // namespace cim
