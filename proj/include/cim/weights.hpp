#pragma once

#include <cstdint>
#include <string>
#include <variant>

#include "cim/graph.hpp"

namespace cim {

/// p(u, v) = 1 / in_degree(v).
struct WeightedCascade {};
/// p drawn uniformly from {0.1, 0.01, 0.001}, reproducible from the seed.
struct Trivalency {
  std::uint64_t rng_seed = 0;
};
/// Probabilities come from the input file.
struct ExplicitWeights {};

using EdgeWeightModel = std::variant<WeightedCascade, Trivalency, ExplicitWeights>;

WeightedDigraph assign_weights_wc(const WeightedDigraph& g);

/// Edge i gets class floor(3 * u_i) of {0.1, 0.01, 0.001}, where u_i is the
/// i-th SplitMix64 output for `seed`. A pure function of (graph, seed).
WeightedDigraph assign_weights_tv(const WeightedDigraph& g, std::uint64_t seed);

WeightedDigraph apply_weight_model(const WeightedDigraph& g, const EdgeWeightModel& model);

std::string weight_model_name(const EdgeWeightModel& model);
/// Accepts "wc", "tv", "explicit" (case-insensitive).
EdgeWeightModel parse_weight_model(const std::string& name, std::uint64_t tv_seed);

}  // namespace cim
