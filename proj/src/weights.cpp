#include "cim/weights.hpp"

#include <algorithm>
#include <cctype>

#include "cim/rng.hpp"

namespace cim {

WeightedDigraph assign_weights_wc(const WeightedDigraph& g) {
  std::vector<double> probs(g.edge_count());
  for (EdgeId e = 0; e < probs.size(); ++e) {
    probs[e] = 1.0 / static_cast<double>(g.in_degree(g.edge_target(e)));
  }
  return g.with_probabilities(std::move(probs));
}

WeightedDigraph assign_weights_tv(const WeightedDigraph& g, std::uint64_t seed) {
  static constexpr double kLevels[3] = {0.1, 0.01, 0.001};
  std::vector<double> probs(g.edge_count());
  for (EdgeId e = 0; e < probs.size(); ++e) {
    probs[e] = kLevels[scale_to(splitmix_at(seed, e), 3)];
  }
  return g.with_probabilities(std::move(probs));
}

WeightedDigraph apply_weight_model(const WeightedDigraph& g, const EdgeWeightModel& model) {
  struct Visitor {
    const WeightedDigraph& g;
    WeightedDigraph operator()(const WeightedCascade&) const { return assign_weights_wc(g); }
    WeightedDigraph operator()(const Trivalency& tv) const { return assign_weights_tv(g, tv.rng_seed); }
    WeightedDigraph operator()(const ExplicitWeights&) const { return g; }
  };
  return std::visit(Visitor{g}, model);
}

std::string weight_model_name(const EdgeWeightModel& model) {
  struct Visitor {
    std::string operator()(const WeightedCascade&) const { return "wc"; }
    std::string operator()(const Trivalency&) const { return "tv"; }
    std::string operator()(const ExplicitWeights&) const { return "explicit"; }
  };
  return std::visit(Visitor{}, model);
}

EdgeWeightModel parse_weight_model(const std::string& name, std::uint64_t tv_seed) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
  if (lower == "wc") return WeightedCascade{};
  if (lower == "tv") return Trivalency{tv_seed};
  if (lower == "explicit") return ExplicitWeights{};
  throw Error("unknown weight model '" + name + "' (expected wc, tv or explicit)");
}

}  // namespace cim
