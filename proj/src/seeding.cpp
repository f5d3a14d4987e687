#include "cim/seeding.hpp"

#include <algorithm>
#include <string>

#include "cim/heuristics.hpp"

namespace cim {

SeedSchedule celf(const WeightedDigraph& g, std::size_t k, std::size_t samples, std::uint64_t seed,
                  std::span<const double> bonus) {
  if (samples == 0) throw Error("samples must be >= 1");
  SampledInfluence oracle(g, samples, seed, std::vector<double>(bonus.begin(), bonus.end()));
  return greedy_schedule(std::move(oracle), std::min(k, g.node_count()));
}

FixedSolution::FixedSolution(SeedSchedule schedule) : schedule_(std::move(schedule)) {
  if (schedule_.cumulative_value.size() != schedule_.nodes.size() + 1) {
    throw Error("schedule needs one cumulative value per prefix length");
  }
}

double FixedSolution::prefix_value(std::size_t j) {
  if (j > max_length()) throw Error("prefix " + std::to_string(j) + " beyond schedule length");
  deepest_ = std::max(deepest_, j);
  return schedule_.cumulative_value[j];
}

NodeId FixedSolution::node(std::size_t j) const {
  if (j >= schedule_.nodes.size()) throw Error("schedule index out of range");
  return schedule_.nodes[j];
}

CommunitySolution::CommunitySolution(CommunityId community, InducedSubgraph subgraph, std::size_t max_length,
                                     std::size_t samples, std::uint64_t seed, std::vector<double> local_bonus)
    : community_(community),
      parent_nodes_(std::move(subgraph.parent_nodes)),
      max_length_(std::min(max_length, subgraph.graph.node_count())),
      greedy_(std::make_unique<LazyGreedy<SampledInfluence>>(SampledInfluence(
          std::move(subgraph.graph), samples, seed, std::move(local_bonus), std::move(subgraph.parent_edges)))) {
  computed_.community = community;
}

double CommunitySolution::prefix_value(std::size_t j) {
  if (j > max_length_) throw Error("prefix " + std::to_string(j) + " beyond schedule length");
  deepest_ = std::max(deepest_, j);
  while (computed_.nodes.size() < j) {
    auto pick = greedy_->next();
    if (!pick) throw Error("community ran out of candidates");
    computed_.nodes.push_back(parent_nodes_[pick->node]);
    computed_.cumulative_value.push_back(computed_.cumulative_value.back() + pick->gain);
  }
  return computed_.cumulative_value[j];
}

NodeId CommunitySolution::node(std::size_t j) const {
  if (j >= computed_.nodes.size()) throw Error("schedule prefix " + std::to_string(j + 1) + " not computed yet");
  return computed_.nodes[j];
}

std::vector<CommunitySolution> community_candidates(const WeightedDigraph& g, const Partition& part, std::size_t k,
                                                    std::size_t samples, std::uint64_t seed,
                                                    CandidateHeuristic heuristic) {
  if (samples == 0) throw Error("samples must be >= 1");
  if (k == 0) throw Error("budget must be >= 1");
  std::vector<double> bonus;
  if (heuristic == CandidateHeuristic::CommunityDiffusionDegree) bonus = community_diffusion_degrees(g, part);

  auto subgraphs = community_subgraphs(g, part);
  std::vector<CommunitySolution> out;
  out.reserve(subgraphs.size());
  for (CommunityId c = 0; c < subgraphs.size(); ++c) {
    std::vector<double> local_bonus;
    if (!bonus.empty()) {
      local_bonus.reserve(subgraphs[c].parent_nodes.size());
      for (NodeId v : subgraphs[c].parent_nodes) local_bonus.push_back(bonus[v]);
    }
    out.emplace_back(c, std::move(subgraphs[c]), k, samples, seed, std::move(local_bonus));
  }
  return out;
}

BudgetAllocation progressive_budget(std::span<NestedSolution* const> solutions, std::size_t k) {
  if (k == 0) throw Error("budget must be >= 1");
  struct Gain {
    double delta;
    std::size_t index;
    bool operator<(const Gain& other) const {
      if (delta != other.delta) return delta < other.delta;
      return index > other.index;
    }
  };

  BudgetAllocation alloc;
  alloc.per_community.assign(solutions.size(), 0);
  std::priority_queue<Gain> heap;
  std::size_t available = 0;
  for (std::size_t i = 0; i < solutions.size(); ++i) {
    available += solutions[i]->max_length();
    if (solutions[i]->max_length() > 0) heap.push({solutions[i]->prefix_value(1), i});
  }

  while (alloc.seeds.size() < k && !heap.empty()) {
    const Gain best = heap.top();
    heap.pop();
    NestedSolution& s = *solutions[best.index];
    std::size_t& taken = alloc.per_community[best.index];
    alloc.seeds.push_back(s.node(taken));
    ++taken;
    // Exhausted solutions leave the heap.
    if (taken < s.max_length()) heap.push({s.prefix_value(taken + 1) - s.prefix_value(taken), best.index});
  }

  for (std::size_t i = 0; i < solutions.size(); ++i) {
    if (alloc.per_community[i] > 0) alloc.total_value += solutions[i]->prefix_value(alloc.per_community[i]);
  }
  if (available < k) alloc.shortfall = k - available;
  return alloc;
}

BudgetAllocation progressive_budget(std::span<CommunitySolution> solutions, std::size_t k) {
  std::vector<NestedSolution*> view;
  view.reserve(solutions.size());
  for (auto& s : solutions) view.push_back(&s);
  return progressive_budget(view, k);
}

}  // namespace cim
