#pragma once

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <memory>
#include <optional>
#include <queue>
#include <span>
#include <vector>

#include <tbb/parallel_for.h>

#include "cim/community.hpp"
#include "cim/graph.hpp"
#include "cim/sampled_influence.hpp"

namespace cim {

/// A set function queried through marginal gains. marginal_gain must be
/// safe to call concurrently between add_seed calls.
template <class T>
concept GainOracle = requires(T& oracle, const T& view, NodeId v) {
  { view.candidate_count() } -> std::convertible_to<std::size_t>;
  { view.marginal_gain(v) } -> std::convertible_to<double>;
  oracle.add_seed(v);
};

struct GreedyPick {
  NodeId node;
  double gain;
};

/// CELF lazy greedy over candidates 0..candidate_count()-1.
///
/// Stale gains sit in a max-heap ordered by (gain desc, node asc). The top
/// entry is re-evaluated against the current seed set and re-inserted; an
/// entry that reaches the top while fresh is committed once no stale entry
/// lies within rounding distance (relative 1e-9) of it. For a submodular
/// oracle this picks exactly what plain greedy with the same tie-breaking
/// would pick.
template <GainOracle Oracle>
class LazyGreedy {
 public:
  explicit LazyGreedy(Oracle oracle) : oracle_(std::move(oracle)) {}

  /// Commits and returns the next node, or nullopt when candidates run out.
  std::optional<GreedyPick> next() {
    if (!initialized_) initialize();
    while (!heap_.empty()) {
      Entry top = heap_.top();
      heap_.pop();
      if (top.round != picks_) {
        refresh(top);
        heap_.push(top);
        continue;
      }
      if (refresh_near_ties(top)) {
        heap_.push(top);
        continue;
      }
      oracle_.add_seed(top.node);
      ++picks_;
      return GreedyPick{top.node, top.gain};
    }
    return std::nullopt;
  }

  const Oracle& oracle() const noexcept { return oracle_; }
  std::size_t picks() const noexcept { return picks_; }
  /// Marginal-gain evaluations so far, including the initial pass.
  std::size_t evaluations() const noexcept { return evaluations_; }

 private:
  struct Entry {
    double gain;
    NodeId node;
    std::size_t round;
    bool operator<(const Entry& other) const {
      if (gain != other.gain) return gain < other.gain;
      return node > other.node;
    }
  };

  void refresh(Entry& e) {
    e.gain = oracle_.marginal_gain(e.node);
    e.round = picks_;
    ++evaluations_;
  }

  // Stale gains within rounding error of a fresh top may tie it once
  // recomputed; refresh them so ties resolve by node index as in plain greedy.
  bool refresh_near_ties(const Entry& top) {
    const double floor = top.gain - kTieTolerance * std::max(1.0, std::abs(top.gain));
    std::vector<Entry> held;
    bool refreshed = false;
    while (!heap_.empty() && heap_.top().gain >= floor) {
      Entry e = heap_.top();
      heap_.pop();
      if (e.round != picks_) {
        refresh(e);
        refreshed = true;
      }
      held.push_back(e);
    }
    for (const Entry& e : held) heap_.push(e);
    return refreshed;
  }

  static constexpr double kTieTolerance = 1e-9;

  void initialize() {
    const std::size_t n = oracle_.candidate_count();
    std::vector<Entry> entries(n);
    tbb::parallel_for(std::size_t{0}, n, [&](std::size_t v) {
      entries[v] = Entry{oracle_.marginal_gain(static_cast<NodeId>(v)), static_cast<NodeId>(v), 0};
    });
    evaluations_ += n;
    heap_ = std::priority_queue<Entry>(std::less<Entry>{}, std::move(entries));
    initialized_ = true;
  }

  Oracle oracle_;
  std::priority_queue<Entry> heap_;
  std::size_t picks_ = 0;
  std::size_t evaluations_ = 0;
  bool initialized_ = false;
};

/// Sentinel community id for schedules over the whole graph.
inline constexpr CommunityId kWholeGraph = ~CommunityId{0};

/// A nested solution: every prefix of `nodes` is the solution for its length.
struct SeedSchedule {
  CommunityId community = kWholeGraph;
  std::vector<NodeId> nodes;
  /// cumulative_value[j] = value of the first j nodes; cumulative_value[0] = 0.
  std::vector<double> cumulative_value{0.0};
};

/// Runs lazy greedy for up to k picks and records the nested schedule.
template <GainOracle Oracle>
SeedSchedule greedy_schedule(Oracle oracle, std::size_t k) {
  LazyGreedy<Oracle> greedy(std::move(oracle));
  SeedSchedule schedule;
  while (schedule.nodes.size() < k) {
    auto pick = greedy.next();
    if (!pick) break;
    schedule.nodes.push_back(pick->node);
    schedule.cumulative_value.push_back(schedule.cumulative_value.back() + pick->gain);
  }
  return schedule;
}

/// CELF on the whole graph with Monte Carlo gains. `bonus` (optional) adds
/// h(v) to the value of activating v. k above the node count is truncated;
/// the schedule length reports what was selected.
SeedSchedule celf(const WeightedDigraph& g, std::size_t k, std::size_t samples, std::uint64_t seed,
                  std::span<const double> bonus = {});

/// Prefix values of a nested solution, possibly computed on demand.
class NestedSolution {
 public:
  virtual ~NestedSolution() = default;

  virtual CommunityId community() const = 0;
  /// Longest prefix this solution can provide.
  virtual std::size_t max_length() const = 0;
  /// Value of the first j nodes, 0 <= j <= max_length().
  virtual double prefix_value(std::size_t j) = 0;
  /// The j-th node (0-based) in parent-graph ids; requires prefix_value(j + 1)
  /// to have been requested.
  virtual NodeId node(std::size_t j) const = 0;
  /// Largest j passed to prefix_value so far.
  virtual std::size_t deepest_query() const = 0;
};

/// A fully precomputed schedule.
class FixedSolution final : public NestedSolution {
 public:
  explicit FixedSolution(SeedSchedule schedule);

  CommunityId community() const override { return schedule_.community; }
  std::size_t max_length() const override { return schedule_.nodes.size(); }
  double prefix_value(std::size_t j) override;
  NodeId node(std::size_t j) const override;
  std::size_t deepest_query() const override { return deepest_; }

 private:
  SeedSchedule schedule_;
  std::size_t deepest_ = 0;
};

/// Lazy CELF over one community's induced subgraph: prefix j is computed
/// the first time a prefix of length >= j is requested.
class CommunitySolution final : public NestedSolution {
 public:
  CommunitySolution(CommunityId community, InducedSubgraph subgraph, std::size_t max_length, std::size_t samples,
                    std::uint64_t seed, std::vector<double> local_bonus);

  CommunityId community() const override { return community_; }
  std::size_t max_length() const override { return max_length_; }
  double prefix_value(std::size_t j) override;
  NodeId node(std::size_t j) const override;
  std::size_t deepest_query() const override { return deepest_; }

  /// Schedule materialized so far.
  const SeedSchedule& computed() const noexcept { return computed_; }

 private:
  CommunityId community_;
  std::vector<NodeId> parent_nodes_;
  std::size_t max_length_;
  std::unique_ptr<LazyGreedy<SampledInfluence>> greedy_;
  SeedSchedule computed_;
  std::size_t deepest_ = 0;
};

enum class CandidateHeuristic { None, CommunityDiffusionDegree };

/// One lazy schedule per community, each capped at min(k, |V_i|). With
/// CommunityDiffusionDegree the value of activating v is 1 + CDD(v).
std::vector<CommunitySolution> community_candidates(const WeightedDigraph& g, const Partition& part, std::size_t k,
                                                    std::size_t samples, std::uint64_t seed,
                                                    CandidateHeuristic heuristic);

struct BudgetAllocation {
  /// Nodes taken from each solution, indexed like the input span.
  std::vector<std::size_t> per_community;
  /// Selected nodes in the order they were committed.
  std::vector<NodeId> seeds;
  /// Sum over solutions of prefix_value(per_community[i]).
  double total_value = 0.0;
  /// k minus the number of nodes actually available, if positive.
  std::size_t shortfall = 0;
};

/// Progressive budgeting: keep the next marginal gain of every solution in
/// a max-heap (ties by ascending community id), commit the best one k
/// times, and refresh only the solution that was advanced. A solution with
/// k_i committed nodes is never asked for a prefix deeper than k_i + 1.
BudgetAllocation progressive_budget(std::span<NestedSolution* const> solutions, std::size_t k);

/// Convenience overload for community candidates.
BudgetAllocation progressive_budget(std::span<CommunitySolution> solutions, std::size_t k);

}  // namespace cim
