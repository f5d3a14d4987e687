#include "cim/diffusion.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <tbb/blocked_range.h>
#include <tbb/parallel_reduce.h>

namespace cim {
namespace {

// Visit marks reused across cascades via an epoch counter.
struct Scratch {
  std::vector<std::uint32_t> mark;
  std::uint32_t epoch = 0;
  std::vector<NodeId> queue;

  explicit Scratch(std::size_t n) : mark(n, 0) {}

  void reset() {
    if (++epoch == 0) {
      std::fill(mark.begin(), mark.end(), 0);
      epoch = 1;
    }
    queue.clear();
  }
  bool visit(NodeId v) {
    if (mark[v] == epoch) return false;
    mark[v] = epoch;
    queue.push_back(v);
    return true;
  }
};

void check_seeds(const WeightedDigraph& g, std::span<const NodeId> seeds) {
  for (NodeId s : seeds) {
    if (s >= g.node_count()) throw Error("seed node " + std::to_string(s) + " out of range");
  }
}

// Breadth-first cascade; the activated set is left in scratch.queue.
void run_cascade(const WeightedDigraph& g, std::span<const NodeId> seeds, const LiveEdgeWorld& world, Scratch& s) {
  s.reset();
  for (NodeId v : seeds) s.visit(v);
  for (std::size_t head = 0; head < s.queue.size(); ++head) {
    NodeId v = s.queue[head];
    const EdgeId first = g.first_edge(v);
    auto nbrs = g.out_neighbors(v);
    auto probs = g.out_probabilities(v);
    for (std::size_t i = 0; i < nbrs.size(); ++i) {
      if (s.mark[nbrs[i]] != s.epoch && world.is_live(first + i, probs[i])) s.visit(nbrs[i]);
    }
  }
}

struct Moments {
  double sum = 0.0;
  double sum_sq = 0.0;
};

constexpr std::size_t kGrain = 64;

}  // namespace

CascadeResult simulate_cascade(const WeightedDigraph& g, std::span<const NodeId> seeds, const LiveEdgeWorld& world) {
  check_seeds(g, seeds);
  Scratch s(g.node_count());
  s.reset();
  CascadeResult result;
  for (NodeId v : seeds) {
    if (s.visit(v)) result.activation_round.push_back(0);
  }
  for (std::size_t head = 0; head < s.queue.size(); ++head) {
    NodeId v = s.queue[head];
    const std::uint32_t next_round = result.activation_round[head] + 1;
    const EdgeId first = g.first_edge(v);
    auto nbrs = g.out_neighbors(v);
    auto probs = g.out_probabilities(v);
    for (std::size_t i = 0; i < nbrs.size(); ++i) {
      if (s.mark[nbrs[i]] != s.epoch && world.is_live(first + i, probs[i])) {
        s.visit(nbrs[i]);
        result.activation_round.push_back(next_round);
      }
    }
  }
  result.activated = std::move(s.queue);
  return result;
}

InfluenceEstimate estimate_influence(const WeightedDigraph& g, std::span<const NodeId> seeds, std::size_t samples,
                                     std::uint64_t seed) {
  if (samples == 0) throw Error("samples must be >= 1");
  check_seeds(g, seeds);
  // Cascade sizes are integers, so these sums are exact below 2^53 and the
  // result is independent of how the range is split.
  Moments total = tbb::parallel_reduce(
      tbb::blocked_range<std::size_t>(0, samples, kGrain), Moments{},
      [&](const tbb::blocked_range<std::size_t>& r, Moments acc) {
        Scratch s(g.node_count());
        for (std::size_t j = r.begin(); j != r.end(); ++j) {
          run_cascade(g, seeds, sample_world(seed, j), s);
          double size = static_cast<double>(s.queue.size());
          acc.sum += size;
          acc.sum_sq += size * size;
        }
        return acc;
      },
      [](Moments a, const Moments& b) {
        a.sum += b.sum;
        a.sum_sq += b.sum_sq;
        return a;
      });

  const double n = static_cast<double>(samples);
  InfluenceEstimate est;
  est.samples = samples;
  est.mean = total.sum / n;
  if (samples > 1) {
    double var = (total.sum_sq - total.sum * total.sum / n) / (n - 1.0);
    est.ci95_halfwidth = 1.96 * std::sqrt(std::max(var, 0.0)) / std::sqrt(n);
  }
  return est;
}

double exact_influence(const WeightedDigraph& g, std::span<const NodeId> seeds) {
  const std::size_t m = g.edge_count();
  if (m > kExactEdgeLimit) {
    throw Error("oracle limit: exact influence enumerates 2^edges subsets, graph has " + std::to_string(m) +
                " edges (max " + std::to_string(kExactEdgeLimit) + ")");
  }
  check_seeds(g, seeds);
  if (seeds.empty()) return 0.0;

  Scratch s(g.node_count());
  double expected = 0.0;
  for (std::uint64_t live = 0; live < (std::uint64_t{1} << m); ++live) {
    double prob = 1.0;
    for (EdgeId e = 0; e < m; ++e) {
      double p = g.edge_probability(e);
      prob *= (live >> e) & 1 ? p : 1.0 - p;
    }
    if (prob == 0.0) continue;
    s.reset();
    for (NodeId v : seeds) s.visit(v);
    for (std::size_t head = 0; head < s.queue.size(); ++head) {
      NodeId v = s.queue[head];
      for (EdgeId e = g.first_edge(v); e < g.first_edge(v) + g.out_degree(v); ++e) {
        if ((live >> e) & 1) s.visit(g.edge_target(e));
      }
    }
    expected += prob * static_cast<double>(s.queue.size());
  }
  return expected;
}

double estimate_influence_in_community(const WeightedDigraph& g, const Partition& part, CommunityId community,
                                       std::span<const NodeId> seeds, std::size_t samples, std::uint64_t seed,
                                       std::span<const double> bonus) {
  if (samples == 0) throw Error("samples must be >= 1");
  if (part.node_count() != g.node_count()) throw Error("partition does not cover the graph");
  if (community >= part.community_count()) {
    throw Error("community " + std::to_string(community) + " out of range");
  }
  if (!bonus.empty() && bonus.size() != g.node_count()) throw Error("bonus vector size differs from node count");
  for (double h : bonus) {
    if (!(h >= 0.0) || !std::isfinite(h)) throw Error("bonus weights must be finite and >= 0");
  }
  check_seeds(g, seeds);

  std::vector<NodeId> members;
  for (NodeId v = 0; v < g.node_count(); ++v) {
    if (part.community_of(v) == community) members.push_back(v);
  }
  InducedSubgraph sub = induced_subgraph(g, members);
  std::vector<NodeId> local_seeds;
  for (NodeId s : seeds) {
    if (part.community_of(s) == community) {
      auto it = std::lower_bound(sub.parent_nodes.begin(), sub.parent_nodes.end(), s);
      local_seeds.push_back(static_cast<NodeId>(it - sub.parent_nodes.begin()));
    }
  }

  // Integer activation counts per node keep the sum exact and schedule-independent.
  using Counts = std::vector<std::uint64_t>;
  Counts counts = tbb::parallel_reduce(
      tbb::blocked_range<std::size_t>(0, samples, kGrain), Counts(sub.graph.node_count(), 0),
      [&](const tbb::blocked_range<std::size_t>& r, Counts acc) {
        Scratch s(sub.graph.node_count());
        for (std::size_t j = r.begin(); j != r.end(); ++j) {
          run_cascade(sub.graph, local_seeds, sample_world(seed, j, sub.parent_edges), s);
          for (NodeId v : s.queue) ++acc[v];
        }
        return acc;
      },
      [](Counts a, const Counts& b) {
        for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
        return a;
      });
  double total = 0.0;
  for (NodeId v = 0; v < counts.size(); ++v) {
    total += static_cast<double>(counts[v]) * (1.0 + (bonus.empty() ? 0.0 : bonus[sub.parent_nodes[v]]));
  }
  return total / static_cast<double>(samples);
}

}  // namespace cim
