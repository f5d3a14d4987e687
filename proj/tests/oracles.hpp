#pragma once

// Brute-force reference implementations used only by tests. None of these
// call into the code paths they are used to check.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <set>
#include <span>
#include <vector>

#include "cim/community.hpp"
#include "cim/graph.hpp"
#include "cim/rng.hpp"

namespace cim::testing {

struct PlainEdge {
  NodeId from;
  NodeId to;
  double p;
};

inline std::vector<PlainEdge> edges_of(const WeightedDigraph& g) {
  std::vector<PlainEdge> out;
  for (NodeId v = 0; v < g.node_count(); ++v) {
    auto nbrs = g.out_neighbors(v);
    auto probs = g.out_probabilities(v);
    for (std::size_t i = 0; i < nbrs.size(); ++i) out.push_back({v, nbrs[i], probs[i]});
  }
  return out;
}

/// Graph with labels 0..n-1 in order and the given directed edges.
inline WeightedDigraph make_graph(std::size_t n, const std::vector<PlainEdge>& edges) {
  GraphBuilder b;
  for (std::size_t v = 0; v < n; ++v) b.add_node(static_cast<NodeLabel>(v));
  for (const auto& e : edges) b.add_edge(e.from, e.to, e.p);
  return std::move(b).build();
}

/// Random directed graph on n nodes with at most max_edges edges and
/// probabilities uniform in [0, 1].
inline WeightedDigraph random_small_graph(SplitMix64& rng, std::size_t n, std::size_t max_edges) {
  std::vector<PlainEdge> edges;
  std::set<std::pair<NodeId, NodeId>> used;
  const std::size_t target = 1 + scale_to(rng(), max_edges);
  for (std::size_t attempt = 0; attempt < 20 * target && edges.size() < target; ++attempt) {
    auto u = static_cast<NodeId>(scale_to(rng(), n));
    auto v = static_cast<NodeId>(scale_to(rng(), n));
    if (u == v || !used.insert({u, v}).second) continue;
    edges.push_back({u, v, rng.uniform()});
  }
  return make_graph(n, edges);
}

/// Calls fn(live_mask, probability) for every live-edge subset.
inline void for_each_world(const std::vector<PlainEdge>& edges,
                           const std::function<void(std::uint64_t, double)>& fn) {
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << edges.size()); ++mask) {
    double prob = 1.0;
    for (std::size_t i = 0; i < edges.size(); ++i) prob *= (mask >> i) & 1 ? edges[i].p : 1.0 - edges[i].p;
    fn(mask, prob);
  }
}

inline std::vector<bool> reachable(std::size_t n, const std::vector<PlainEdge>& edges, std::uint64_t mask,
                                   std::span<const NodeId> seeds) {
  std::vector<bool> seen(n, false);
  for (NodeId s : seeds) seen[s] = true;
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < edges.size(); ++i) {
      if ((mask >> i) & 1 && seen[edges[i].from] && !seen[edges[i].to]) {
        seen[edges[i].to] = true;
        changed = true;
      }
    }
  }
  return seen;
}

/// Expected number of reached nodes, by enumeration (fixpoint reachability).
inline double enumerate_influence(const WeightedDigraph& g, std::span<const NodeId> seeds) {
  auto edges = edges_of(g);
  double total = 0.0;
  for_each_world(edges, [&](std::uint64_t mask, double prob) {
    auto seen = reachable(g.node_count(), edges, mask, seeds);
    total += prob * static_cast<double>(std::count(seen.begin(), seen.end(), true));
  });
  return total;
}

/// Sum over targets u != v (accepted by keep) of P(a live path of length
/// <= 2 from v reaches u), by enumeration of live-edge subsets.
inline double enumerate_two_hop(const WeightedDigraph& g, NodeId v, const std::function<bool(NodeId)>& keep) {
  // Only edges leaving v or one of its out-neighbors can lie on such a path;
  // the others marginalize out.
  std::vector<PlainEdge> edges;
  for (const auto& e : edges_of(g)) {
    if (e.from == v || g.has_edge(v, e.from)) edges.push_back(e);
  }
  double total = 0.0;
  for_each_world(edges, [&](std::uint64_t mask, double prob) {
    std::vector<bool> one_hop(g.node_count(), false), hit(g.node_count(), false);
    for (std::size_t i = 0; i < edges.size(); ++i) {
      if ((mask >> i) & 1 && edges[i].from == v) one_hop[edges[i].to] = hit[edges[i].to] = true;
    }
    for (std::size_t i = 0; i < edges.size(); ++i) {
      if ((mask >> i) & 1 && one_hop[edges[i].from]) hit[edges[i].to] = true;
    }
    for (NodeId u = 0; u < g.node_count(); ++u) {
      if (u != v && hit[u] && keep(u)) total += prob;
    }
  });
  return total;
}

/// Nodes within two directed hops of v, excluding v, by breadth-first search.
inline std::set<NodeId> bfs_depth_two(const WeightedDigraph& g, NodeId v) {
  std::vector<int> dist(g.node_count(), -1);
  std::vector<NodeId> queue{v};
  dist[v] = 0;
  for (std::size_t h = 0; h < queue.size(); ++h) {
    NodeId x = queue[h];
    if (dist[x] == 2) continue;
    for (NodeId y : g.out_neighbors(x)) {
      if (dist[y] < 0) {
        dist[y] = dist[x] + 1;
        queue.push_back(y);
      }
    }
  }
  std::set<NodeId> out(queue.begin(), queue.end());
  out.erase(v);
  return out;
}

/// Set function with exact influence as value; satisfies GainOracle.
class ExactInfluenceOracle {
 public:
  explicit ExactInfluenceOracle(const WeightedDigraph& g) : g_(&g) {}

  std::size_t candidate_count() const { return g_->node_count(); }
  double marginal_gain(NodeId v) const {
    std::vector<NodeId> with(seeds_);
    with.push_back(v);
    return enumerate_influence(*g_, with) - enumerate_influence(*g_, seeds_);
  }
  void add_seed(NodeId v) { seeds_.push_back(v); }

 private:
  const WeightedDigraph* g_;
  std::vector<NodeId> seeds_;
};

/// Plain greedy: every round recompute every gain, take the max, ties by
/// lowest node index.
inline std::vector<NodeId> naive_greedy(std::size_t n, std::size_t k,
                                        const std::function<double(std::span<const NodeId>)>& value) {
  std::vector<NodeId> chosen;
  while (chosen.size() < std::min(k, n)) {
    double base = value(chosen);
    NodeId best = 0;
    double best_gain = -std::numeric_limits<double>::infinity();
    for (NodeId v = 0; v < n; ++v) {
      if (std::find(chosen.begin(), chosen.end(), v) != chosen.end()) continue;
      std::vector<NodeId> with(chosen);
      with.push_back(v);
      double gain = value(with) - base;
      if (gain > best_gain) {
        best_gain = gain;
        best = v;
      }
    }
    chosen.push_back(best);
  }
  return chosen;
}

/// Best total of sum_i prefix[i][k_i] over allocations with sum k_i = k
/// (or all available nodes if fewer), by exhaustive recursion.
inline double best_allocation_value(const std::vector<std::vector<double>>& prefix, std::size_t k) {
  std::size_t available = 0;
  for (const auto& p : prefix) available += p.size() - 1;
  const std::size_t budget = std::min(k, available);
  std::function<double(std::size_t, std::size_t)> best = [&](std::size_t i, std::size_t left) -> double {
    if (i == prefix.size()) return left == 0 ? 0.0 : -std::numeric_limits<double>::infinity();
    double out = -std::numeric_limits<double>::infinity();
    for (std::size_t take = 0; take <= std::min(left, prefix[i].size() - 1); ++take) {
      out = std::max(out, prefix[i][take] + best(i + 1, left - take));
    }
    return out;
  };
  return best(0, budget);
}

/// Highest modularity over every set partition of the nodes (Bell-number
/// enumeration, so only for tiny graphs). Returns the argmax.
inline std::vector<CommunityId> best_partition_by_enumeration(const WeightedDigraph& g, double gamma,
                                                              double* best_value = nullptr) {
  const std::size_t n = g.node_count();
  // Unit-weight undirected edges
  std::set<std::pair<NodeId, NodeId>> und;
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId v : g.out_neighbors(u)) und.insert({std::min(u, v), std::max(u, v)});
  }
  std::vector<double> deg(n, 0.0);
  for (auto [a, b] : und) {
    deg[a] += 1;
    deg[b] += 1;
  }
  const double m = static_cast<double>(und.size());
  auto score = [&](const std::vector<CommunityId>& c, std::size_t count) {
    std::vector<double> internal(count, 0.0), k(count, 0.0);
    for (auto [a, b] : und) {
      if (c[a] == c[b]) internal[c[a]] += 1;
    }
    for (std::size_t v = 0; v < n; ++v) k[c[v]] += deg[v];
    double q = 0.0;
    for (std::size_t i = 0; i < count; ++i) q += internal[i] - gamma * k[i] * k[i] / (4 * m);
    return q;
  };
  std::vector<CommunityId> current(n, 0), best;
  double best_q = -std::numeric_limits<double>::infinity();
  // restricted growth strings
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t i, std::size_t count) {
    if (i == n) {
      double q = score(current, count);
      if (q > best_q + 1e-12) {
        best_q = q;
        best = current;
      }
      return;
    }
    for (std::size_t c = 0; c <= count; ++c) {
      current[i] = static_cast<CommunityId>(c);
      rec(i + 1, std::max(count, c + 1));
    }
  };
  rec(0, 0);
  if (best_value) *best_value = best_q;
  return best;
}

}  // namespace cim::testing
