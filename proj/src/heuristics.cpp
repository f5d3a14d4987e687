#include "cim/heuristics.hpp"

#include <algorithm>
#include <string>

#include <tbb/blocked_range.h>
#include <tbb/parallel_for.h>

namespace cim {
namespace {

// miss[u] accumulates the probability that no length-<=2 path to u is live.
struct TwoHopScratch {
  std::vector<double> miss;
  std::vector<NodeId> touched;

  explicit TwoHopScratch(std::size_t n) : miss(n, 1.0) {}
};

// `keep(u)` filters path endpoints.
template <class Keep>
double two_hop_activation(const WeightedDigraph& g, NodeId v, TwoHopScratch& s, Keep keep) {
  s.touched.clear();
  auto nbrs = g.out_neighbors(v);
  auto probs = g.out_probabilities(v);
  for (std::size_t i = 0; i < nbrs.size(); ++i) {
    const NodeId w = nbrs[i];
    const double p_vw = probs[i];
    if (keep(w)) {
      s.touched.push_back(w);
      s.miss[w] *= 1.0 - p_vw;
    }
    auto nbrs2 = g.out_neighbors(w);
    auto probs2 = g.out_probabilities(w);
    for (std::size_t j = 0; j < nbrs2.size(); ++j) {
      const NodeId u = nbrs2[j];
      if (u == v || !keep(u)) continue;
      s.touched.push_back(u);
      s.miss[u] *= 1.0 - p_vw * probs2[j];
    }
  }
  // Each target is summed once; touched may list it several times.
  std::sort(s.touched.begin(), s.touched.end());
  s.touched.erase(std::unique(s.touched.begin(), s.touched.end()), s.touched.end());
  double total = 0.0;
  for (NodeId u : s.touched) {
    total += 1.0 - s.miss[u];
    s.miss[u] = 1.0;
  }
  return total;
}

void check_node(const WeightedDigraph& g, NodeId v) {
  if (v >= g.node_count()) throw Error("node " + std::to_string(v) + " out of range");
}

}  // namespace

double diffusion_degree(const WeightedDigraph& g, NodeId v) {
  check_node(g, v);
  TwoHopScratch s(g.node_count());
  return two_hop_activation(g, v, s, [](NodeId) { return true; });
}

double community_diffusion_degree(const WeightedDigraph& g, const Partition& part, NodeId v) {
  check_node(g, v);
  if (part.node_count() != g.node_count()) throw Error("partition does not cover the graph");
  TwoHopScratch s(g.node_count());
  const CommunityId own = part.community_of(v);
  return two_hop_activation(g, v, s, [&](NodeId u) { return part.community_of(u) != own; });
}

std::vector<double> diffusion_degrees(const WeightedDigraph& g) {
  std::vector<double> out(g.node_count());
  tbb::parallel_for(tbb::blocked_range<NodeId>(0, static_cast<NodeId>(g.node_count()), 256),
                    [&](const tbb::blocked_range<NodeId>& r) {
                      TwoHopScratch s(g.node_count());
                      for (NodeId v = r.begin(); v != r.end(); ++v) {
                        out[v] = two_hop_activation(g, v, s, [](NodeId) { return true; });
                      }
                    });
  return out;
}

std::vector<double> community_diffusion_degrees(const WeightedDigraph& g, const Partition& part) {
  if (part.node_count() != g.node_count()) throw Error("partition does not cover the graph");
  std::vector<double> out(g.node_count());
  tbb::parallel_for(tbb::blocked_range<NodeId>(0, static_cast<NodeId>(g.node_count()), 256),
                    [&](const tbb::blocked_range<NodeId>& r) {
                      TwoHopScratch s(g.node_count());
                      for (NodeId v = r.begin(); v != r.end(); ++v) {
                        const CommunityId own = part.community_of(v);
                        out[v] = two_hop_activation(g, v, s, [&](NodeId u) { return part.community_of(u) != own; });
                      }
                    });
  return out;
}

std::vector<NodeId> degree_seeds(const WeightedDigraph& g, std::size_t k) {
  if (k > g.node_count()) {
    throw Error("budget " + std::to_string(k) + " exceeds node count " + std::to_string(g.node_count()));
  }
  std::vector<NodeId> order(g.node_count());
  for (NodeId v = 0; v < order.size(); ++v) order[v] = v;
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k), order.end(),
                    [&](NodeId a, NodeId b) {
                      if (g.out_degree(a) != g.out_degree(b)) return g.out_degree(a) > g.out_degree(b);
                      return a < b;
                    });
  order.resize(k);
  return order;
}

}  // namespace cim
