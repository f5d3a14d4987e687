#pragma once

#include <cstddef>
#include <vector>

#include "cim/community.hpp"
#include "cim/graph.hpp"

namespace cim {

/// Expected number of nodes within two hops of v activated through live
/// paths of length at most two:
///   sum over u in N2(v) of 1 - prod over such paths P of (1 - p(P)).
/// The direct edge and each v->w->u path share no edges, so the product is
/// exact for this path family.
double diffusion_degree(const WeightedDigraph& g, NodeId v);

/// diffusion_degree restricted to targets outside v's community. Paths may
/// pass through any intermediate node; only the endpoint is filtered.
double community_diffusion_degree(const WeightedDigraph& g, const Partition& part, NodeId v);

/// Scores for every node, computed in parallel.
std::vector<double> diffusion_degrees(const WeightedDigraph& g);
std::vector<double> community_diffusion_degrees(const WeightedDigraph& g, const Partition& part);

/// The k nodes of largest out-degree, descending; ties by ascending index.
/// Throws Error if k > node count.
std::vector<NodeId> degree_seeds(const WeightedDigraph& g, std::size_t k);

}  // namespace cim
