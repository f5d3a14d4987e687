#include "cim/sampled_influence.hpp"

#include <cmath>
#include <string>

#include <tbb/blocked_range.h>
#include <tbb/parallel_reduce.h>

#include "cim/diffusion.hpp"

namespace cim {
namespace {

struct Scratch {
  std::vector<std::uint32_t> mark;
  std::uint32_t epoch = 0;
  std::vector<NodeId> queue;

  std::uint32_t next_epoch() {
    if (++epoch == 0) {
      std::fill(mark.begin(), mark.end(), 0);
      epoch = 1;
    }
    return epoch;
  }
};

constexpr std::size_t kGrain = 32;

}  // namespace

SampledInfluence::SampledInfluence(WeightedDigraph g, std::size_t samples, std::uint64_t seed,
                                   std::vector<double> bonus, std::vector<EdgeId> edge_ids)
    : graph_(std::move(g)),
      samples_(samples),
      seed_(seed),
      bonus_(std::move(bonus)),
      edge_ids_(std::move(edge_ids)) {
  if (samples_ == 0) throw Error("samples must be >= 1");
  if (!bonus_.empty() && bonus_.size() != graph_.node_count()) {
    throw Error("bonus vector size differs from node count");
  }
  for (double h : bonus_) {
    if (!(h >= 0.0) || !std::isfinite(h)) throw Error("bonus weights must be finite and >= 0");
  }
  if (!edge_ids_.empty() && edge_ids_.size() != graph_.edge_count()) {
    throw Error("edge id map size differs from edge count");
  }
  covered_.assign((samples_ * graph_.node_count() + 63) / 64, 0);
}

// Breadth-first search from v in world j that never enters nodes already
// covered by the seed set; returns the value of the newly reached nodes and,
// when `commit` is given, marks them covered there.
double SampledInfluence::expand(NodeId v, std::size_t j, std::vector<std::uint32_t>& mark, std::uint32_t epoch,
                                std::vector<NodeId>& queue, std::vector<std::uint64_t>* commit) const {
  if (covered(j, v)) return 0.0;
  const LiveEdgeWorld world = sample_world(seed_, j, edge_ids_);
  queue.clear();
  queue.push_back(v);
  mark[v] = epoch;
  double gained = 0.0;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const NodeId x = queue[head];
    gained += bonus_.empty() ? 1.0 : 1.0 + bonus_[x];
    if (commit != nullptr) {
      std::size_t bit = j * graph_.node_count() + x;
      (*commit)[bit >> 6] |= std::uint64_t{1} << (bit & 63);
    }
    const EdgeId first = graph_.first_edge(x);
    auto nbrs = graph_.out_neighbors(x);
    auto probs = graph_.out_probabilities(x);
    for (std::size_t i = 0; i < nbrs.size(); ++i) {
      const NodeId y = nbrs[i];
      if (mark[y] == epoch || covered(j, y)) continue;
      if (world.is_live(first + i, probs[i])) {
        mark[y] = epoch;
        queue.push_back(y);
      }
    }
  }
  return gained;
}

double SampledInfluence::marginal_gain(NodeId v) const {
  if (v >= graph_.node_count()) throw Error("node " + std::to_string(v) + " out of range");
  const std::size_t n = graph_.node_count();
  double total = tbb::parallel_deterministic_reduce(
      tbb::blocked_range<std::size_t>(0, samples_, kGrain), 0.0,
      [&](const tbb::blocked_range<std::size_t>& r, double acc) {
        thread_local Scratch scratch;
        if (scratch.mark.size() < n) {
          scratch.mark.assign(n, 0);
          scratch.epoch = 0;
        }
        for (std::size_t j = r.begin(); j != r.end(); ++j) {
          acc += expand(v, j, scratch.mark, scratch.next_epoch(), scratch.queue, nullptr);
        }
        return acc;
      },
      [](double a, double b) { return a + b; });
  return total / static_cast<double>(samples_);
}

void SampledInfluence::add_seed(NodeId v) {
  if (v >= graph_.node_count()) throw Error("node " + std::to_string(v) + " out of range");
  // Worlds may share bitset words, so coverage is updated sequentially.
  Scratch scratch;
  scratch.mark.assign(graph_.node_count(), 0);
  double gained = 0.0;
  for (std::size_t j = 0; j < samples_; ++j) {
    gained += expand(v, j, scratch.mark, scratch.next_epoch(), scratch.queue, &covered_);
  }
  total_ += gained;
  seeds_.push_back(v);
}

}  // namespace cim
