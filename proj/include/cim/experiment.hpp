#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "cim/graph.hpp"
#include "cim/pipeline.hpp"
#include "cim/weights.hpp"

namespace cim {

struct ExperimentConfig {
  /// Network name written to every row; the CLI fills it from the dataset
  /// name or file stem.
  std::string network;
  EdgeWeightModel weight_model = WeightedCascade{};
  std::vector<Algorithm> algorithms;
  /// Strictly increasing, positive.
  std::vector<std::size_t> budgets;
  double gamma = 1.0;
  std::size_t samples_select = 1000;
  std::size_t samples_eval = 10000;
  std::uint64_t rng_seed = 0;
  std::string out_path;
  /// When false the runtime column is written as 0 so reruns are byte-identical.
  bool record_runtime = true;

  /// Throws Error describing the first violated invariant.
  void validate() const;
};

struct ResultRow {
  std::string network;
  std::string weight_model;
  std::string algorithm;
  std::size_t budget = 0;
  double influence_mean = 0.0;
  double ci95 = 0.0;
  double runtime_seconds = 0.0;
  std::size_t seed_count_actual = 0;

  friend bool operator==(const ResultRow&, const ResultRow&) = default;
};

/// Column names in ResultRow field order.
std::string csv_header();
/// One CSV line (no newline); reals with 4 decimals.
std::string format_csv_row(const ResultRow& row);
/// Parses a file produced by format_csv_row with csv_header first.
std::vector<ResultRow> read_csv(std::istream& in);

/// Rounds the real fields to what the CSV stores.
ResultRow rounded(ResultRow row);

struct ExperimentReport {
  std::vector<ResultRow> rows;
  std::size_t failures = 0;
};

/// Runs every (algorithm, budget) pair on the already weighted graph, each
/// independently so the runtime column measures that budget alone. Rows are
/// written to `csv` (header first) and flushed as they finish; failures are
/// reported on `log` and the run continues. Returned rows equal the CSV.
ExperimentReport run_experiments(const WeightedDigraph& g, const ExperimentConfig& config, std::ostream& csv,
                                 std::ostream& log);

struct GraphStats {
  std::size_t nodes = 0;
  /// Undirected edge count (each unordered pair once).
  std::size_t edges = 0;
  /// 2 * edges / nodes.
  double avg_degree = 0.0;
  /// Normalized modularity of detect_communities(g, 1, seed).
  double normalized_modularity = 0.0;
  std::size_t communities = 0;
};

GraphStats graph_stats(const WeightedDigraph& g, std::uint64_t seed = 0);

}  // namespace cim
