#include "cim/experiment.hpp"

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "cim/community.hpp"

namespace cim {
namespace {

std::string fixed4(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4f", x);
  return buf;
}

double round4(double x) { return std::strtod(fixed4(x).c_str(), nullptr); }

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

void ExperimentConfig::validate() const {
  if (algorithms.empty()) throw Error("at least one algorithm is required");
  if (budgets.empty()) throw Error("at least one budget is required");
  for (std::size_t i = 0; i < budgets.size(); ++i) {
    if (budgets[i] == 0) throw Error("budgets must be positive");
    if (i > 0 && budgets[i] <= budgets[i - 1]) throw Error("budgets must be strictly increasing");
  }
  if (!(gamma > 0.0)) throw Error("gamma must be > 0");
  if (samples_select == 0 || samples_eval == 0) throw Error("sample counts must be >= 1");
}

std::string csv_header() {
  return "network,weight_model,algorithm,budget,influence_mean,ci95,runtime_seconds,seed_count_actual";
}

std::string format_csv_row(const ResultRow& row) {
  for (const std::string* s : {&row.network, &row.weight_model, &row.algorithm}) {
    if (s->find_first_of(",\n\"") != std::string::npos) throw Error("CSV field '" + *s + "' needs quoting");
  }
  std::ostringstream out;
  out << row.network << ',' << row.weight_model << ',' << row.algorithm << ',' << row.budget << ','
      << fixed4(row.influence_mean) << ',' << fixed4(row.ci95) << ',' << fixed4(row.runtime_seconds) << ','
      << row.seed_count_actual;
  return out.str();
}

std::vector<ResultRow> read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != csv_header()) throw ParseError(1, "missing or unexpected CSV header");
  std::vector<ResultRow> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    auto f = split_csv(line);
    if (f.size() != 8) throw ParseError(line_no, "expected 8 columns, got " + std::to_string(f.size()));
    try {
      ResultRow row;
      row.network = f[0];
      row.weight_model = f[1];
      row.algorithm = f[2];
      row.budget = std::stoull(f[3]);
      row.influence_mean = std::stod(f[4]);
      row.ci95 = std::stod(f[5]);
      row.runtime_seconds = std::stod(f[6]);
      row.seed_count_actual = std::stoull(f[7]);
      rows.push_back(std::move(row));
    } catch (const std::logic_error&) {
      throw ParseError(line_no, "malformed numeric field");
    }
  }
  return rows;
}

ResultRow rounded(ResultRow row) {
  row.influence_mean = round4(row.influence_mean);
  row.ci95 = round4(row.ci95);
  row.runtime_seconds = round4(row.runtime_seconds);
  return row;
}

ExperimentReport run_experiments(const WeightedDigraph& g, const ExperimentConfig& config, std::ostream& csv,
                                 std::ostream& log) {
  config.validate();
  ExperimentReport report;
  csv << csv_header() << '\n' << std::flush;
  for (Algorithm algorithm : config.algorithms) {
    for (std::size_t budget : config.budgets) {
      PipelineConfig pc;
      pc.algorithm = algorithm;
      pc.budget = budget;
      pc.gamma = config.gamma;
      pc.samples_select = config.samples_select;
      pc.samples_eval = config.samples_eval;
      pc.rng_seed = config.rng_seed;
      try {
        PipelineResult result = run_pipeline(g, pc);
        ResultRow row;
        row.network = config.network;
        row.weight_model = weight_model_name(config.weight_model);
        row.algorithm = algorithm_name(algorithm);
        row.budget = budget;
        row.influence_mean = result.influence.mean;
        row.ci95 = result.influence.ci95_halfwidth;
        row.runtime_seconds = config.record_runtime ? result.seconds : 0.0;
        row.seed_count_actual = result.seeds.size();
        row = rounded(row);
        csv << format_csv_row(row) << '\n' << std::flush;
        report.rows.push_back(std::move(row));
      } catch (const std::exception& e) {
        ++report.failures;
        log << "error: " << algorithm_name(algorithm) << " k=" << budget << ": " << e.what() << '\n';
      }
    }
  }
  return report;
}

GraphStats graph_stats(const WeightedDigraph& g, std::uint64_t seed) {
  GraphStats stats;
  const UndirectedView view = undirected_view(g);
  stats.nodes = g.node_count();
  stats.edges = view.edge_count();
  stats.avg_degree = stats.nodes == 0 ? 0.0 : 2.0 * static_cast<double>(stats.edges) / static_cast<double>(stats.nodes);
  if (stats.edges > 0) {
    Partition part = detect_communities(g, 1.0, seed);
    stats.normalized_modularity = normalized_modularity(view, part);
    stats.communities = part.community_count();
  }
  return stats;
}

}  // namespace cim
