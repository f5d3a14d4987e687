#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cim/community.hpp"
#include "cim/dataset.hpp"
#include "cim/edge_list.hpp"
#include "cim/experiment.hpp"
#include "cim/heuristics.hpp"
#include "cim/pipeline.hpp"
#include "cim/weights.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;

struct ConfigError : cim::Error {
  using cim::Error::Error;
};

struct GlobalOptions {
  std::string cache_dir;
  bool offline = false;
  std::uint64_t rng_seed = 0;
};

struct GraphOptions {
  std::string source;
  std::string weights = "wc";
  bool directed = false;
};

std::string default_cache_dir() {
  if (const char* env = std::getenv("CIM_CACHE_DIR"); env && *env) return env;
  if (const char* xdg = std::getenv("XDG_CACHE_HOME"); xdg && *xdg) return (fs::path(xdg) / "cimpp").string();
  if (const char* home = std::getenv("HOME"); home && *home) return (fs::path(home) / ".cache" / "cimpp").string();
  return ".cimpp-cache";
}

struct LoadedGraph {
  std::string network;
  cim::EdgeWeightModel model;
  cim::WeightedDigraph graph;
};

// A path that exists is read directly; anything else goes through the dataset cache.
LoadedGraph load_graph(const GraphOptions& opt, const GlobalOptions& global) {
  LoadedGraph out;
  out.model = [&] {
    try {
      return cim::parse_weight_model(opt.weights, global.rng_seed);
    } catch (const cim::Error& e) {
      throw ConfigError(e.what());
    }
  }();

  std::string path = opt.source;
  if (fs::exists(path)) {
    out.network = fs::path(path).stem().string();
  } else {
    cim::FetchOptions fetch{global.cache_dir, global.offline, ""};
    path = cim::fetch_dataset(opt.source, fetch);
    out.network = fs::path(path).stem().string();
  }

  if (std::holds_alternative<cim::ExplicitWeights>(out.model)) {
    out.graph = cim::load_weighted_edge_list(path);
  } else {
    auto dir = opt.directed ? cim::EdgeDirection::Directed : cim::EdgeDirection::Undirected;
    out.graph = cim::apply_weight_model(cim::load_edge_list(path, dir), out.model);
  }
  return out;
}

void add_graph_options(CLI::App* cmd, GraphOptions& opt, bool weights) {
  cmd->add_option("graph", opt.source, "Edge list path, dataset name (deezer, dblp, amazon) or URL")->required();
  cmd->add_flag("--directed", opt.directed, "Read `u v` lines as one directed edge each");
  if (weights) {
    cmd->add_option("--weights", opt.weights, "Edge weight model: wc, tv or explicit (`u v p` input)")
        ->capture_default_str();
  }
}

std::vector<std::string> split_list(const std::vector<std::string>& items) {
  std::vector<std::string> out;
  for (const auto& item : items) {
    std::size_t start = 0;
    while (start <= item.size()) {
      auto comma = item.find(',', start);
      if (comma == std::string::npos) comma = item.size();
      if (comma > start) out.push_back(item.substr(start, comma - start));
      start = comma + 1;
    }
  }
  return out;
}

std::vector<cim::Algorithm> parse_algorithms(const std::vector<std::string>& names) {
  std::vector<cim::Algorithm> out;
  for (const auto& n : split_list(names)) {
    try {
      out.push_back(cim::parse_algorithm(n));
    } catch (const cim::Error& e) {
      throw ConfigError(e.what());
    }
  }
  return out;
}

std::vector<std::size_t> parse_budgets(const std::vector<std::string>& items) {
  std::vector<std::size_t> out;
  for (const auto& s : split_list(items)) {
    std::size_t used = 0;
    unsigned long long v = 0;
    try {
      v = std::stoull(s, &used);
    } catch (const std::logic_error&) {
      used = 0;
    }
    if (used != s.size() || s.empty() || s[0] == '-') throw ConfigError("invalid budget '" + s + "'");
    out.push_back(v);
  }
  return out;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw cim::Error("cannot write '" + path + "'");
  return out;
}

int cmd_stats(const GraphOptions& opt, const GlobalOptions& global) {
  GraphOptions unweighted = opt;
  unweighted.weights = "wc";
  auto g = load_graph(unweighted, global);
  auto s = cim::graph_stats(g.graph, global.rng_seed);
  json j;
  j["network"] = g.network;
  j["nodes"] = s.nodes;
  j["edges"] = s.edges;
  j["avg_degree"] = s.avg_degree;
  j["normalized_modularity"] = s.normalized_modularity;
  j["communities"] = s.communities;
  std::cout << j.dump(2) << '\n';
  return 0;
}

cim::Partition partition_for(const cim::WeightedDigraph& g, const std::string& partition_in, double gamma,
                             std::uint64_t seed) {
  if (!partition_in.empty()) return cim::load_partition(g, partition_in);
  return cim::detect_communities(g, gamma, seed);
}

int cmd_scores(const GraphOptions& opt, const GlobalOptions& global, double gamma, const std::string& partition_in,
               const std::string& out_path) {
  auto g = load_graph(opt, global);
  auto part = partition_for(g.graph, partition_in, gamma, global.rng_seed);
  auto dd = cim::diffusion_degrees(g.graph);
  auto cdd = cim::community_diffusion_degrees(g.graph, part);
  std::ofstream file;
  if (!out_path.empty()) file = open_output(out_path);
  std::ostream& out = out_path.empty() ? std::cout : file;
  out << "node,dd,cdd\n";
  char buf[96];
  for (cim::NodeId v = 0; v < g.graph.node_count(); ++v) {
    std::snprintf(buf, sizeof buf, "%lld,%.6f,%.6f\n", static_cast<long long>(g.graph.label(v)), dd[v], cdd[v]);
    out << buf;
  }
  return 0;
}

int cmd_partition(const GraphOptions& opt, const GlobalOptions& global, double gamma, const std::string& out_path) {
  GraphOptions unweighted = opt;
  unweighted.weights = "wc";
  auto g = load_graph(unweighted, global);
  auto part = cim::detect_communities(g.graph, gamma, global.rng_seed);
  if (out_path.empty()) {
    cim::write_partition(g.graph, part, std::cout);
  } else {
    cim::save_partition(g.graph, part, out_path);
  }
  json j;
  j["communities"] = part.community_count();
  j["modularity"] = cim::modularity(g.graph, part, gamma);
  j["normalized_modularity"] = cim::normalized_modularity(g.graph, part);
  std::cerr << j.dump() << '\n';
  return 0;
}

int cmd_select(const GraphOptions& opt, const GlobalOptions& global, cim::PipelineConfig cfg,
               const std::string& algo, const std::string& partition_in) {
  try {
    cfg.algorithm = cim::parse_algorithm(algo);
  } catch (const cim::Error& e) {
    throw ConfigError(e.what());
  }
  if (cfg.budget == 0) throw ConfigError("--budget must be >= 1");
  if (cfg.samples_select == 0 || cfg.samples_eval == 0) throw ConfigError("sample counts must be >= 1");
  cfg.rng_seed = global.rng_seed;
  auto g = load_graph(opt, global);
  std::optional<cim::Partition> part;
  if (!partition_in.empty()) part = cim::load_partition(g.graph, partition_in);
  auto result = cim::run_pipeline(g.graph, cfg, part ? &*part : nullptr);
  for (cim::NodeId v : result.seeds) std::cout << g.graph.label(v) << '\n';
  json j;
  j["algo"] = cim::algorithm_name(cfg.algorithm);
  j["k"] = result.seeds.size();
  j["influence_mean"] = result.influence.mean;
  j["ci95"] = result.influence.ci95_halfwidth;
  j["seconds"] = result.seconds;
  std::cout << j.dump() << '\n';
  return 0;
}

int cmd_bench(const GraphOptions& opt, const GlobalOptions& global, cim::ExperimentConfig cfg,
              const std::vector<std::string>& algos, const std::vector<std::string>& budgets) {
  cfg.algorithms = parse_algorithms(algos);
  cfg.budgets = parse_budgets(budgets);
  cfg.rng_seed = global.rng_seed;
  try {
    cfg.validate();
  } catch (const cim::Error& e) {
    throw ConfigError(e.what());
  }
  auto g = load_graph(opt, global);
  cfg.network = g.network;
  cfg.weight_model = g.model;

  std::ofstream file;
  if (!cfg.out_path.empty()) file = open_output(cfg.out_path);
  std::ostream& csv = cfg.out_path.empty() ? std::cout : file;
  auto report = cim::run_experiments(g.graph, cfg, csv, std::cerr);
  return report.failures == 0 ? 0 : kExitFailure;
}

int cmd_fetch(const std::string& name, const GlobalOptions& global, const std::string& sha256) {
  std::cout << cim::fetch_dataset(name, {global.cache_dir, global.offline, sha256}) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Community-aware influence maximization under the independent cascade model"};
  app.require_subcommand(1);
  GlobalOptions global;
  global.cache_dir = default_cache_dir();
  app.add_option("--cache-dir", global.cache_dir, "Dataset cache directory")->capture_default_str();
  app.add_flag("--offline", global.offline, "Use cached datasets only");
  app.add_option("--rng-seed", global.rng_seed, "Seed for detection, weights and simulation")->capture_default_str();

  GraphOptions graph;
  double gamma = 1.0;
  std::string partition_in, out_path;

  auto* stats = app.add_subcommand("stats", "Node/edge counts, average degree and modularity");
  add_graph_options(stats, graph, false);

  auto* scores = app.add_subcommand("scores", "Per-node diffusion degree and community diffusion degree as CSV");
  add_graph_options(scores, graph, true);
  scores->add_option("--gamma", gamma, "Modularity resolution")->capture_default_str();
  scores->add_option("--partition-in", partition_in, "Use this partition instead of detecting one");
  scores->add_option("--out", out_path, "Write CSV here instead of stdout");

  auto* partition = app.add_subcommand("partition", "Detect communities");
  add_graph_options(partition, graph, false);
  partition->add_option("--gamma", gamma, "Modularity resolution")->capture_default_str();
  partition->add_option("--partition-out", out_path, "Write `label community` lines here instead of stdout");

  cim::PipelineConfig pipeline;
  std::string algo = "community-im++";
  auto* select = app.add_subcommand("select", "Select seeds and report their influence");
  add_graph_options(select, graph, true);
  select->add_option("--algo", algo, "degree, celf, community-im or community-im++")->capture_default_str();
  select->add_option("--budget,-k", pipeline.budget, "Number of seeds")->capture_default_str();
  select->add_option("--samples-select", pipeline.samples_select, "Simulations per marginal gain")
      ->capture_default_str();
  select->add_option("--samples-eval", pipeline.samples_eval, "Simulations for the final estimate")
      ->capture_default_str();
  select->add_option("--gamma", pipeline.gamma, "Modularity resolution")->capture_default_str();
  select->add_option("--partition-in", partition_in, "Use this partition instead of detecting one");

  cim::ExperimentConfig experiment;
  std::vector<std::string> algos{"degree,celf,community-im,community-im++"}, budgets{"5,20,100,200,400"};
  bool no_runtime = false;
  auto* bench = app.add_subcommand("bench", "Run every algorithm at every budget and write CSV rows");
  add_graph_options(bench, graph, true);
  bench->add_option("--algos", algos, "Comma-separated algorithms")->capture_default_str();
  bench->add_option("--budgets", budgets, "Comma-separated increasing budgets")->capture_default_str();
  bench->add_option("--samples-select", experiment.samples_select, "Simulations per marginal gain")
      ->capture_default_str();
  bench->add_option("--samples-eval", experiment.samples_eval, "Simulations for the final estimate")
      ->capture_default_str();
  bench->add_option("--gamma", experiment.gamma, "Modularity resolution")->capture_default_str();
  bench->add_option("--out", experiment.out_path, "CSV output path (default stdout)");
  bench->add_flag("--no-runtime", no_runtime, "Write 0 in the runtime column so reruns are byte-identical");

  std::string dataset, sha256;
  auto* fetch = app.add_subcommand("fetch", "Download a dataset into the cache and print its path");
  fetch->add_option("dataset", dataset, "Dataset name or URL")->required();
  fetch->add_option("--sha256", sha256, "Expected checksum of the download");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*stats) return cmd_stats(graph, global);
    if (*scores) return cmd_scores(graph, global, gamma, partition_in, out_path);
    if (*partition) return cmd_partition(graph, global, gamma, out_path);
    if (*select) return cmd_select(graph, global, pipeline, algo, partition_in);
    if (*bench) {
      experiment.record_runtime = !no_runtime;
      return cmd_bench(graph, global, experiment, algos, budgets);
    }
    if (*fetch) return cmd_fetch(dataset, global, sha256);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitFailure;
}
