#include <doctest.h>

#include <map>
#include <set>
#include <sstream>

#include "cim/edge_list.hpp"
#include "cim/weights.hpp"
#include "oracles.hpp"

using namespace cim;
using cim::testing::PlainEdge;

TEST_CASE("parse_edge_list doubles undirected edges and skips comments") {
  auto g = parse_edge_list("# c\n0 1\n1 2");
  CHECK(g.node_count() == 3);
  CHECK(g.edge_count() == 4);
  CHECK(g.has_edge(0, 1));
  CHECK(g.has_edge(1, 0));
  CHECK(g.has_edge(1, 2));
  CHECK(g.has_edge(2, 1));
}

TEST_CASE("parse_edge_list drops self-loops and duplicates") {
  auto g = parse_edge_list("0 0\n0 1\n0 1");
  CHECK(g.node_count() == 2);
  CHECK(g.edge_count() == 2);
}

TEST_CASE("dense indices follow first-seen order") {
  auto g = parse_edge_list("17\t5\n5 99\n\n# trailing comment\n");
  REQUIRE(g.node_count() == 3);
  CHECK(g.label(0) == 17);
  CHECK(g.label(1) == 5);
  CHECK(g.label(2) == 99);
  CHECK(g.find(99) == NodeId{2});
  CHECK_FALSE(g.find(4).has_value());
}

TEST_CASE("in_degree counts incoming edges") {
  auto g = parse_edge_list("0 1\n2 1\n3 1\n", EdgeDirection::Directed);
  CHECK(g.in_degree(*g.find(1)) == 3);
  CHECK(g.in_degree(*g.find(0)) == 0);
  for (NodeId v = 0; v < g.node_count(); ++v) {
    std::size_t incoming = 0;
    for (NodeId u = 0; u < g.node_count(); ++u) incoming += g.has_edge(u, v);
    CHECK(g.in_degree(v) == incoming);
  }
}

TEST_CASE("malformed lines report their line number") {
  SUBCASE("non-integer token") {
    try {
      parse_edge_list("0 1\n1 x\n");
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.line() == 2);
    }
  }
  SUBCASE("wrong arity") {
    try {
      parse_edge_list("# header\n0 1\n1 2 3\n");
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.line() == 3);
    }
  }
  SUBCASE("csv is not accepted directly") { CHECK_THROWS_AS(parse_edge_list("0,1\n"), ParseError); }
}

TEST_CASE("weighted cascade sets 1/in_degree") {
  auto g = assign_weights_wc(parse_edge_list("0 4\n1 4\n2 4\n3 4\n", EdgeDirection::Directed));
  for (double p : g.probabilities()) CHECK(p == 0.25);

  auto single = assign_weights_wc(parse_edge_list("0 1\n", EdgeDirection::Directed));
  CHECK(single.edge_probability(0) == 1.0);
}

TEST_CASE("weighted cascade on an undirected path") {
  // a-b-c doubled: in_deg(a)=1, in_deg(b)=2, in_deg(c)=1
  auto g = assign_weights_wc(parse_edge_list("0 1\n1 2\n"));
  const NodeId a = 0, b = 1, c = 2;
  auto prob = [&](NodeId u, NodeId v) {
    auto nbrs = g.out_neighbors(u);
    for (std::size_t i = 0; i < nbrs.size(); ++i) {
      if (nbrs[i] == v) return g.out_probabilities(u)[i];
    }
    return -1.0;
  };
  CHECK(prob(a, b) == 0.5);
  CHECK(prob(b, a) == 1.0);
  CHECK(prob(c, b) == 0.5);
  CHECK(prob(b, c) == 1.0);
}

TEST_CASE("weighted cascade in-probabilities sum to one") {
  SplitMix64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    auto g = assign_weights_wc(cim::testing::random_small_graph(rng, 12, 40));
    std::vector<double> in_sum(g.node_count(), 0.0);
    for (NodeId u = 0; u < g.node_count(); ++u) {
      auto nbrs = g.out_neighbors(u);
      for (std::size_t i = 0; i < nbrs.size(); ++i) in_sum[nbrs[i]] += g.out_probabilities(u)[i];
    }
    for (NodeId v = 0; v < g.node_count(); ++v) {
      if (g.in_degree(v) > 0) CHECK(std::abs(in_sum[v] - 1.0) <= 1e-12);
    }
  }
}

TEST_CASE("trivalency draws from the three levels reproducibly") {
  // Cycle with 15,000 undirected edges -> 30,000 directed edges.
  std::ostringstream text;
  for (int i = 0; i < 15000; ++i) text << i << ' ' << (i + 1) % 15000 << '\n';
  auto base = parse_edge_list(text.str());
  REQUIRE(base.edge_count() == 30000);

  auto g1 = assign_weights_tv(base, 42);
  auto g2 = assign_weights_tv(base, 42);
  auto g3 = assign_weights_tv(base, 43);
  CHECK(std::equal(g1.probabilities().begin(), g1.probabilities().end(), g2.probabilities().begin()));
  CHECK_FALSE(std::equal(g1.probabilities().begin(), g1.probabilities().end(), g3.probabilities().begin()));

  std::map<double, std::size_t> counts;
  for (double p : g1.probabilities()) counts[p]++;
  REQUIRE(counts.size() == 3);
  CHECK(counts.count(0.1) == 1);
  CHECK(counts.count(0.01) == 1);
  CHECK(counts.count(0.001) == 1);
  for (auto [p, c] : counts) {
    double freq = static_cast<double>(c) / 30000.0;
    CHECK(freq >= 0.30);
    CHECK(freq <= 0.37);
  }
}

TEST_CASE("two_hop_neighbors small cases") {
  auto isolated = cim::testing::make_graph(2, {});
  CHECK(two_hop_neighbors(isolated, 0).empty());

  auto path = cim::testing::make_graph(3, {{0, 1, 0.5}, {1, 2, 0.5}});
  CHECK(two_hop_neighbors(path, 0) == std::vector<NodeId>{1, 2});

  std::vector<PlainEdge> star;
  for (NodeId leaf = 1; leaf <= 5; ++leaf) star.push_back({0, leaf, 1.0});
  auto s = cim::testing::make_graph(6, star);
  CHECK(two_hop_neighbors(s, 0) == std::vector<NodeId>{1, 2, 3, 4, 5});
  CHECK(two_hop_neighbors(s, 3).empty());
}

TEST_CASE("two_hop_neighbors matches depth-2 BFS") {
  SplitMix64 rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    auto g = cim::testing::random_small_graph(rng, 10, 30);
    for (NodeId v = 0; v < g.node_count(); ++v) {
      auto got = two_hop_neighbors(g, v);
      auto expected = cim::testing::bfs_depth_two(g, v);
      CHECK(std::set<NodeId>(got.begin(), got.end()) == expected);
    }
  }
}

TEST_CASE("weighted edge list round-trip preserves the graph") {
  SplitMix64 rng(5);
  for (int trial = 0; trial < 25; ++trial) {
    auto g = assign_weights_tv(cim::testing::random_small_graph(rng, 15, 60), trial);
    std::stringstream buf;
    write_weighted_edge_list(g, buf);
    auto back = parse_weighted_edge_list(buf);
    // Isolated nodes do not survive an edge list; compare the edge sets by label.
    std::set<std::tuple<NodeLabel, NodeLabel, double>> a, b;
    for (auto e : cim::testing::edges_of(g)) a.insert({g.label(e.from), g.label(e.to), e.p});
    for (auto e : cim::testing::edges_of(back)) b.insert({back.label(e.from), back.label(e.to), e.p});
    CHECK(a == b);
  }
}

TEST_CASE("weighted edge list rejects out-of-range probabilities") {
  std::istringstream in("0 1 1.5\n");
  CHECK_THROWS_AS(parse_weighted_edge_list(in), ParseError);
}

TEST_CASE("with_probabilities validates") {
  auto g = parse_edge_list("0 1\n");
  CHECK_THROWS_AS(g.with_probabilities({0.5}), Error);
  CHECK_THROWS_AS(g.with_probabilities({0.5, -0.1}), Error);
  auto w = g.with_probabilities({0.5, 0.25});
  CHECK(w.edge_probability(1) == 0.25);
  CHECK(g.edge_probability(1) == 0.0);
}

TEST_CASE("induced subgraph keeps internal edges and maps back") {
  auto g = cim::testing::make_graph(5, {{0, 1, 0.1}, {1, 2, 0.2}, {2, 0, 0.3}, {2, 3, 0.4}, {4, 0, 0.5}});
  std::vector<NodeId> nodes{2, 0, 1};
  auto sub = induced_subgraph(g, nodes);
  CHECK(sub.parent_nodes == std::vector<NodeId>{0, 1, 2});
  CHECK(sub.graph.edge_count() == 3);
  for (EdgeId e = 0; e < sub.graph.edge_count(); ++e) {
    CHECK(sub.graph.edge_probability(e) == g.edge_probability(sub.parent_edges[e]));
  }
}
