#include <gtest/gtest.h>

#include "gdlog/gen.hpp"
#include "gdlog/oracle.hpp"

namespace gdlog {
namespace {

TEST(Gen, CompleteGraphHasAllArcs) {
  GraphSpec s;
  s.family = GraphFamily::Complete;
  s.n = 3;
  const FactSet f = generate_graph(s);
  EXPECT_EQ(f.at("g").size(), 6u);
  EXPECT_EQ(f.at("node").size(), 3u);
}

TEST(Gen, SparseGraphIsConnected) {
  for (uint64_t seed = 1; seed <= 20; ++seed) {
    GraphSpec s;
    s.n = 10;
    s.edges = 20;
    s.seed = seed;
    const FactSet f = generate_graph(s);
    EXPECT_EQ(f.at("g").size(), 40u);
    EXPECT_EQ(reachable(arcs_of(f), node_name(0)).size(), 10u);
  }
}

TEST(Gen, DirectedSparseGraphReachesEveryNode) {
  GraphSpec s;
  s.n = 50;
  s.edges = 120;
  s.directed = true;
  const FactSet f = generate_graph(s);
  EXPECT_EQ(f.at("g").size(), 120u);
  EXPECT_EQ(reachable(arcs_of(f), node_name(0)).size(), 50u);
}

TEST(Gen, BipartiteAllPairs) {
  GraphSpec s;
  s.family = GraphFamily::Bipartite;
  s.n = 4;
  EXPECT_EQ(generate_graph(s).at("g").size(), 4u);
}

TEST(Gen, CostsInRange) {
  GraphSpec s;
  s.family = GraphFamily::Complete;
  s.n = 12;
  s.cost_min = 5;
  s.cost_max = 9;
  for (const auto& a : arcs_of(generate_graph(s))) {
    EXPECT_GE(a.cost, 5);
    EXPECT_LE(a.cost, 9);
  }
}

TEST(Gen, SameSeedSameGraph) {
  GraphSpec s;
  s.n = 30;
  s.edges = 60;
  EXPECT_EQ(generate_graph(s), generate_graph(s));
}

TEST(Gen, DomainValuesAreDistinct) {
  const FactSet f = generate_domain(500, 3);
  std::set<Value> seen;
  for (const auto& t : f.at("d")) seen.insert(t[0]);
  EXPECT_EQ(seen.size(), 500u);
}

TEST(Gen, FamilyNames) {
  for (auto f : {GraphFamily::Complete, GraphFamily::SparseConnected, GraphFamily::Bipartite})
    EXPECT_EQ(parse_family(to_string(f)), f);
  EXPECT_FALSE(parse_family("torus"));
}

}  // namespace
}  // namespace gdlog
