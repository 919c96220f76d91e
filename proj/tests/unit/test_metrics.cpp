#include <gtest/gtest.h>

#include "gmine/error.hpp"
#include "gmine/metrics.hpp"
#include "gmine/synthetic.hpp"
#include "test_support.hpp"

namespace gmine {
namespace {

Graph from_edges(std::initializer_list<std::pair<NodeId, NodeId>> edges) {
  GraphBuilder b;
  for (auto [u, v] : edges) b.add_edge(u, v);
  return std::move(b).build();
}

TEST(DegreeDistribution, EmptyGraphHasEmptyHistogram) {
  EXPECT_TRUE(degree_distribution(Graph{}).empty());
}

TEST(DegreeDistribution, TriangleIsAllDegreeTwo) {
  auto h = degree_distribution(from_edges({{1, 2}, {2, 3}, {1, 3}}));
  EXPECT_EQ(h, (std::map<std::size_t, std::size_t>{{2, 3}}));
}

TEST(DegreeDistribution, MatchesEdgeListRecount) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    Graph g = random_gnm(20, 40, seed);
    std::map<std::size_t, std::size_t> expected;
    for (auto [v, d] : testing::degrees_by_count(g)) ++expected[d];
    EXPECT_EQ(degree_distribution(g), expected);
  }
}

TEST(Components, TwoTrianglesAreTwoComponentsOfThree) {
  Components c = connected_components(from_edges({{1, 2}, {2, 3}, {1, 3}, {4, 5}, {5, 6}, {4, 6}}));
  EXPECT_EQ(c.count(), 2u);
  EXPECT_EQ(c.sorted_sizes(), (std::vector<std::size_t>{3, 3}));
}

TEST(Components, PathIsOneComponent) {
  EXPECT_EQ(connected_components(from_edges({{1, 2}, {2, 3}, {3, 4}, {4, 5}})).count(), 1u);
}

TEST(Components, MatchesFixedPointRelaxation) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    Graph g = random_gnm(40, 25 + seed, seed);
    Components c = connected_components(g);
    auto oracle = testing::components_by_fixed_point(g);
    for (std::uint32_t u = 0; u < g.node_count(); ++u) {
      for (std::uint32_t v = u + 1; v < g.node_count(); ++v) {
        EXPECT_EQ(c.component_of[u] == c.component_of[v], oracle[g.id_at(u)] == oracle[g.id_at(v)]);
      }
    }
    std::set<NodeId> roots;
    for (auto [_, r] : oracle) roots.insert(r);
    EXPECT_EQ(c.count(), roots.size());
  }
}

TEST(Hops, SelfIsZeroAndPathLengthIsCounted) {
  Graph g = from_edges({{1, 2}, {2, 3}, {3, 4}});
  EXPECT_EQ(hops(g, 1, 1), 0u);
  EXPECT_EQ(hops(g, 1, 4), 3u);
  EXPECT_THROW(hops(g, 1, 42), Error);
}

TEST(Hops, MatchesMatrixPowerReachability) {
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    Graph g = random_gnm(18, 20, seed);
    for (NodeId a : g.nodes()) {
      for (NodeId b : g.nodes()) {
        const int expected = testing::hops_by_matrix_power(g, a, b);
        auto got = hops(g, a, b);
        if (expected < 0) {
          EXPECT_FALSE(got.has_value());
        } else {
          ASSERT_TRUE(got.has_value());
          EXPECT_EQ(*got, static_cast<std::size_t>(expected));
        }
      }
    }
  }
}

TEST(ComputeMetrics, DiameterSampleOnPathIsExact) {
  MetricsReport m = compute_metrics(from_edges({{1, 2}, {2, 3}, {3, 4}, {4, 5}}));
  EXPECT_EQ(m.component_count, 1u);
  ASSERT_TRUE(m.diameter_sample.has_value());
  EXPECT_EQ(*m.diameter_sample, 4u);
}

}  // namespace
}  // namespace gmine
