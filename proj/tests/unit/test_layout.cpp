#include <gtest/gtest.h>

#include <cmath>

#include "gmine/error.hpp"
#include "gmine/layout.hpp"
#include "gmine/synthetic.hpp"
#include "test_support.hpp"

namespace gmine {
namespace {

using testing::TempDir;

TEST(LeafLayout, SingleNodeSitsInTheCenter) {
  GraphBuilder b;
  b.add_node(7);
  LeafLayout l = layout_graph(std::move(b).build());
  ASSERT_EQ(l.positions.size(), 1u);
  EXPECT_EQ(l.positions[0].first, 7u);
  EXPECT_DOUBLE_EQ(l.positions[0].second.x, 0.5);
  EXPECT_DOUBLE_EQ(l.positions[0].second.y, 0.5);
}

TEST(LeafLayout, TwoConnectedNodesAreSymmetricAtSpringLength) {
  GraphBuilder b;
  b.add_edge(1, 2);
  LeafLayout l = layout_graph(std::move(b).build());
  const Point p = l.positions[0].second;
  const Point q = l.positions[1].second;
  EXPECT_NEAR((p.x + q.x) / 2, 0.5, 1e-12);
  EXPECT_NEAR((p.y + q.y) / 2, 0.5, 1e-12);
  // Attraction d^2/k balances repulsion k^2/d exactly at d = k.
  EXPECT_NEAR(std::hypot(p.x - q.x, p.y - q.y), natural_spring_length(2), 1e-3);
}

TEST(LeafLayout, SameSeedSamePositions) {
  Graph g = random_gnm(50, 120, 3);
  LeafLayout a = layout_graph(g, {42, 200});
  LeafLayout b = layout_graph(g, {42, 200});
  ASSERT_EQ(a.positions.size(), 50u);
  for (std::size_t i = 0; i < 50; ++i) {
    EXPECT_EQ(a.positions[i].first, b.positions[i].first);
    EXPECT_EQ(a.positions[i].second.x, b.positions[i].second.x);
    EXPECT_EQ(a.positions[i].second.y, b.positions[i].second.y);
  }
  LeafLayout c = layout_graph(g, {43, 200});
  bool differs = false;
  for (std::size_t i = 0; i < 50; ++i) differs |= a.positions[i].second.x != c.positions[i].second.x;
  EXPECT_TRUE(differs);
}

TEST(LeafLayout, PositionsStayInUnitSquareWithIsolatedNodes) {
  GraphBuilder b;
  for (NodeId v = 0; v < 20; ++v) b.add_edge(v, (v + 1) % 20);
  for (NodeId v = 100; v < 105; ++v) b.add_node(v);
  LeafLayout l = layout_graph(std::move(b).build());
  ASSERT_EQ(l.positions.size(), 25u);
  for (const auto& [v, p] : l.positions) {
    EXPECT_GE(p.x, 0.0);
    EXPECT_LE(p.x, 1.0);
    EXPECT_GE(p.y, 0.0);
    EXPECT_LE(p.y, 1.0);
  }
}

TEST(LeafLayout, LargeGraphUsesGridRepulsionAndStaysFinite) {
  Graph g = random_gnm(1600, 3200, 5);
  LeafLayout l = layout_graph(g, {1, 30});
  for (const auto& [v, p] : l.positions) {
    EXPECT_TRUE(std::isfinite(p.x) && std::isfinite(p.y));
  }
}

TEST(LeafLayout, TreeLeafMustBeExpanded) {
  TempDir dir("layout");
  Graph g = testing::fixture_graph();
  GraphTree tree = testing::build_store(g, 2, 3, dir.path());
  try {
    layout_leaf(tree, SuperNodeId{4});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotLoaded);
  }
  try {
    layout_leaf(tree, SuperNodeId{1});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotLeaf);
  }
  tree.expand_leaf(SuperNodeId{4});
  LeafLayout l = layout_leaf(tree, SuperNodeId{4});
  EXPECT_EQ(l.leaf, SuperNodeId{4});
  ASSERT_EQ(l.positions.size(), 2u);
  EXPECT_EQ(l.positions[0].first, 3u);
}

void expect_nested_and_disjoint(const GraphTree& tree, const HierarchyLayout& h) {
  constexpr double eps = 1e-9;
  for (const TreeNode& n : tree.nodes()) {
    const Circle& c = h.circles[n.id.value];
    EXPECT_GT(c.r, 0.0);
    EXPECT_EQ(h.level[n.id.value], n.depth);
    if (n.parent) {
      const Circle& p = h.circles[n.parent->value];
      EXPECT_LE(std::hypot(c.x - p.x, c.y - p.y) + c.r, p.r + eps) << "SuperNode " << n.id.value;
    }
    for (std::size_t i = 0; i < n.children.size(); ++i) {
      for (std::size_t j = i + 1; j < n.children.size(); ++j) {
        const Circle& a = h.circles[n.children[i].value];
        const Circle& b = h.circles[n.children[j].value];
        EXPECT_GE(std::hypot(a.x - b.x, a.y - b.y), a.r + b.r - eps);
      }
    }
  }
}

TEST(HierarchyLayout, SingleLeafTreeNestsOneCircle) {
  TempDir dir("h1");
  Graph g = random_gnm(10, 15, 1);
  GraphTree tree = testing::build_store(g, 2, 1, dir.path());
  HierarchyLayout h = layout_hierarchy(tree);
  ASSERT_EQ(h.circles.size(), 2u);
  expect_nested_and_disjoint(tree, h);
}

TEST(HierarchyLayout, FixtureHasTwoInnerAndFourLeafCircles) {
  TempDir dir("h2");
  Graph g = testing::fixture_graph();
  GraphTree tree = testing::build_store(g, 2, 3, dir.path());
  HierarchyLayout h = layout_hierarchy(tree);
  std::size_t level1 = 0, level2 = 0;
  for (std::size_t lv : h.level) {
    level1 += lv == 1;
    level2 += lv == 2;
  }
  EXPECT_EQ(level1, 2u);
  EXPECT_EQ(level2, 4u);
  expect_nested_and_disjoint(tree, h);
}

TEST(HierarchyLayout, RandomTreesNestWithoutOverlap) {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    TempDir dir("h3");
    Graph g = random_gnm(120 + 30 * seed, 300, seed);
    GraphTree tree = testing::build_store(g, 2 + seed % 4, 2 + seed % 3, dir.path(), seed);
    expect_nested_and_disjoint(tree, layout_hierarchy(tree));
  }
}

}  // namespace
}  // namespace gmine
