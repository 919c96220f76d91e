#include <gtest/gtest.h>

#include "gmine/connectivity.hpp"
#include "gmine/error.hpp"
#include "gmine/synthetic.hpp"
#include "test_support.hpp"

namespace gmine {
namespace {

using testing::TempDir;

class FixtureConnectivity : public ::testing::Test {
 protected:
  TempDir dir{"conn"};
  Graph g = testing::fixture_graph();
  GraphTree tree = testing::build_store(g, 2, 3, dir.path());
};

TEST_F(FixtureConnectivity, FirstCommonParentOfSiblingLeaves) {
  MeetingPoint m = first_common_parent(tree, SuperNodeId{5}, SuperNodeId{6});
  EXPECT_EQ(m.parent, SuperNodeId{2});
  EXPECT_EQ(m.child_for_a, SuperNodeId{5});
  EXPECT_EQ(m.child_for_b, SuperNodeId{6});
}

TEST_F(FixtureConnectivity, FirstCommonParentAcrossSubtrees) {
  MeetingPoint m = first_common_parent(tree, SuperNodeId{3}, SuperNodeId{5});
  EXPECT_EQ(m.parent, SuperNodeId{0});
  EXPECT_EQ(m.child_for_a, SuperNodeId{1});
  EXPECT_EQ(m.child_for_b, SuperNodeId{2});
}

TEST_F(FixtureConnectivity, DegenerateAndNestedPairsAreRejected) {
  for (auto [a, b] : std::vector<std::pair<std::uint32_t, std::uint32_t>>{{4, 4}, {1, 3}, {3, 1}, {0, 6}}) {
    try {
      first_common_parent(tree, SuperNodeId{a}, SuperNodeId{b});
      FAIL() << a << "," << b;
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::AncestorPair);
    }
  }
  try {
    connectivity(tree, SuperNodeId{3}, SuperNodeId{40});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotFound);
  }
}

TEST_F(FixtureConnectivity, SiblingLeavesShareTheTwoBridges) {
  ConnectivityResult r = connectivity(tree, SuperNodeId{3}, SuperNodeId{4});
  EXPECT_EQ(r.weight(), 2u);
  EXPECT_EQ(r.edges, (std::vector<Edge>{{2, 3, 1.0}, {2, 4, 1.0}}));
}

TEST_F(FixtureConnectivity, NonAdjacentClosuresGiveEmptyResult) {
  ConnectivityResult r = connectivity(tree, SuperNodeId{3}, SuperNodeId{6});
  EXPECT_EQ(r.weight(), 0u);
  EXPECT_TRUE(r.edges.empty());
}

TEST_F(FixtureConnectivity, DeeperPairFiltersTheRootSuperEdge) {
  EXPECT_EQ(connectivity(tree, SuperNodeId{4}, SuperNodeId{5}).edges, (std::vector<Edge>{{4, 5, 1.0}}));
  EXPECT_EQ(connectivity(tree, SuperNodeId{4}, SuperNodeId{2}).edges, (std::vector<Edge>{{4, 5, 1.0}}));
  EXPECT_TRUE(connectivity(tree, SuperNodeId{3}, SuperNodeId{2}).edges.empty());
}

TEST_F(FixtureConnectivity, CandidatePairsCoverTheBridges) {
  auto pairs = candidate_pairs(tree, SuperNodeId{3}, SuperNodeId{4});
  for (std::pair<NodeId, NodeId> p : {std::pair<NodeId, NodeId>{2, 3}, {2, 4}}) {
    EXPECT_TRUE(std::binary_search(pairs.begin(), pairs.end(), p));
  }
}

TEST_F(FixtureConnectivity, ExternalNeighborsOfNodeTwo) {
  ExternalNeighborhood ext = external_neighbors(tree, 2);
  EXPECT_EQ(ext.leaf, SuperNodeId{3});
  ASSERT_EQ(ext.entries.size(), 2u);
  EXPECT_EQ(ext.entries[0].neighbor, 3u);
  EXPECT_EQ(ext.entries[1].neighbor, 4u);
  for (const ExternalEntry& e : ext.entries) {
    EXPECT_EQ(e.resolved_at, SuperNodeId{1});
    EXPECT_EQ(e.neighbor_leaf, SuperNodeId{4});
  }
  // Node 2 is closed in SuperNode 1, so the walk stops there.
  EXPECT_EQ(ext.visited, (std::vector<SuperNodeId>{SuperNodeId{1}}));
}

TEST_F(FixtureConnectivity, NodeWithoutExternalEdgesStopsAtItsLeaf) {
  ExternalNeighborhood ext = external_neighbors(tree, 1);
  EXPECT_TRUE(ext.entries.empty());
  EXPECT_TRUE(ext.visited.empty());
  EXPECT_THROW(external_neighbors(tree, 99), Error);
}

TEST(Connectivity, EmptyOpenSetGivesNoCandidates) {
  TempDir dir("cand");
  GraphBuilder b;
  for (NodeId t = 0; t < 4; ++t) {
    b.add_edge(3 * t, 3 * t + 1);
    b.add_edge(3 * t + 1, 3 * t + 2);
    b.add_edge(3 * t, 3 * t + 2);
  }
  Graph g = std::move(b).build();
  GraphTree tree = testing::build_store(g, 2, 2, dir.path());
  const auto kids = tree.node(tree.root()).children;
  ASSERT_EQ(kids.size(), 2u);
  EXPECT_TRUE(candidate_pairs(tree, kids[0], kids[1]).empty());
  EXPECT_TRUE(connectivity(tree, kids[0], kids[1]).edges.empty());
}

TEST(Connectivity, EveryPairMatchesBruteForceScan) {
  TempDir dir("oracle");
  Graph g = random_gnm(150, 500, 21);
  GraphTree tree = testing::build_store(g, 3, 3, dir.path());
  std::vector<std::set<NodeId>> closures;
  for (const TreeNode& n : tree.nodes()) closures.push_back(testing::closure_by_walk(tree, n.id));
  std::size_t pairs = 0;
  for (const TreeNode& a : tree.nodes()) {
    for (const TreeNode& b : tree.nodes()) {
      if (a.id == b.id || tree.in_subtree(a.id, b.id) || tree.in_subtree(b.id, a.id)) continue;
      ++pairs;
      ConnectivityResult r = connectivity(tree, a.id, b.id);
      std::set<testing::EdgeKey> got;
      for (const Edge& e : r.edges) got.insert(testing::key_of(e));
      EXPECT_EQ(got.size(), r.edges.size());
      EXPECT_EQ(got, testing::scan_edges_between(g, closures[a.id.value], closures[b.id.value]));
      auto cand = candidate_pairs(tree, a.id, b.id);
      for (const auto& k : got) EXPECT_TRUE(std::binary_search(cand.begin(), cand.end(), k));
    }
  }
  EXPECT_GT(pairs, 0u);
}

TEST(Connectivity, ExternalEntriesPlusLeafDegreeRebuildAdjacency) {
  TempDir dir("rebuild");
  Graph g = random_gnm(150, 500, 22);
  GraphTree tree = testing::build_store(g, 3, 3, dir.path());
  for (NodeId v : g.nodes()) {
    ExternalNeighborhood ext = external_neighbors(tree, v);
    auto sub = tree.expand_leaf(ext.leaf);
    std::set<NodeId> rebuilt;
    for (const auto& inc : sub->graph.incident(sub->graph.index_of(v))) rebuilt.insert(sub->graph.id_at(inc.neighbor));
    for (const ExternalEntry& e : ext.entries) {
      EXPECT_FALSE(rebuilt.count(e.neighbor));
      rebuilt.insert(e.neighbor);
      EXPECT_EQ(e.neighbor_leaf, tree.leaf_of(e.neighbor));
      EXPECT_NE(e.neighbor_leaf, ext.leaf);
    }
    std::set<NodeId> expected;
    for (const auto& inc : g.incident(g.index_of(v))) expected.insert(g.id_at(inc.neighbor));
    EXPECT_EQ(rebuilt, expected) << "node " << v;
  }
}

}  // namespace
}  // namespace gmine
