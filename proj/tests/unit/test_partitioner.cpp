#include <gtest/gtest.h>

#include <sstream>

#include "gmine/error.hpp"
#include "gmine/partitioner.hpp"
#include "gmine/synthetic.hpp"
#include "test_support.hpp"

namespace gmine {
namespace {

Graph two_triangles() {
  GraphBuilder b;
  for (auto [u, v] : std::vector<std::pair<NodeId, NodeId>>{{1, 2}, {2, 3}, {1, 3}, {4, 5}, {5, 6}, {4, 6}}) b.add_edge(u, v);
  return std::move(b).build();
}

std::set<std::set<NodeId>> leaf_sets(const HierarchyPlan& plan) {
  std::set<std::set<NodeId>> out;
  for (const PlanLeaf& l : plan.leaves()) out.insert(std::set<NodeId>(l.node->members.begin(), l.node->members.end()));
  return out;
}

TEST(BalanceCap, IsCeilingOfToleratedShare) {
  EXPECT_EQ(balance_cap(8, 2, 0.10), 5u);   // 4.4 -> 5
  EXPECT_EQ(balance_cap(100, 4, 0.0), 25u);
  EXPECT_EQ(balance_cap(10, 3, 0.10), 4u);  // 3.67 -> 4
  EXPECT_EQ(balance_cap(5, 5, 0.10), 2u);   // 1.1 -> 2
}

TEST(KwayPartition, DisjointTrianglesSplitWithZeroCut) {
  PartitionAssignment a = kway_partition(two_triangles(), 2, 0.10, 1);
  EXPECT_EQ(a.cut_weight, 0.0);
  auto parts = a.parts();
  ASSERT_EQ(parts.size(), 2u);
  EXPECT_EQ(parts[0], (std::vector<NodeId>{1, 2, 3}));
  EXPECT_EQ(parts[1], (std::vector<NodeId>{4, 5, 6}));
}

TEST(KwayPartition, CutWeightMatchesIndependentRecount) {
  Graph g = random_gnm(80, 300, 3);
  PartitionAssignment a = kway_partition(g, 4, 0.10, 9);
  std::map<NodeId, std::uint32_t> part;
  for (std::size_t i = 0; i < a.nodes.size(); ++i) part[a.nodes[i]] = a.part_of[i];
  EXPECT_DOUBLE_EQ(a.cut_weight, testing::cut_of(g, part));
  for (std::size_t s : a.part_sizes()) EXPECT_LE(s, balance_cap(80, 4, 0.10));
}

TEST(KwayPartition, PlantedThreeCommunitiesBeatRandomBalancedAssignments) {
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    Graph g = planted_partition_graph(60, 3, 0.3, 0.02, seed);
    PartitionAssignment a = kway_partition(g, 3, 0.10, seed);
    const double baseline = testing::random_balanced_cut(g, 3, 1000, seed);
    EXPECT_LE(a.cut_weight, baseline) << "seed " << seed;
  }
}

TEST(KwayPartition, SameSeedSameAnswer) {
  Graph g = random_gnm(120, 500, 4);
  PartitionAssignment a = kway_partition(g, 3, 0.10, 17);
  PartitionAssignment b = kway_partition(g, 3, 0.10, 17);
  EXPECT_EQ(a.part_of, b.part_of);
}

TEST(KwayPartition, RespectsCapOnEveryK) {
  for (std::size_t k : {2, 3, 5, 7}) {
    Graph g = random_gnm(101, 350, k);
    PartitionAssignment a = kway_partition(g, k, 0.05, 2);
    auto sizes = a.part_sizes();
    ASSERT_EQ(sizes.size(), k);
    for (std::size_t s : sizes) {
      EXPECT_GT(s, 0u);
      EXPECT_LE(s, balance_cap(101, k, 0.05));
    }
  }
}

TEST(KwayPartition, UnweightedModeIgnoresWeights) {
  // A heavy edge pulls {1,2} together when weighted; unweighted the cut counts edges.
  GraphBuilder b;
  b.add_edge(1, 2, 100.0);
  b.add_edge(3, 4);
  b.add_edge(2, 3);
  b.add_edge(1, 4);
  Graph g = std::move(b).build();
  PartitionAssignment w = kway_partition(g, 2, PartitionOptions{0.0, 1, true});
  EXPECT_EQ(w.part(1), w.part(2));
  PartitionAssignment u = kway_partition(g, 2, PartitionOptions{0.0, 1, false});
  EXPECT_DOUBLE_EQ(cut_weight(g, u.part_of, false), 2.0);
}

TEST(BuildHierarchy, FixtureTwoByTwoGivesTheFourPairs) {
  Graph g = testing::fixture_graph();
  HierarchyPlan plan = build_hierarchy(g, HierarchySpec{2, 3, 0.10}, 1);
  EXPECT_EQ(leaf_sets(plan), (std::set<std::set<NodeId>>{{1, 2}, {3, 4}, {5, 6}, {7, 8}}));
  ASSERT_EQ(plan.root.children.size(), 2u);
  EXPECT_EQ(plan.root.children[0].members, (std::vector<NodeId>{1, 2, 3, 4}));
  EXPECT_EQ(plan.root.children[1].members, (std::vector<NodeId>{5, 6, 7, 8}));
}

TEST(BuildHierarchy, OneLevelIsASingleLeaf) {
  Graph g = random_gnm(30, 60, 1);
  HierarchyPlan plan = build_hierarchy(g, HierarchySpec{2, 1}, 1);
  EXPECT_EQ(plan.leaf_count(), 1u);
  EXPECT_EQ(plan.root.members.size(), 30u);
}

TEST(BuildHierarchy, EveryLevelPartitionsItsParent) {
  Graph g = random_gnm(40, 90, 5);
  HierarchyPlan plan = build_hierarchy(g, HierarchySpec{2, 3}, 3);
  EXPECT_LE(plan.leaf_count(), 4u);
  EXPECT_LE(plan.depth(), 3u);
  auto audit = [&](auto&& self, const PlanNode& n) -> void {
    if (n.is_leaf()) return;
    std::multiset<NodeId> joined;
    for (const PlanNode& c : n.children) {
      joined.insert(c.members.begin(), c.members.end());
      self(self, c);
    }
    // Disjoint (no repeats in the multiset) and covering.
    EXPECT_EQ(std::vector<NodeId>(joined.begin(), joined.end()), n.members);
  };
  audit(audit, plan.root);
  std::set<NodeId> all;
  for (const PlanLeaf& l : plan.leaves()) all.insert(l.node->members.begin(), l.node->members.end());
  EXPECT_EQ(all.size(), 40u);
}

TEST(BuildHierarchy, StopsSplittingSmallParts) {
  Graph g = random_gnm(12, 30, 2);
  HierarchySpec spec{3, 4};  // default min leaf size 2k = 6
  HierarchyPlan plan = build_hierarchy(g, spec, 1);
  ASSERT_EQ(plan.root.children.size(), 3u);
  for (const PlanNode& c : plan.root.children) EXPECT_TRUE(c.is_leaf());
}

TEST(BuildHierarchy, SparseIdsAreKept) {
  GraphBuilder b;
  for (NodeId i = 0; i < 30; ++i) b.add_edge(i * 1000003, ((i + 1) % 30) * 1000003);
  Graph g = std::move(b).build();
  HierarchyPlan plan = build_hierarchy(g, HierarchySpec{3, 2}, 1);
  std::set<NodeId> all;
  for (const PlanLeaf& l : plan.leaves()) all.insert(l.node->members.begin(), l.node->members.end());
  EXPECT_EQ(std::vector<NodeId>(all.begin(), all.end()), std::vector<NodeId>(g.nodes().begin(), g.nodes().end()));
}

TEST(HierarchySpec, RejectsOutOfRangeParameters) {
  EXPECT_THROW((HierarchySpec{1, 2}.validate()), Error);
  EXPECT_THROW((HierarchySpec{2, 0}.validate()), Error);
  EXPECT_THROW((HierarchySpec{2, 2, 1.0}.validate()), Error);
  EXPECT_THROW((HierarchySpec{2, 2, -0.1}.validate()), Error);
  EXPECT_NO_THROW((HierarchySpec{2, 2, 0.0}.validate()));
}

TEST(Plan, WriteReadRoundTrip) {
  Graph g = random_gnm(50, 120, 8);
  HierarchyPlan plan = build_hierarchy(g, HierarchySpec{3, 3}, 2);
  std::stringstream text;
  write_plan(plan, text);
  HierarchyPlan back = read_plan(text);
  EXPECT_EQ(leaf_sets(back), leaf_sets(plan));
  EXPECT_EQ(back.depth(), plan.depth());
  EXPECT_EQ(back.root.members.size(), 50u);
}

TEST(Plan, MalformedManualPlansAreRejected) {
  for (const char* text : {"", "leaf 1 : 1,2\n", "leaf 0.0 : 1\nleaf 0.2 : 2\n", "leaf 0.0 : x\n", "nonsense\n"}) {
    std::istringstream in(text);
    EXPECT_THROW(read_plan(in), Error) << text;
  }
}

}  // namespace
}  // namespace gmine
