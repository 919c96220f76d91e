#include <gtest/gtest.h>

#include "gmine/audit.hpp"
#include "gmine/synthetic.hpp"
#include "test_support.hpp"

namespace gmine {
namespace {

using testing::TempDir;
namespace fs = std::filesystem;

/// Recomputes checksums.tsv so content checks can be exercised on their own.
void reseal(const fs::path& dir) {
  std::vector<std::pair<std::string, std::string>> sums;
  sums.emplace_back("manifest.tsv", file_digest(dir / "manifest.tsv"));
  for (const char* sub : {"leaves", "superedges"}) {
    for (const auto& e : fs::directory_iterator(dir / sub)) {
      sums.emplace_back(fs::relative(e.path(), dir).generic_string(), file_digest(e.path()));
    }
  }
  std::sort(sums.begin(), sums.end());
  std::ofstream out(dir / "checksums.tsv", std::ios::binary);
  for (const auto& [rel, d] : sums) out << rel << '\t' << d << '\n';
}

void replace_in(const fs::path& file, const std::string& from, const std::string& to) {
  std::string text = testing::read_file(file);
  const auto at = text.find(from);
  ASSERT_NE(at, std::string::npos) << from;
  text.replace(at, from.size(), to);
  std::ofstream(file, std::ios::binary) << text;
}

class FixtureAudit : public ::testing::Test {
 protected:
  TempDir dir{"audit"};
  Graph g = testing::fixture_graph();
  GraphTree tree = testing::build_store(g, 2, 3, dir.path());
};

TEST_F(FixtureAudit, CleanStorePassesEveryCheck) {
  AuditReport r = audit_store(dir.path(), {&g, 0.10});
  EXPECT_TRUE(r.ok());
  EXPECT_TRUE(r.details.empty());
  EXPECT_EQ(r.leaf_count, 4u);
  EXPECT_EQ(r.internal_edges, 4u);
  EXPECT_EQ(r.cross_edges, 4u);
  EXPECT_EQ(r.residual_at_root, 0u);
  EXPECT_DOUBLE_EQ(r.balance_achieved, 0.0);
}

TEST_F(FixtureAudit, EditedFileBreaksChecksums) {
  { std::ofstream(dir / "leaves" / "leaf_3.tsv", std::ios::app) << "\n"; }
  AuditReport r = audit_store(dir.path());
  EXPECT_FALSE(r.checksums_ok);
  EXPECT_FALSE(r.ok());
}

TEST_F(FixtureAudit, NodeInTwoLeavesBreaksDisjointness) {
  replace_in(dir / "manifest.tsv", "node 4 L 1 3,4", "node 4 L 1 2,3,4");
  replace_in(dir / "leaves" / "leaf_4.tsv", "N 3", "N 2\nN 3");
  reseal(dir.path());
  AuditReport r = audit_store(dir.path());
  EXPECT_TRUE(r.checksums_ok);
  EXPECT_FALSE(r.disjoint_ok);
}

TEST_F(FixtureAudit, MissingNodeBreaksCover) {
  Graph bigger = [] {
    GraphBuilder b;
    b.add_node(100);
    Graph f = testing::fixture_graph();
    for (const Edge& e : f.edges()) b.add_edge(e.source, e.target, e.weight);
    return std::move(b).build();
  }();
  AuditReport r = audit_store(dir.path(), {&bigger, std::nullopt});
  EXPECT_FALSE(r.cover_ok);
}

TEST_F(FixtureAudit, DuplicatedEdgeBreaksEdgeAccounting) {
  { std::ofstream(dir / "superedges" / "sn_0.tsv", std::ios::app) << "1 2 2 3 1\n"; }
  reseal(dir.path());
  AuditReport r = audit_store(dir.path());
  EXPECT_FALSE(r.edges_ok);
  bool named = false;
  for (const auto& d : r.details) named |= d.find("(2,3)") != std::string::npos;
  EXPECT_TRUE(named);
}

TEST_F(FixtureAudit, DroppedEdgeIsResidual) {
  replace_in(dir / "superedges" / "sn_0.tsv", "1 2 4 5 1\n", "");
  reseal(dir.path());
  AuditReport r = audit_store(dir.path(), {&g, std::nullopt});
  EXPECT_FALSE(r.edges_ok);
  EXPECT_GT(r.residual_at_root, 0u);
}

TEST_F(FixtureAudit, WrongOpenSetIsCaught) {
  replace_in(dir / "manifest.tsv", "node 3 L 1 1,2 2", "node 3 L 1 1,2 1,2");
  reseal(dir.path());
  AuditReport r = audit_store(dir.path());
  EXPECT_FALSE(r.open_nodes_ok);
}

TEST_F(FixtureAudit, MissingStoreFailsStructure) {
  AuditReport r = audit_store(dir / "nope");
  EXPECT_FALSE(r.ok());
  EXPECT_FALSE(r.structure_ok);
}

TEST(Audit, ManualHierarchyOf81NodesAccountsForAll341Edges) {
  TempDir dir("email");
  std::vector<NodeId> order;
  Graph g = planted_hierarchy_graph({81, 341, 3, 3, 5}, &order);
  ASSERT_EQ(g.node_count(), 81u);
  ASSERT_EQ(g.edge_count(), 341u);
  HierarchyPlan plan = planted_block_plan(order, {3, 3});
  GraphTree tree = assemble_tree(g, plan, dir.path());
  fill_graph_tree(tree);
  save_tree(tree);
  AuditReport r = audit_store(dir.path(), {&g, std::nullopt});
  EXPECT_TRUE(r.ok());
  EXPECT_EQ(r.leaf_count, 9u);
  EXPECT_EQ(r.internal_edges + r.cross_edges, 341u);
  EXPECT_DOUBLE_EQ(r.internal_weight + r.cross_weight, 341.0);
}

TEST(Audit, BalanceIsCheckedAgainstTheGivenTolerance) {
  TempDir dir("bal");
  Graph g = random_gnm(100, 300, 7);
  testing::build_store(g, 4, 2, dir.path(), 1, 0.10);
  AuditReport ok = audit_store(dir.path(), {&g, 0.10});
  EXPECT_TRUE(ok.balance_ok);
  EXPECT_LE(ok.balance_achieved, 0.10 + 4.0 / 100);  // ceiling rounding on 25-node parts
  // A manual plan with a lopsided split fails the same check.
  TempDir dir2("bal2");
  std::ostringstream text;
  text << "leaf 0.0 :";
  for (NodeId v = 0; v < 90; ++v) text << (v ? "," : " ") << v;
  text << "\nleaf 0.1 :";
  for (NodeId v = 90; v < 100; ++v) text << (v > 90 ? "," : " ") << v;
  text << '\n';
  std::istringstream in(text.str());
  GraphTree tree = assemble_tree(g, read_plan(in), dir2.path());
  fill_graph_tree(tree);
  save_tree(tree);
  AuditReport bad = audit_store(dir2.path(), {&g, 0.10});
  EXPECT_FALSE(bad.balance_ok);
  EXPECT_TRUE(audit_store(dir2.path(), {&g, std::nullopt}).ok());
}

}  // namespace
}  // namespace gmine
