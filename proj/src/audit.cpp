#include "gmine/audit.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>

#include "gmine/error.hpp"
#include "gmine/graph_tree.hpp"
#include "gmine/partitioner.hpp"
#include "store_io.hpp"

namespace gmine {

namespace fs = std::filesystem;

namespace {

constexpr std::size_t kMaxDetailsPerCheck = 8;

struct Detailer {
  AuditReport& report;
  std::map<std::string, std::size_t> counts;

  void operator()(const std::string& check, const std::string& message) {
    if (counts[check]++ < kMaxDetailsPerCheck) report.details.push_back(check + ": " + message);
  }
};

std::string edge_text(const Edge& e) { return "(" + std::to_string(e.source) + "," + std::to_string(e.target) + ")"; }

bool check_checksums(const fs::path& dir, Detailer& note) {
  std::ifstream in(dir / "checksums.tsv");
  if (!in) {
    note("checksums", "checksums.tsv missing");
    return false;
  }
  bool ok = true;
  std::set<std::string> listed;
  std::string line;
  while (std::getline(in, line)) {
    auto tab = line.find('\t');
    if (tab == std::string::npos) {
      note("checksums", "malformed line '" + line + "'");
      ok = false;
      continue;
    }
    const std::string rel = line.substr(0, tab);
    listed.insert(rel);
    const fs::path file = dir / rel;
    if (!fs::exists(file)) {
      note("checksums", "listed file missing: " + rel);
      ok = false;
    } else if (file_digest(file) != line.substr(tab + 1)) {
      note("checksums", "digest mismatch: " + rel);
      ok = false;
    }
  }
  if (!listed.count("manifest.tsv")) {
    note("checksums", "manifest.tsv not listed");
    ok = false;
  }
  for (const char* sub : {"leaves", "superedges"}) {
    if (!fs::is_directory(dir / sub)) continue;
    for (const auto& entry : fs::directory_iterator(dir / sub)) {
      const std::string rel = fs::relative(entry.path(), dir).generic_string();
      if (!listed.count(rel)) {
        note("checksums", "unlisted file: " + rel);
        ok = false;
      }
    }
  }
  return ok;
}

}  // namespace

AuditReport audit_store(const fs::path& dir, const AuditOptions& options) {
  AuditReport report;
  Detailer note{report, {}};

  report.checksums_ok = check_checksums(dir, note);

  detail::Manifest m;
  try {
    m = detail::read_manifest(dir / "manifest.tsv");
  } catch (const Error& e) {
    note("structure", e.what());
    return report;
  }
  const std::size_t count = m.nodes.size();
  report.vertex_count = m.vertex_count;
  report.edge_count = m.edge_count;

  // Structure: every node reachable from the root exactly once, children homogeneous,
  // depth derived from the parent chain.
  bool structure = true;
  std::vector<std::size_t> depth(count, std::numeric_limits<std::size_t>::max());
  std::vector<std::uint32_t> stack{0};
  depth[0] = 0;
  std::size_t reached = 0;
  while (!stack.empty()) {
    const TreeNode& n = m.nodes[stack.back()];
    stack.pop_back();
    ++reached;
    if (n.is_leaf()) {
      if (n.members.empty()) {
        note("structure", "leaf " + to_string(n.id) + " has no members");
        structure = false;
      }
      continue;
    }
    if (n.children.empty()) {
      note("structure", "SuperNode " + to_string(n.id) + " has no children");
      structure = false;
    }
    std::size_t leaves = 0;
    for (SuperNodeId c : n.children) {
      if (depth[c.value] != std::numeric_limits<std::size_t>::max()) {
        note("structure", "SuperNode " + to_string(c) + " reached twice");
        structure = false;
        continue;
      }
      depth[c.value] = depth[n.id.value] + 1;
      leaves += m.nodes[c.value].is_leaf() ? 1 : 0;
      stack.push_back(c.value);
    }
    if (leaves != 0 && leaves != n.children.size()) {
      note("structure", "SuperNode " + to_string(n.id) + " mixes leaf and SuperNode children");
      structure = false;
    }
  }
  if (reached != count) {
    note("structure", std::to_string(count - reached) + " SuperNodes unreachable from the root");
    structure = false;
  }
  report.structure_ok = structure;
  if (!structure) return report;

  // Disjoint leaves and leaf file contents.
  std::unordered_map<NodeId, std::uint32_t> leaf_of;
  leaf_of.reserve(m.vertex_count);
  bool disjoint = true;
  bool edges_ok = true;
  std::vector<Edge> stored;
  stored.reserve(m.edge_count);
  std::vector<std::uint32_t> stored_at;  // tree node holding each stored edge
  stored_at.reserve(m.edge_count);
  std::vector<std::vector<NodeId>> leaf_files(count);
  for (const TreeNode& n : m.nodes) {
    if (!n.is_leaf()) continue;
    ++report.leaf_count;
    for (NodeId v : n.members) {
      auto [it, inserted] = leaf_of.emplace(v, n.id.value);
      if (!inserted) {
        note("disjoint", "node " + std::to_string(v) + " in leaves " + std::to_string(it->second) + " and " +
                        to_string(n.id));
        disjoint = false;
      }
    }
    const fs::path path = dir / "leaves" / ("leaf_" + to_string(n.id) + ".tsv");
    detail::LeafFileContents contents;
    try {
      contents = detail::read_leaf_contents(path);
    } catch (const Error& e) {
      note("disjoint", e.what());
      disjoint = false;
      continue;
    }
    std::vector<NodeId> file_nodes = contents.nodes;
    std::sort(file_nodes.begin(), file_nodes.end());
    if (file_nodes != n.members) {
      note("disjoint", "leaf " + to_string(n.id) + " file nodes differ from manifest members");
      disjoint = false;
    }
    for (const Edge& e : contents.edges) {
      if (!std::binary_search(n.members.begin(), n.members.end(), e.source) ||
          !std::binary_search(n.members.begin(), n.members.end(), e.target)) {
        note("edges", "leaf " + to_string(n.id) + " stores " + edge_text(e) + " with an endpoint outside the leaf");
        edges_ok = false;
      }
      stored.push_back(e);
      stored_at.push_back(n.id.value);
      ++report.internal_edges;
      report.internal_weight += e.weight;
    }
  }
  report.disjoint_ok = disjoint;

  // Leaves cover V.
  bool cover = leaf_of.size() == m.vertex_count;
  if (!cover) {
    note("cover", "leaves hold " + std::to_string(leaf_of.size()) + " nodes, header says " +
                    std::to_string(m.vertex_count));
  }
  if (options.original) {
    const Graph& g = *options.original;
    if (g.node_count() != leaf_of.size()) {
      note("cover", "input has " + std::to_string(g.node_count()) + " nodes, leaves hold " +
                      std::to_string(leaf_of.size()));
      cover = false;
    }
    for (NodeId v : g.nodes()) {
      if (!leaf_of.count(v)) {
        note("cover", "input node " + std::to_string(v) + " is in no leaf");
        cover = false;
      }
    }
  }
  report.cover_ok = cover;

  auto under = [&](std::uint32_t ancestor, NodeId v) {
    auto it = leaf_of.find(v);
    if (it == leaf_of.end()) return false;
    std::optional<SuperNodeId> cur = SuperNodeId{it->second};
    while (cur) {
      if (cur->value == ancestor) return true;
      cur = m.nodes[cur->value].parent;
    }
    return false;
  };

  // SuperEdge files.
  std::size_t residual = 0;
  for (const TreeNode& n : m.nodes) {
    if (n.is_leaf()) continue;
    const fs::path path = dir / "superedges" / ("sn_" + to_string(n.id) + ".tsv");
    std::vector<detail::SuperEdgeLine> lines;
    try {
      lines = detail::read_superedge_lines(path);
    } catch (const Error& e) {
      note("edges", e.what());
      edges_ok = false;
      continue;
    }
    for (const detail::SuperEdgeLine& l : lines) {
      const bool a_child = std::find(n.children.begin(), n.children.end(), l.child_a) != n.children.end();
      const bool b_child = std::find(n.children.begin(), n.children.end(), l.child_b) != n.children.end();
      if (!a_child || !b_child || l.child_a == l.child_b) {
        note("edges", "SuperNode " + to_string(n.id) + " stores a SuperEdge between non-sibling SuperNodes " +
                        to_string(l.child_a) + "," + to_string(l.child_b));
        edges_ok = false;
      } else {
        const Edge& e = l.edge;
        const bool forward = under(l.child_a.value, e.source) && under(l.child_b.value, e.target);
        const bool backward = under(l.child_a.value, e.target) && under(l.child_b.value, e.source);
        if (!forward && !backward) {
          if (!leaf_of.count(e.source) || !leaf_of.count(e.target)) ++residual;
          note("edges", "edge " + edge_text(e) + " misplaced in SuperEdge " + to_string(l.child_a) + "-" +
                          to_string(l.child_b));
          edges_ok = false;
        }
      }
      stored.push_back(l.edge);
      stored_at.push_back(n.id.value);
      ++report.cross_edges;
      report.cross_weight += l.edge.weight;
    }
  }

  std::vector<std::size_t> order(stored.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return EdgeLess{}(stored[a], stored[b]); });
  for (std::size_t i = 1; i < order.size(); ++i) {
    const Edge& a = stored[order[i - 1]];
    const Edge& b = stored[order[i]];
    if (a.source == b.source && a.target == b.target) {
      note("edges", "edge " + edge_text(a) + " stored twice (SuperNodes " + std::to_string(stored_at[order[i - 1]]) +
                      " and " + std::to_string(stored_at[order[i]]) + ")");
      edges_ok = false;
    }
  }
  if (stored.size() != m.edge_count) {
    note("edges", "stored " + std::to_string(stored.size()) + " edges, header says " + std::to_string(m.edge_count));
    edges_ok = false;
  }
  if (options.original) {
    const auto& expected = options.original->edges();
    std::vector<Edge> sorted;
    sorted.reserve(order.size());
    for (std::size_t i : order) sorted.push_back(stored[i]);
    if (sorted.size() != expected.size() || !std::equal(sorted.begin(), sorted.end(), expected.begin())) {
      std::size_t missing = 0;
      for (const Edge& e : expected) {
        if (!std::binary_search(sorted.begin(), sorted.end(), e, EdgeLess{})) {
          ++missing;
          note("edges", "input edge " + edge_text(e) + " not stored");
        }
      }
      residual += missing;
      if (missing == 0) note("edges", "stored edge multiset differs from the input (weights or extras)");
      edges_ok = false;
    }
  }
  report.edges_ok = edges_ok;

  // Open nodes, recomputed from the stored edges: v is open in every ancestor of
  // its leaf strictly below the lowest common ancestor of its farthest-reaching edge.
  auto lca_depth = [&](std::uint32_t a, std::uint32_t b) {
    while (depth[a] > depth[b]) a = m.nodes[a].parent->value;
    while (depth[b] > depth[a]) b = m.nodes[b].parent->value;
    while (a != b) {
      a = m.nodes[a].parent->value;
      b = m.nodes[b].parent->value;
    }
    return depth[a];
  };
  std::unordered_map<NodeId, std::size_t> open_from;  // shallowest depth at which v is still open
  for (const Edge& e : stored) {
    auto la = leaf_of.find(e.source);
    auto lb = leaf_of.find(e.target);
    if (la == leaf_of.end() || lb == leaf_of.end() || la->second == lb->second) continue;
    const std::size_t top = lca_depth(la->second, lb->second) + 1;
    for (NodeId v : {e.source, e.target}) {
      auto [it, inserted] = open_from.emplace(v, top);
      if (!inserted) it->second = std::min(it->second, top);
    }
  }
  std::vector<std::vector<NodeId>> expected_open(count);
  std::vector<NodeId> open_ids;
  open_ids.reserve(open_from.size());
  for (const auto& [v, _] : open_from) open_ids.push_back(v);
  std::sort(open_ids.begin(), open_ids.end());
  for (NodeId v : open_ids) {
    const std::size_t top = open_from[v];
    std::uint32_t cur = leaf_of[v];
    while (depth[cur] >= top) {
      expected_open[cur].push_back(v);
      if (!m.nodes[cur].parent) break;
      cur = m.nodes[cur].parent->value;
    }
  }
  bool open_ok = true;
  for (const TreeNode& n : m.nodes) {
    if (n.open_nodes != expected_open[n.id.value]) {
      note("open_nodes", "SuperNode " + to_string(n.id) + " stores " + std::to_string(n.open_nodes.size()) +
                             " open nodes, recomputed " + std::to_string(expected_open[n.id.value].size()));
      open_ok = false;
    }
  }
  report.open_nodes_ok = open_ok;
  report.residual_at_root = residual + m.nodes[0].open_nodes.size();
  if (report.residual_at_root != 0) {
    note("residual", std::to_string(report.residual_at_root) + " edges left unresolved at the root");
  }

  // Balance of every k-way split. Single-child SuperNodes only wrap a leaf.
  if (options.epsilon) {
    std::vector<std::size_t> closure(count, 0);
    for (const auto& [v, leaf] : leaf_of) {
      std::optional<SuperNodeId> cur = SuperNodeId{leaf};
      while (cur) {
        ++closure[cur->value];
        cur = m.nodes[cur->value].parent;
      }
    }
    bool balanced = true;
    double worst = 0.0;
    for (const TreeNode& n : m.nodes) {
      if (n.children.size() < 2) continue;
      const std::size_t parts = std::max(m.k, n.children.size());
      const std::size_t cap = balance_cap(closure[n.id.value], parts, *options.epsilon);
      for (SuperNodeId c : n.children) {
        const double ideal = static_cast<double>(closure[n.id.value]) / static_cast<double>(parts);
        worst = std::max(worst, static_cast<double>(closure[c.value]) / ideal - 1.0);
        if (closure[c.value] > cap) {
          note("balance", "child " + to_string(c) + " of " + to_string(n.id) + " has " +
                              std::to_string(closure[c.value]) + " nodes, cap " + std::to_string(cap));
          balanced = false;
        }
      }
    }
    report.balance_ok = balanced;
    report.balance_achieved = worst;
  }

  for (const auto& [check, n] : note.counts) {
    if (n > kMaxDetailsPerCheck) {
      report.details.push_back(check + ": " + std::to_string(n - kMaxDetailsPerCheck) + " more");
    }
  }
  return report;
}

}  // namespace gmine
