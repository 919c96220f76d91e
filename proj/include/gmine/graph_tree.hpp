#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "gmine/graph.hpp"
#include "gmine/partitioner.hpp"

namespace gmine {

/// Id of a SuperNode or LeafSuperNode. Assigned breadth-first from the root (0),
/// stable across save/load.
struct SuperNodeId {
  std::uint32_t value = 0;

  friend auto operator<=>(const SuperNodeId&, const SuperNodeId&) = default;
};

inline std::string to_string(SuperNodeId id) { return std::to_string(id.value); }

}  // namespace gmine

template <>
struct std::hash<gmine::SuperNodeId> {
  std::size_t operator()(const gmine::SuperNodeId& id) const noexcept { return std::hash<std::uint32_t>{}(id.value); }
};

namespace gmine {

enum class NodeKind : char { Super = 'S', Leaf = 'L' };

/// Bundle of original edges between two sibling SuperNodes. A leaf's internal
/// edge set uses side_a == side_b == the leaf.
struct SuperEdge {
  SuperNodeId side_a;
  SuperNodeId side_b;
  std::vector<Edge> edges;  // canonical orientation, sorted

  std::size_t weight() const { return edges.size(); }
};

/// An edge with exactly one endpoint inside the closure that is propagating it.
struct ExternalRecord {
  Edge edge;
  NodeId inside = 0;

  NodeId outside() const { return edge.other(inside); }
};

using ExternalEdgeBatch = std::vector<ExternalRecord>;

struct TreeNode {
  SuperNodeId id;
  NodeKind kind = NodeKind::Super;
  std::optional<SuperNodeId> parent;
  std::size_t depth = 0;

  /// SuperNode children, all SuperNodes or all leaves. Empty for leaves.
  std::vector<SuperNodeId> children;
  /// One SuperEdge per unordered child pair (i < j), in (i, j) order. Empty for leaves.
  std::vector<SuperEdge> superedges;
  /// Leaf members, ascending. Empty for SuperNodes.
  std::vector<NodeId> members;
  /// Closure nodes with an edge leaving the closure, ascending.
  std::vector<NodeId> open_nodes;

  std::size_t closure_size = 0;
  std::uint32_t order_in = 0;   // pre-order position
  std::uint32_t order_out = 0;  // one past the last descendant's position

  bool is_leaf() const { return kind == NodeKind::Leaf; }
  bool is_open(NodeId v) const;
};

/// A leaf's induced subgraph, as loaded from its leaf file. graph.edges() is the
/// leaf's internal SuperEdge.
struct LeafSubgraph {
  SuperNodeId leaf;
  Graph graph;
};

struct CacheStats {
  std::size_t capacity = 0;
  std::size_t resident = 0;
  std::size_t peak_resident = 0;
  std::size_t loads = 0;
  std::size_t hits = 0;
};

struct FillReport {
  std::size_t internal_edges = 0;  // Σ leaf-internal edges
  std::size_t cross_edges = 0;     // Σ edges stored in sibling SuperEdges
  std::size_t residual_at_root = 0;
};

class LeafCache;

/// The SuperGraph stored as a tree: SuperNodes on top, file-backed LeafSuperNodes
/// at the bottom. Structure is immutable once filled; the leaf cache is the only
/// mutable part and is internally synchronized.
class GraphTree {
 public:
  static constexpr std::size_t kDefaultCacheLeaves = 32;

  GraphTree();
  ~GraphTree();
  GraphTree(GraphTree&&) noexcept;
  GraphTree& operator=(GraphTree&&) noexcept;

  SuperNodeId root() const { return SuperNodeId{0}; }
  std::size_t size() const { return nodes_.size(); }
  std::span<const TreeNode> nodes() const { return nodes_; }
  bool contains(SuperNodeId id) const { return id.value < nodes_.size(); }
  /// Throws NotFound.
  const TreeNode& node(SuperNodeId id) const;
  std::vector<SuperNodeId> leaves() const;

  std::size_t k() const { return k_; }
  std::size_t levels() const { return h_; }
  std::size_t vertex_count() const { return vertex_count_; }
  std::size_t edge_count() const { return edge_count_; }
  const std::filesystem::path& store_dir() const { return store_dir_; }
  bool filled() const { return filled_; }

  /// Leaf owning graph node `v`; throws NotFound.
  SuperNodeId leaf_of(NodeId v) const;
  std::optional<SuperNodeId> find_leaf(NodeId v) const;
  bool contains_node(NodeId v) const { return node_index_.count(v) != 0; }

  /// True when `n` lies in the subtree rooted at `ancestor` (inclusive).
  bool in_subtree(SuperNodeId ancestor, SuperNodeId n) const;
  /// v ∈ Closure(n), in O(1) through the leaf index.
  bool in_closure(SuperNodeId n, NodeId v) const;
  /// Recursive union of leaf members below `id`, ascending.
  std::vector<NodeId> closure(SuperNodeId id) const;
  /// Ancestors of `id`, immediate parent first, root last.
  std::vector<SuperNodeId> parents(SuperNodeId id) const;
  /// The child of `ancestor` whose subtree holds `descendant`.
  SuperNodeId child_toward(SuperNodeId ancestor, SuperNodeId descendant) const;
  /// SuperEdge stored at `parent` for two of its children (either order).
  const SuperEdge& superedge(SuperNodeId parent, SuperNodeId child_a, SuperNodeId child_b) const;

  // Leaf cache -------------------------------------------------------------

  /// Loads the leaf file (once) and returns the subgraph. Throws NotLeaf,
  /// Io (missing file) or Invariant (checksum/content mismatch).
  std::shared_ptr<const LeafSubgraph> expand_leaf(SuperNodeId id);
  /// Releases a loaded leaf; no-op when not loaded. Throws NotLeaf.
  void collapse_leaf(SuperNodeId id);
  bool is_loaded(SuperNodeId id) const;
  void set_cache_capacity(std::size_t leaves);
  CacheStats cache_stats() const;

  std::filesystem::path leaf_path(SuperNodeId id) const;
  std::filesystem::path superedge_path(SuperNodeId id) const;

 private:
  friend GraphTree assemble_tree(const Graph&, const HierarchyPlan&, const std::filesystem::path&);
  friend FillReport fill_graph_tree(GraphTree&);
  friend GraphTree load_tree(const std::filesystem::path&, std::size_t);
  friend void save_tree(const GraphTree&);

  void finish_structure();
  const TreeNode& leaf_node(SuperNodeId id) const;

  std::vector<TreeNode> nodes_;
  std::unordered_map<NodeId, SuperNodeId> node_index_;
  std::vector<SuperNodeId> preorder_;
  std::filesystem::path store_dir_;
  std::size_t k_ = 0;
  std::size_t h_ = 0;
  std::size_t vertex_count_ = 0;
  std::size_t edge_count_ = 0;
  bool filled_ = false;
  std::unordered_map<std::string, std::string> checksums_;  // relative path -> hex digest
  std::unique_ptr<LeafCache> cache_;
};

/// Mirrors the plan as a tree skeleton, writes every leaf's induced subgraph to
/// `leaves/leaf_<id>.tsv` and spills each leaf's cross edges to a staging file.
/// SuperEdges and open nodes stay empty until fill.
GraphTree assemble_tree(const Graph& g, const HierarchyPlan& plan, const std::filesystem::path& store_dir);

/// Bottom-up fill: leaves read their files, internal nodes cross-match the external
/// edges propagated by their children, store the matches in sibling SuperEdges and
/// pass the rest upward. Throws Invariant on a residual batch at the root.
FillReport fill_graph_tree(GraphTree& tree);

/// Writes manifest, SuperEdge files and checksums (leaf files exist since assembly).
void save_tree(const GraphTree& tree);

/// Loads a saved store; all leaves start collapsed.
GraphTree load_tree(const std::filesystem::path& store_dir,
                    std::size_t cache_capacity = GraphTree::kDefaultCacheLeaves);

/// 64-bit FNV-1a digest of a file's bytes, as 16 hex digits.
std::string file_digest(const std::filesystem::path& path);

}  // namespace gmine
