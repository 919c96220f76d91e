#pragma once

// File formats of a tree store. Every writer emits sorted, LF-terminated UTF-8.
//
//   manifest.tsv          graphtree v1 <k> <h> <|V|> <|E|>
//                         node <id> <S|L> <parent|-> <children csv|-> <open csv|->
//                         (for L nodes the children column lists member node ids)
//   leaves/leaf_<id>.tsv  N <nodeId>[ <label>] ... then E <src> <dst> <w> ...
//   superedges/sn_<id>.tsv  <childA> <childB> <src> <dst> <w>
//   checksums.tsv         <relative path>\t<fnv1a-64 hex>
//   staging/ext_<id>.tsv  X <src> <dst> <w> <inside>   (removed after fill)

#include <filesystem>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "gmine/graph.hpp"
#include "gmine/graph_tree.hpp"

namespace gmine::detail {

struct StagedEdge {
  Edge edge;
  NodeId inside = 0;

  friend bool operator<(const StagedEdge& a, const StagedEdge& b) {
    if (a.edge.source != b.edge.source) return a.edge.source < b.edge.source;
    if (a.edge.target != b.edge.target) return a.edge.target < b.edge.target;
    return a.inside < b.inside;
  }
};

struct LeafFileContents {
  std::vector<NodeId> nodes;  // file order
  std::vector<std::pair<NodeId, std::string>> labels;
  std::vector<Edge> edges;    // file order
};

struct Manifest {
  std::size_t k = 0;
  std::size_t h = 0;
  std::size_t vertex_count = 0;
  std::size_t edge_count = 0;
  std::vector<TreeNode> nodes;  // ids, kinds, parents, children/members, open nodes
};

struct SuperEdgeLine {
  SuperNodeId child_a;
  SuperNodeId child_b;
  Edge edge;
};

void write_csv(std::ostream& out, std::span<const std::uint64_t> values);
std::vector<std::uint64_t> parse_csv(std::string_view text, const std::string& context);

void write_leaf_file(const std::filesystem::path& path, const Graph& g, std::span<const NodeId> members,
                     std::span<const Edge> internal);
LeafFileContents read_leaf_contents(const std::filesystem::path& path);
Graph read_leaf_file(const std::filesystem::path& path);
/// Counts E lines, checking each endpoint is a member.
std::size_t count_leaf_edges(const std::filesystem::path& path, std::span<const NodeId> members);

void write_staging_file(const std::filesystem::path& path, std::span<const StagedEdge> records);
std::vector<StagedEdge> read_staging_file(const std::filesystem::path& path);

Manifest read_manifest(const std::filesystem::path& path);

void write_superedge_file(const std::filesystem::path& path, std::span<const SuperEdge> superedges);
std::vector<SuperEdgeLine> read_superedge_lines(const std::filesystem::path& path);
/// One SuperEdge per unordered pair of `children`, filled from the file.
std::vector<SuperEdge> read_superedge_file(const std::filesystem::path& path, std::span<const SuperNodeId> children);

}  // namespace gmine::detail
