#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "json.hpp"

#include "gmine/error.hpp"
#include "gmine/graph_tree.hpp"
#include "gmine/layout.hpp"

namespace gmine {

struct SearchHit {
  NodeId node = 0;
  std::string label;
  std::vector<SuperNodeId> path;  // root first, owning leaf last
};

/// Query surface shared by the CLI and the HTTP service. Every answer is a JSON
/// document so both transports print the same bytes for the same query.
/// Safe for concurrent use: the tree is immutable and the leaf cache locks itself.
class QueryEngine {
 public:
  explicit QueryEngine(GraphTree tree);
  ~QueryEngine();
  static QueryEngine open(const std::filesystem::path& store_dir,
                          std::size_t cache_leaves = GraphTree::kDefaultCacheLeaves);

  GraphTree& tree() { return tree_; }
  const GraphTree& tree() const { return tree_; }

  /// Accepts a decimal SuperNode id or "root". Throws BadInput / NotFound.
  SuperNodeId parse_supernode(std::string_view text) const;
  /// Throws BadInput for non-numeric text, NotFound for ids outside the graph.
  NodeId parse_node(std::string_view text) const;

  nlohmann::json tree_summary() const;
  nlohmann::json supernode(SuperNodeId id) const;
  nlohmann::json closure(SuperNodeId id) const;
  nlohmann::json connectivity(SuperNodeId a, SuperNodeId b) const;
  nlohmann::json external(NodeId v) const;
  nlohmann::json search(std::string_view query) const;
  nlohmann::json expand(SuperNodeId leaf);
  nlohmann::json collapse(SuperNodeId leaf);
  nlohmann::json leaf_layout(SuperNodeId leaf, std::uint64_t seed, std::size_t iterations = 300);
  nlohmann::json leaf_metrics(SuperNodeId leaf);
  nlohmann::json hierarchy_layout() const;

  /// Case-insensitive substring match over node labels, ascending node id.
  std::vector<SearchHit> search_hits(std::string_view query) const;

 private:
  struct LabelIndex;
  const LabelIndex& labels() const;

  GraphTree tree_;
  mutable std::once_flag labels_once_;
  mutable std::unique_ptr<LabelIndex> labels_;
  std::mutex layout_mutex_;
  std::map<std::tuple<std::uint32_t, std::uint64_t, std::size_t>, nlohmann::json> layouts_;
};

nlohmann::json error_json(ErrorKind kind, std::string_view message);

}  // namespace gmine
