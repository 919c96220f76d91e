#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace gmine {

/// External graph node id. Arbitrary non-negative integer, possibly sparse.
using NodeId = std::uint64_t;

/// Undirected weighted edge, always held in canonical orientation (source < target).
struct Edge {
  NodeId source = 0;
  NodeId target = 0;
  double weight = 1.0;

  static Edge canonical(NodeId a, NodeId b, double weight = 1.0) {
    return a < b ? Edge{a, b, weight} : Edge{b, a, weight};
  }

  bool touches(NodeId v) const { return source == v || target == v; }
  NodeId other(NodeId v) const { return source == v ? target : source; }

  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Orders edges by (source, target); weight is not part of the identity.
struct EdgeLess {
  bool operator()(const Edge& a, const Edge& b) const {
    return a.source != b.source ? a.source < b.source : a.target < b.target;
  }
};

inline std::uint64_t edge_key_hash(NodeId a, NodeId b) {
  std::uint64_t h = a * 0x9E3779B97F4A7C15ULL;
  h ^= b + 0x7F4A7C159E3779B9ULL + (h << 6) + (h >> 2);
  return h;
}

/// Immutable flat undirected graph. External APIs speak NodeId; a dense index
/// [0, node_count) is exposed for algorithms that want arrays.
class Graph {
 public:
  struct Incidence {
    std::uint32_t neighbor;  // dense index
    std::uint32_t edge;      // index into edges()
  };

  Graph() = default;

  std::size_t node_count() const { return ids_.size(); }
  std::size_t edge_count() const { return edges_.size(); }

  /// Node ids in ascending order; position i is dense index i.
  std::span<const NodeId> nodes() const { return ids_; }
  /// Canonical edges sorted by (source, target).
  std::span<const Edge> edges() const { return edges_; }

  bool contains(NodeId id) const { return index_.count(id) != 0; }
  std::optional<std::uint32_t> find(NodeId id) const;
  /// Dense index of `id`; throws NotFound.
  std::uint32_t index_of(NodeId id) const;
  NodeId id_at(std::uint32_t dense) const { return ids_[dense]; }

  std::span<const Incidence> incident(std::uint32_t dense) const {
    return {adjacency_.data() + offsets_[dense], adjacency_.data() + offsets_[dense + 1]};
  }
  std::size_t degree_at(std::uint32_t dense) const { return offsets_[dense + 1] - offsets_[dense]; }
  std::size_t degree(NodeId id) const { return degree_at(index_of(id)); }

  bool has_labels() const { return !labels_.empty(); }
  /// Label of `id`, if one was given.
  std::optional<std::string_view> label(NodeId id) const;
  std::optional<std::string_view> label_at(std::uint32_t dense) const;

  double total_weight() const;

  /// Subgraph induced by `members` (labels carried over). Unknown ids throw NotFound.
  Graph induced(std::span<const NodeId> members) const;

 private:
  friend class GraphBuilder;

  std::vector<NodeId> ids_;
  std::unordered_map<NodeId, std::uint32_t> index_;
  std::vector<Edge> edges_;
  std::vector<std::uint32_t> offsets_{0};
  std::vector<Incidence> adjacency_;
  std::vector<std::string> labels_;  // dense; empty string = unlabeled
};

/// Accumulates nodes and edges; duplicate pairs merge by summing weights.
class GraphBuilder {
 public:
  void reserve(std::size_t nodes, std::size_t edges);
  void add_node(NodeId id);
  /// Throws BadInput on a loop or non-positive weight.
  void add_edge(NodeId a, NodeId b, double weight = 1.0);
  void set_label(NodeId id, std::string label);

  Graph build() &&;

 private:
  std::vector<NodeId> nodes_;
  std::vector<Edge> edges_;
  std::vector<std::pair<NodeId, std::string>> labels_;
};

/// Parses the tab-separated edge-list format. `source_name` prefixes error messages.
Graph parse_edge_list(std::istream& in, std::string_view source_name = "<stream>");
/// Parses `id<TAB>label` lines into `builder`.
void parse_labels(std::istream& in, GraphBuilder& builder, std::string_view source_name = "<stream>");

/// Loads an edge-list file plus an optional labels file. Label ids absent from the
/// edge list become isolated nodes.
Graph load_graph(const std::filesystem::path& edge_path,
                 const std::optional<std::filesystem::path>& labels_path = std::nullopt);

/// Canonical edge-list form: sorted edges, weight column only when != 1.
void write_graph(const Graph& g, std::ostream& out);
void write_graph(const Graph& g, const std::filesystem::path& path);
void write_labels(const Graph& g, std::ostream& out);

/// Shortest decimal text that round-trips the weight ("1", "2.5", ...).
std::string format_weight(double w);
/// Parses a positive finite decimal; nullopt otherwise.
std::optional<double> parse_weight(std::string_view text);
std::optional<NodeId> parse_node_id(std::string_view text);

}  // namespace gmine
