#include "gmine/engine.hpp"

#include <algorithm>
#include <cctype>

#include "gmine/connectivity.hpp"
#include "gmine/error.hpp"
#include "gmine/metrics.hpp"
#include "store_io.hpp"

namespace gmine {

using nlohmann::json;

namespace {

json edge_json(const Edge& e) { return json::array({e.source, e.target, e.weight}); }

json ids_json(const std::vector<SuperNodeId>& ids) {
  json out = json::array();
  for (SuperNodeId id : ids) out.push_back(id.value);
  return out;
}

std::string lowercase(std::string_view text) {
  std::string out(text);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::vector<SuperNodeId> root_path(const GraphTree& tree, SuperNodeId leaf) {
  std::vector<SuperNodeId> path = tree.parents(leaf);
  std::reverse(path.begin(), path.end());
  path.push_back(leaf);
  return path;
}

}  // namespace

struct QueryEngine::LabelIndex {
  struct Entry {
    NodeId node;
    std::string folded;
    std::string label;
  };
  std::vector<Entry> entries;  // ascending node id
};

QueryEngine::QueryEngine(GraphTree tree) : tree_(std::move(tree)) {}
QueryEngine::~QueryEngine() = default;

QueryEngine QueryEngine::open(const std::filesystem::path& store_dir, std::size_t cache_leaves) {
  return QueryEngine(load_tree(store_dir, cache_leaves));
}

SuperNodeId QueryEngine::parse_supernode(std::string_view text) const {
  if (text == "root") return tree_.root();
  auto value = parse_node_id(text);
  if (!value || *value > 0xffffffffu) fail(ErrorKind::BadInput, "malformed SuperNode id '" + std::string(text) + "'");
  SuperNodeId id{static_cast<std::uint32_t>(*value)};
  tree_.node(id);
  return id;
}

NodeId QueryEngine::parse_node(std::string_view text) const {
  auto value = parse_node_id(text);
  if (!value) fail(ErrorKind::BadInput, "malformed node id '" + std::string(text) + "'");
  tree_.leaf_of(*value);
  return *value;
}

json QueryEngine::tree_summary() const {
  json nodes = json::array();
  std::size_t leaves = 0;
  for (const TreeNode& n : tree_.nodes()) {
    json j{{"id", n.id.value},
           {"kind", n.is_leaf() ? "leaf" : "supernode"},
           {"parent", n.parent ? json(n.parent->value) : json(nullptr)},
           {"depth", n.depth},
           {"children", ids_json(n.children)},
           {"closure_size", n.closure_size},
           {"open_count", n.open_nodes.size()}};
    if (n.is_leaf()) {
      ++leaves;
      j["members"] = n.members;
    }
    nodes.push_back(std::move(j));
  }
  return {{"k", tree_.k()},
          {"levels", tree_.levels()},
          {"vertex_count", tree_.vertex_count()},
          {"edge_count", tree_.edge_count()},
          {"root", tree_.root().value},
          {"leaf_count", leaves},
          {"nodes", std::move(nodes)}};
}

json QueryEngine::supernode(SuperNodeId id) const {
  const TreeNode& n = tree_.node(id);
  json superedges = json::array();
  for (const SuperEdge& se : n.superedges) {
    superedges.push_back({{"a", se.side_a.value}, {"b", se.side_b.value}, {"weight", se.weight()}});
  }
  json out{{"id", n.id.value},
           {"kind", n.is_leaf() ? "leaf" : "supernode"},
           {"parent", n.parent ? json(n.parent->value) : json(nullptr)},
           {"depth", n.depth},
           {"path", ids_json(root_path(tree_, id))},
           {"children", ids_json(n.children)},
           {"closure_size", n.closure_size},
           {"open_nodes", n.open_nodes},
           {"superedges", std::move(superedges)}};
  if (n.is_leaf()) {
    out["members"] = n.members;
    out["loaded"] = tree_.is_loaded(id);
  }
  return out;
}

json QueryEngine::closure(SuperNodeId id) const {
  return {{"id", id.value}, {"nodes", tree_.closure(id)}};
}

json QueryEngine::connectivity(SuperNodeId a, SuperNodeId b) const {
  ConnectivityResult r = gmine::connectivity(tree_, a, b);
  json edges = json::array();
  double total = 0.0;
  for (const Edge& e : r.edges) {
    edges.push_back(edge_json(e));
    total += e.weight;
  }
  return {{"a", a.value},
          {"b", b.value},
          {"meeting", {{"parent", r.meeting.parent.value},
                       {"child_for_a", r.meeting.child_for_a.value},
                       {"child_for_b", r.meeting.child_for_b.value}}},
          {"weight", r.weight()},
          {"total_edge_weight", total},
          {"edges", std::move(edges)}};
}

json QueryEngine::external(NodeId v) const {
  ExternalNeighborhood ext = external_neighbors(tree_, v);
  json entries = json::array();
  for (const ExternalEntry& e : ext.entries) {
    entries.push_back({{"neighbor", e.neighbor},
                       {"neighbor_leaf", e.neighbor_leaf.value},
                       {"resolved_at", e.resolved_at.value},
                       {"edge", edge_json(e.edge)}});
  }
  return {{"node", v},
          {"leaf", ext.leaf.value},
          {"count", ext.entries.size()},
          {"entries", std::move(entries)},
          {"visited", ids_json(ext.visited)}};
}

const QueryEngine::LabelIndex& QueryEngine::labels() const {
  // Built from the leaf files directly so searching never churns the leaf cache.
  std::call_once(labels_once_, [this] {
    auto index = std::make_unique<LabelIndex>();
    for (SuperNodeId leaf : tree_.leaves()) {
      detail::LeafFileContents c = detail::read_leaf_contents(tree_.leaf_path(leaf));
      for (auto& [v, label] : c.labels) index->entries.push_back({v, lowercase(label), std::move(label)});
    }
    std::sort(index->entries.begin(), index->entries.end(),
              [](const LabelIndex::Entry& a, const LabelIndex::Entry& b) { return a.node < b.node; });
    labels_ = std::move(index);
  });
  return *labels_;
}

std::vector<SearchHit> QueryEngine::search_hits(std::string_view query) const {
  const std::string needle = lowercase(query);
  std::vector<SearchHit> hits;
  if (needle.empty()) return hits;
  for (const auto& e : labels().entries) {
    if (e.folded.find(needle) == std::string::npos) continue;
    hits.push_back({e.node, e.label, root_path(tree_, tree_.leaf_of(e.node))});
  }
  return hits;
}

json QueryEngine::search(std::string_view query) const {
  json hits = json::array();
  for (const SearchHit& h : search_hits(query)) {
    hits.push_back({{"node", h.node}, {"label", h.label}, {"path", ids_json(h.path)}});
  }
  return {{"query", std::string(query)}, {"hits", std::move(hits)}};
}

json QueryEngine::expand(SuperNodeId leaf) {
  auto sub = tree_.expand_leaf(leaf);
  json nodes = json::array();
  for (std::uint32_t i = 0; i < sub->graph.node_count(); ++i) {
    json n{{"id", sub->graph.id_at(i)}};
    if (auto l = sub->graph.label_at(i)) n["label"] = std::string(*l);
    nodes.push_back(std::move(n));
  }
  json edges = json::array();
  for (const Edge& e : sub->graph.edges()) edges.push_back(edge_json(e));
  return {{"leaf", leaf.value}, {"loaded", true}, {"nodes", std::move(nodes)}, {"edges", std::move(edges)}};
}

json QueryEngine::collapse(SuperNodeId leaf) {
  tree_.collapse_leaf(leaf);
  return {{"leaf", leaf.value}, {"loaded", false}};
}

json QueryEngine::leaf_layout(SuperNodeId leaf, std::uint64_t seed, std::size_t iterations) {
  if (!tree_.node(leaf).is_leaf()) fail(ErrorKind::NotLeaf, "SuperNode " + to_string(leaf) + " is not a leaf");
  if (!tree_.is_loaded(leaf)) fail(ErrorKind::NotLoaded, "leaf " + to_string(leaf) + " is not expanded");
  const auto key = std::make_tuple(leaf.value, seed, iterations);
  {
    std::lock_guard lock(layout_mutex_);
    if (auto it = layouts_.find(key); it != layouts_.end()) return it->second;
  }
  LeafLayout layout = layout_leaf(tree_, leaf, LayoutOptions{seed, iterations});
  json positions = json::array();
  for (const auto& [v, p] : layout.positions) positions.push_back({{"node", v}, {"x", p.x}, {"y", p.y}});
  json out{{"leaf", leaf.value}, {"seed", seed}, {"iterations", iterations}, {"positions", std::move(positions)}};
  std::lock_guard lock(layout_mutex_);
  layouts_.emplace(key, out);
  return out;
}

json QueryEngine::leaf_metrics(SuperNodeId leaf) {
  if (!tree_.node(leaf).is_leaf()) fail(ErrorKind::NotLeaf, "SuperNode " + to_string(leaf) + " is not a leaf");
  if (!tree_.is_loaded(leaf)) fail(ErrorKind::NotLoaded, "leaf " + to_string(leaf) + " is not expanded");
  auto sub = tree_.expand_leaf(leaf);
  const Graph& g = sub->graph;
  MetricsReport m = compute_metrics(g);
  json histogram = json::array();
  for (const auto& [degree, count] : m.degree_histogram) histogram.push_back({{"degree", degree}, {"count", count}});
  json degrees = json::array();
  for (std::uint32_t i = 0; i < g.node_count(); ++i) degrees.push_back({{"node", g.id_at(i)}, {"degree", g.degree_at(i)}});
  return {{"leaf", leaf.value},
          {"node_count", g.node_count()},
          {"edge_count", g.edge_count()},
          {"degree_histogram", std::move(histogram)},
          {"degrees", std::move(degrees)},
          {"component_count", m.component_count},
          {"component_sizes", m.component_sizes},
          {"diameter_sample", m.diameter_sample ? json(*m.diameter_sample) : json(nullptr)}};
}

json QueryEngine::hierarchy_layout() const {
  HierarchyLayout layout = layout_hierarchy(tree_);
  json circles = json::array();
  for (std::size_t i = 0; i < layout.circles.size(); ++i) {
    const Circle& c = layout.circles[i];
    circles.push_back({{"id", i}, {"x", c.x}, {"y", c.y}, {"r", c.r}, {"level", layout.level[i]}});
  }
  return {{"circles", std::move(circles)}};
}

json error_json(ErrorKind kind, std::string_view message) {
  return {{"error", {{"code", std::string(to_string(kind))}, {"message", std::string(message)}}}};
}

}  // namespace gmine
