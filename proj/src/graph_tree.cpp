#include "gmine/graph_tree.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <list>
#include <mutex>
#include <sstream>

#include "gmine/error.hpp"
#include "store_io.hpp"

namespace gmine {

namespace fs = std::filesystem;

bool TreeNode::is_open(NodeId v) const { return std::binary_search(open_nodes.begin(), open_nodes.end(), v); }

// ---------------------------------------------------------------------------
// Leaf cache: LRU over loaded leaf subgraphs. Loads happen under the lock, so a
// leaf is published only once fully parsed.

class LeafCache {
 public:
  explicit LeafCache(std::size_t capacity) : capacity_(std::max<std::size_t>(1, capacity)) {}

  template <class Loader>
  std::shared_ptr<const LeafSubgraph> get(SuperNodeId id, Loader&& load) {
    std::lock_guard lock(mu_);
    if (auto it = entries_.find(id); it != entries_.end()) {
      lru_.splice(lru_.begin(), lru_, it->second.position);
      ++stats_hits_;
      return it->second.subgraph;
    }
    auto subgraph = std::make_shared<const LeafSubgraph>(load());
    lru_.push_front(id);
    entries_.emplace(id, Entry{subgraph, lru_.begin()});
    ++loads_;
    evict_over_capacity();
    peak_ = std::max(peak_, entries_.size());
    return subgraph;
  }

  void release(SuperNodeId id) {
    std::lock_guard lock(mu_);
    if (auto it = entries_.find(id); it != entries_.end()) {
      lru_.erase(it->second.position);
      entries_.erase(it);
    }
  }

  bool contains(SuperNodeId id) const {
    std::lock_guard lock(mu_);
    return entries_.count(id) != 0;
  }

  void set_capacity(std::size_t capacity) {
    std::lock_guard lock(mu_);
    capacity_ = std::max<std::size_t>(1, capacity);
    evict_over_capacity();
  }

  CacheStats stats() const {
    std::lock_guard lock(mu_);
    return {capacity_, entries_.size(), peak_, loads_, stats_hits_};
  }

 private:
  struct Entry {
    std::shared_ptr<const LeafSubgraph> subgraph;
    std::list<SuperNodeId>::iterator position;
  };

  void evict_over_capacity() {
    while (entries_.size() > capacity_) {
      entries_.erase(lru_.back());
      lru_.pop_back();
    }
  }

  mutable std::mutex mu_;
  std::size_t capacity_;
  std::list<SuperNodeId> lru_;
  std::unordered_map<SuperNodeId, Entry> entries_;
  std::size_t peak_ = 0;
  std::size_t loads_ = 0;
  std::size_t stats_hits_ = 0;
};

// ---------------------------------------------------------------------------
// GraphTree

GraphTree::GraphTree() : cache_(std::make_unique<LeafCache>(kDefaultCacheLeaves)) {}
GraphTree::~GraphTree() = default;
GraphTree::GraphTree(GraphTree&&) noexcept = default;
GraphTree& GraphTree::operator=(GraphTree&&) noexcept = default;

const TreeNode& GraphTree::node(SuperNodeId id) const {
  if (!contains(id)) fail(ErrorKind::NotFound, "unknown SuperNode id " + to_string(id));
  return nodes_[id.value];
}

const TreeNode& GraphTree::leaf_node(SuperNodeId id) const {
  const TreeNode& n = node(id);
  if (!n.is_leaf()) fail(ErrorKind::NotLeaf, "SuperNode " + to_string(id) + " is not a leaf");
  return n;
}

std::vector<SuperNodeId> GraphTree::leaves() const {
  std::vector<SuperNodeId> out;
  for (const TreeNode& n : nodes_) {
    if (n.is_leaf()) out.push_back(n.id);
  }
  return out;
}

std::optional<SuperNodeId> GraphTree::find_leaf(NodeId v) const {
  auto it = node_index_.find(v);
  if (it == node_index_.end()) return std::nullopt;
  return it->second;
}

SuperNodeId GraphTree::leaf_of(NodeId v) const {
  auto leaf = find_leaf(v);
  if (!leaf) fail(ErrorKind::NotFound, "unknown node id " + std::to_string(v));
  return *leaf;
}

bool GraphTree::in_subtree(SuperNodeId ancestor, SuperNodeId n) const {
  const TreeNode& a = node(ancestor);
  const TreeNode& x = node(n);
  return a.order_in <= x.order_in && x.order_in < a.order_out;
}

bool GraphTree::in_closure(SuperNodeId n, NodeId v) const {
  auto leaf = find_leaf(v);
  return leaf && in_subtree(n, *leaf);
}

std::vector<NodeId> GraphTree::closure(SuperNodeId id) const {
  const TreeNode& top = node(id);
  std::vector<NodeId> out;
  out.reserve(top.closure_size);
  for (std::uint32_t pos = top.order_in; pos < top.order_out; ++pos) {
    const TreeNode& n = nodes_[preorder_[pos].value];
    if (n.is_leaf()) out.insert(out.end(), n.members.begin(), n.members.end());
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<SuperNodeId> GraphTree::parents(SuperNodeId id) const {
  std::vector<SuperNodeId> out;
  for (auto p = node(id).parent; p; p = nodes_[p->value].parent) out.push_back(*p);
  return out;
}

SuperNodeId GraphTree::child_toward(SuperNodeId ancestor, SuperNodeId descendant) const {
  const TreeNode& a = node(ancestor);
  const TreeNode& d = node(descendant);
  if (ancestor == descendant || !in_subtree(ancestor, descendant)) {
    fail(ErrorKind::Invariant, "SuperNode " + to_string(descendant) + " is not below " + to_string(ancestor));
  }
  // Children occupy consecutive pre-order ranges in child order.
  auto it = std::upper_bound(a.children.begin(), a.children.end(), d.order_in,
                             [&](std::uint32_t pos, SuperNodeId c) { return pos < nodes_[c.value].order_in; });
  return *(it - 1);
}

const SuperEdge& GraphTree::superedge(SuperNodeId parent, SuperNodeId child_a, SuperNodeId child_b) const {
  const TreeNode& p = node(parent);
  auto a = std::min(child_a, child_b);
  auto b = std::max(child_a, child_b);
  for (const SuperEdge& se : p.superedges) {
    if (se.side_a == a && se.side_b == b) return se;
  }
  fail(ErrorKind::NotFound, "no SuperEdge for " + to_string(a) + "," + to_string(b) + " at " + to_string(parent));
}

fs::path GraphTree::leaf_path(SuperNodeId id) const {
  return store_dir_ / "leaves" / ("leaf_" + to_string(id) + ".tsv");
}

fs::path GraphTree::superedge_path(SuperNodeId id) const {
  return store_dir_ / "superedges" / ("sn_" + to_string(id) + ".tsv");
}

void GraphTree::finish_structure() {
  node_index_.clear();
  preorder_.clear();
  preorder_.reserve(nodes_.size());
  std::vector<std::pair<SuperNodeId, bool>> stack{{root(), false}};
  while (!stack.empty()) {
    auto [id, done] = stack.back();
    stack.pop_back();
    TreeNode& n = nodes_[id.value];
    if (done) {
      n.order_out = static_cast<std::uint32_t>(preorder_.size());
      n.closure_size = n.members.size();
      for (SuperNodeId c : n.children) n.closure_size += nodes_[c.value].closure_size;
      continue;
    }
    n.order_in = static_cast<std::uint32_t>(preorder_.size());
    n.depth = n.parent ? nodes_[n.parent->value].depth + 1 : 0;
    preorder_.push_back(id);
    stack.push_back({id, true});
    for (auto it = n.children.rbegin(); it != n.children.rend(); ++it) stack.push_back({*it, false});
  }
  if (preorder_.size() != nodes_.size()) fail(ErrorKind::Invariant, "tree nodes unreachable from the root");
  node_index_.reserve(vertex_count_);
  for (const TreeNode& n : nodes_) {
    for (NodeId v : n.members) {
      if (!node_index_.emplace(v, n.id).second) {
        fail(ErrorKind::Invariant, "node " + std::to_string(v) + " belongs to two leaves");
      }
    }
  }
}

std::shared_ptr<const LeafSubgraph> GraphTree::expand_leaf(SuperNodeId id) {
  const TreeNode& leaf = leaf_node(id);
  return cache_->get(id, [&] {
    const fs::path path = leaf_path(id);
    if (!fs::exists(path)) fail(ErrorKind::Io, "leaf " + to_string(id) + ": missing file " + path.string());
    const std::string rel = "leaves/" + path.filename().string();
    if (auto it = checksums_.find(rel); it != checksums_.end() && file_digest(path) != it->second) {
      fail(ErrorKind::Invariant, "leaf " + to_string(id) + ": checksum mismatch in " + path.string());
    }
    LeafSubgraph sub{id, detail::read_leaf_file(path)};
    if (!std::equal(sub.graph.nodes().begin(), sub.graph.nodes().end(), leaf.members.begin(), leaf.members.end())) {
      fail(ErrorKind::Invariant, "leaf " + to_string(id) + ": file members differ from manifest");
    }
    return sub;
  });
}

void GraphTree::collapse_leaf(SuperNodeId id) {
  leaf_node(id);
  cache_->release(id);
}

bool GraphTree::is_loaded(SuperNodeId id) const { return cache_->contains(id); }
void GraphTree::set_cache_capacity(std::size_t leaves) { cache_->set_capacity(leaves); }
CacheStats GraphTree::cache_stats() const { return cache_->stats(); }

// ---------------------------------------------------------------------------
// Assembly

namespace {

void reset_store(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) fail(ErrorKind::Io, "cannot create store directory " + dir.string() + ": " + ec.message());
  for (const char* sub : {"leaves", "superedges", "staging"}) fs::remove_all(dir / sub, ec);
  for (const char* file : {"manifest.tsv", "checksums.tsv"}) fs::remove(dir / file, ec);
  for (const char* sub : {"leaves", "superedges", "staging"}) {
    fs::create_directories(dir / sub, ec);
    if (ec) fail(ErrorKind::Io, "cannot create " + (dir / sub).string() + ": " + ec.message());
  }
}

fs::path staging_path(const fs::path& dir, SuperNodeId leaf) {
  return dir / "staging" / ("ext_" + to_string(leaf) + ".tsv");
}

}  // namespace

GraphTree assemble_tree(const Graph& g, const HierarchyPlan& plan, const fs::path& store_dir) {
  GraphTree tree;
  tree.store_dir_ = store_dir;
  tree.k_ = plan.k;
  tree.h_ = plan.h;
  tree.vertex_count_ = g.node_count();
  tree.edge_count_ = g.edge_count();

  // Breadth-first id assignment. A SuperNode whose plan children mix leaves and
  // internal nodes gets a single-child wrapper around each leaf child, so every
  // SuperNode's children are homogeneous.
  struct Pending {
    SuperNodeId id;
    const PlanNode* plan;
    bool wrapper;
  };
  auto add_node = [&](NodeKind kind, std::optional<SuperNodeId> parent) {
    TreeNode n;
    n.id = SuperNodeId{static_cast<std::uint32_t>(tree.nodes_.size())};
    n.kind = kind;
    n.parent = parent;
    tree.nodes_.push_back(std::move(n));
    if (parent) tree.nodes_[parent->value].children.push_back(tree.nodes_.back().id);
    return tree.nodes_.back().id;
  };
  auto add_leaf = [&](const PlanNode& p, SuperNodeId parent) {
    SuperNodeId id = add_node(NodeKind::Leaf, parent);
    tree.nodes_[id.value].members = p.members;
    return id;
  };

  std::deque<Pending> queue;
  SuperNodeId root = add_node(NodeKind::Super, std::nullopt);
  if (plan.root.is_leaf()) {
    add_leaf(plan.root, root);
  } else {
    queue.push_back({root, &plan.root, false});
  }
  while (!queue.empty()) {
    Pending item = queue.front();
    queue.pop_front();
    if (item.wrapper) {
      add_leaf(*item.plan, item.id);
      continue;
    }
    const auto& kids = item.plan->children;
    const bool any_leaf = std::any_of(kids.begin(), kids.end(), [](const PlanNode& c) { return c.is_leaf(); });
    const bool all_leaf = std::all_of(kids.begin(), kids.end(), [](const PlanNode& c) { return c.is_leaf(); });
    for (const PlanNode& child : kids) {
      if (child.members.empty()) fail(ErrorKind::BadInput, "plan contains an empty community");
      if (all_leaf) {
        add_leaf(child, item.id);
      } else if (child.is_leaf() && any_leaf) {
        queue.push_back({add_node(NodeKind::Super, item.id), &child, true});
      } else {
        queue.push_back({add_node(NodeKind::Super, item.id), &child, false});
      }
    }
  }

  tree.finish_structure();
  if (tree.node_index_.size() != g.node_count()) {
    fail(ErrorKind::BadInput, "plan covers " + std::to_string(tree.node_index_.size()) + " nodes but graph has " +
                                  std::to_string(g.node_count()));
  }
  for (NodeId v : g.nodes()) {
    if (!tree.node_index_.count(v)) fail(ErrorKind::BadInput, "plan is missing graph node " + std::to_string(v));
  }

  reset_store(store_dir);
  for (const TreeNode& leaf : tree.nodes_) {
    if (!leaf.is_leaf()) continue;
    std::vector<Edge> internal;
    std::vector<detail::StagedEdge> external;
    for (NodeId v : leaf.members) {
      const std::uint32_t u = g.index_of(v);
      for (const auto& inc : g.incident(u)) {
        const Edge& e = g.edges()[inc.edge];
        const NodeId w = g.id_at(inc.neighbor);
        if (tree.node_index_.at(w) == leaf.id) {
          if (v < w) internal.push_back(e);
        } else {
          external.push_back({e, v});
        }
      }
    }
    std::sort(internal.begin(), internal.end(), EdgeLess{});
    std::sort(external.begin(), external.end());
    detail::write_leaf_file(tree.leaf_path(leaf.id), g, leaf.members, internal);
    detail::write_staging_file(staging_path(store_dir, leaf.id), external);
  }
  return tree;
}

// ---------------------------------------------------------------------------
// Fill

namespace {

std::size_t pair_index(std::size_t i, std::size_t j, std::size_t m) { return i * m - i * (i + 1) / 2 + (j - i - 1); }

struct Filler {
  GraphTree& tree;
  std::vector<TreeNode>& nodes;
  FillReport report;

  ExternalEdgeBatch fill(SuperNodeId id) {
    TreeNode& n = nodes[id.value];
    ExternalEdgeBatch pending;
    if (n.is_leaf()) {
      report.internal_edges += detail::count_leaf_edges(tree.leaf_path(id), n.members);
      for (const detail::StagedEdge& s : detail::read_staging_file(
               tree.store_dir() / "staging" / ("ext_" + to_string(id) + ".tsv"))) {
        if (!std::binary_search(n.members.begin(), n.members.end(), s.inside)) {
          fail(ErrorKind::Invariant, "leaf " + to_string(id) + ": staged edge endpoint outside the leaf");
        }
        auto other = tree.find_leaf(s.edge.other(s.inside));
        if (!other) fail(ErrorKind::Invariant, "edge endpoint " + std::to_string(s.edge.other(s.inside)) + " not in any leaf");
        if (*other == id) fail(ErrorKind::Invariant, "leaf " + to_string(id) + ": internal edge staged as external");
        pending.push_back({s.edge, s.inside});
      }
    } else {
      const std::size_t m = n.children.size();
      n.superedges.clear();
      for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = i + 1; j < m; ++j) n.superedges.push_back({n.children[i], n.children[j], {}});
      }
      // Records arriving from the higher-indexed child of a pair; each must mirror
      // a record from the lower-indexed child.
      std::vector<std::vector<Edge>> mirrored(n.superedges.size());
      for (std::size_t i = 0; i < m; ++i) {
        ExternalEdgeBatch batch = fill(n.children[i]);
        for (const ExternalRecord& r : batch) {
          const SuperNodeId other_leaf = tree.leaf_of(r.outside());
          if (!tree.in_subtree(id, other_leaf)) {
            pending.push_back(r);
            continue;
          }
          const SuperNodeId target = tree.child_toward(id, other_leaf);
          const auto j = static_cast<std::size_t>(
              std::lower_bound(n.children.begin(), n.children.end(), target) - n.children.begin());
          if (j == i) fail(ErrorKind::Invariant, "edge resolved inside the child that propagated it");
          if (i < j) {
            n.superedges[pair_index(i, j, m)].edges.push_back(r.edge);
          } else {
            mirrored[pair_index(j, i, m)].push_back(r.edge);
          }
        }
      }
      for (std::size_t p = 0; p < n.superedges.size(); ++p) {
        auto& edges = n.superedges[p].edges;
        std::sort(edges.begin(), edges.end(), EdgeLess{});
        std::sort(mirrored[p].begin(), mirrored[p].end(), EdgeLess{});
        if (edges != mirrored[p]) {
          fail(ErrorKind::Invariant, "unmatched external edges between " + to_string(n.superedges[p].side_a) +
                                         " and " + to_string(n.superedges[p].side_b));
        }
        report.cross_edges += edges.size();
      }
    }

    n.open_nodes.clear();
    n.open_nodes.reserve(pending.size());
    for (const ExternalRecord& r : pending) n.open_nodes.push_back(r.inside);
    std::sort(n.open_nodes.begin(), n.open_nodes.end());
    n.open_nodes.erase(std::unique(n.open_nodes.begin(), n.open_nodes.end()), n.open_nodes.end());
    return pending;
  }
};

}  // namespace

FillReport fill_graph_tree(GraphTree& tree) {
  Filler filler{tree, tree.nodes_, {}};
  ExternalEdgeBatch residual = filler.fill(tree.root());
  filler.report.residual_at_root = residual.size();
  if (!residual.empty()) {
    fail(ErrorKind::Invariant, std::to_string(residual.size()) + " external edge records unresolved at the root");
  }
  const std::size_t stored = filler.report.internal_edges + filler.report.cross_edges;
  if (stored != tree.edge_count_) {
    fail(ErrorKind::Invariant, "fill stored " + std::to_string(stored) + " edges, graph has " +
                                   std::to_string(tree.edge_count_));
  }
  std::error_code ec;
  fs::remove_all(tree.store_dir_ / "staging", ec);
  tree.filled_ = true;
  return filler.report;
}

// ---------------------------------------------------------------------------
// Save / load

void save_tree(const GraphTree& tree) {
  if (!tree.filled_) fail(ErrorKind::Invariant, "cannot save an unfilled tree");
  const fs::path& dir = tree.store_dir_;
  {
    std::ofstream out(dir / "manifest.tsv", std::ios::binary);
    if (!out) fail(ErrorKind::Io, "cannot write " + (dir / "manifest.tsv").string());
    out << "graphtree v1 " << tree.k_ << ' ' << tree.h_ << ' ' << tree.vertex_count_ << ' ' << tree.edge_count_ << '\n';
    for (const TreeNode& n : tree.nodes_) {
      out << "node " << n.id.value << ' ' << static_cast<char>(n.kind) << ' '
          << (n.parent ? to_string(*n.parent) : "-") << ' ';
      if (n.is_leaf()) {
        detail::write_csv(out, n.members);
      } else {
        std::vector<std::uint64_t> kids;
        for (SuperNodeId c : n.children) kids.push_back(c.value);
        detail::write_csv(out, kids);
      }
      out << ' ';
      detail::write_csv(out, n.open_nodes);
      out << '\n';
    }
    if (!out) fail(ErrorKind::Io, "write failure on manifest");
  }
  for (const TreeNode& n : tree.nodes_) {
    if (!n.is_leaf()) detail::write_superedge_file(tree.superedge_path(n.id), n.superedges);
  }

  std::vector<fs::path> files{dir / "manifest.tsv"};
  for (const char* sub : {"leaves", "superedges"}) {
    for (const auto& entry : fs::directory_iterator(dir / sub)) files.push_back(entry.path());
  }
  std::vector<std::pair<std::string, std::string>> sums;
  for (const fs::path& f : files) sums.emplace_back(fs::relative(f, dir).generic_string(), file_digest(f));
  std::sort(sums.begin(), sums.end());
  std::ofstream out(dir / "checksums.tsv", std::ios::binary);
  for (const auto& [rel, digest] : sums) out << rel << '\t' << digest << '\n';
  if (!out) fail(ErrorKind::Io, "write failure on checksums");
}

GraphTree load_tree(const fs::path& store_dir, std::size_t cache_capacity) {
  GraphTree tree;
  tree.store_dir_ = store_dir;
  tree.set_cache_capacity(cache_capacity);

  const fs::path sums_path = store_dir / "checksums.tsv";
  std::ifstream sums(sums_path);
  if (!sums) fail(ErrorKind::Io, "cannot open " + sums_path.string());
  std::string line;
  while (std::getline(sums, line)) {
    auto tab = line.find('\t');
    if (tab == std::string::npos) fail(ErrorKind::Invariant, "malformed checksums line: " + line);
    tree.checksums_.emplace(line.substr(0, tab), line.substr(tab + 1));
  }
  auto verify = [&](const fs::path& file, const std::string& what) {
    const std::string rel = fs::relative(file, store_dir).generic_string();
    if (!fs::exists(file)) fail(ErrorKind::Io, what + ": missing file " + file.string());
    auto it = tree.checksums_.find(rel);
    if (it == tree.checksums_.end()) fail(ErrorKind::Invariant, what + ": no checksum recorded for " + rel);
    if (file_digest(file) != it->second) fail(ErrorKind::Invariant, what + ": checksum mismatch in " + rel);
  };

  const fs::path manifest = store_dir / "manifest.tsv";
  verify(manifest, "manifest");
  detail::Manifest m = detail::read_manifest(manifest);
  tree.k_ = m.k;
  tree.h_ = m.h;
  tree.vertex_count_ = m.vertex_count;
  tree.edge_count_ = m.edge_count;
  tree.nodes_ = std::move(m.nodes);
  tree.finish_structure();
  if (tree.node_index_.size() != tree.vertex_count_) {
    fail(ErrorKind::Invariant, "manifest leaves hold " + std::to_string(tree.node_index_.size()) + " nodes, header says " +
                                   std::to_string(tree.vertex_count_));
  }

  for (TreeNode& n : tree.nodes_) {
    if (n.is_leaf()) {
      if (!fs::exists(tree.leaf_path(n.id))) {
        fail(ErrorKind::Io, "leaf " + to_string(n.id) + ": missing file " + tree.leaf_path(n.id).string());
      }
      continue;
    }
    const fs::path path = tree.superedge_path(n.id);
    verify(path, "SuperNode " + to_string(n.id));
    n.superedges = detail::read_superedge_file(path, n.children);
  }
  tree.filled_ = true;
  return tree;
}

}  // namespace gmine
