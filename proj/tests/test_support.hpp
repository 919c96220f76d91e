#pragma once

// Independent reference implementations used as test oracles. They work from the
// raw edge list with the simplest algorithm that is obviously right, never from
// the library's indexes.

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <limits>
#include <map>
#include <numeric>
#include <cstdio>
#include <random>
#include <sys/wait.h>
#include <set>
#include <sstream>
#include <string>
#include <unistd.h>
#include <utility>
#include <vector>

#include "gmine/graph.hpp"
#include "gmine/graph_tree.hpp"
#include "gmine/partitioner.hpp"

namespace gmine::testing {

namespace fs = std::filesystem;

inline fs::path data_path(const std::string& name) { return fs::path(GMINE_TEST_DATA) / name; }

/// Fresh, empty directory removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag = "t") {
    static std::atomic<int> counter{0};
    path_ = fs::temp_directory_path() /
            ("gmine_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const fs::path& path() const { return path_; }
  fs::path operator/(const std::string& name) const { return path_ / name; }

 private:
  fs::path path_;
};

inline Graph fixture_graph() { return load_graph(data_path("fixture_edges.tsv"), data_path("fixture_labels.tsv")); }

/// Partition, assemble, fill and save in one go.
inline GraphTree build_store(const Graph& g, std::size_t k, std::size_t h, const fs::path& dir,
                             std::uint64_t seed = 1, double epsilon = 0.10) {
  HierarchySpec spec;
  spec.k = k;
  spec.h = h;
  spec.epsilon = epsilon;
  HierarchyPlan plan = build_hierarchy(g, spec, seed);
  GraphTree tree = assemble_tree(g, plan, dir);
  fill_graph_tree(tree);
  save_tree(tree);
  return tree;
}

inline std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

/// Relative path -> bytes for every regular file under `dir`.
inline std::map<std::string, std::string> snapshot(const fs::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (e.is_regular_file()) out[fs::relative(e.path(), dir).generic_string()] = read_file(e.path());
  }
  return out;
}

using EdgeKey = std::pair<NodeId, NodeId>;

inline EdgeKey key_of(const Edge& e) { return {std::min(e.source, e.target), std::max(e.source, e.target)}; }

/// Brute-force scan: every edge of `g` with one endpoint in `a` and the other in `b`.
inline std::set<EdgeKey> scan_edges_between(const Graph& g, const std::set<NodeId>& a, const std::set<NodeId>& b) {
  std::set<EdgeKey> out;
  for (const Edge& e : g.edges()) {
    const bool ab = a.count(e.source) && b.count(e.target);
    const bool ba = b.count(e.source) && a.count(e.target);
    if (ab || ba) out.insert(key_of(e));
  }
  return out;
}

/// Closure as the union of leaf members found by walking children lists.
inline std::set<NodeId> closure_by_walk(const GraphTree& tree, SuperNodeId id) {
  std::set<NodeId> out;
  std::vector<SuperNodeId> stack{id};
  while (!stack.empty()) {
    const TreeNode& n = tree.node(stack.back());
    stack.pop_back();
    out.insert(n.members.begin(), n.members.end());
    for (SuperNodeId c : n.children) stack.push_back(c);
  }
  return out;
}

/// Nodes of `closure` with at least one neighbor outside it.
inline std::vector<NodeId> open_nodes_by_scan(const Graph& g, const std::set<NodeId>& closure) {
  std::set<NodeId> out;
  for (const Edge& e : g.edges()) {
    const bool s = closure.count(e.source) != 0;
    const bool t = closure.count(e.target) != 0;
    if (s && !t) out.insert(e.source);
    if (t && !s) out.insert(e.target);
  }
  return {out.begin(), out.end()};
}

/// Degree of every node from a pass over the edge list.
inline std::map<NodeId, std::size_t> degrees_by_count(const Graph& g) {
  std::map<NodeId, std::size_t> out;
  for (NodeId v : g.nodes()) out[v] = 0;
  for (const Edge& e : g.edges()) {
    ++out[e.source];
    ++out[e.target];
  }
  return out;
}

/// Component label per node by repeated min-label relaxation until nothing changes.
inline std::map<NodeId, NodeId> components_by_fixed_point(const Graph& g) {
  std::map<NodeId, NodeId> label;
  for (NodeId v : g.nodes()) label[v] = v;
  bool changed = true;
  while (changed) {
    changed = false;
    for (const Edge& e : g.edges()) {
      const NodeId m = std::min(label[e.source], label[e.target]);
      if (label[e.source] != m || label[e.target] != m) {
        label[e.source] = label[e.target] = m;
        changed = true;
      }
    }
  }
  return label;
}

/// Hop distance by repeated boolean matrix products of the adjacency matrix.
/// Returns -1 when unreachable. Quartic; only for small graphs.
inline int hops_by_matrix_power(const Graph& g, NodeId a, NodeId b) {
  const std::size_t n = g.node_count();
  std::vector<NodeId> ids(g.nodes().begin(), g.nodes().end());
  auto idx = [&](NodeId v) { return static_cast<std::size_t>(std::lower_bound(ids.begin(), ids.end(), v) - ids.begin()); };
  std::vector<std::vector<char>> adj(n, std::vector<char>(n, 0));
  for (const Edge& e : g.edges()) adj[idx(e.source)][idx(e.target)] = adj[idx(e.target)][idx(e.source)] = 1;
  const std::size_t s = idx(a), t = idx(b);
  if (s == t) return 0;
  std::vector<std::vector<char>> reach = adj;  // reach = walks of length exactly d
  for (std::size_t d = 1; d <= n; ++d) {
    if (reach[s][t]) return static_cast<int>(d);
    std::vector<std::vector<char>> next(n, std::vector<char>(n, 0));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < n; ++k)
        if (reach[i][k])
          for (std::size_t j = 0; j < n; ++j)
            if (adj[k][j]) next[i][j] = 1;
    reach = std::move(next);
  }
  return -1;
}

/// Weighted cut of a labeling given as node -> part.
inline double cut_of(const Graph& g, const std::map<NodeId, std::uint32_t>& part) {
  double cut = 0.0;
  for (const Edge& e : g.edges()) {
    if (part.at(e.source) != part.at(e.target)) cut += e.weight;
  }
  return cut;
}

/// Smallest cut among `trials` uniformly random assignments with part sizes as equal as possible.
inline double random_balanced_cut(const Graph& g, std::size_t k, std::size_t trials, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<NodeId> ids(g.nodes().begin(), g.nodes().end());
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t t = 0; t < trials; ++t) {
    std::shuffle(ids.begin(), ids.end(), rng);
    std::map<NodeId, std::uint32_t> part;
    for (std::size_t i = 0; i < ids.size(); ++i) part[ids[i]] = static_cast<std::uint32_t>(i % k);
    best = std::min(best, cut_of(g, part));
  }
  return best;
}

/// Fraction of nodes whose found part matches the true part under the best
/// one-to-one relabeling (all permutations; k is small).
inline double best_relabel_accuracy(const std::vector<std::uint32_t>& truth, const std::vector<std::uint32_t>& found,
                                    std::size_t k) {
  std::vector<std::uint32_t> perm(k);
  std::iota(perm.begin(), perm.end(), 0u);
  std::size_t best = 0;
  do {
    std::size_t hits = 0;
    for (std::size_t i = 0; i < truth.size(); ++i) hits += perm[found[i]] == truth[i] ? 1 : 0;
    best = std::max(best, hits);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return truth.empty() ? 1.0 : static_cast<double>(best) / static_cast<double>(truth.size());
}

struct RunResult {
  int exit_code = -1;
  std::string out;
};

/// Runs a shell command, capturing stdout (stderr is discarded unless redirected).
inline RunResult run(const std::string& command) {
  RunResult r;
  FILE* pipe = ::popen((command + " 2>/dev/null").c_str(), "r");
  if (!pipe) return r;
  char buf[4096];
  std::size_t n;
  while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
  const int status = ::pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

}  // namespace gmine::testing
