#include "gmine/synthetic.hpp"

#include <algorithm>
#include <array>
#include <random>
#include <unordered_set>

#include "gmine/error.hpp"

namespace gmine {

namespace {

double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

std::uint64_t below(std::mt19937_64& rng, std::uint64_t n) { return std::uniform_int_distribution<std::uint64_t>(0, n - 1)(rng); }

std::uint64_t pair_key(NodeId a, NodeId b) {
  if (a > b) std::swap(a, b);
  return (a << 32) | b;
}

constexpr std::array<const char*, 24> kFirst{"Ana",   "Bin",   "Carla", "Dmitri", "Elena", "Fatima", "Gustavo", "Hana",
                                             "Ivan",  "Jun",   "Kofi",  "Lucia",  "Mehdi", "Nadia",  "Omar",    "Priya",
                                             "Qiang", "Rosa",  "Sven",  "Tomoko", "Uma",   "Victor", "Wei",     "Yusuf"};
constexpr std::array<const char*, 20> kLast{"Alves",  "Baker",  "Chen",  "Duarte", "Eriksen", "Fischer", "Garcia",
                                            "Haddad", "Ito",    "Jensen", "Kumar", "Lopez",   "Moreau",  "Nakamura",
                                            "Okafor", "Petrov", "Rossi", "Silva",  "Traina",  "Wang"};

}  // namespace

Graph random_gnm(std::size_t n, std::size_t m, std::uint64_t seed) {
  const std::size_t max_edges = n < 2 ? 0 : n * (n - 1) / 2;
  if (m > max_edges) fail(ErrorKind::BadInput, "too many edges for " + std::to_string(n) + " nodes");
  std::mt19937_64 rng(seed);
  GraphBuilder b;
  b.reserve(n, m);
  for (NodeId v = 0; v < n; ++v) b.add_node(v);
  std::unordered_set<std::uint64_t> seen;
  seen.reserve(m * 2);
  while (seen.size() < m) {
    NodeId u = below(rng, n);
    NodeId v = below(rng, n);
    if (u == v || !seen.insert(pair_key(u, v)).second) continue;
    b.add_edge(u, v);
  }
  return std::move(b).build();
}

Graph random_gnp(std::size_t n, double p, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  GraphBuilder b;
  for (NodeId v = 0; v < n; ++v) b.add_node(v);
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId v = u + 1; v < n; ++v) {
      if (unit(rng) < p) b.add_edge(u, v);
    }
  }
  return std::move(b).build();
}

Graph planted_partition_graph(std::size_t n, std::size_t communities, double p_in, double p_out, std::uint64_t seed,
                              std::vector<std::uint32_t>* truth) {
  if (communities == 0) fail(ErrorKind::BadInput, "need at least one community");
  std::mt19937_64 rng(seed);
  std::vector<std::uint32_t> block(n);
  for (std::size_t v = 0; v < n; ++v) block[v] = static_cast<std::uint32_t>(v * communities / n);
  GraphBuilder b;
  for (NodeId v = 0; v < n; ++v) b.add_node(v);
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId v = u + 1; v < n; ++v) {
      if (unit(rng) < (block[u] == block[v] ? p_in : p_out)) b.add_edge(u, v);
    }
  }
  if (truth) *truth = std::move(block);
  return std::move(b).build();
}

Graph planted_hierarchy_graph(const PlantedHierarchyOptions& o, std::vector<NodeId>* block_order) {
  const std::size_t n = o.nodes;
  if (n < 2 || o.k < 2 || o.levels < 1) fail(ErrorKind::BadInput, "planted hierarchy needs n >= 2, k >= 2, levels >= 1");
  if (o.edges > n * (n - 1) / 2) fail(ErrorKind::BadInput, "too many edges for " + std::to_string(n) + " nodes");
  std::mt19937_64 rng(o.seed);
  std::vector<NodeId> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::shuffle(order.begin(), order.end(), rng);

  // blocks[d] = number of blocks at depth d; depth levels-1 is the finest.
  std::vector<std::uint64_t> blocks(o.levels, 1);
  for (std::size_t d = 1; d < o.levels; ++d) blocks[d] = blocks[d - 1] * o.k;

  GraphBuilder b;
  b.reserve(n, o.edges);
  for (NodeId v = 0; v < n; ++v) b.add_node(v);
  std::unordered_set<std::uint64_t> seen;
  seen.reserve(o.edges * 2);
  std::size_t attempts = 0;
  while (seen.size() < o.edges) {
    if (++attempts > 50 * o.edges + 1000) fail(ErrorKind::BadInput, "planted hierarchy too dense to fill");
    const std::uint64_t p = below(rng, n);
    // Walk locality probabilities from the finest level upward.
    std::size_t depth = 0;
    double r = unit(rng);
    for (std::size_t i = 0; i < o.locality.size() && i + 1 < o.levels; ++i) {
      if (r < o.locality[i]) {
        depth = o.levels - 1 - i;
        break;
      }
      r -= o.locality[i];
    }
    const std::uint64_t count = blocks[depth];
    const std::uint64_t blk = p * count / n;
    const std::uint64_t lo = (blk * n + count - 1) / count;
    const std::uint64_t hi = ((blk + 1) * n + count - 1) / count;
    const std::uint64_t q = lo + below(rng, hi - lo);
    const NodeId u = order[p];
    const NodeId v = order[q];
    if (u == v || !seen.insert(pair_key(u, v)).second) continue;
    b.add_edge(u, v);
  }
  if (o.labels) {
    for (NodeId v = 0; v < n; ++v) {
      std::string name = std::string(kFirst[v % kFirst.size()]) + " " + kLast[(v / kFirst.size()) % kLast.size()];
      const std::size_t round = v / (kFirst.size() * kLast.size());
      if (round > 0) name += " " + std::to_string(round + 1);
      b.set_label(v, std::move(name));
    }
  }
  if (block_order) *block_order = std::move(order);
  return std::move(b).build();
}

HierarchyPlan planted_block_plan(const std::vector<NodeId>& order, const std::vector<std::size_t>& fanout) {
  HierarchyPlan plan;
  auto split = [&](auto&& self, PlanNode& node, std::size_t lo, std::size_t hi, std::size_t level) -> void {
    node.members.assign(order.begin() + static_cast<std::ptrdiff_t>(lo), order.begin() + static_cast<std::ptrdiff_t>(hi));
    std::sort(node.members.begin(), node.members.end());
    if (level == fanout.size()) return;
    const std::size_t parts = fanout[level];
    const std::size_t n = hi - lo;
    for (std::size_t i = 0; i < parts; ++i) {
      const std::size_t a = lo + (i * n + parts - 1) / parts;
      const std::size_t z = lo + ((i + 1) * n + parts - 1) / parts;
      if (a == z) continue;
      node.children.emplace_back();
      self(self, node.children.back(), a, z, level + 1);
    }
  };
  split(split, plan.root, 0, order.size(), 0);
  plan.k = fanout.empty() ? 0 : *std::max_element(fanout.begin(), fanout.end());
  plan.h = plan.depth();
  return plan;
}

}  // namespace gmine
