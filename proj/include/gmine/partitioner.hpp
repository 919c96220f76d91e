#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "gmine/graph.hpp"

namespace gmine {

/// Largest part size allowed for `n` nodes in `k` parts: ceil((1 + epsilon) * n / k).
std::size_t balance_cap(std::size_t n, std::size_t k, double epsilon);

struct PartitionAssignment {
  std::size_t k = 0;
  std::vector<NodeId> nodes;           // ascending
  std::vector<std::uint32_t> part_of;  // aligned with `nodes`, values in [0, k)
  double cut_weight = 0.0;

  /// Throws NotFound for ids outside the partitioned graph.
  std::uint32_t part(NodeId id) const;
  std::vector<std::size_t> part_sizes() const;
  /// Member lists per part, each ascending.
  std::vector<std::vector<NodeId>> parts() const;
  /// max part size / (n / k) - 1.
  double achieved_imbalance() const;
};

struct PartitionOptions {
  double epsilon = 0.10;
  std::uint64_t seed = 1;
  /// Cut minimization uses edge weights; when false every edge counts 1.
  bool use_weights = true;
};

/// Balanced k-way min-cut partitioning by multilevel recursive bisection
/// (heavy-edge matching, greedy graph growing, boundary FM refinement).
/// Parts are numbered in order of their smallest NodeId.
PartitionAssignment kway_partition(const Graph& g, std::size_t k, const PartitionOptions& options);

inline PartitionAssignment kway_partition(const Graph& g, std::size_t k, double epsilon, std::uint64_t seed) {
  return kway_partition(g, k, PartitionOptions{epsilon, seed, true});
}

/// Sum of weights of edges whose endpoints carry different labels in `part_of`
/// (indexed by dense node index of `g`).
double cut_weight(const Graph& g, const std::vector<std::uint32_t>& part_of, bool use_weights = true);

struct HierarchySpec {
  std::size_t k = 2;
  std::size_t h = 1;
  double epsilon = 0.10;
  /// Parts smaller than this are not split further. 0 selects the default 2k.
  std::size_t min_leaf_size = 0;
  bool use_weights = true;

  std::size_t effective_min_leaf_size() const { return min_leaf_size == 0 ? 2 * k : min_leaf_size; }
  /// Throws BadInput unless k >= 2, h >= 1 and 0 <= epsilon < 1.
  void validate() const;
};

struct PlanNode {
  std::vector<NodeId> members;  // ascending
  std::vector<PlanNode> children;

  bool is_leaf() const { return children.empty(); }
};

struct PlanLeaf {
  std::vector<std::size_t> path;  // child indices below the root
  const PlanNode* node = nullptr;

  /// Dotted path starting at the root, e.g. "0.3.1".
  std::string dotted() const;
};

struct HierarchyPlan {
  PlanNode root;
  std::size_t k = 0;
  std::size_t h = 0;

  std::vector<PlanLeaf> leaves() const;
  std::size_t leaf_count() const;
  /// Number of levels actually used (root alone = 1).
  std::size_t depth() const;
};

/// Recursive k-way partitioning into an h-level community hierarchy. Plan node
/// seeds derive from `seed` and the node's path, so plans are reproducible.
HierarchyPlan build_hierarchy(const Graph& g, const HierarchySpec& spec, std::uint64_t seed);

/// One line per leaf: `leaf <dotted path> : id,id,...`.
void write_plan(const HierarchyPlan& plan, std::ostream& out);
/// Inverse of write_plan; used for manually defined hierarchies.
HierarchyPlan read_plan(std::istream& in, std::string_view source_name = "<plan>");

}  // namespace gmine
