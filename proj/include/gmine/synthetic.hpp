#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "gmine/graph.hpp"
#include "gmine/partitioner.hpp"

namespace gmine {

/// Uniform random graph with exactly `m` distinct edges on nodes 0..n-1.
Graph random_gnm(std::size_t n, std::size_t m, std::uint64_t seed);

/// Each of the n(n-1)/2 pairs present independently with probability p.
Graph random_gnp(std::size_t n, double p, std::uint64_t seed);

/// `communities` near-equal contiguous blocks of node ids; intra-block pairs with
/// probability p_in, others p_out. `truth`, when given, receives the block of each node.
Graph planted_partition_graph(std::size_t n, std::size_t communities, double p_in, double p_out,
                              std::uint64_t seed, std::vector<std::uint32_t>* truth = nullptr);

struct PlantedHierarchyOptions {
  std::size_t nodes = 0;
  std::size_t edges = 0;
  std::size_t k = 5;
  std::size_t levels = 5;
  std::uint64_t seed = 1;
  /// Probability that an edge stays inside the block at depth levels-1, levels-2, ...
  /// Whatever is left over picks a uniformly random partner.
  std::vector<double> locality{0.6, 0.2, 0.1, 0.06};
  bool labels = false;
};

/// Graph with exactly `nodes` nodes and `edges` distinct edges whose ids are split
/// into k^(levels-1) nested blocks (over a shuffled id order), edges mostly local.
/// Labels, when requested, are synthetic "First Last" names. `block_order`, when
/// given, receives the shuffled id order the blocks are cut from.
Graph planted_hierarchy_graph(const PlantedHierarchyOptions& options, std::vector<NodeId>* block_order = nullptr);

/// Cuts `order` into nested contiguous blocks as a plan (manual hierarchy).
/// `fanout` lists children per level, e.g. {3, 3} for 9 leaves under 3 groups.
HierarchyPlan planted_block_plan(const std::vector<NodeId>& order, const std::vector<std::size_t>& fanout);

}  // namespace gmine
