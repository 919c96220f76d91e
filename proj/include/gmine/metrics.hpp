#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "gmine/graph.hpp"

namespace gmine {

/// Per-subgraph summary served with a leaf: degree histogram, components, and a
/// double-sweep diameter lower bound.
struct MetricsReport {
  std::map<std::size_t, std::size_t> degree_histogram;  // degree -> node count
  std::size_t component_count = 0;
  std::vector<std::size_t> component_sizes;  // descending
  std::optional<std::size_t> diameter_sample;
};

/// Isolated nodes land in bucket 0.
std::map<std::size_t, std::size_t> degree_distribution(const Graph& g);

struct Components {
  /// Component id per dense node index; ids are numbered by smallest member.
  std::vector<std::uint32_t> component_of;
  /// Sizes indexed by component id.
  std::vector<std::size_t> sizes;

  std::size_t count() const { return sizes.size(); }
  /// Sizes sorted descending.
  std::vector<std::size_t> sorted_sizes() const;
};

Components connected_components(const Graph& g);

/// Unweighted shortest-path length; nullopt when disconnected. Throws NotFound.
std::optional<std::size_t> hops(const Graph& g, NodeId a, NodeId b);

/// Breadth-first distances from one dense index; unreachable = SIZE_MAX.
std::vector<std::size_t> bfs_distances(const Graph& g, std::uint32_t source);

MetricsReport compute_metrics(const Graph& g);

}  // namespace gmine
