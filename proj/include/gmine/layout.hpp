#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "gmine/graph.hpp"
#include "gmine/graph_tree.hpp"

namespace gmine {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

struct LeafLayout {
  SuperNodeId leaf;
  std::vector<std::pair<NodeId, Point>> positions;  // ascending NodeId, all within [0,1]^2
  std::size_t iterations = 0;
  std::uint64_t seed = 0;
};

struct LayoutOptions {
  std::uint64_t seed = 1;
  std::size_t iterations = 300;
};

/// Rest length of the spring embedder for `connected` non-isolated nodes.
double natural_spring_length(std::size_t connected);

/// Fruchterman-Reingold spring embedding of `g`, centered on (0.5, 0.5). Isolated
/// nodes are placed on a ring near the boundary. Deterministic for a fixed seed.
LeafLayout layout_graph(const Graph& g, const LayoutOptions& options = {});

/// Layout of a leaf that is currently expanded; throws NotLoaded otherwise.
LeafLayout layout_leaf(GraphTree& tree, SuperNodeId leaf, const LayoutOptions& options = {});
LeafLayout layout_leaf(const LeafSubgraph& subgraph, const LayoutOptions& options = {});

struct Circle {
  double x = 0.0;
  double y = 0.0;
  double r = 0.0;
};

struct HierarchyLayout {
  std::vector<Circle> circles;      // indexed by SuperNodeId
  std::vector<std::size_t> level;   // depth per SuperNodeId
};

/// Nested circles: root is the unit-square incircle, children sit on a ring inside
/// their parent with radii proportional to sqrt(closure size).
HierarchyLayout layout_hierarchy(const GraphTree& tree);

}  // namespace gmine
