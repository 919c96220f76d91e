#pragma once

#include <utility>
#include <vector>

#include "gmine/graph_tree.hpp"

namespace gmine {

/// Deepest SuperNode holding `a` and `b` under two distinct children.
struct MeetingPoint {
  SuperNodeId parent;
  SuperNodeId child_for_a;
  SuperNodeId child_for_b;
};

/// Throws NotFound for unknown ids and AncestorPair when a == b or one contains
/// the other (their closures are nested, so cross connectivity is undefined).
MeetingPoint first_common_parent(const GraphTree& tree, SuperNodeId a, SuperNodeId b);

struct ConnectivityResult {
  SuperNodeId side_a;
  SuperNodeId side_b;
  MeetingPoint meeting;
  std::vector<Edge> edges;  // canonical, sorted

  std::size_t weight() const { return edges.size(); }
};

/// Every edge with one endpoint in Closure(a) and the other in Closure(b), read
/// from the single SuperEdge at the first common parent.
ConnectivityResult connectivity(const GraphTree& tree, SuperNodeId a, SuperNodeId b);

/// OpenNodes(a) x OpenNodes(b) as canonical (min, max) pairs, sorted. A superset of
/// the connecting edges; quadratic, meant for verification.
std::vector<std::pair<NodeId, NodeId>> candidate_pairs(const GraphTree& tree, SuperNodeId a, SuperNodeId b);

struct ExternalEntry {
  Edge edge;
  NodeId neighbor = 0;
  SuperNodeId neighbor_leaf;
  SuperNodeId resolved_at;
};

struct ExternalNeighborhood {
  NodeId node = 0;
  SuperNodeId leaf;
  std::vector<ExternalEntry> entries;  // sorted by neighbor
  /// SuperNodes whose SuperEdges were scanned, nearest first.
  std::vector<SuperNodeId> visited;
};

/// All edges of `v` that cross its leaf boundary, found by walking up from the
/// leaf while `v` stays open. Throws NotFound for unknown `v`.
ExternalNeighborhood external_neighbors(const GraphTree& tree, NodeId v);

}  // namespace gmine
