#include "gmine/connectivity.hpp"

#include <algorithm>

#include "gmine/error.hpp"

namespace gmine {

MeetingPoint first_common_parent(const GraphTree& tree, SuperNodeId a, SuperNodeId b) {
  tree.node(a);
  tree.node(b);
  if (a == b) fail(ErrorKind::AncestorPair, "SuperNode " + to_string(a) + " paired with itself");
  if (tree.in_subtree(a, b) || tree.in_subtree(b, a)) {
    fail(ErrorKind::AncestorPair,
         "SuperNodes " + to_string(a) + " and " + to_string(b) + " are ancestor and descendant");
  }
  // Climb from `a` until the subtree also covers `b`.
  SuperNodeId below = a;
  SuperNodeId cur = *tree.node(a).parent;
  while (!tree.in_subtree(cur, b)) {
    below = cur;
    cur = *tree.node(cur).parent;
  }
  return {cur, below, tree.child_toward(cur, b)};
}

ConnectivityResult connectivity(const GraphTree& tree, SuperNodeId a, SuperNodeId b) {
  ConnectivityResult result{a, b, first_common_parent(tree, a, b), {}};
  const SuperEdge& se = tree.superedge(result.meeting.parent, result.meeting.child_for_a, result.meeting.child_for_b);
  if (result.meeting.child_for_a == a && result.meeting.child_for_b == b) {
    result.edges = se.edges;  // siblings: the stored SuperEdge is the answer
    return result;
  }
  for (const Edge& e : se.edges) {
    const bool forward = tree.in_closure(a, e.source) && tree.in_closure(b, e.target);
    const bool backward = tree.in_closure(a, e.target) && tree.in_closure(b, e.source);
    if (forward || backward) result.edges.push_back(e);
  }
  return result;
}

std::vector<std::pair<NodeId, NodeId>> candidate_pairs(const GraphTree& tree, SuperNodeId a, SuperNodeId b) {
  first_common_parent(tree, a, b);
  const auto& open_a = tree.node(a).open_nodes;
  const auto& open_b = tree.node(b).open_nodes;
  std::vector<std::pair<NodeId, NodeId>> out;
  out.reserve(open_a.size() * open_b.size());
  for (NodeId x : open_a) {
    for (NodeId y : open_b) out.emplace_back(std::min(x, y), std::max(x, y));
  }
  std::sort(out.begin(), out.end());
  return out;
}

ExternalNeighborhood external_neighbors(const GraphTree& tree, NodeId v) {
  ExternalNeighborhood result;
  result.node = v;
  result.leaf = tree.leaf_of(v);
  SuperNodeId cur = result.leaf;
  while (tree.node(cur).is_open(v) && tree.node(cur).parent) {
    const SuperNodeId parent = *tree.node(cur).parent;
    result.visited.push_back(parent);
    for (const SuperEdge& se : tree.node(parent).superedges) {
      if (se.side_a != cur && se.side_b != cur) continue;
      for (const Edge& e : se.edges) {
        if (!e.touches(v)) continue;
        const NodeId w = e.other(v);
        result.entries.push_back({e, w, tree.leaf_of(w), parent});
      }
    }
    cur = parent;
  }
  std::sort(result.entries.begin(), result.entries.end(),
            [](const ExternalEntry& x, const ExternalEntry& y) { return x.neighbor < y.neighbor; });
  return result;
}

}  // namespace gmine
