#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "gmine/graph.hpp"

namespace gmine {

/// Result of re-scanning a store directory from its files alone.
struct AuditReport {
  bool structure_ok = false;   // parent/child links, homogeneous children
  bool checksums_ok = false;
  bool disjoint_ok = false;    // leaf member sets pairwise disjoint
  bool cover_ok = false;       // union of leaf members = V
  bool edges_ok = false;       // every edge stored exactly once, in the right SuperEdge
  bool open_nodes_ok = false;  // stored open sets match those recomputed from edges
  bool balance_ok = true;      // only checked when an epsilon is supplied
  double balance_achieved = 0.0;
  std::size_t residual_at_root = 0;

  std::size_t leaf_count = 0;
  std::size_t vertex_count = 0;
  std::size_t edge_count = 0;
  std::size_t internal_edges = 0;
  std::size_t cross_edges = 0;
  double internal_weight = 0.0;
  double cross_weight = 0.0;

  std::vector<std::string> details;

  bool ok() const {
    return structure_ok && checksums_ok && disjoint_ok && cover_ok && edges_ok && open_nodes_ok && balance_ok &&
           residual_at_root == 0;
  }
};

struct AuditOptions {
  /// When given, node and edge sets must equal this graph's exactly.
  const Graph* original = nullptr;
  /// When given, every k-way split must keep parts within ceil((1+eps) n / k).
  std::optional<double> epsilon;
};

/// Never throws for content problems; they become failed checks with detail lines.
AuditReport audit_store(const std::filesystem::path& store_dir, const AuditOptions& options = {});

}  // namespace gmine
