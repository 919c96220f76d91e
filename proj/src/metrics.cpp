#include "gmine/metrics.hpp"

#include <algorithm>
#include <deque>
#include <limits>

namespace gmine {

std::map<std::size_t, std::size_t> degree_distribution(const Graph& g) {
  std::map<std::size_t, std::size_t> histogram;
  for (std::uint32_t u = 0; u < g.node_count(); ++u) ++histogram[g.degree_at(u)];
  return histogram;
}

std::vector<std::size_t> Components::sorted_sizes() const {
  std::vector<std::size_t> out = sizes;
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

Components connected_components(const Graph& g) {
  constexpr auto unset = std::numeric_limits<std::uint32_t>::max();
  Components result;
  result.component_of.assign(g.node_count(), unset);
  std::vector<std::uint32_t> stack;
  // Dense order is ascending NodeId, so ids come out numbered by smallest member.
  for (std::uint32_t start = 0; start < g.node_count(); ++start) {
    if (result.component_of[start] != unset) continue;
    const auto id = static_cast<std::uint32_t>(result.sizes.size());
    std::size_t size = 0;
    result.component_of[start] = id;
    stack.push_back(start);
    while (!stack.empty()) {
      std::uint32_t u = stack.back();
      stack.pop_back();
      ++size;
      for (const auto& inc : g.incident(u)) {
        if (result.component_of[inc.neighbor] == unset) {
          result.component_of[inc.neighbor] = id;
          stack.push_back(inc.neighbor);
        }
      }
    }
    result.sizes.push_back(size);
  }
  return result;
}

std::vector<std::size_t> bfs_distances(const Graph& g, std::uint32_t source) {
  constexpr auto inf = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> dist(g.node_count(), inf);
  std::deque<std::uint32_t> queue{source};
  dist[source] = 0;
  while (!queue.empty()) {
    std::uint32_t u = queue.front();
    queue.pop_front();
    for (const auto& inc : g.incident(u)) {
      if (dist[inc.neighbor] == inf) {
        dist[inc.neighbor] = dist[u] + 1;
        queue.push_back(inc.neighbor);
      }
    }
  }
  return dist;
}

std::optional<std::size_t> hops(const Graph& g, NodeId a, NodeId b) {
  const std::uint32_t from = g.index_of(a);
  const std::uint32_t to = g.index_of(b);
  if (from == to) return 0;
  auto dist = bfs_distances(g, from);
  if (dist[to] == std::numeric_limits<std::size_t>::max()) return std::nullopt;
  return dist[to];
}

MetricsReport compute_metrics(const Graph& g) {
  MetricsReport report;
  report.degree_histogram = degree_distribution(g);
  Components comps = connected_components(g);
  report.component_count = comps.count();
  report.component_sizes = comps.sorted_sizes();
  if (g.node_count() == 0) return report;

  // Double sweep inside the largest component.
  auto largest = static_cast<std::uint32_t>(
      std::max_element(comps.sizes.begin(), comps.sizes.end()) - comps.sizes.begin());
  std::uint32_t start = 0;
  while (comps.component_of[start] != largest) ++start;
  auto farthest = [&](std::uint32_t from) {
    auto dist = bfs_distances(g, from);
    std::uint32_t best = from;
    for (std::uint32_t u = 0; u < dist.size(); ++u) {
      if (dist[u] != std::numeric_limits<std::size_t>::max() && dist[u] > dist[best]) best = u;
    }
    return std::pair{best, dist[best]};
  };
  auto [far, d1] = farthest(start);
  auto [_, d2] = farthest(far);
  report.diameter_sample = std::max(d1, d2);
  return report;
}

}  // namespace gmine
