#include "gmine/layout.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <unordered_map>

#include "gmine/error.hpp"

namespace gmine {

namespace {

constexpr double kRingRadius = 0.48;
constexpr double kInnerRadiusWithRing = 0.40;
constexpr double kStartTemperature = 0.1;
// Fraction of the net force applied per step; keeps the two-body case from
// oscillating around the rest length.
constexpr double kStepScale = 0.1;
constexpr std::size_t kAllPairsLimit = 1500;

double unit_uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

struct Vec {
  double x = 0.0;
  double y = 0.0;
};

/// Repulsion between all pairs, or between pairs in neighboring grid cells of
/// side 2k for large graphs (the grid variant of the original embedder).
void accumulate_repulsion(const std::vector<Vec>& pos, double k, std::vector<Vec>& disp) {
  const std::size_t n = pos.size();
  const double k2 = k * k;
  auto repel = [&](std::size_t i, std::size_t j) {
    double dx = pos[i].x - pos[j].x;
    double dy = pos[i].y - pos[j].y;
    double d2 = dx * dx + dy * dy;
    if (d2 < 1e-18) {
      // Coincident points: separate along a fixed, index-dependent direction.
      dx = 1e-6 * static_cast<double>((i % 7) + 1);
      dy = 1e-6 * static_cast<double>((j % 5) + 1);
      d2 = dx * dx + dy * dy;
    }
    const double f = k2 / d2;  // (k^2 / d) / d
    disp[i].x += dx * f;
    disp[i].y += dy * f;
    disp[j].x -= dx * f;
    disp[j].y -= dy * f;
  };
  if (n <= kAllPairsLimit) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) repel(i, j);
    }
    return;
  }
  const double cell = 2.0 * k;
  std::unordered_map<std::int64_t, std::vector<std::size_t>> grid;
  auto key = [](std::int64_t cx, std::int64_t cy) { return cx * 1000003 + cy; };
  std::vector<std::pair<std::int64_t, std::int64_t>> cell_of(n);
  for (std::size_t i = 0; i < n; ++i) {
    cell_of[i] = {static_cast<std::int64_t>(std::floor(pos[i].x / cell)),
                  static_cast<std::int64_t>(std::floor(pos[i].y / cell))};
    grid[key(cell_of[i].first, cell_of[i].second)].push_back(i);
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::int64_t dx = -1; dx <= 1; ++dx) {
      for (std::int64_t dy = -1; dy <= 1; ++dy) {
        auto it = grid.find(key(cell_of[i].first + dx, cell_of[i].second + dy));
        if (it == grid.end()) continue;
        for (std::size_t j : it->second) {
          if (j <= i) continue;
          const double ex = pos[i].x - pos[j].x;
          const double ey = pos[i].y - pos[j].y;
          if (ex * ex + ey * ey < cell * cell) repel(i, j);
        }
      }
    }
  }
}

}  // namespace

double natural_spring_length(std::size_t connected) {
  return connected == 0 ? 0.0 : 0.5 / std::sqrt(static_cast<double>(connected));
}

LeafLayout layout_graph(const Graph& g, const LayoutOptions& options) {
  LeafLayout out;
  out.seed = options.seed;
  out.iterations = options.iterations;
  const std::size_t n = g.node_count();
  out.positions.resize(n);
  for (std::uint32_t u = 0; u < n; ++u) out.positions[u].first = g.id_at(u);
  if (n == 0) return out;

  std::vector<std::uint32_t> connected, isolated;
  for (std::uint32_t u = 0; u < n; ++u) (g.degree_at(u) > 0 ? connected : isolated).push_back(u);

  if (!connected.empty()) {
    std::vector<std::uint32_t> local(n, 0);
    for (std::uint32_t i = 0; i < connected.size(); ++i) local[connected[i]] = i;
    const double k = natural_spring_length(connected.size());
    std::mt19937_64 rng(options.seed);
    std::vector<Vec> pos(connected.size());
    for (Vec& p : pos) {
      p.x = 0.25 + 0.5 * unit_uniform(rng);
      p.y = 0.25 + 0.5 * unit_uniform(rng);
    }
    std::vector<std::pair<std::uint32_t, std::uint32_t>> springs;
    springs.reserve(g.edge_count());
    for (const Edge& e : g.edges()) springs.emplace_back(local[g.index_of(e.source)], local[g.index_of(e.target)]);
    std::vector<Vec> disp(pos.size());
    for (std::size_t it = 0; it < options.iterations; ++it) {
      const double temperature =
          kStartTemperature * (1.0 - static_cast<double>(it) / static_cast<double>(options.iterations));
      std::fill(disp.begin(), disp.end(), Vec{});
      accumulate_repulsion(pos, k, disp);
      for (const auto& [a, b] : springs) {
        const double dx = pos[a].x - pos[b].x;
        const double dy = pos[a].y - pos[b].y;
        const double d = std::sqrt(dx * dx + dy * dy);
        const double f = d / k;  // (d^2 / k) / d
        disp[a].x -= dx * f;
        disp[a].y -= dy * f;
        disp[b].x += dx * f;
        disp[b].y += dy * f;
      }
      for (std::size_t i = 0; i < pos.size(); ++i) {
        const double len = std::sqrt(disp[i].x * disp[i].x + disp[i].y * disp[i].y);
        if (len < 1e-15) continue;
        const double step = std::min(len * kStepScale, temperature);
        pos[i].x += disp[i].x / len * step;
        pos[i].y += disp[i].y / len * step;
      }
    }

    Vec centroid;
    for (const Vec& p : pos) {
      centroid.x += p.x;
      centroid.y += p.y;
    }
    centroid.x /= static_cast<double>(pos.size());
    centroid.y /= static_cast<double>(pos.size());
    double extent = 0.0;
    for (Vec& p : pos) {
      p.x -= centroid.x;
      p.y -= centroid.y;
      extent = std::max(extent, std::hypot(p.x, p.y));
    }
    const double limit = isolated.empty() ? kRingRadius : kInnerRadiusWithRing;
    const double scale = extent > limit ? limit / extent : 1.0;
    for (std::size_t i = 0; i < pos.size(); ++i) {
      out.positions[connected[i]].second = {0.5 + pos[i].x * scale, 0.5 + pos[i].y * scale};
    }
  }

  if (isolated.size() == 1 && connected.empty()) {
    out.positions[isolated[0]].second = {0.5, 0.5};
  } else {
    for (std::size_t i = 0; i < isolated.size(); ++i) {
      const double angle = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(isolated.size());
      out.positions[isolated[i]].second = {0.5 + kRingRadius * std::cos(angle), 0.5 + kRingRadius * std::sin(angle)};
    }
  }
  for (auto& [_, p] : out.positions) {
    p.x = std::clamp(p.x, 0.0, 1.0);
    p.y = std::clamp(p.y, 0.0, 1.0);
  }
  return out;
}

LeafLayout layout_leaf(const LeafSubgraph& subgraph, const LayoutOptions& options) {
  LeafLayout out = layout_graph(subgraph.graph, options);
  out.leaf = subgraph.leaf;
  return out;
}

LeafLayout layout_leaf(GraphTree& tree, SuperNodeId leaf, const LayoutOptions& options) {
  if (!tree.node(leaf).is_leaf()) fail(ErrorKind::NotLeaf, "SuperNode " + to_string(leaf) + " is not a leaf");
  if (!tree.is_loaded(leaf)) fail(ErrorKind::NotLoaded, "leaf " + to_string(leaf) + " is not expanded");
  // On a resident leaf this is a cache hit.
  auto sub = tree.expand_leaf(leaf);
  return layout_leaf(*sub, options);
}

HierarchyLayout layout_hierarchy(const GraphTree& tree) {
  HierarchyLayout out;
  out.circles.resize(tree.size());
  out.level.resize(tree.size());
  constexpr double kPad = 0.9;
  out.circles[tree.root().value] = {0.5, 0.5, 0.5};

  std::vector<SuperNodeId> stack{tree.root()};
  while (!stack.empty()) {
    const TreeNode& parent = tree.node(stack.back());
    stack.pop_back();
    out.level[parent.id.value] = parent.depth;
    const Circle pc = out.circles[parent.id.value];
    const std::size_t m = parent.children.size();
    if (m == 0) continue;
    if (m == 1) {
      out.circles[parent.children[0].value] = {pc.x, pc.y, kPad * pc.r};
      stack.push_back(parent.children[0]);
      continue;
    }
    // Each child gets an angular wedge proportional to sqrt(closure size); a circle
    // of radius ring*sin(half-angle) centred on the ring stays inside its wedge.
    std::vector<double> weight(m);
    double total = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      weight[i] = std::sqrt(static_cast<double>(std::max<std::size_t>(1, tree.node(parent.children[i]).closure_size)));
      total += weight[i];
    }
    const double ring = pc.r / 2.0;
    double alpha = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < m; ++i) {
      const double half = std::min(std::numbers::pi * weight[i] / total, std::numbers::pi / 2.0);
      alpha = std::min(alpha, ring * std::sin(half) / weight[i]);
    }
    alpha *= kPad;
    double cursor = -std::numbers::pi / 2.0;
    for (std::size_t i = 0; i < m; ++i) {
      const double span = 2.0 * std::numbers::pi * weight[i] / total;
      const double angle = cursor + span / 2.0;
      cursor += span;
      out.circles[parent.children[i].value] = {pc.x + ring * std::cos(angle), pc.y + ring * std::sin(angle),
                                               alpha * weight[i]};
      stack.push_back(parent.children[i]);
    }
  }
  return out;
}

}  // namespace gmine
