#include "gmine/partitioner.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <istream>
#include <limits>
#include <memory>
#include <numeric>
#include <ostream>
#include <random>
#include <span>

#include "gmine/error.hpp"

namespace gmine {

std::size_t balance_cap(std::size_t n, std::size_t k, double epsilon) {
  // Guard against 1.1 * 10 / 2 landing at 5.500000000000001 and rounding up.
  const double raw = (1.0 + epsilon) * static_cast<double>(n) / static_cast<double>(k);
  return static_cast<std::size_t>(std::ceil(raw - 1e-9));
}

namespace {

using Rng = std::mt19937_64;
constexpr std::uint32_t kUnset = std::numeric_limits<std::uint32_t>::max();
constexpr double kTol = 1e-9;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Compact weighted graph over local indices [0, n).
struct WGraph {
  std::vector<std::uint32_t> xadj{0};
  std::vector<std::uint32_t> adjncy;
  std::vector<double> adjwgt;
  std::vector<std::int64_t> vwgt;
  std::int64_t total = 0;

  std::uint32_t n() const { return static_cast<std::uint32_t>(vwgt.size()); }
  std::uint32_t begin(std::uint32_t u) const { return xadj[u]; }
  std::uint32_t end(std::uint32_t u) const { return xadj[u + 1]; }
};

/// `local` is scratch sized to g.node_count(), all kUnset on entry and on exit.
WGraph induced_wgraph(const Graph& g, std::span<const std::uint32_t> members, bool use_weights,
                      std::vector<std::uint32_t>& local) {
  WGraph w;
  for (std::uint32_t i = 0; i < members.size(); ++i) local[members[i]] = i;
  w.vwgt.assign(members.size(), 1);
  w.total = static_cast<std::int64_t>(members.size());
  w.xadj.reserve(members.size() + 1);
  for (std::uint32_t dense : members) {
    for (const auto& inc : g.incident(dense)) {
      std::uint32_t v = local[inc.neighbor];
      if (v == kUnset) continue;
      w.adjncy.push_back(v);
      w.adjwgt.push_back(use_weights ? g.edges()[inc.edge].weight : 1.0);
    }
    w.xadj.push_back(static_cast<std::uint32_t>(w.adjncy.size()));
  }
  for (std::uint32_t dense : members) local[dense] = kUnset;
  return w;
}

/// Subgraph of `g` on the vertices with side[u] == which; `ids` maps new -> old.
WGraph side_subgraph(const WGraph& g, const std::vector<std::uint8_t>& side, std::uint8_t which,
                     std::vector<std::uint32_t>& ids) {
  std::vector<std::uint32_t> local(g.n(), kUnset);
  ids.clear();
  for (std::uint32_t u = 0; u < g.n(); ++u) {
    if (side[u] == which) {
      local[u] = static_cast<std::uint32_t>(ids.size());
      ids.push_back(u);
    }
  }
  WGraph s;
  s.vwgt.reserve(ids.size());
  for (std::uint32_t u : ids) {
    s.vwgt.push_back(g.vwgt[u]);
    s.total += g.vwgt[u];
    for (std::uint32_t e = g.begin(u); e < g.end(u); ++e) {
      std::uint32_t v = local[g.adjncy[e]];
      if (v == kUnset) continue;
      s.adjncy.push_back(v);
      s.adjwgt.push_back(g.adjwgt[e]);
    }
    s.xadj.push_back(static_cast<std::uint32_t>(s.adjncy.size()));
  }
  return s;
}

// ---------------------------------------------------------------------------
// Coarsening

/// Heavy-edge matching followed by contraction. Fills `cmap` (fine -> coarse).
WGraph coarsen(const WGraph& g, Rng& rng, std::int64_t max_vwgt, std::vector<std::uint32_t>& cmap) {
  const std::uint32_t n = g.n();
  std::vector<std::uint32_t> order(n);
  std::iota(order.begin(), order.end(), 0u);
  std::shuffle(order.begin(), order.end(), rng);

  std::vector<std::uint32_t> match(n, kUnset);
  for (std::uint32_t u : order) {
    if (match[u] != kUnset) continue;
    std::uint32_t best = u;
    double best_w = -1.0;
    for (std::uint32_t e = g.begin(u); e < g.end(u); ++e) {
      std::uint32_t v = g.adjncy[e];
      if (match[v] != kUnset || v == u) continue;
      if (g.vwgt[u] + g.vwgt[v] > max_vwgt) continue;
      if (g.adjwgt[e] > best_w) {
        best_w = g.adjwgt[e];
        best = v;
      }
    }
    match[u] = best;
    match[best] = u;
  }

  cmap.assign(n, kUnset);
  std::vector<std::uint32_t> first, second;
  first.reserve(n / 2 + 1);
  second.reserve(n / 2 + 1);
  for (std::uint32_t u = 0; u < n; ++u) {
    if (cmap[u] != kUnset) continue;
    const auto c = static_cast<std::uint32_t>(first.size());
    cmap[u] = c;
    cmap[match[u]] = c;
    first.push_back(u);
    second.push_back(match[u]);
  }

  const auto cn = static_cast<std::uint32_t>(first.size());
  WGraph c;
  c.vwgt.resize(cn);
  c.total = g.total;
  c.xadj.reserve(cn + 1);
  c.adjncy.reserve(g.adjncy.size());
  c.adjwgt.reserve(g.adjncy.size());
  std::vector<std::int64_t> slot(cn, -1);
  for (std::uint32_t cv = 0; cv < cn; ++cv) {
    const auto row_start = static_cast<std::int64_t>(c.adjncy.size());
    auto absorb = [&](std::uint32_t u) {
      for (std::uint32_t e = g.begin(u); e < g.end(u); ++e) {
        std::uint32_t cu = cmap[g.adjncy[e]];
        if (cu == cv) continue;
        if (slot[cu] >= row_start) {
          c.adjwgt[static_cast<std::size_t>(slot[cu])] += g.adjwgt[e];
        } else {
          slot[cu] = static_cast<std::int64_t>(c.adjncy.size());
          c.adjncy.push_back(cu);
          c.adjwgt.push_back(g.adjwgt[e]);
        }
      }
    };
    absorb(first[cv]);
    c.vwgt[cv] = g.vwgt[first[cv]];
    if (second[cv] != first[cv]) {
      absorb(second[cv]);
      c.vwgt[cv] += g.vwgt[second[cv]];
    }
    c.xadj.push_back(static_cast<std::uint32_t>(c.adjncy.size()));
  }
  return c;
}

// ---------------------------------------------------------------------------
// Bisection

struct Bounds {
  std::int64_t min0;
  std::int64_t max0;
  std::int64_t target0;
};

struct Score {
  std::int64_t violation;
  double cut;
  std::int64_t imbalance;

  bool better_than(const Score& o) const {
    if (violation != o.violation) return violation < o.violation;
    if (cut < o.cut - kTol) return true;
    if (cut > o.cut + kTol) return false;
    return imbalance < o.imbalance;
  }
};

std::int64_t violation_of(std::int64_t w0, const Bounds& b) {
  return std::max<std::int64_t>(0, w0 - b.max0) + std::max<std::int64_t>(0, b.min0 - w0);
}

Score score_of(const WGraph& g, const std::vector<std::uint8_t>& side, const Bounds& b) {
  std::int64_t w0 = 0;
  double cut = 0.0;
  for (std::uint32_t u = 0; u < g.n(); ++u) {
    if (side[u] == 0) w0 += g.vwgt[u];
    for (std::uint32_t e = g.begin(u); e < g.end(u); ++e) {
      if (side[g.adjncy[e]] != side[u]) cut += g.adjwgt[e];
    }
  }
  return {violation_of(w0, b), cut / 2.0, std::llabs(w0 - b.target0)};
}

struct HeapEntry {
  double gain;
  std::uint32_t u;
  std::uint32_t version;

  // Max-heap on gain; lower vertex index wins ties.
  bool operator<(const HeapEntry& o) const {
    if (gain != o.gain) return gain < o.gain;
    return u > o.u;
  }
};

/// Boundary Fiduccia-Mattheyses passes with rollback to the best prefix. Moves are
/// restricted to keep side 0 within [min0, max0] once feasible; from an infeasible
/// state only moves out of the overweight side are taken.
void fm_refine(const WGraph& g, std::vector<std::uint8_t>& side, const Bounds& b, int max_passes) {
  const std::uint32_t n = g.n();
  if (n < 2) return;
  std::vector<double> ext(n, 0.0), inn(n, 0.0);
  std::int64_t w[2] = {0, 0};
  double cut = 0.0;
  for (std::uint32_t u = 0; u < n; ++u) {
    w[side[u]] += g.vwgt[u];
    for (std::uint32_t e = g.begin(u); e < g.end(u); ++e) {
      if (side[g.adjncy[e]] == side[u]) {
        inn[u] += g.adjwgt[e];
      } else {
        ext[u] += g.adjwgt[e];
      }
    }
    cut += ext[u];
  }
  cut /= 2.0;

  std::vector<std::uint32_t> version(n, 0), locked(n, 0);
  std::vector<HeapEntry> heap[2];
  std::vector<std::uint32_t> moves;

  auto push = [&](std::uint32_t u) {
    heap[side[u]].push_back({ext[u] - inn[u], u, version[u]});
    std::push_heap(heap[side[u]].begin(), heap[side[u]].end());
  };
  auto apply_move = [&](std::uint32_t u) {
    const std::uint8_t from = side[u];
    const std::uint8_t to = 1 - from;
    side[u] = to;
    w[from] -= g.vwgt[u];
    w[to] += g.vwgt[u];
    cut -= ext[u] - inn[u];
    std::swap(ext[u], inn[u]);
    ++version[u];
    for (std::uint32_t e = g.begin(u); e < g.end(u); ++e) {
      const std::uint32_t v = g.adjncy[e];
      if (v == u) continue;
      if (side[v] == to) {
        ext[v] -= g.adjwgt[e];
        inn[v] += g.adjwgt[e];
      } else {
        ext[v] += g.adjwgt[e];
        inn[v] -= g.adjwgt[e];
      }
      ++version[v];
    }
  };

  const std::size_t patience = std::max<std::size_t>(50, n / 50);
  for (int pass = 1; pass <= max_passes; ++pass) {
    const auto stamp = static_cast<std::uint32_t>(pass);
    heap[0].clear();
    heap[1].clear();
    moves.clear();
    bool filled[2] = {false, false};
    for (std::uint32_t u = 0; u < n; ++u) {
      if (ext[u] > 0.0) push(u);
    }

    auto top = [&](int s) -> const HeapEntry* {
      auto& h = heap[s];
      while (!h.empty()) {
        const HeapEntry& t = h.front();
        if (locked[t.u] != stamp && t.version == version[t.u] && side[t.u] == s) return &t;
        std::pop_heap(h.begin(), h.end());
        h.pop_back();
      }
      return nullptr;
    };

    Score best{violation_of(w[0], b), cut, std::llabs(w[0] - b.target0)};
    std::size_t best_len = 0;
    while (true) {
      int from = -1;
      if (w[0] > b.max0) {
        from = 0;
      } else if (w[0] < b.min0) {
        from = 1;
      }
      if (from >= 0) {
        if (!top(from) && !filled[from]) {
          for (std::uint32_t u = 0; u < n; ++u) {
            if (side[u] == from && locked[u] != stamp) push(u);
          }
          filled[from] = true;
        }
        if (!top(from)) break;
      } else {
        const HeapEntry* cand[2] = {top(0), top(1)};
        bool ok[2] = {false, false};
        for (int s = 0; s < 2; ++s) {
          if (!cand[s]) continue;
          const std::int64_t vw = g.vwgt[cand[s]->u];
          const std::int64_t w0 = s == 0 ? w[0] - vw : w[0] + vw;
          ok[s] = w0 >= b.min0 && w0 <= b.max0;
        }
        if (!ok[0] && !ok[1]) break;
        if (ok[0] && ok[1]) {
          if (cand[0]->gain != cand[1]->gain) {
            from = cand[0]->gain > cand[1]->gain ? 0 : 1;
          } else {
            from = w[0] > b.target0 ? 0 : 1;
          }
        } else {
          from = ok[0] ? 0 : 1;
        }
      }

      const std::uint32_t u = heap[from].front().u;
      std::pop_heap(heap[from].begin(), heap[from].end());
      heap[from].pop_back();
      apply_move(u);
      locked[u] = stamp;
      moves.push_back(u);
      for (std::uint32_t e = g.begin(u); e < g.end(u); ++e) {
        const std::uint32_t v = g.adjncy[e];
        if (locked[v] != stamp) push(v);
      }

      Score cur{violation_of(w[0], b), cut, std::llabs(w[0] - b.target0)};
      if (cur.better_than(best)) {
        best = cur;
        best_len = moves.size();
      } else if (moves.size() - best_len > patience) {
        break;
      }
    }

    for (std::size_t i = moves.size(); i > best_len; --i) apply_move(moves[i - 1]);
    if (best_len == 0) break;
  }
}

/// Greedy graph growing from one seed vertex until side 0 reaches its target.
std::vector<std::uint8_t> grow_bisection(const WGraph& g, const Bounds& b, Rng& rng) {
  const std::uint32_t n = g.n();
  std::vector<std::uint8_t> side(n, 1);
  std::vector<double> conn0(n, 0.0), degw(n, 0.0);
  for (std::uint32_t u = 0; u < n; ++u) {
    for (std::uint32_t e = g.begin(u); e < g.end(u); ++e) degw[u] += g.adjwgt[e];
  }
  std::vector<std::uint32_t> order(n);
  std::iota(order.begin(), order.end(), 0u);
  std::shuffle(order.begin(), order.end(), rng);

  std::vector<std::uint32_t> version(n, 0);
  std::vector<HeapEntry> heap;
  std::size_t cursor = 0;
  std::int64_t w0 = 0;
  while (w0 < b.target0) {
    std::uint32_t pick = kUnset;
    while (!heap.empty()) {
      HeapEntry t = heap.front();
      std::pop_heap(heap.begin(), heap.end());
      heap.pop_back();
      if (side[t.u] == 1 && t.version == version[t.u] && w0 + g.vwgt[t.u] <= b.max0) {
        pick = t.u;
        break;
      }
    }
    if (pick == kUnset) {
      while (cursor < n && (side[order[cursor]] == 0 || w0 + g.vwgt[order[cursor]] > b.max0)) ++cursor;
      if (cursor == n) break;
      pick = order[cursor];
    }
    side[pick] = 0;
    w0 += g.vwgt[pick];
    for (std::uint32_t e = g.begin(pick); e < g.end(pick); ++e) {
      const std::uint32_t v = g.adjncy[e];
      if (side[v] == 0) continue;
      conn0[v] += g.adjwgt[e];
      ++version[v];
      heap.push_back({2.0 * conn0[v] - degw[v], v, version[v]});
      std::push_heap(heap.begin(), heap.end());
    }
  }
  return side;
}

/// Whole components packed onto the two sides, largest first. Only returns a
/// result when it satisfies the bounds; the cut is then zero.
std::optional<std::vector<std::uint8_t>> component_bisection(const WGraph& g, const Bounds& b) {
  const std::uint32_t n = g.n();
  std::vector<std::uint32_t> comp(n, kUnset);
  std::vector<std::int64_t> weight;
  std::vector<std::uint32_t> stack;
  for (std::uint32_t s = 0; s < n; ++s) {
    if (comp[s] != kUnset) continue;
    const auto id = static_cast<std::uint32_t>(weight.size());
    std::int64_t total = 0;
    comp[s] = id;
    stack.push_back(s);
    while (!stack.empty()) {
      std::uint32_t u = stack.back();
      stack.pop_back();
      total += g.vwgt[u];
      for (std::uint32_t e = g.begin(u); e < g.end(u); ++e) {
        if (comp[g.adjncy[e]] == kUnset) {
          comp[g.adjncy[e]] = id;
          stack.push_back(g.adjncy[e]);
        }
      }
    }
    weight.push_back(total);
  }
  if (weight.size() < 2) return std::nullopt;

  std::vector<std::uint32_t> order(weight.size());
  std::iota(order.begin(), order.end(), 0u);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::uint32_t a, std::uint32_t c) { return weight[a] > weight[c]; });
  const std::int64_t max1 = g.total - b.min0;
  const std::int64_t target1 = g.total - b.target0;
  std::vector<std::uint8_t> comp_side(weight.size(), 1);
  std::int64_t w0 = 0, w1 = 0;
  for (std::uint32_t c : order) {
    const bool prefer0 = (b.target0 - w0) >= (target1 - w1);
    const bool fits0 = w0 + weight[c] <= b.max0;
    const bool fits1 = w1 + weight[c] <= max1;
    if ((prefer0 && fits0) || (!fits1 && fits0)) {
      comp_side[c] = 0;
      w0 += weight[c];
    } else if (fits1) {
      w1 += weight[c];
    } else {
      return std::nullopt;
    }
  }
  if (w0 < b.min0 || w0 > b.max0) return std::nullopt;
  std::vector<std::uint8_t> side(n);
  for (std::uint32_t u = 0; u < n; ++u) side[u] = comp_side[comp[u]];
  return side;
}

std::vector<std::uint8_t> initial_bisection(const WGraph& g, const Bounds& b, Rng& rng) {
  const int trials = g.n() <= 200 ? 10 : 4;
  std::vector<std::uint8_t> best;
  Score best_score{};
  for (int t = 0; t < trials; ++t) {
    auto side = grow_bisection(g, b, rng);
    fm_refine(g, side, b, 8);
    Score s = score_of(g, side, b);
    if (best.empty() || s.better_than(best_score)) {
      best = std::move(side);
      best_score = s;
    }
  }
  return best;
}

/// Last-resort balance repair on a unit-granularity graph: move the cheapest
/// vertices out of the overweight side.
void force_balance(const WGraph& g, std::vector<std::uint8_t>& side, const Bounds& b) {
  std::int64_t w0 = 0;
  for (std::uint32_t u = 0; u < g.n(); ++u) {
    if (side[u] == 0) w0 += g.vwgt[u];
  }
  while (w0 > b.max0 || w0 < b.min0) {
    const std::uint8_t from = w0 > b.max0 ? 0 : 1;
    std::uint32_t best = kUnset;
    double best_gain = -std::numeric_limits<double>::infinity();
    for (std::uint32_t u = 0; u < g.n(); ++u) {
      if (side[u] != from) continue;
      double gain = 0.0;
      for (std::uint32_t e = g.begin(u); e < g.end(u); ++e) {
        gain += side[g.adjncy[e]] == from ? -g.adjwgt[e] : g.adjwgt[e];
      }
      if (gain > best_gain) {
        best_gain = gain;
        best = u;
      }
    }
    if (best == kUnset) return;
    side[best] = 1 - from;
    w0 += from == 0 ? -g.vwgt[best] : g.vwgt[best];
  }
}

std::vector<std::uint8_t> multilevel_bisect(const WGraph& g, const Bounds& b, Rng& rng) {
  if (auto packed = component_bisection(g, b)) return *packed;

  constexpr std::uint32_t kCoarsenTo = 100;
  std::vector<std::unique_ptr<WGraph>> levels;
  std::vector<std::vector<std::uint32_t>> cmaps;
  const WGraph* cur = &g;
  while (cur->n() > kCoarsenTo) {
    const auto max_vwgt = std::max<std::int64_t>(1, static_cast<std::int64_t>(1.5 * static_cast<double>(g.total) / kCoarsenTo));
    std::vector<std::uint32_t> cmap;
    auto coarse = std::make_unique<WGraph>(coarsen(*cur, rng, max_vwgt, cmap));
    if (coarse->n() > cur->n() * 0.92) break;
    cmaps.push_back(std::move(cmap));
    levels.push_back(std::move(coarse));
    cur = levels.back().get();
  }

  std::vector<std::uint8_t> side = initial_bisection(*cur, b, rng);
  for (std::size_t i = levels.size(); i-- > 0;) {
    const WGraph& finer = i == 0 ? g : *levels[i - 1];
    std::vector<std::uint8_t> projected(finer.n());
    for (std::uint32_t u = 0; u < finer.n(); ++u) projected[u] = side[cmaps[i][u]];
    side = std::move(projected);
    fm_refine(finer, side, b, 8);
  }
  force_balance(g, side, b);
  return side;
}

// ---------------------------------------------------------------------------
// k-way

void recursive_bisection(const WGraph& g, const std::vector<std::uint32_t>& ids, std::size_t k,
                         std::uint32_t first_part, std::int64_t cap, Rng& rng,
                         std::vector<std::uint32_t>& part_of) {
  if (k == 1) {
    for (std::uint32_t id : ids) part_of[id] = first_part;
    return;
  }
  const auto k0 = static_cast<std::int64_t>(k / 2);
  const auto k1 = static_cast<std::int64_t>(k) - k0;
  Bounds b{};
  b.max0 = std::min(k0 * cap, g.total - k1);
  const std::int64_t max1 = std::min(k1 * cap, g.total - k0);
  b.min0 = g.total - max1;
  b.target0 = std::clamp<std::int64_t>((g.total * k0 + static_cast<std::int64_t>(k) / 2) / static_cast<std::int64_t>(k),
                                       b.min0, b.max0);

  const std::vector<std::uint8_t> side = multilevel_bisect(g, b, rng);
  for (std::uint8_t s = 0; s < 2; ++s) {
    std::vector<std::uint32_t> local_ids;
    WGraph sub = side_subgraph(g, side, s, local_ids);
    for (auto& id : local_ids) id = ids[id];
    const std::size_t parts = s == 0 ? static_cast<std::size_t>(k0) : static_cast<std::size_t>(k1);
    recursive_bisection(sub, local_ids, parts, s == 0 ? first_part : first_part + static_cast<std::uint32_t>(k0),
                        cap, rng, part_of);
  }
}

/// Greedy positive-gain boundary moves between any two parts, respecting the cap.
void kway_refine(const WGraph& g, std::vector<std::uint32_t>& part, std::size_t k, std::int64_t cap) {
  std::vector<std::int64_t> size(k, 0);
  for (std::uint32_t u = 0; u < g.n(); ++u) size[part[u]] += g.vwgt[u];
  std::vector<double> conn(k, 0.0);
  std::vector<std::uint32_t> touched;
  for (int pass = 0; pass < 4; ++pass) {
    std::size_t moved = 0;
    for (std::uint32_t u = 0; u < g.n(); ++u) {
      const std::uint32_t own = part[u];
      touched.clear();
      for (std::uint32_t e = g.begin(u); e < g.end(u); ++e) {
        const std::uint32_t p = part[g.adjncy[e]];
        if (conn[p] == 0.0) touched.push_back(p);
        conn[p] += g.adjwgt[e];
      }
      std::uint32_t best = own;
      double best_gain = kTol;
      for (std::uint32_t p : touched) {
        if (p == own) continue;
        const double gain = conn[p] - conn[own];
        if (size[p] + g.vwgt[u] > cap || size[own] - g.vwgt[u] < 1) continue;
        if (gain > best_gain || (gain == best_gain && p < best)) {
          best_gain = gain;
          best = p;
        }
      }
      for (std::uint32_t p : touched) conn[p] = 0.0;
      if (best != own) {
        size[own] -= g.vwgt[u];
        size[best] += g.vwgt[u];
        part[u] = best;
        ++moved;
      }
    }
    if (moved == 0) break;
  }
}

/// Partitions `members` (ascending dense ids of g) into k parts; result is aligned
/// with `members`, parts numbered in order of first appearance.
std::vector<std::uint32_t> partition_members(const Graph& g, std::span<const std::uint32_t> members,
                                             std::size_t k, double epsilon, std::uint64_t seed,
                                             bool use_weights, std::vector<std::uint32_t>& scratch) {
  const WGraph w = induced_wgraph(g, members, use_weights, scratch);
  const auto cap = static_cast<std::int64_t>(balance_cap(members.size(), k, epsilon));
  Rng rng(splitmix64(seed));
  std::vector<std::uint32_t> ids(members.size());
  std::iota(ids.begin(), ids.end(), 0u);
  std::vector<std::uint32_t> part(members.size(), kUnset);
  recursive_bisection(w, ids, k, 0, cap, rng, part);
  kway_refine(w, part, k, cap);

  std::vector<std::uint32_t> relabel(k, kUnset);
  std::uint32_t next = 0;
  for (auto& p : part) {
    if (relabel[p] == kUnset) relabel[p] = next++;
    p = relabel[p];
  }
  return part;
}

void check_kway_args(std::size_t n, std::size_t k, double epsilon) {
  if (k < 2) fail(ErrorKind::BadInput, "k must be at least 2");
  if (!(epsilon >= 0.0 && epsilon < 1.0)) fail(ErrorKind::BadInput, "epsilon must lie in [0, 1)");
  if (n < k) {
    fail(ErrorKind::BadInput, "cannot split " + std::to_string(n) + " nodes into " + std::to_string(k) + " parts");
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// PartitionAssignment

std::uint32_t PartitionAssignment::part(NodeId id) const {
  auto it = std::lower_bound(nodes.begin(), nodes.end(), id);
  if (it == nodes.end() || *it != id) fail(ErrorKind::NotFound, "node " + std::to_string(id) + " not partitioned");
  return part_of[static_cast<std::size_t>(it - nodes.begin())];
}

std::vector<std::size_t> PartitionAssignment::part_sizes() const {
  std::vector<std::size_t> sizes(k, 0);
  for (auto p : part_of) ++sizes[p];
  return sizes;
}

std::vector<std::vector<NodeId>> PartitionAssignment::parts() const {
  std::vector<std::vector<NodeId>> out(k);
  for (std::size_t i = 0; i < nodes.size(); ++i) out[part_of[i]].push_back(nodes[i]);
  return out;
}

double PartitionAssignment::achieved_imbalance() const {
  if (nodes.empty() || k == 0) return 0.0;
  auto sizes = part_sizes();
  const double ideal = static_cast<double>(nodes.size()) / static_cast<double>(k);
  return static_cast<double>(*std::max_element(sizes.begin(), sizes.end())) / ideal - 1.0;
}

double cut_weight(const Graph& g, const std::vector<std::uint32_t>& part_of, bool use_weights) {
  double cut = 0.0;
  for (const Edge& e : g.edges()) {
    if (part_of[g.index_of(e.source)] != part_of[g.index_of(e.target)]) cut += use_weights ? e.weight : 1.0;
  }
  return cut;
}

PartitionAssignment kway_partition(const Graph& g, std::size_t k, const PartitionOptions& options) {
  check_kway_args(g.node_count(), k, options.epsilon);
  std::vector<std::uint32_t> members(g.node_count());
  std::iota(members.begin(), members.end(), 0u);
  std::vector<std::uint32_t> scratch(g.node_count(), kUnset);

  PartitionAssignment out;
  out.k = k;
  out.nodes.assign(g.nodes().begin(), g.nodes().end());
  out.part_of = partition_members(g, members, k, options.epsilon, options.seed, options.use_weights, scratch);
  out.cut_weight = cut_weight(g, out.part_of, options.use_weights);
  return out;
}

// ---------------------------------------------------------------------------
// Hierarchy

void HierarchySpec::validate() const {
  if (k < 2) fail(ErrorKind::BadInput, "k must be at least 2");
  if (h < 1) fail(ErrorKind::BadInput, "levels must be at least 1");
  if (!(epsilon >= 0.0 && epsilon < 1.0)) fail(ErrorKind::BadInput, "epsilon must lie in [0, 1)");
}

std::string PlanLeaf::dotted() const {
  std::string out = "0";
  for (std::size_t i : path) out += "." + std::to_string(i);
  return out;
}

std::vector<PlanLeaf> HierarchyPlan::leaves() const {
  std::vector<PlanLeaf> out;
  std::vector<std::size_t> path;
  auto walk = [&](auto&& self, const PlanNode& node) -> void {
    if (node.is_leaf()) {
      out.push_back({path, &node});
      return;
    }
    for (std::size_t i = 0; i < node.children.size(); ++i) {
      path.push_back(i);
      self(self, node.children[i]);
      path.pop_back();
    }
  };
  walk(walk, root);
  return out;
}

std::size_t HierarchyPlan::leaf_count() const {
  auto count = [](auto&& self, const PlanNode& node) -> std::size_t {
    if (node.is_leaf()) return 1;
    std::size_t total = 0;
    for (const auto& c : node.children) total += self(self, c);
    return total;
  };
  return count(count, root);
}

std::size_t HierarchyPlan::depth() const {
  auto deepest = [](auto&& self, const PlanNode& node) -> std::size_t {
    std::size_t d = 0;
    for (const auto& c : node.children) d = std::max(d, self(self, c));
    return d + 1;
  };
  return deepest(deepest, root);
}

namespace {

struct HierarchyBuilder {
  const Graph& g;
  const HierarchySpec& spec;
  std::vector<std::uint32_t> scratch;

  void split(PlanNode& node, const std::vector<std::uint32_t>& members, std::size_t depth,
             std::uint64_t seed, const std::string& path) {
    node.members.reserve(members.size());
    for (std::uint32_t dense : members) node.members.push_back(g.id_at(dense));
    const std::size_t floor = std::max(spec.effective_min_leaf_size(), spec.k);
    if (depth + 1 >= spec.h || members.size() < floor) return;

    std::vector<std::uint32_t> part;
    try {
      part = partition_members(g, members, spec.k, spec.epsilon, seed, spec.use_weights, scratch);
    } catch (const Error& e) {
      fail(e.kind(), "plan node " + path + ": " + e.what());
    }
    std::vector<std::vector<std::uint32_t>> groups(spec.k);
    for (std::size_t i = 0; i < members.size(); ++i) groups[part[i]].push_back(members[i]);
    node.children.resize(spec.k);
    for (std::size_t c = 0; c < spec.k; ++c) {
      split(node.children[c], groups[c], depth + 1, splitmix64(seed ^ (0xA24BAED4963EE407ULL * (c + 1))),
            path + "." + std::to_string(c));
    }
  }
};

}  // namespace

HierarchyPlan build_hierarchy(const Graph& g, const HierarchySpec& spec, std::uint64_t seed) {
  spec.validate();
  HierarchyPlan plan;
  plan.k = spec.k;
  plan.h = spec.h;
  std::vector<std::uint32_t> members(g.node_count());
  std::iota(members.begin(), members.end(), 0u);
  HierarchyBuilder builder{g, spec, std::vector<std::uint32_t>(g.node_count(), kUnset)};
  builder.split(plan.root, members, 0, seed, "0");
  return plan;
}

void write_plan(const HierarchyPlan& plan, std::ostream& out) {
  for (const PlanLeaf& leaf : plan.leaves()) {
    out << "leaf " << leaf.dotted() << " :";
    char sep = ' ';
    for (NodeId id : leaf.node->members) {
      out << sep << id;
      sep = ',';
    }
    out << '\n';
  }
}

HierarchyPlan read_plan(std::istream& in, std::string_view source_name) {
  HierarchyPlan plan;
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::pair<std::vector<std::size_t>, std::vector<NodeId>>> entries;
  auto bad = [&](const std::string& what) {
    fail(ErrorKind::BadInput, std::string(source_name) + ":" + std::to_string(line_no) + ": " + what);
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    if (line.rfind("leaf ", 0) != 0) bad("expected 'leaf <path> : ids'");
    const auto colon = line.find(':');
    if (colon == std::string::npos) bad("missing ':'");
    std::string path_text = line.substr(5, colon - 5);
    while (!path_text.empty() && path_text.back() == ' ') path_text.pop_back();
    std::vector<std::size_t> path;
    std::size_t start = 0;
    bool first = true;
    while (start <= path_text.size()) {
      auto dot = path_text.find('.', start);
      if (dot == std::string::npos) dot = path_text.size();
      auto value = parse_node_id(std::string_view(path_text).substr(start, dot - start));
      if (!value) bad("malformed path '" + path_text + "'");
      if (first) {
        if (*value != 0) bad("path must start at root 0");
        first = false;
      } else {
        path.push_back(static_cast<std::size_t>(*value));
      }
      start = dot + 1;
    }
    std::vector<NodeId> members;
    std::string_view rest = std::string_view(line).substr(colon + 1);
    while (!rest.empty() && rest.front() == ' ') rest.remove_prefix(1);
    while (!rest.empty()) {
      auto comma = rest.find(',');
      auto token = rest.substr(0, comma);
      auto id = parse_node_id(token);
      if (!id) bad("malformed node id '" + std::string(token) + "'");
      members.push_back(*id);
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (members.empty()) bad("leaf without members");
    std::sort(members.begin(), members.end());
    entries.emplace_back(std::move(path), std::move(members));
  }
  if (entries.empty()) fail(ErrorKind::BadInput, std::string(source_name) + ": plan has no leaves");

  std::vector<char> is_leaf_marker;
  for (auto& [path, members] : entries) {
    PlanNode* node = &plan.root;
    for (std::size_t idx : path) {
      if (!node->members.empty()) fail(ErrorKind::BadInput, std::string(source_name) + ": leaf path nested under another leaf");
      if (node->children.size() <= idx) node->children.resize(idx + 1);
      node = &node->children[idx];
    }
    if (!node->members.empty() || !node->children.empty()) {
      fail(ErrorKind::BadInput, std::string(source_name) + ": duplicate or nested leaf path");
    }
    node->members = std::move(members);
  }

  // Fill internal member lists and check every slot is populated.
  auto finish = [&](auto&& self, PlanNode& node) -> void {
    if (node.children.empty()) {
      if (node.members.empty()) fail(ErrorKind::BadInput, std::string(source_name) + ": gap in leaf paths");
      return;
    }
    for (auto& c : node.children) {
      self(self, c);
      node.members.insert(node.members.end(), c.members.begin(), c.members.end());
    }
    std::sort(node.members.begin(), node.members.end());
    plan.k = std::max(plan.k, node.children.size());
  };
  finish(finish, plan.root);
  plan.h = plan.depth();
  return plan;
}

}  // namespace gmine
