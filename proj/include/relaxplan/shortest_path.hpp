#ifndef RELAXPLAN_SHORTEST_PATH_HPP
#define RELAXPLAN_SHORTEST_PATH_HPP

// Dijkstra over lexicographic (primary, secondary, hops) costs with a
// virtual goal vertex fed by per-vertex exit costs. Among optimal paths the
// one with the smallest vertex-id sequence is returned.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <queue>
#include <vector>

#include "relaxplan/error.hpp"
#include "relaxplan/product.hpp"
#include "relaxplan/transition_system.hpp"

namespace relaxplan {

inline constexpr double kCostTolerance = 1e-9;

struct LexCost {
  double primary = 0.0;
  double secondary = 0.0;
  std::size_t hops = 0;
};

namespace detail {

inline bool approx_equal(double a, double b) {
  return std::fabs(a - b) <= kCostTolerance * std::max({1.0, std::fabs(a), std::fabs(b)});
}

// -1, 0, 1
inline int lex_compare(const LexCost& a, const LexCost& b) {
  if (!approx_equal(a.primary, b.primary)) return a.primary < b.primary ? -1 : 1;
  if (!approx_equal(a.secondary, b.secondary)) return a.secondary < b.secondary ? -1 : 1;
  if (a.hops != b.hops) return a.hops < b.hops ? -1 : 1;
  return 0;
}

}  // namespace detail

struct WeightedArc {
  std::size_t from = 0;
  std::size_t to = 0;
  double primary = 0.0;
  double secondary = 0.0;
};

struct ExitCost {
  double primary = 0.0;
  double secondary = 0.0;
};

struct GraphPath {
  std::vector<std::size_t> arcs;      // arc indices
  std::vector<std::size_t> vertices;  // source .. last real vertex
  double primary = 0.0;
  double secondary = 0.0;
};

/// Shortest source -> goal path where the goal is reachable from vertex v
/// iff exits[v] is set. Weights must be nonnegative.
inline std::optional<GraphPath> lex_shortest_path(std::size_t n, std::size_t source, const std::vector<WeightedArc>& arcs,
                                                  const std::vector<std::optional<ExitCost>>& exits) {
  for (const auto& a : arcs) {
    if (!(a.primary >= 0) || !(a.secondary >= 0)) throw NegativeWeight("negative or NaN edge weight in shortest path");
  }
  for (const auto& e : exits) {
    if (e && (!(e->primary >= 0) || !(e->secondary >= 0))) throw NegativeWeight("negative or NaN exit weight");
  }
  if (source >= n) return std::nullopt;
  const std::size_t goal = n;
  std::vector<std::vector<std::size_t>> out(n);
  for (std::size_t i = 0; i < arcs.size(); ++i) out[arcs[i].from].push_back(i);

  std::vector<std::optional<LexCost>> dist(n + 1);
  std::vector<bool> done(n + 1, false);
  struct Item {
    LexCost c;
    std::size_t v;
  };
  auto worse = [](const Item& a, const Item& b) {
    int c = detail::lex_compare(a.c, b.c);
    return c != 0 ? c > 0 : a.v > b.v;
  };
  std::priority_queue<Item, std::vector<Item>, decltype(worse)> pq(worse);
  auto relax = [&](std::size_t v, const LexCost& c) {
    if (!dist[v] || detail::lex_compare(c, *dist[v]) < 0) {
      dist[v] = c;
      pq.push({c, v});
    }
  };
  relax(source, {});
  while (!pq.empty()) {
    auto [c, u] = pq.top();
    pq.pop();
    if (done[u]) continue;
    done[u] = true;
    if (u == goal) break;
    for (std::size_t ai : out[u]) {
      const auto& a = arcs[ai];
      relax(a.to, {c.primary + a.primary, c.secondary + a.secondary, c.hops + 1});
    }
    if (exits[u]) relax(goal, {c.primary + exits[u]->primary, c.secondary + exits[u]->secondary, c.hops + 1});
  }
  if (!dist[goal]) return std::nullopt;

  // Tight arcs lie on some optimal path; keep those that still reach the goal.
  auto arc_tight = [&](const WeightedArc& a) {
    if (!dist[a.from] || !dist[a.to]) return false;
    LexCost via{dist[a.from]->primary + a.primary, dist[a.from]->secondary + a.secondary, dist[a.from]->hops + 1};
    return via.hops == dist[a.to]->hops && detail::lex_compare(via, *dist[a.to]) == 0;
  };
  auto exit_tight = [&](std::size_t u) {
    if (!exits[u] || !dist[u]) return false;
    LexCost via{dist[u]->primary + exits[u]->primary, dist[u]->secondary + exits[u]->secondary, dist[u]->hops + 1};
    return via.hops == dist[goal]->hops && detail::lex_compare(via, *dist[goal]) == 0;
  };
  std::vector<std::vector<std::size_t>> back(n);
  std::vector<bool> reaches(n, false);
  std::vector<std::size_t> stack;
  for (std::size_t v = 0; v < n; ++v) {
    if (exit_tight(v)) {
      reaches[v] = true;
      stack.push_back(v);
    }
  }
  for (std::size_t i = 0; i < arcs.size(); ++i) {
    if (arc_tight(arcs[i])) back[arcs[i].to].push_back(i);
  }
  while (!stack.empty()) {
    auto v = stack.back();
    stack.pop_back();
    for (std::size_t ai : back[v]) {
      auto u = arcs[ai].from;
      if (!reaches[u]) {
        reaches[u] = true;
        stack.push_back(u);
      }
    }
  }

  GraphPath path;
  std::size_t u = source;
  path.vertices.push_back(u);
  while (true) {
    if (exit_tight(u)) break;  // every tight continuation would be longer
    std::size_t best = npos;
    for (std::size_t ai : out[u]) {
      const auto& a = arcs[ai];
      if (!reaches[a.to] || !arc_tight(a)) continue;
      if (best == npos || a.to < arcs[best].to || (a.to == arcs[best].to && ai < best)) best = ai;
    }
    if (best == npos) throw Error("internal error: lost the optimal path");
    path.arcs.push_back(best);
    path.primary += arcs[best].primary;
    path.secondary += arcs[best].secondary;
    u = arcs[best].to;
    path.vertices.push_back(u);
  }
  path.primary += exits[u]->primary;
  path.secondary += exits[u]->secondary;
  return path;
}

/// Product edge and exit weights for one search.
struct PathWeights {
  std::vector<double> primary;      // per product edge
  std::vector<double> secondary;    // per product edge, may be empty
  std::vector<double> exit_primary;    // per state, used on accepting states
  std::vector<double> exit_secondary;  // may be empty
};

inline PathWeights default_weights(const ProductAutomaton& pa) {
  PathWeights w;
  for (const auto& e : pa.edges) w.primary.push_back(e.weight);
  w.exit_primary = pa.exit_weight;
  return w;
}

struct ProductPath {
  std::vector<std::size_t> edges;
  std::vector<std::size_t> states;
  double primary = 0.0;
  double secondary = 0.0;
};

inline std::optional<ProductPath> shortest_path(const ProductAutomaton& pa, const PathWeights& w) {
  if (pa.empty()) return std::nullopt;
  std::vector<WeightedArc> arcs;
  arcs.reserve(pa.edges.size());
  for (std::size_t i = 0; i < pa.edges.size(); ++i) {
    arcs.push_back({pa.edges[i].from, pa.edges[i].to, w.primary.at(i), w.secondary.empty() ? 0.0 : w.secondary.at(i)});
  }
  std::vector<std::optional<ExitCost>> exits(pa.size());
  for (std::size_t q = 0; q < pa.size(); ++q) {
    if (pa.accepting[q]) exits[q] = ExitCost{w.exit_primary.at(q), w.exit_secondary.empty() ? 0.0 : w.exit_secondary.at(q)};
  }
  auto g = lex_shortest_path(pa.size(), pa.initial, arcs, exits);
  if (!g) return std::nullopt;
  return ProductPath{std::move(g->arcs), std::move(g->vertices), g->primary, g->secondary};
}

inline std::optional<ProductPath> shortest_path(const ProductAutomaton& pa) {
  return shortest_path(pa, default_weights(pa));
}

}  // namespace relaxplan

#endif  // RELAXPLAN_SHORTEST_PATH_HPP
