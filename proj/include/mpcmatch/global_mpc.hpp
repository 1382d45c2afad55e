#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "contracts.hpp"
#include "global_matcher.hpp"
#include "graph.hpp"
#include "matching.hpp"
#include "mpc_runtime.hpp"
#include "rng.hpp"

namespace mpcmatch {

inline constexpr std::size_t kGlobalPhasePrimitives = 5;

struct MpcGlobalResult {
  Matching matching;
  std::size_t phases = 0;
};

// the threshold-halving matcher executed through the cluster primitives.
// every phase charges exactly kGlobalPhasePrimitives rounds regardless of the
// data: degree count, heavy-neighbor count, random heavy pick, color
// broadcast, and the match-selection sort. the random tape (friend draws for
// every alive vertex ascending, one pick per asker ascending, colors for
// heavy+friend members ascending) matches the direct implementation
// draw-for-draw, so both produce bitwise identical matchings from the same
// stream.
//
// degree counts are memoized across phases whose alive set did not change
// (common while thresholds are far above every degree); the memoized phase
// recharges identical traffic so the ledger is indistinguishable.
inline MpcGlobalResult mpc_global_alg(Cluster& c, const Graph& g, VertexSet alive,
                                      double delta_tilde, RngStream rng,
                                      bool memoize_counts = true) {
  if (static_cast<double>(max_degree_within(g, alive)) > delta_tilde)
    throw ContractViolation("mpc_global_alg: max alive degree exceeds delta_tilde");
  const std::size_t n = g.vertex_count();

  MpcGlobalResult res;
  double delta = delta_tilde;
  std::uint64_t phase_idx = 0;

  std::optional<std::vector<std::uint32_t>> memo_counts;
  std::uint64_t memo_records = 0;

  while (delta >= 1.0) {
    RngStream phase_rng = rng.fork(phase_idx);

    std::vector<std::uint32_t> degree;
    if (memo_counts && memoize_counts) {
      degree = *memo_counts;
      const std::uint64_t share =
          detail::audit_even_spread(c, "dist_sort", memo_records, 2);
      c.charge("dist_sort", c.machine_count(), share, share, share);
    } else {
      degree = count_neighbors_in_set(c, g, alive, alive, &memo_records);
      memo_counts = degree;
    }

    VertexSet heavy(n);
    alive.for_each([&](Vertex v) {
      if (static_cast<double>(degree[v]) >= delta / 2.0) heavy.insert(v);
    });

    std::vector<std::uint32_t> heavy_nbrs = count_neighbors_in_set(c, g, heavy, alive);

    VertexSet friends(n);
    RngStream friend_rng = phase_rng.fork(0);
    alive.for_each([&](Vertex v) {
      if (friend_rng.bernoulli(static_cast<double>(heavy_nbrs[v]) / (4.0 * delta)))
        friends.insert(v);
    });

    RngStream match_rng = phase_rng.fork(1);
    std::vector<Vertex> pick = random_heavy_neighbor(c, g, heavy, friends, match_rng);

    std::vector<std::uint64_t> color(n, 0);  // 1 = red
    for (std::size_t v = 0; v < n; ++v)
      if (heavy.contains(static_cast<Vertex>(v)) || friends.contains(static_cast<Vertex>(v)))
        color[v] = match_rng.bernoulli(0.5) ? 1 : 0;
    auto edge_colors = broadcast_vertex_values(c, g, color);

    // star edges (red friend -> blue heavy target) read off the annotated edge
    // list, then one selection sort keyed by (target, friend) so the smallest
    // friend id wins per target
    const std::uint64_t stride = static_cast<std::uint64_t>(n) + 1;
    std::vector<std::pair<Vertex, Vertex>> cand;  // (friend, target)
    const auto& edges = g.edges();
    for (std::size_t i = 0; i < edges.size(); ++i) {
      const auto [cu, cv] = edge_colors[i];
      const Edge& e = edges[i];
      if (pick[e.u] == e.v && cu == 1 && cv == 0) cand.emplace_back(e.u, e.v);
      if (pick[e.v] == e.u && cv == 1 && cu == 0) cand.emplace_back(e.v, e.u);
    }
    cand = dist_sort(
        c, std::move(cand),
        [stride](const std::pair<Vertex, Vertex>& fe) {
          return static_cast<std::uint64_t>(fe.second) * stride + fe.first;
        },
        2);
    Vertex last_target = kNoVertex;
    for (const auto& [f, t] : cand) {
      if (t == last_target) continue;
      last_target = t;
      res.matching.add(f, t);
    }

    if (!heavy.empty() || !friends.empty()) {
      heavy.for_each([&](Vertex v) { alive.erase(v); });
      friends.for_each([&](Vertex v) { alive.erase(v); });
      memo_counts.reset();
    }
    delta /= 2.0;
    ++phase_idx;
  }
  res.phases = static_cast<std::size_t>(phase_idx);
  return res;
}

}  // namespace mpcmatch
