#pragma once

#include <cmath>
#include <vector>

#include "contracts.hpp"
#include "graph.hpp"
#include "matching.hpp"
#include "rng.hpp"

namespace mpcmatch {

struct PhaseOutcome {
  VertexSet heavy;
  VertexSet friends;
  Matching matched;
  double threshold = 0;
};

// star-forming subroutine. every friend with a heavy neighbor picks one
// uniformly, everybody in heavy+friends flips a fair coin, an edge survives
// when its friend end came up red and its heavy end blue, and each blue heavy
// vertex keeps the eligible friend with the smallest id.
//
// draw order is pinned (picks for friends ascending, then colors for the
// members of heavy+friends ascending) so the cluster simulation can reproduce
// the exact same tape.
inline Matching match_heavy(const Graph& g, const VertexSet& heavy,
                            const VertexSet& friends, RngStream& rng) {
  const std::size_t n = g.vertex_count();
  std::vector<Vertex> pick(n, kNoVertex);
  friends.for_each([&](Vertex v) {
    std::size_t h = 0;
    for (Vertex w : g.neighbors(v))
      if (heavy.contains(w)) ++h;
    if (h == 0) return;  // friend without heavy neighbor, skipped
    std::uint64_t r = rng.uniform_index(h);
    std::size_t seen = 0;
    for (Vertex w : g.neighbors(v)) {
      if (!heavy.contains(w)) continue;
      if (seen == r) {
        pick[v] = w;
        break;
      }
      ++seen;
    }
  });

  std::vector<std::uint8_t> red(n, 0);
  for (std::size_t v = 0; v < n; ++v)
    if (heavy.contains(static_cast<Vertex>(v)) || friends.contains(static_cast<Vertex>(v)))
      red[v] = rng.bernoulli(0.5) ? 1 : 0;

  // ascending friend order means the first eligible edge per blue vertex is
  // the lowest-id red partner
  std::vector<Vertex> chosen(n, kNoVertex);
  Matching m;
  friends.for_each([&](Vertex v) {
    Vertex target = pick[v];
    if (target == kNoVertex) return;
    if (red[v] && !red[target] && chosen[target] == kNoVertex) {
      chosen[target] = v;
      m.add(v, target);
    }
  });
  return m;
}

// one threshold step: collect heavy vertices (induced degree >= delta/2),
// sample friends (probability heavy-neighbor-count / 4*delta, drawn for every
// alive vertex in ascending order), then run the star subroutine.
inline PhaseOutcome global_phase(const Graph& g, const VertexSet& alive, double delta,
                                 RngStream phase_rng) {
  const std::size_t n = g.vertex_count();
  Graph induced = induced_subgraph(g, alive);
  if (static_cast<double>(induced.max_degree()) > delta)
    throw ContractViolation("global_phase: max alive degree exceeds threshold");

  PhaseOutcome out;
  out.threshold = delta;
  out.heavy = VertexSet(n);
  out.friends = VertexSet(n);
  alive.for_each([&](Vertex v) {
    if (static_cast<double>(induced.degree(v)) >= delta / 2.0) out.heavy.insert(v);
  });

  RngStream friend_rng = phase_rng.fork(0);
  alive.for_each([&](Vertex v) {
    std::size_t h = 0;
    for (Vertex w : induced.neighbors(v))
      if (out.heavy.contains(w)) ++h;
    if (friend_rng.bernoulli(static_cast<double>(h) / (4.0 * delta)))
      out.friends.insert(v);
  });

  RngStream match_rng = phase_rng.fork(1);
  out.matched = match_heavy(induced, out.heavy, out.friends, match_rng);
  return out;
}

struct GlobalTrace {
  Matching matching;
  std::vector<PhaseOutcome> phases;
  std::vector<std::size_t> alive_sizes;  // before each phase
};

// threshold-halving loop: run phases at delta_tilde, delta_tilde/2, ... until
// the threshold drops below 1, removing heavy+friends after each phase.
inline GlobalTrace global_alg_trace(const Graph& g, double delta_tilde, RngStream rng) {
  if (static_cast<double>(g.max_degree()) > delta_tilde)
    throw ContractViolation("global_alg: max degree exceeds delta_tilde");
  GlobalTrace trace;
  VertexSet alive = VertexSet::all(g.vertex_count());
  double delta = delta_tilde;
  std::uint64_t phase_idx = 0;
  while (delta >= 1.0) {
    trace.alive_sizes.push_back(alive.size());
    PhaseOutcome out = global_phase(g, alive, delta, rng.fork(phase_idx));
    trace.matching.append(out.matched);
    out.heavy.for_each([&](Vertex v) { alive.erase(v); });
    out.friends.for_each([&](Vertex v) { alive.erase(v); });
    // removing every heavy vertex forces all surviving degrees below delta/2
    if (static_cast<double>(max_degree_within(g, alive)) >= delta / 2.0)
      throw ContractViolation("global_alg: degree halving failed after a phase");
    trace.phases.push_back(std::move(out));
    delta /= 2.0;
    ++phase_idx;
  }
  return trace;
}

inline Matching global_alg(const Graph& g, double delta_tilde, RngStream rng) {
  return global_alg_trace(g, delta_tilde, std::move(rng)).matching;
}

// threshold defaults to n, the natural degree bound
inline Matching global_alg(const Graph& g, RngStream rng) {
  return global_alg(g, static_cast<double>(g.vertex_count()), std::move(rng));
}

}  // namespace mpcmatch
