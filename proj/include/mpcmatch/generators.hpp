#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

#include "graph.hpp"
#include "rng.hpp"

namespace mpcmatch {

// G(n,p). same seed gives a bitwise identical edge list.
inline Graph gen_erdos_renyi(std::size_t n, double p, std::uint64_t seed) {
  if (!(p >= 0.0 && p <= 1.0))
    throw std::invalid_argument("gen_erdos_renyi: p must lie in [0,1]");
  RngStream rng(seed);
  std::vector<Edge> edges;
  if (n >= 2 && p > 0.0) {
    if (p >= 1.0) {
      for (Vertex u = 0; u + 1 < n; ++u)
        for (Vertex v = u + 1; v < n; ++v) edges.push_back({u, v});
    } else if (p > 0.25) {
      for (Vertex u = 0; u + 1 < n; ++u)
        for (Vertex v = u + 1; v < n; ++v)
          if (rng.bernoulli(p)) edges.push_back({u, v});
    } else {
      // geometric gap sampling over the linearized pair sequence, O(np + n)
      const double log1mp = std::log1p(-p);
      std::uint64_t u = 0, v = 1;
      bool done = n < 2;
      auto advance = [&](std::uint64_t k) {
        while (!done && k > 0) {
          std::uint64_t row_left = n - v;
          if (k < row_left) {
            v += k;
            return;
          }
          k -= row_left;
          ++u;
          v = u + 1;
          if (u + 1 >= n) done = true;
        }
      };
      while (!done) {
        auto gap = static_cast<std::uint64_t>(
            std::floor(std::log1p(-rng.next_double()) / log1mp));
        advance(gap);
        if (done) break;
        edges.push_back({static_cast<Vertex>(u), static_cast<Vertex>(v)});
        advance(1);
      }
    }
  }
  return build_graph(n, std::move(edges));
}

namespace detail {

// one pairing attempt of the stub model: repeatedly draw two remaining stubs,
// reject self-loops and duplicates, give up when no legal pair is left
inline bool try_regular_pairing(std::size_t n, std::size_t d, RngStream& rng,
                                std::vector<Edge>& out) {
  out.clear();
  std::vector<Vertex> stubs;
  stubs.reserve(n * d);
  for (std::size_t v = 0; v < n; ++v)
    for (std::size_t k = 0; k < d; ++k) stubs.push_back(static_cast<Vertex>(v));
  std::unordered_set<std::uint64_t> present;
  present.reserve(n * d);
  auto key = [n](Vertex a, Vertex b) {
    if (a > b) std::swap(a, b);
    return static_cast<std::uint64_t>(a) * n + b;
  };

  std::size_t cnt = stubs.size();
  std::size_t consecutive_rejects = 0;
  while (cnt > 0) {
    std::size_t i = static_cast<std::size_t>(rng.uniform_index(cnt));
    std::size_t j = static_cast<std::size_t>(rng.uniform_index(cnt));
    Vertex a = stubs[i], b = stubs[j];
    bool legal = i != j && a != b && !present.count(key(a, b));
    if (legal) {
      consecutive_rejects = 0;
      present.insert(key(a, b));
      Edge e{a, b};
      if (e.u > e.v) std::swap(e.u, e.v);
      out.push_back(e);
      std::size_t hi = std::max(i, j), lo = std::min(i, j);
      stubs[hi] = stubs[cnt - 1];
      --cnt;
      stubs[lo] = stubs[cnt - 1];
      --cnt;
      continue;
    }
    if (++consecutive_rejects > 64) {
      // decide whether we are actually stuck: collect distinct remaining
      // vertices and look for any absent pair
      std::vector<Vertex> uniq(stubs.begin(), stubs.begin() + cnt);
      std::sort(uniq.begin(), uniq.end());
      uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
      if (uniq.size() > 2048) return false;  // not expected for any supported d
      bool any_legal = false;
      for (std::size_t x = 0; x < uniq.size() && !any_legal; ++x)
        for (std::size_t y = x + 1; y < uniq.size() && !any_legal; ++y)
          if (!present.count(key(uniq[x], uniq[y]))) any_legal = true;
      if (!any_legal) return false;
      consecutive_rejects = 0;
    }
  }
  return true;
}

}  // namespace detail

// uniform-ish random d-regular simple graph via the stub pairing model.
// dead-ended pairings are thrown away and restarted, up to retry_budget times.
inline Graph gen_random_regular(std::size_t n, std::size_t d, std::uint64_t seed,
                                std::size_t retry_budget = 200) {
  if (d >= n && !(d == 0 && n == 0))
    throw std::invalid_argument("gen_random_regular: need d < n");
  if ((n * d) % 2 != 0)
    throw std::invalid_argument("gen_random_regular: n*d must be even");
  RngStream rng(seed);
  if (d == 0) return build_graph(n, {});
  std::vector<Edge> edges;
  for (std::size_t attempt = 0; attempt < retry_budget; ++attempt) {
    if (detail::try_regular_pairing(n, d, rng, edges)) return build_graph(n, std::move(edges));
  }
  throw std::runtime_error("gen_random_regular: retry budget exhausted (n=" +
                           std::to_string(n) + ", d=" + std::to_string(d) + ")");
}

// t disjoint components on 2^t vertices each, component i being 2^i-regular.
// component i occupies ids [i*2^t, (i+1)*2^t).
inline Graph gen_union_of_regulars(std::size_t t, std::uint64_t seed) {
  if (t == 0) throw std::invalid_argument("gen_union_of_regulars: need t >= 1");
  const std::size_t comp = std::size_t{1} << t;
  RngStream root(seed);
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < t; ++i) {
    Graph gi = gen_random_regular(comp, std::size_t{1} << i, root.fork(i).seed());
    const Vertex off = static_cast<Vertex>(i * comp);
    for (Edge e : gi.edges()) edges.push_back({e.u + off, e.v + off});
  }
  return build_graph(t * comp, std::move(edges));
}

}  // namespace mpcmatch
