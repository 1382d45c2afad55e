#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "contracts.hpp"

namespace mpcmatch {

using Vertex = std::uint32_t;

inline constexpr Vertex kNoVertex = static_cast<Vertex>(-1);

struct Edge {
  Vertex u = 0;
  Vertex v = 0;
  friend bool operator==(const Edge&, const Edge&) = default;
  friend bool operator<(const Edge& a, const Edge& b) {
    return a.u != b.u ? a.u < b.u : a.v < b.v;
  }
};

// fixed-universe bitset over vertex ids [0, universe)
class VertexSet {
 public:
  VertexSet() = default;
  explicit VertexSet(std::size_t universe)
      : bits_((universe + 63) / 64, 0), universe_(universe) {}

  static VertexSet all(std::size_t universe) {
    VertexSet s(universe);
    for (std::size_t v = 0; v < universe; ++v) s.insert(static_cast<Vertex>(v));
    return s;
  }

  static VertexSet from_vertices(std::size_t universe, const std::vector<Vertex>& vs) {
    VertexSet s(universe);
    for (Vertex v : vs) s.insert(v);
    return s;
  }

  std::size_t universe() const { return universe_; }
  std::size_t size() const { return count_; }
  bool empty() const { return count_ == 0; }

  bool contains(Vertex v) const {
    return v < universe_ && (bits_[v >> 6] >> (v & 63)) & 1;
  }

  void insert(Vertex v) {
    check(v);
    std::uint64_t bit = 1ull << (v & 63);
    if (!(bits_[v >> 6] & bit)) {
      bits_[v >> 6] |= bit;
      ++count_;
    }
  }

  void erase(Vertex v) {
    check(v);
    std::uint64_t bit = 1ull << (v & 63);
    if (bits_[v >> 6] & bit) {
      bits_[v >> 6] &= ~bit;
      --count_;
    }
  }

  void insert_all(const std::vector<Vertex>& vs) {
    for (Vertex v : vs) insert(v);
  }
  void erase_all(const std::vector<Vertex>& vs) {
    for (Vertex v : vs) erase(v);
  }

  // ascending id order
  std::vector<Vertex> members() const {
    std::vector<Vertex> out;
    out.reserve(count_);
    for_each([&](Vertex v) { out.push_back(v); });
    return out;
  }

  template <class F>
  void for_each(F&& f) const {
    for (std::size_t w = 0; w < bits_.size(); ++w) {
      std::uint64_t word = bits_[w];
      while (word) {
        unsigned bit = static_cast<unsigned>(__builtin_ctzll(word));
        f(static_cast<Vertex>(w * 64 + bit));
        word &= word - 1;
      }
    }
  }

  friend bool operator==(const VertexSet&, const VertexSet&) = default;

 private:
  void check(Vertex v) const {
    if (v >= universe_)
      throw std::out_of_range("VertexSet: vertex " + std::to_string(v) +
                              " outside universe " + std::to_string(universe_));
  }

  std::vector<std::uint64_t> bits_;
  std::size_t count_ = 0;
  std::size_t universe_ = 0;
};

// immutable simple graph on dense ids [0, n). adjacency kept sorted ascending.
class Graph {
 public:
  Graph() = default;

  std::size_t vertex_count() const { return n_; }
  std::size_t edge_count() const { return edges_.size(); }

  // normalized (u < v), sorted lexicographically, duplicate free
  const std::vector<Edge>& edges() const { return edges_; }

  std::span<const Vertex> neighbors(Vertex v) const {
    return {adj_.data() + offsets_[v], adj_.data() + offsets_[v + 1]};
  }

  std::size_t degree(Vertex v) const { return offsets_[v + 1] - offsets_[v]; }

  std::size_t max_degree() const {
    std::size_t d = 0;
    for (std::size_t v = 0; v < n_; ++v) d = std::max(d, degree(static_cast<Vertex>(v)));
    return d;
  }

  bool has_edge(Vertex u, Vertex v) const {
    if (u >= n_ || v >= n_ || u == v) return false;
    auto nb = neighbors(u);
    return std::binary_search(nb.begin(), nb.end(), v);
  }

 private:
  friend Graph build_graph(std::size_t n, std::vector<Edge> edges);

  std::size_t n_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::uint64_t> offsets_;  // n+1 entries into adj_
  std::vector<Vertex> adj_;
};

// self-loops and duplicate edges are dropped silently; out-of-range endpoints throw
inline Graph build_graph(std::size_t n, std::vector<Edge> edges) {
  std::vector<Edge> clean;
  clean.reserve(edges.size());
  for (Edge e : edges) {
    if (e.u >= n || e.v >= n)
      throw std::invalid_argument("build_graph: endpoint " +
                                  std::to_string(std::max(e.u, e.v)) +
                                  " >= vertex count " + std::to_string(n));
    if (e.u == e.v) continue;
    if (e.u > e.v) std::swap(e.u, e.v);
    clean.push_back(e);
  }
  std::sort(clean.begin(), clean.end());
  clean.erase(std::unique(clean.begin(), clean.end()), clean.end());

  Graph g;
  g.n_ = n;
  g.edges_ = std::move(clean);
  g.offsets_.assign(n + 1, 0);
  for (const Edge& e : g.edges_) {
    ++g.offsets_[e.u + 1];
    ++g.offsets_[e.v + 1];
  }
  for (std::size_t i = 0; i < n; ++i) g.offsets_[i + 1] += g.offsets_[i];
  g.adj_.resize(g.edges_.size() * 2);
  std::vector<std::uint64_t> cursor(g.offsets_.begin(), g.offsets_.end() - 1);
  for (const Edge& e : g.edges_) {
    g.adj_[cursor[e.u]++] = e.v;
    g.adj_[cursor[e.v]++] = e.u;
  }
  // adjacency rows come out ascending: for vertex x all (w,x) edges with w<x
  // precede all (x,w) edges with w>x in the sorted edge list, each run ordered
  return g;
}

// keeps the vertex universe, drops edges with an endpoint outside keep
inline Graph induced_subgraph(const Graph& g, const VertexSet& keep) {
  if (keep.universe() != g.vertex_count())
    throw std::invalid_argument("induced_subgraph: universe mismatch");
  std::vector<Edge> kept;
  for (const Edge& e : g.edges())
    if (keep.contains(e.u) && keep.contains(e.v)) kept.push_back(e);
  return build_graph(g.vertex_count(), std::move(kept));
}

// max degree counting only neighbors inside alive, over vertices in alive
inline std::size_t max_degree_within(const Graph& g, const VertexSet& alive) {
  std::size_t best = 0;
  alive.for_each([&](Vertex v) {
    std::size_t d = 0;
    for (Vertex w : g.neighbors(v))
      if (alive.contains(w)) ++d;
    best = std::max(best, d);
  });
  return best;
}

}  // namespace mpcmatch
