#pragma once

#include <algorithm>
#include <vector>

#include "graph.hpp"

namespace mpcmatch {

// edge set under construction; validity against a graph is checked separately
class Matching {
 public:
  void add(Vertex u, Vertex v) {
    Edge e{u, v};
    if (e.u > e.v) std::swap(e.u, e.v);
    edges_.push_back(e);
  }

  void append(const Matching& other) {
    edges_.insert(edges_.end(), other.edges_.begin(), other.edges_.end());
  }

  std::size_t size() const { return edges_.size(); }
  bool empty() const { return edges_.empty(); }
  const std::vector<Edge>& edges() const { return edges_; }

  std::vector<Edge> sorted_edges() const {
    std::vector<Edge> out = edges_;
    std::sort(out.begin(), out.end());
    return out;
  }

  std::vector<Vertex> covered_vertices() const {
    std::vector<Vertex> out;
    out.reserve(edges_.size() * 2);
    for (const Edge& e : edges_) {
      out.push_back(e.u);
      out.push_back(e.v);
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  friend bool operator==(const Matching& a, const Matching& b) {
    return a.sorted_edges() == b.sorted_edges();
  }

 private:
  std::vector<Edge> edges_;
};

}  // namespace mpcmatch
