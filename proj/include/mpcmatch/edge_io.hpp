#pragma once

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "graph.hpp"

namespace mpcmatch {

// "n m" header line, then one "u v" line per edge in normalized sorted order
inline void write_edge_list(std::ostream& os, const Graph& g) {
  os << g.vertex_count() << ' ' << g.edge_count() << '\n';
  for (const Edge& e : g.edges()) os << e.u << ' ' << e.v << '\n';
}

inline Graph read_edge_list(std::istream& is) {
  std::string line;
  std::size_t lineno = 0;
  auto fail = [&](const std::string& what) {
    throw std::runtime_error("read_edge_list: line " + std::to_string(lineno) +
                             ": " + what);
  };
  std::size_t n = 0, m = 0;
  if (!std::getline(is, line)) fail("missing header");
  ++lineno;
  {
    std::istringstream hs(line);
    long long a = -1, b = -1;
    if (!(hs >> a >> b) || a < 0 || b < 0) fail("bad header, expected 'n m'");
    std::string rest;
    if (hs >> rest) fail("trailing tokens in header");
    n = static_cast<std::size_t>(a);
    m = static_cast<std::size_t>(b);
  }
  std::vector<Edge> edges;
  edges.reserve(m);
  while (edges.size() < m) {
    if (!std::getline(is, line)) fail("expected " + std::to_string(m) +
                                      " edges, got " + std::to_string(edges.size()));
    ++lineno;
    if (line.empty()) continue;
    std::istringstream es(line);
    long long u = -1, v = -1;
    if (!(es >> u >> v) || u < 0 || v < 0) fail("bad edge, expected 'u v'");
    std::string rest;
    if (es >> rest) fail("trailing tokens after edge");
    if (u >= static_cast<long long>(n) || v >= static_cast<long long>(n))
      fail("endpoint out of range");
    edges.push_back({static_cast<Vertex>(u), static_cast<Vertex>(v)});
  }
  while (std::getline(is, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") != std::string::npos)
      fail("trailing content after edge list");
  }
  return build_graph(n, std::move(edges));
}

inline void write_edge_list_file(const std::string& path, const Graph& g) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("write_edge_list_file: cannot open " + path);
  write_edge_list(os, g);
}

inline Graph read_edge_list_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("read_edge_list_file: cannot open " + path);
  return read_edge_list(is);
}

}  // namespace mpcmatch
