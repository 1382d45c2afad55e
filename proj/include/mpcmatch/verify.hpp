#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "mpcmatch/graph.hpp"
#include "mpcmatch/matching.hpp"
#include "mpcmatch/rng.hpp"

namespace mpcmatch {

// first problem found while checking a matching against its host graph
struct MatchingViolation {
    enum class Kind { alien_edge, shared_vertex };
    Kind kind;
    Edge edge;       // offending edge
    Vertex vertex;   // reused endpoint for shared_vertex, kNoVertex otherwise

    std::string describe() const {
        std::ostringstream os;
        if (kind == Kind::alien_edge) {
            os << "edge (" << edge.u << "," << edge.v << ") is not an edge of the graph";
        } else {
            os << "vertex " << vertex << " is covered twice, second time by ("
               << edge.u << "," << edge.v << ")";
        }
        return os.str();
    }
};

// returns the first violation in the matching's own edge order, or nullopt if valid
inline std::optional<MatchingViolation> verify_matching(const Graph& g, const Matching& m) {
    std::vector<char> covered(g.vertex_count(), 0);
    for (const Edge& e : m.edges()) {
        if (e.u >= g.vertex_count() || e.v >= g.vertex_count() || !g.has_edge(e.u, e.v)) {
            return MatchingViolation{MatchingViolation::Kind::alien_edge, e, kNoVertex};
        }
        if (covered[e.u]) {
            return MatchingViolation{MatchingViolation::Kind::shared_vertex, e, e.u};
        }
        if (covered[e.v]) {
            return MatchingViolation{MatchingViolation::Kind::shared_vertex, e, e.v};
        }
        covered[e.u] = 1;
        covered[e.v] = 1;
    }
    return std::nullopt;
}

inline constexpr std::size_t kExactMatchingMaxVertices = 20;

// exact maximum matching size by branch and bound over the lowest free vertex:
// either match it to one of its free neighbors or discard it for good
inline std::size_t exact_max_matching(const Graph& g) {
    const std::size_t n = g.vertex_count();
    if (n > kExactMatchingMaxVertices) {
        throw std::invalid_argument("exact_max_matching: graph has " + std::to_string(n) +
                                    " vertices, limit is " +
                                    std::to_string(kExactMatchingMaxVertices));
    }
    std::size_t best = 0;
    auto rec = [&](auto&& self, std::uint32_t used, std::size_t cur) -> void {
        best = std::max(best, cur);
        const std::size_t free_count = n - std::popcount(used);
        if (cur + free_count / 2 <= best) return;   // cannot beat the incumbent
        Vertex v = kNoVertex;
        for (std::size_t i = 0; i < n; ++i) {
            if (!(used >> i & 1u)) { v = static_cast<Vertex>(i); break; }
        }
        if (v == kNoVertex) return;
        for (Vertex w : g.neighbors(v)) {
            if (used >> w & 1u) continue;
            self(self, used | (1u << v) | (1u << w), cur + 1);
        }
        self(self, used | (1u << v), cur);
    };
    rec(rec, 0, 0);
    return best;
}

// greedy maximal matching scanning vertices in the given order, each free vertex
// grabbing its lowest-id free neighbor
inline Matching greedy_maximal_matching(const Graph& g, const std::vector<Vertex>& order) {
    std::vector<char> covered(g.vertex_count(), 0);
    Matching m;
    for (Vertex v : order) {
        if (v >= g.vertex_count()) throw std::out_of_range("greedy_maximal_matching: bad vertex in order");
        if (covered[v]) continue;
        for (Vertex w : g.neighbors(v)) {
            if (covered[w]) continue;
            covered[v] = 1;
            covered[w] = 1;
            m.add(v, w);
            break;
        }
    }
    return m;
}

struct MaximalBound {
    std::size_t size = 0;    // size of the greedy maximal matching found
    std::size_t lower = 0;   // optimum is at least this
    std::size_t upper = 0;   // optimum is at most this (twice the maximal size)
};

// any maximal matching M satisfies |M| <= opt <= 2|M|; the scan order is a
// seed-derived permutation so repeated calls with fresh seeds probe different maximals
inline MaximalBound maximal_bound(const Graph& g, std::uint64_t seed) {
    std::vector<Vertex> order(g.vertex_count());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<Vertex>(i);
    RngStream rng(seed);
    rng.shuffle(order);
    const std::size_t k = greedy_maximal_matching(g, order).size();
    return MaximalBound{k, k, 2 * k};
}

struct ApproxReport {
    std::size_t matching_size = 0;
    std::optional<std::size_t> opt_exact;   // present only when the exact solver ran
    std::size_t maximal_size = 0;
    std::size_t opt_lower = 0;              // = maximal_size
    std::size_t opt_upper = 0;              // exact value when known, else 2 * maximal_size
    double ratio_upper_bound = 0.0;         // opt_upper / matching_size, inf for an empty
                                            // matching against a nonempty optimum

    std::string to_json() const {
        std::ostringstream os;
        os << "{\"matching_size\":" << matching_size;
        os << ",\"opt_exact\":";
        if (opt_exact) os << *opt_exact; else os << "null";
        os << ",\"maximal_size\":" << maximal_size;
        os << ",\"opt_lower\":" << opt_lower;
        os << ",\"opt_upper\":" << opt_upper;
        os << ",\"ratio_upper_bound\":";
        if (std::isinf(ratio_upper_bound)) os << "\"inf\"";
        else os << ratio_upper_bound;
        os << "}";
        return os.str();
    }
};

// quality report for a matching; the matching must be valid for g
inline ApproxReport approx_report(const Graph& g, const Matching& m, std::uint64_t seed) {
    if (auto bad = verify_matching(g, m)) {
        throw std::invalid_argument("approx_report: invalid matching: " + bad->describe());
    }
    ApproxReport r;
    r.matching_size = m.size();
    const MaximalBound mb = maximal_bound(g, seed);
    r.maximal_size = mb.size;
    r.opt_lower = mb.lower;
    r.opt_upper = mb.upper;
    if (g.vertex_count() <= kExactMatchingMaxVertices) {
        r.opt_exact = exact_max_matching(g);
        r.opt_upper = *r.opt_exact;
    }
    if (r.matching_size > 0) {
        r.ratio_upper_bound = static_cast<double>(r.opt_upper) / static_cast<double>(r.matching_size);
    } else {
        r.ratio_upper_bound = r.opt_upper == 0 ? 1.0 : std::numeric_limits<double>::infinity();
    }
    return r;
}

}  // namespace mpcmatch
