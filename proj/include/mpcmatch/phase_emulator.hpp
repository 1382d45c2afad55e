#pragma once

#include <algorithm>
#include <cstdint>
#include <utility>
#include <vector>

#include "contracts.hpp"
#include "graph.hpp"
#include "matching.hpp"
#include "params.hpp"
#include "rng.hpp"

namespace mpcmatch {

inline constexpr std::uint32_t kNoMachine = static_cast<std::uint32_t>(-1);

struct LocalPhaseResult {
  std::size_t machine_index = 0;
  std::vector<Vertex> survivors;  // V_i minus the three role sets, ascending
  std::vector<Vertex> reference;
  std::vector<Vertex> heavy;
  std::vector<Vertex> friends;
  Matching matched;
  std::vector<std::pair<Vertex, double>> degree_estimates;  // for every input vertex
};

inline double estimate_degree(Vertex v, const Graph& g_i, const VertexSet& reference,
                              double mu_R_val) {
  if (!(mu_R_val > 0))
    throw std::invalid_argument("estimate_degree: mu_R_val must be positive");
  std::size_t cnt = 0;
  for (Vertex w : g_i.neighbors(v))
    if (reference.contains(w)) ++cnt;
  return static_cast<double>(cnt) / mu_R_val;
}

namespace detail {

// machine-local adjacency on compact ids 0..k-1
struct CompactGraph {
  std::vector<Vertex> ids;  // compact -> global, ascending
  std::vector<std::uint32_t> offsets;
  std::vector<std::uint32_t> nbr;
  std::size_t size() const { return ids.size(); }
};

inline CompactGraph compact_from_edges(std::vector<Vertex> vertices,
                                       const std::vector<Edge>& edges) {
  std::sort(vertices.begin(), vertices.end());
  vertices.erase(std::unique(vertices.begin(), vertices.end()), vertices.end());
  CompactGraph cg;
  cg.ids = std::move(vertices);
  const std::size_t k = cg.ids.size();
  auto local = [&](Vertex g) {
    auto it = std::lower_bound(cg.ids.begin(), cg.ids.end(), g);
    if (it == cg.ids.end() || *it != g)
      throw ContractViolation("local_phase: edge endpoint outside the vertex list");
    return static_cast<std::uint32_t>(it - cg.ids.begin());
  };
  std::vector<std::uint32_t> deg(k, 0);
  std::vector<std::pair<std::uint32_t, std::uint32_t>> loc;
  loc.reserve(edges.size());
  for (const Edge& e : edges) {
    std::uint32_t a = local(e.u), b = local(e.v);
    loc.emplace_back(a, b);
    ++deg[a];
    ++deg[b];
  }
  cg.offsets.assign(k + 1, 0);
  for (std::size_t i = 0; i < k; ++i) cg.offsets[i + 1] = cg.offsets[i] + deg[i];
  cg.nbr.resize(loc.size() * 2);
  std::vector<std::uint32_t> cursor(cg.offsets.begin(), cg.offsets.end() - 1);
  for (auto [a, b] : loc) {
    cg.nbr[cursor[a]++] = b;
    cg.nbr[cursor[b]++] = a;
  }
  return cg;
}

inline CompactGraph compact_from_graph(const Graph& g, std::vector<Vertex> vertices) {
  std::sort(vertices.begin(), vertices.end());
  vertices.erase(std::unique(vertices.begin(), vertices.end()), vertices.end());
  VertexSet member = VertexSet::from_vertices(g.vertex_count(), vertices);
  std::vector<Edge> kept;
  for (Vertex v : vertices)
    for (Vertex w : g.neighbors(v))
      if (v < w && member.contains(w)) kept.push_back({v, w});
  return compact_from_edges(std::move(vertices), kept);
}

enum : std::uint8_t { kRoleSurvivor = 0, kRoleReference = 1, kRoleHeavy = 2, kRoleFriend = 3 };

struct LocalRoles {
  std::vector<std::uint8_t> role;  // per compact id
  std::vector<double> estimate;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> matched;  // compact pairs
};

// the sampled phase on one machine. roles are drawn sequentially and
// disjointly: reference first, heavy among the rest, friends among the rest,
// so the four role classes partition the machine's vertices. every draw layer
// walks vertices in ascending order and skips ineligible vertices without
// consuming randomness, which keeps tapes aligned across representations.
inline LocalRoles local_phase_core(const CompactGraph& cg, double delta_star,
                                   const ParamProfile& profile, RngStream rng) {
  if (!(delta_star > 0))
    throw std::invalid_argument("local_phase: delta_star must be positive");
  const std::size_t k = cg.size();
  LocalRoles out;
  out.role.assign(k, kRoleSurvivor);
  out.estimate.assign(k, 0.0);

  const double mu_r = mu_R(profile);
  RngStream ref_rng = rng.fork(0);
  for (std::size_t v = 0; v < k; ++v)
    if (ref_rng.bernoulli(mu_r)) out.role[v] = kRoleReference;

  for (std::size_t v = 0; v < k; ++v) {
    std::size_t cnt = 0;
    for (std::uint32_t off = cg.offsets[v]; off < cg.offsets[v + 1]; ++off)
      if (out.role[cg.nbr[off]] == kRoleReference) ++cnt;
    out.estimate[v] = static_cast<double>(cnt) / mu_r;
  }

  RngStream heavy_rng = rng.fork(1);
  for (std::size_t v = 0; v < k; ++v) {
    if (out.role[v] != kRoleSurvivor) continue;
    if (heavy_rng.bernoulli(mu_H(out.estimate[v] / delta_star, profile)))
      out.role[v] = kRoleHeavy;
  }

  RngStream friend_rng = rng.fork(2);
  for (std::size_t v = 0; v < k; ++v) {
    if (out.role[v] != kRoleSurvivor) continue;
    std::size_t cnt = 0;
    for (std::uint32_t off = cg.offsets[v]; off < cg.offsets[v + 1]; ++off)
      if (out.role[cg.nbr[off]] == kRoleHeavy) ++cnt;
    if (friend_rng.bernoulli(mu_F(static_cast<double>(cnt) / delta_star)))
      out.role[v] = kRoleFriend;
  }

  // greedy maximal matching over the induced heavy+friend edges in a
  // seed-derived random order
  std::vector<std::pair<std::uint32_t, std::uint32_t>> cand;
  for (std::size_t v = 0; v < k; ++v) {
    if (out.role[v] != kRoleHeavy && out.role[v] != kRoleFriend) continue;
    for (std::uint32_t off = cg.offsets[v]; off < cg.offsets[v + 1]; ++off) {
      std::uint32_t w = cg.nbr[off];
      if (w > v && (out.role[w] == kRoleHeavy || out.role[w] == kRoleFriend))
        cand.emplace_back(static_cast<std::uint32_t>(v), w);
    }
  }
  RngStream order_rng = rng.fork(3);
  order_rng.shuffle(cand);
  std::vector<std::uint8_t> used(k, 0);
  for (auto [a, b] : cand) {
    if (used[a] || used[b]) continue;
    used[a] = used[b] = 1;
    out.matched.emplace_back(a, b);
  }
  return out;
}

inline LocalPhaseResult roles_to_result(std::size_t machine_index, const CompactGraph& cg,
                                        const LocalRoles& roles) {
  LocalPhaseResult res;
  res.machine_index = machine_index;
  const std::size_t k = cg.size();
  res.degree_estimates.reserve(k);
  for (std::size_t v = 0; v < k; ++v) {
    Vertex g = cg.ids[v];
    res.degree_estimates.emplace_back(g, roles.estimate[v]);
    switch (roles.role[v]) {
      case kRoleSurvivor: res.survivors.push_back(g); break;
      case kRoleReference: res.reference.push_back(g); break;
      case kRoleHeavy: res.heavy.push_back(g); break;
      default: res.friends.push_back(g); break;
    }
  }
  for (auto [a, b] : roles.matched) res.matched.add(cg.ids[a], cg.ids[b]);
  return res;
}

}  // namespace detail

// one machine's phase. vertices lists the machine's vertex share explicitly
// because g_i keeps whole-universe ids and cannot represent isolated members.
inline LocalPhaseResult local_phase(std::size_t machine_index, const Graph& g_i,
                                    const std::vector<Vertex>& vertices, double delta_star,
                                    const ParamProfile& profile, RngStream rng) {
  detail::CompactGraph cg = detail::compact_from_graph(g_i, vertices);
  return detail::roles_to_result(machine_index, cg,
                                 detail::local_phase_core(cg, delta_star, profile, std::move(rng)));
}

// same phase fed by an explicit edge list (the shape machine shards arrive in)
inline LocalPhaseResult local_phase_on_shard(std::size_t machine_index,
                                             const std::vector<Vertex>& vertices,
                                             const std::vector<Edge>& edges, double delta_star,
                                             const ParamProfile& profile, RngStream rng) {
  detail::CompactGraph cg = detail::compact_from_edges(vertices, edges);
  return detail::roles_to_result(machine_index, cg,
                                 detail::local_phase_core(cg, delta_star, profile, std::move(rng)));
}

struct MachineRoles {
  std::vector<Vertex> reference, heavy, friends;
};

// per-machine role sets of one emulated phase, kept for diagnostics only
struct PhaseConfiguration {
  std::vector<MachineRoles> machines;
};

struct AssignmentSampler {
  enum class Mode { uniform_iid };

  AssignmentSampler(std::size_t machine_count, RngStream s)
      : machines(machine_count), stream(std::move(s)) {}

  Mode mode = Mode::uniform_iid;
  std::size_t machines;
  RngStream stream;

  // one independent uniform machine index per alive vertex, ascending id order.
  // slots outside alive read kNoMachine.
  std::vector<std::uint32_t> assign(const VertexSet& alive) {
    if (machines == 0)
      throw std::invalid_argument("AssignmentSampler: need at least one machine");
    std::vector<std::uint32_t> phi(alive.universe(), kNoMachine);
    alive.for_each([&](Vertex v) {
      phi[v] = static_cast<std::uint32_t>(stream.uniform_index(machines));
    });
    return phi;
  }
};

struct EmulatePhaseOutput {
  VertexSet survivors;
  Matching matched;
  PhaseConfiguration config;
  std::vector<std::uint32_t> assignment;
  std::vector<std::size_t> machine_sizes;
  bool degree_precondition_ok = true;
};

// one full emulated phase: scatter alive vertices across m machines, run the
// sampled local phase on every induced piece with threshold delta/m, union the
// results. machine i draws from rng.fork(i), so m=1 reproduces a single
// local_phase driven by rng.fork(0) exactly.
inline EmulatePhaseOutput emulate_phase(double delta, const Graph& g_star,
                                        const VertexSet& alive, std::size_t m,
                                        AssignmentSampler& sampler,
                                        const ParamProfile& profile, RngStream rng) {
  if (m < 1) throw std::invalid_argument("emulate_phase: need m >= 1");
  if (sampler.machines != m)
    throw std::invalid_argument("emulate_phase: sampler machine count mismatch");
  const std::size_t n = g_star.vertex_count();

  EmulatePhaseOutput out;
  out.survivors = VertexSet(n);
  out.degree_precondition_ok =
      static_cast<double>(max_degree_within(g_star, alive)) <= 1.5 * delta;
  if (!out.degree_precondition_ok && profile.style == ProfileStyle::paper)
    throw ContractViolation("emulate_phase: max alive degree exceeds 1.5 * delta");

  out.assignment = sampler.assign(alive);
  std::vector<std::vector<Vertex>> verts(m);
  alive.for_each([&](Vertex v) { verts[out.assignment[v]].push_back(v); });
  std::vector<std::vector<Edge>> shard_edges(m);
  for (const Edge& e : g_star.edges()) {
    if (!alive.contains(e.u) || !alive.contains(e.v)) continue;
    std::uint32_t mu = out.assignment[e.u];
    if (mu == out.assignment[e.v]) shard_edges[mu].push_back(e);
  }

  out.config.machines.resize(m);
  out.machine_sizes.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    out.machine_sizes[i] = verts[i].size();
    LocalPhaseResult lp =
        local_phase_on_shard(i, verts[i], shard_edges[i],
                             delta / static_cast<double>(m), profile, rng.fork(i));
    for (Vertex v : lp.survivors) out.survivors.insert(v);
    out.matched.append(lp.matched);
    out.config.machines[i] = {std::move(lp.reference), std::move(lp.heavy),
                              std::move(lp.friends)};
  }
  return out;
}

}  // namespace mpcmatch
