#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "contracts.hpp"
#include "global_mpc.hpp"
#include "graph.hpp"
#include "matching.hpp"
#include "mpc_runtime.hpp"
#include "params.hpp"
#include "phase_emulator.hpp"
#include "rng.hpp"

namespace mpcmatch {

// machine RAM is modeled as this multiple of the nominal space parameter S:
// the security check tolerates loads up to 8S edges (16S words) plus the
// machine's vertex share before zeroing a machine, so the audit budget must
// sit above that. every primitive audits against this budget; 18S covers the
// worst load the algorithm itself declares legal.
inline constexpr std::uint64_t kSpaceBudgetFactor = 18;

// rng lineage tag for the tail stage, far outside any block index
inline constexpr std::uint64_t kTailTag = 0x7a11ull << 32;

inline std::uint64_t effective_space(std::uint64_t s, std::size_t n) {
  // a machine never needs more than ~n words of state for this algorithm;
  // extra space buys nothing, so cap it (the huge-S regime behaves like S=n)
  return std::min<std::uint64_t>(s, std::max<std::size_t>(n, 1));
}

inline std::size_t num_machines(double n, double delta, double s) {
  if (!(n > 0) || !(delta > 0) || !(s > 0))
    throw std::invalid_argument("num_machines: need n, delta, s > 0");
  const double m = std::floor(std::sqrt(n * delta / s));
  return m < 1 ? 1 : static_cast<std::size_t>(m);
}

inline std::size_t num_phases(double delta, std::size_t m, const ParamProfile& profile) {
  const double ratio = delta / static_cast<double>(m);
  if (!(ratio > 1)) return 1;
  double t;
  if (profile.style == ProfileStyle::desk) {
    t = std::ceil(profile.tau_frac * std::log2(ratio));
  } else {
    t = std::ceil(profile.tau_frac * std::log(ratio) /
                  std::log(profile.tau_base_coeff * alpha(profile)));
  }
  return t < 1 ? 1 : static_cast<std::size_t>(t);
}

// outer-loop guard, evaluated in log space because the paper-style guard term
// overflows double precision. the 1e-9 slack keeps exact power-of-two
// boundaries (common under the desk profile) from flickering on rounding.
inline double loop_guard_threshold_log(std::size_t n, double s_eff,
                                       const ParamProfile& profile) {
  const double ln_n = std::log(static_cast<double>(n));
  double term;
  if (profile.style == ProfileStyle::desk)
    term = profile.loop_exp * std::log(profile.loop_base);
  else
    term = profile.loop_exp * std::log(profile.loop_base * ln_n);
  return ln_n - std::log(s_eff) + term;
}

inline bool loop_guard_holds(double delta, std::size_t n, double s_eff,
                             const ParamProfile& profile) {
  if (n < 2 || !(delta > 0)) return false;
  return std::log(delta) + 1e-9 >= loop_guard_threshold_log(n, s_eff, profile);
}

struct BlockPlanEntry {
  double delta = 0;
  std::size_t m = 0;
  std::size_t tau = 0;
};

// the (delta, m, tau) schedule is pure arithmetic in (n, s, profile); this
// reproduces the driver's loop without touching a graph
inline std::vector<BlockPlanEntry> compression_schedule(std::size_t n, std::uint64_t s,
                                                        const ParamProfile& profile) {
  const double s_eff = static_cast<double>(effective_space(s, n));
  std::vector<BlockPlanEntry> plan;
  double delta = static_cast<double>(n);
  while (loop_guard_holds(delta, n, s_eff, profile)) {
    BlockPlanEntry e;
    e.delta = delta;
    e.m = num_machines(static_cast<double>(n), delta, s_eff);
    e.tau = num_phases(delta, e.m, profile);
    plan.push_back(e);
    delta /= std::pow(2.0, static_cast<double>(e.tau));
  }
  return plan;
}

// block shape computed purely from logarithms, for structural checks at
// magnitudes where n, delta and the guard term are far beyond double range
struct BlockPlanLog {
  double ln_m = 0;
  double ln_delta_over_m = 0;
  std::size_t tau = 0;
};

inline bool loop_guard_holds_log(double ln_delta, double ln_n, double ln_s,
                                 const ParamProfile& profile) {
  double term;
  if (profile.style == ProfileStyle::desk)
    term = profile.loop_exp * std::log(profile.loop_base);
  else
    term = profile.loop_exp * std::log(profile.loop_base * ln_n);
  return ln_delta + 1e-9 >= ln_n - ln_s + term;
}

inline BlockPlanLog plan_block_log(double ln_n, double ln_delta, double ln_s,
                                   const ParamProfile& profile) {
  BlockPlanLog b;
  b.ln_m = std::max(0.0, 0.5 * (ln_n + ln_delta - ln_s));
  b.ln_delta_over_m = ln_delta - b.ln_m;
  double t;
  if (profile.style == ProfileStyle::desk) {
    t = std::ceil(profile.tau_frac * b.ln_delta_over_m / std::log(2.0));
  } else {
    const double ln_alpha = std::log(profile.alpha_coeff) + std::log(std::log(static_cast<double>(profile.n)));
    // alpha = alpha_coeff * ln n evaluated from the profile's own n; callers
    // probing synthetic magnitudes pass the matching ln_n
    t = std::ceil(profile.tau_frac * b.ln_delta_over_m /
                  (std::log(profile.tau_base_coeff) + ln_alpha));
  }
  b.tau = t < 1 ? 1 : static_cast<std::size_t>(t);
  return b;
}

struct CompressionBlockReport {
  double delta_in = 0;
  std::size_t m = 0;
  std::size_t tau = 0;
  std::size_t machines_zeroed = 0;
  std::size_t survivors = 0;
  std::size_t matched_added = 0;
  std::uint64_t rounds_charged = 0;
};

struct RunResult {
  Matching matching;
  RoundLedger ledger;  // entries charged by this run only
  std::vector<CompressionBlockReport> blocks;
  std::size_t tail_phases = 0;
  std::uint64_t total_rounds = 0;
  std::uint64_t master_seed = 0;
  std::string profile_name;
};

// cluster sized so the whole input (and the fattest primitive volume, about
// 4(E+n) words) spreads across machines within the per-machine budget
inline Cluster make_cluster_for(std::size_t n, std::size_t edge_count, std::uint64_t s) {
  const std::uint64_t s_eff = effective_space(s, n);
  std::size_t m = 1;
  if (n >= 1) {
    m = std::max(m, num_machines(static_cast<double>(std::max<std::size_t>(n, 1)),
                                 static_cast<double>(std::max<std::size_t>(n, 1)),
                                 static_cast<double>(s_eff)));
    const std::uint64_t vol = 4 * (static_cast<std::uint64_t>(n) + edge_count);
    m = std::max<std::size_t>(m, static_cast<std::size_t>((vol + s_eff - 1) / s_eff));
  }
  return Cluster(m, kSpaceBudgetFactor * s_eff);
}

// the round-compression driver. while the threshold is large, one partition
// round emulates tau sampled phases machine-locally; afterwards leftover
// high-degree vertices are dropped (one counting round) and the remaining
// low-degree graph is finished by the simulated threshold-halving matcher.
inline RunResult parallel_alg(const Graph& g, std::uint64_t s, const ParamProfile& profile,
                              RngStream rng, Cluster& cluster) {
  if (s < 1) throw std::invalid_argument("parallel_alg: need s >= 1");
  const std::size_t n = g.vertex_count();
  if (n >= 2 && profile.n != n)
    throw std::invalid_argument("parallel_alg: profile resolved for different n");
  const double s_eff = static_cast<double>(effective_space(s, n));
  const double edge_limit = profile.overflow_factor * s_eff;  // security threshold

  const std::size_t ledger_mark = cluster.ledger().size();
  const std::uint64_t rounds_mark = cluster.rounds();

  RunResult res;
  res.master_seed = rng.seed();
  res.profile_name = profile.name;

  VertexSet alive = VertexSet::all(n);
  double delta = static_cast<double>(n);
  std::uint64_t block_idx = 0;

  while (loop_guard_holds(delta, n, s_eff, profile)) {
    const std::uint64_t block_rounds_before = cluster.rounds();
    CompressionBlockReport rep;
    rep.delta_in = delta;
    rep.m = num_machines(static_cast<double>(n), delta, s_eff);
    rep.tau = num_phases(delta, rep.m, profile);

    if (profile.style == ProfileStyle::paper) {
      // structural floor the analysis promises whenever a block runs
      const double ln_ratio = std::log(delta) - std::log(static_cast<double>(rep.m));
      const double ln_floor = 16.0 * std::log(200.0 * std::log(static_cast<double>(n)));
      if (ln_ratio + 1e-9 < ln_floor)
        throw ContractViolation("parallel_alg: threshold floor violated in a block");
    }

    RngStream block_rng = rng.fork(block_idx);
    AssignmentSampler sampler(rep.m, block_rng.fork(0));
    const std::vector<std::uint32_t> phi = sampler.assign(alive);
    PartitionOutcome part = partition_to_machines(cluster, g, alive, phi, rep.m);

    VertexSet next_alive(n);
    std::size_t matched_before = res.matching.size();
    for (std::size_t i = 0; i < rep.m; ++i) {
      MachineShard& shard = part.shards[i];
      if (part.overflow[i] ||
          static_cast<double>(shard.edges.size()) > edge_limit) {
        // security path: the machine's whole share is dropped from the run
        ++rep.machines_zeroed;
        continue;
      }
      RngStream machine_rng = block_rng.fork(1 + i);
      std::vector<Vertex> verts = std::move(shard.vertices);
      std::vector<Edge> edges = std::move(shard.edges);
      for (std::size_t j = 1; j <= rep.tau; ++j) {
        const double thr =
            delta / (std::pow(2.0, static_cast<double>(j - 1)) * static_cast<double>(rep.m));
        LocalPhaseResult lp = local_phase_on_shard(i, verts, edges, thr, profile,
                                                   machine_rng.fork(j - 1));
        res.matching.append(lp.matched);
        verts = std::move(lp.survivors);
        if (j < rep.tau) {
          VertexSet keep = VertexSet::from_vertices(n, verts);
          std::vector<Edge> kept;
          kept.reserve(edges.size());
          for (const Edge& e : edges)
            if (keep.contains(e.u) && keep.contains(e.v)) kept.push_back(e);
          edges = std::move(kept);
        }
      }
      for (Vertex v : verts) next_alive.insert(v);
    }

    alive = std::move(next_alive);
    delta /= std::pow(2.0, static_cast<double>(rep.tau));
    rep.survivors = alive.size();
    rep.matched_added = res.matching.size() - matched_before;
    rep.rounds_charged = cluster.rounds() - block_rounds_before;
    res.blocks.push_back(rep);
    ++block_idx;
  }

  // drop survivors whose degree is still at least twice the final threshold
  // (one counting round), then finish with the simulated matcher
  std::vector<std::uint32_t> deg = count_neighbors_in_set(cluster, g, alive, alive);
  std::vector<Vertex> too_heavy;
  alive.for_each([&](Vertex v) {
    if (static_cast<double>(deg[v]) >= 2.0 * delta && 2.0 * delta > 0)
      too_heavy.push_back(v);
  });
  alive.erase_all(too_heavy);

  MpcGlobalResult tail =
      mpc_global_alg(cluster, g, std::move(alive), 2.0 * delta, rng.fork(kTailTag));
  res.matching.append(tail.matching);
  res.tail_phases = tail.phases;

  // per-run slice, rebased so round numbering starts at 1 for every run
  for (std::size_t i = ledger_mark; i < cluster.ledger().size(); ++i) {
    LedgerEntry e = cluster.ledger().entries()[i];
    e.round -= rounds_mark;
    res.ledger.append(std::move(e));
  }
  res.total_rounds = cluster.rounds() - rounds_mark;
  return res;
}

// convenience: size a fresh cluster for the instance and run
inline RunResult parallel_alg(const Graph& g, std::uint64_t s, const ParamProfile& profile,
                              RngStream rng) {
  Cluster cluster = make_cluster_for(g.vertex_count(), g.edge_count(), s);
  return parallel_alg(g, s, profile, std::move(rng), cluster);
}

struct TwoEpsReport {
  Matching matching;
  std::size_t repetitions = 0;
  std::uint64_t total_rounds = 0;
  std::vector<std::size_t> per_rep_matched;
  std::vector<RoundLedger> per_rep_ledgers;
};

// repeated-run wrapper: run the driver, delete matched vertices, repeat
// ceil(c*log2(1/eps)) times, union the matchings (valid because matched
// vertices leave the graph between runs)
inline TwoEpsReport repeat_for_two_plus_eps_report(const Graph& g, std::uint64_t s,
                                                   double eps, const ParamProfile& profile,
                                                   RngStream rng, std::size_t c = 4) {
  if (!(eps > 0.0 && eps <= 0.5))
    throw std::invalid_argument("repeat_for_two_plus_eps: need 0 < eps <= 1/2");
  if (c < 1) throw std::invalid_argument("repeat_for_two_plus_eps: need c >= 1");
  const std::size_t reps = static_cast<std::size_t>(
      std::ceil(static_cast<double>(c) * std::log2(1.0 / eps)));

  TwoEpsReport out;
  out.repetitions = reps;
  VertexSet remaining = VertexSet::all(g.vertex_count());
  for (std::size_t rep = 0; rep < reps; ++rep) {
    Graph gi = induced_subgraph(g, remaining);
    RunResult rr = parallel_alg(gi, s, profile, rng.fork(rep));
    out.per_rep_matched.push_back(rr.matching.size());
    out.per_rep_ledgers.push_back(rr.ledger);
    out.total_rounds += rr.total_rounds;
    for (const Edge& e : rr.matching.edges()) {
      remaining.erase(e.u);
      remaining.erase(e.v);
    }
    out.matching.append(rr.matching);
  }
  return out;
}

inline Matching repeat_for_two_plus_eps(const Graph& g, std::uint64_t s, double eps,
                                        const ParamProfile& profile, RngStream rng,
                                        std::size_t c = 4) {
  return repeat_for_two_plus_eps_report(g, s, eps, profile, std::move(rng), c).matching;
}

}  // namespace mpcmatch
