#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "contracts.hpp"
#include "graph.hpp"
#include "rng.hpp"

namespace mpcmatch {

// a machine would have to hold more words than its budget allows
struct SpaceOverflow : std::runtime_error {
  SpaceOverflow(const std::string& primitive, std::size_t machine_idx,
                std::uint64_t words_needed, std::uint64_t budget)
      : std::runtime_error(primitive + ": machine " + std::to_string(machine_idx) +
                           " needs " + std::to_string(words_needed) + " words, budget " +
                           std::to_string(budget)),
        machine(machine_idx),
        words(words_needed),
        space(budget) {}
  std::size_t machine;
  std::uint64_t words;
  std::uint64_t space;
};

struct LedgerEntry {
  std::uint64_t round = 0;  // cumulative charged rounds after this entry
  std::string primitive;
  std::size_t machines = 0;  // machines touched by the step
  std::uint64_t max_sent = 0;
  std::uint64_t max_recv = 0;
  std::uint64_t max_stored = 0;
};

class RoundLedger {
 public:
  void append(LedgerEntry e) {
    if (!entries_.empty() && e.round <= entries_.back().round)
      throw std::logic_error("RoundLedger: round indices must strictly increase");
    entries_.push_back(std::move(e));
  }

  const std::vector<LedgerEntry>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }
  std::size_t size() const { return entries_.size(); }

  std::uint64_t total_rounds() const {
    return entries_.empty() ? 0 : entries_.back().round;
  }

  static const char* csv_header() {
    return "round,primitive,machines,max_sent,max_recv,max_stored";
  }

  void write_csv(std::ostream& os) const {
    os << csv_header() << '\n';
    for (const LedgerEntry& e : entries_)
      os << e.round << ',' << e.primitive << ',' << e.machines << ',' << e.max_sent
         << ',' << e.max_recv << ',' << e.max_stored << '\n';
  }

  friend bool operator==(const RoundLedger& a, const RoundLedger& b) {
    if (a.entries_.size() != b.entries_.size()) return false;
    for (std::size_t i = 0; i < a.entries_.size(); ++i) {
      const LedgerEntry &x = a.entries_[i], &y = b.entries_[i];
      if (x.round != y.round || x.primitive != y.primitive || x.machines != y.machines ||
          x.max_sent != y.max_sent || x.max_recv != y.max_recv ||
          x.max_stored != y.max_stored)
        return false;
    }
    return true;
  }

 private:
  std::vector<LedgerEntry> entries_;
};

// m machines with a fixed word budget each. primitives run logically in one
// process; this object only does the accounting: every primitive charges a
// constant number of rounds and reports its per-machine traffic maxima, which
// are audited against the budget.
class Cluster {
 public:
  Cluster(std::size_t machine_count, std::uint64_t space_per_machine,
          std::uint64_t round_cost = 1)
      : machines_(machine_count), space_(space_per_machine), round_cost_(round_cost) {
    if (machine_count < 1) throw std::invalid_argument("Cluster: need at least 1 machine");
    if (space_per_machine < 1) throw std::invalid_argument("Cluster: need at least 1 word");
    if (round_cost < 1) throw std::invalid_argument("Cluster: round cost must be >= 1");
  }

  std::size_t machine_count() const { return machines_; }
  std::uint64_t space_per_machine() const { return space_; }
  std::uint64_t round_cost() const { return round_cost_; }
  std::uint64_t rounds() const { return rounds_; }
  const RoundLedger& ledger() const { return ledger_; }

  // one synchronous step. primitives pre-check capacity with machine
  // attribution, so a violation here means the primitive's accounting lied.
  void charge(std::string primitive, std::size_t machines_touched, std::uint64_t max_sent,
              std::uint64_t max_recv, std::uint64_t max_stored) {
    if (max_sent > space_ || max_recv > space_ || max_stored > space_)
      throw std::logic_error("Cluster::charge: unaudited overflow in " + primitive);
    if (machines_touched > machines_)
      throw std::logic_error("Cluster::charge: more machines touched than exist");
    rounds_ += round_cost_;
    ledger_.append({rounds_, std::move(primitive), machines_touched, max_sent, max_recv,
                    max_stored});
  }

 private:
  std::size_t machines_;
  std::uint64_t space_;
  std::uint64_t round_cost_;
  std::uint64_t rounds_ = 0;
  RoundLedger ledger_;
};

inline Cluster new_cluster(std::size_t m, std::uint64_t s) { return Cluster(m, s); }

namespace detail {

// words on the fullest machine when `records` records of `wpr` words each are
// spread evenly
inline std::uint64_t even_share_words(std::uint64_t records, std::uint64_t wpr,
                                      std::size_t m) {
  return ((records + m - 1) / m) * wpr;
}

inline std::uint64_t audit_even_spread(const Cluster& c, const char* primitive,
                                       std::uint64_t records, std::uint64_t wpr) {
  std::uint64_t share = even_share_words(records, wpr, c.machine_count());
  if (share > c.space_per_machine())
    throw SpaceOverflow(primitive, 0, share, c.space_per_machine());
  return share;
}

inline void radix_sort_by_key(std::vector<std::pair<std::uint64_t, std::uint32_t>>& a) {
  std::vector<std::pair<std::uint64_t, std::uint32_t>> buf(a.size());
  for (unsigned pass = 0; pass < 4; ++pass) {
    const unsigned shift = pass * 16;
    std::uint32_t hist[65536] = {0};
    for (const auto& p : a) ++hist[(p.first >> shift) & 0xffff];
    std::uint64_t sum = 0;
    std::uint32_t start[65536];
    for (std::uint32_t b = 0; b < 65536; ++b) {
      start[b] = static_cast<std::uint32_t>(sum);
      sum += hist[b];
    }
    for (const auto& p : a) buf[start[(p.first >> shift) & 0xffff]++] = p;
    a.swap(buf);
  }
}

}  // namespace detail

// globally sorted order via a charged shuffle round. stable: equal keys keep
// input order. the sorted position is each record's global index.
template <class T, class KeyFn>
std::vector<T> dist_sort(Cluster& c, std::vector<T> items, KeyFn&& key,
                         std::uint64_t words_per_item = 1) {
  const std::uint64_t share =
      detail::audit_even_spread(c, "dist_sort", items.size(), words_per_item);
  std::vector<std::pair<std::uint64_t, std::uint32_t>> tagged(items.size());
  for (std::size_t i = 0; i < items.size(); ++i)
    tagged[i] = {key(items[i]), static_cast<std::uint32_t>(i)};
  if (items.size() >= (1u << 16)) {
    detail::radix_sort_by_key(tagged);
  } else {
    std::stable_sort(tagged.begin(), tagged.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
  }
  std::vector<T> out;
  out.reserve(items.size());
  for (const auto& [k, idx] : tagged) out.push_back(std::move(items[idx]));
  c.charge("dist_sort", c.machine_count(), share, share, share);
  return out;
}

// batched lookups; duplicate queries are fine, missing keys come back empty
inline std::vector<std::optional<std::int64_t>> parallel_search(
    Cluster& c, const std::vector<std::pair<std::uint64_t, std::int64_t>>& table,
    const std::vector<std::uint64_t>& queries) {
  std::unordered_map<std::uint64_t, std::int64_t> map;
  map.reserve(table.size());
  for (const auto& [k, v] : table)
    if (!map.emplace(k, v).second)
      throw std::invalid_argument("parallel_search: duplicate table key");
  const std::uint64_t share = detail::audit_even_spread(
      c, "parallel_search", table.size() + queries.size(), 2);
  std::vector<std::optional<std::int64_t>> out;
  out.reserve(queries.size());
  for (std::uint64_t q : queries) {
    auto it = map.find(q);
    out.push_back(it == map.end() ? std::nullopt : std::optional<std::int64_t>(it->second));
  }
  c.charge("parallel_search", c.machine_count(), share, share, share);
  return out;
}

namespace detail {

// sorted-run counting: one record per (row, marked neighbor) plus low/high
// sentinels per row, sorted, counts read off as index gaps. rows iterate the
// given row set; the packed key is row * (n+2) + code with code 0 for the low
// sentinel, w+1 for neighbor w, n+1 for the high sentinel.
inline std::vector<std::uint32_t> counts_by_sorting(Cluster& c, const Graph& g,
                                                    const VertexSet& marked,
                                                    const VertexSet& rows,
                                                    std::uint64_t* records_out) {
  const std::size_t n = g.vertex_count();
  const std::uint64_t stride = static_cast<std::uint64_t>(n) + 2;
  std::vector<std::uint64_t> rec;
  rows.for_each([&](Vertex u) {
    rec.push_back(stride * u);
    for (Vertex w : g.neighbors(u))
      if (marked.contains(w)) rec.push_back(stride * u + w + 1);
    rec.push_back(stride * u + n + 1);
  });
  if (records_out) *records_out = rec.size();
  rec = dist_sort(c, std::move(rec), [](std::uint64_t k) { return k; }, 2);

  std::vector<std::uint32_t> counts(n, 0);
  std::size_t low_pos = 0;
  for (std::size_t i = 0; i < rec.size(); ++i) {
    const std::uint64_t code = rec[i] % stride;
    if (code == 0) {
      low_pos = i;
    } else if (code == stride - 1) {
      const Vertex u = static_cast<Vertex>(rec[i] / stride);
      counts[u] = static_cast<std::uint32_t>(i - low_pos - 1);
    }
  }
  return counts;
}

}  // namespace detail

// |N(v) ∩ marked| for every vertex, via the charged sorting primitive
inline std::vector<std::uint32_t> count_neighbors_in_set(Cluster& c, const Graph& g,
                                                         const VertexSet& marked) {
  VertexSet rows = VertexSet::all(g.vertex_count());
  return detail::counts_by_sorting(c, g, marked, rows, nullptr);
}

// restriction to rows ∈ alive (marked is expected to already lie inside alive);
// rows outside read 0. records_out reports the sorted record volume so callers
// that memoize results can recharge identical traffic.
inline std::vector<std::uint32_t> count_neighbors_in_set(Cluster& c, const Graph& g,
                                                         const VertexSet& marked,
                                                         const VertexSet& alive,
                                                         std::uint64_t* records_out = nullptr) {
  return detail::counts_by_sorting(c, g, marked, alive, records_out);
}

// one uniformly chosen heavy neighbor per asker, realized as rank arithmetic on
// the sorted neighbor runs: rank r inside a run addresses the r-th smallest
// heavy neighbor. askers without heavy neighbors get kNoVertex and consume no
// randomness. draw order is ascending asker id, one uniform_index(h) each,
// matching the direct implementation's tape exactly.
inline std::vector<Vertex> random_heavy_neighbor(Cluster& c, const Graph& g,
                                                 const VertexSet& heavy,
                                                 const VertexSet& askers, RngStream& rng) {
  const std::size_t n = g.vertex_count();
  const std::uint64_t stride = static_cast<std::uint64_t>(n) + 2;
  std::vector<std::uint64_t> rec;
  askers.for_each([&](Vertex u) {
    rec.push_back(stride * u);
    for (Vertex w : g.neighbors(u))
      if (heavy.contains(w)) rec.push_back(stride * u + w + 1);
    rec.push_back(stride * u + n + 1);
  });
  rec = dist_sort(c, std::move(rec), [](std::uint64_t k) { return k; }, 2);

  std::vector<Vertex> out(n, kNoVertex);
  std::size_t low_pos = 0;
  for (std::size_t i = 0; i < rec.size(); ++i) {
    const std::uint64_t code = rec[i] % stride;
    if (code == 0) {
      low_pos = i;
    } else if (code == stride - 1) {
      const Vertex u = static_cast<Vertex>(rec[i] / stride);
      const std::uint64_t h = i - low_pos - 1;
      if (h == 0) continue;
      const std::uint64_t r = rng.uniform_index(h);
      out[u] = static_cast<Vertex>(rec[low_pos + 1 + r] % stride - 1);
    }
  }
  return out;
}

// every edge annotated with the values at its endpoints, aligned with g.edges()
inline std::vector<std::pair<std::uint64_t, std::uint64_t>> broadcast_vertex_values(
    Cluster& c, const Graph& g, const std::vector<std::uint64_t>& values) {
  if (values.size() != g.vertex_count())
    throw std::invalid_argument("broadcast_vertex_values: need one value per vertex");
  const std::uint64_t share = detail::audit_even_spread(
      c, "broadcast", 2 * g.edge_count() + g.vertex_count(), 1);
  std::vector<std::pair<std::uint64_t, std::uint64_t>> out;
  out.reserve(g.edge_count());
  for (const Edge& e : g.edges()) out.emplace_back(values[e.u], values[e.v]);
  c.charge("broadcast", c.machine_count(), share, share, share);
  return out;
}

struct MachineShard {
  std::vector<Vertex> vertices;
  std::vector<Edge> edges;
  std::uint64_t words() const { return vertices.size() + 2 * edges.size(); }
};

struct PartitionOutcome {
  std::vector<MachineShard> shards;
  std::vector<std::uint8_t> overflow;  // per machine: share exceeds the budget
  std::uint64_t parked_edges = 0;      // cross-machine edges held by nobody
  std::size_t overflow_count() const {
    std::size_t k = 0;
    for (std::uint8_t f : overflow) k += f;
    return k;
  }
};

// deal each alive vertex to machine phi[v]; an edge goes to the machine that
// got both its endpoints, cross-machine edges are parked for the block. a
// machine whose share would not fit is flagged instead of erroring (nothing is
// delivered to it) -- the caller's security check decides what to do.
inline PartitionOutcome partition_to_machines(Cluster& c, const Graph& g,
                                              const VertexSet& alive,
                                              const std::vector<std::uint32_t>& phi,
                                              std::size_t machines) {
  if (machines < 1 || machines > c.machine_count())
    throw std::invalid_argument("partition_to_machines: bad machine count");
  if (phi.size() != g.vertex_count())
    throw std::invalid_argument("partition_to_machines: phi must cover the universe");

  PartitionOutcome out;
  out.shards.resize(machines);
  out.overflow.assign(machines, 0);
  alive.for_each([&](Vertex v) {
    if (phi[v] >= machines)
      throw std::invalid_argument("partition_to_machines: phi out of range for vertex " +
                                  std::to_string(v));
    out.shards[phi[v]].vertices.push_back(v);
  });
  for (const Edge& e : g.edges()) {
    if (!alive.contains(e.u) || !alive.contains(e.v)) continue;
    if (phi[e.u] == phi[e.v])
      out.shards[phi[e.u]].edges.push_back(e);
    else
      ++out.parked_edges;
  }

  std::uint64_t delivered_max = 0;
  for (std::size_t i = 0; i < machines; ++i) {
    const std::uint64_t w = out.shards[i].words();
    if (w > c.space_per_machine())
      out.overflow[i] = 1;
    else
      delivered_max = std::max(delivered_max, w);
  }
  c.charge("partition", machines, delivered_max, delivered_max, delivered_max);
  return out;
}

}  // namespace mpcmatch
