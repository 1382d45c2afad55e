#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "mpcmatch/edge_io.hpp"
#include "mpcmatch/generators.hpp"
#include "mpcmatch/global_mpc.hpp"
#include "mpcmatch/graph.hpp"
#include "mpcmatch/parallel_matcher.hpp"
#include "mpcmatch/params.hpp"
#include "mpcmatch/verify.hpp"

namespace mpcmatch {

// which input graph to run on; family selects which of the other fields matter
struct GraphSpec {
    std::string family;   // "er" | "regular" | "union_regulars" | "file"
    std::size_t n = 0;    // er, regular
    double p = 0.0;       // er
    std::size_t d = 0;    // regular
    std::size_t t = 0;    // union_regulars
    std::string path;     // file

    bool operator==(const GraphSpec& o) const {
        return family == o.family && n == o.n && p == o.p && d == o.d && t == o.t &&
               path == o.path;
    }
};

inline std::string graph_spec_id(const GraphSpec& gs) {
    std::ostringstream os;
    if (gs.family == "er") os << "er(n=" << gs.n << ",p=" << gs.p << ")";
    else if (gs.family == "regular") os << "regular(n=" << gs.n << ",d=" << gs.d << ")";
    else if (gs.family == "union_regulars") os << "union_regulars(t=" << gs.t << ")";
    else if (gs.family == "file") os << "file(" << gs.path << ")";
    else os << gs.family;
    return os.str();
}

inline Graph build_graph_from_spec(const GraphSpec& gs, std::uint64_t seed) {
    if (gs.family == "er") return gen_erdos_renyi(gs.n, gs.p, seed);
    if (gs.family == "regular") return gen_random_regular(gs.n, gs.d, seed);
    if (gs.family == "union_regulars") return gen_union_of_regulars(gs.t, seed);
    if (gs.family == "file") return read_edge_list_file(gs.path);
    throw std::invalid_argument("build_graph_from_spec: unknown family '" + gs.family + "'");
}

struct ExperimentConfig {
    GraphSpec graph;
    std::string algorithm = "parallel";   // "global" | "parallel" | "twoeps"
    std::string profile_name = "desk";
    std::map<std::string, double> overrides;
    std::uint64_t space = 64;
    std::vector<std::uint64_t> seeds;
    std::size_t repetitions = 1;          // reruns per seed with distinct streams
    double eps = 0.25;                    // twoeps only
    std::size_t twoeps_c = 4;             // twoeps only
    std::string out_dir;                  // empty = no files written
};

namespace detail {

inline void require_member(const nlohmann::json& j, const char* key, const char* where) {
    if (!j.contains(key)) {
        throw std::invalid_argument(std::string("config: missing field '") + key + "' in " + where);
    }
}

}  // namespace detail

// parses a config document, naming the offending field on error
inline ExperimentConfig parse_config_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument(std::string("config: not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw std::invalid_argument("config: top level must be an object");

    ExperimentConfig cfg;
    detail::require_member(j, "graph", "top level");
    const auto& jg = j.at("graph");
    if (!jg.is_object()) throw std::invalid_argument("config: 'graph' must be an object");
    detail::require_member(jg, "family", "'graph'");
    cfg.graph.family = jg.at("family").get<std::string>();
    if (cfg.graph.family == "er") {
        detail::require_member(jg, "n", "'graph'");
        detail::require_member(jg, "p", "'graph'");
        cfg.graph.n = jg.at("n").get<std::size_t>();
        cfg.graph.p = jg.at("p").get<double>();
    } else if (cfg.graph.family == "regular") {
        detail::require_member(jg, "n", "'graph'");
        detail::require_member(jg, "d", "'graph'");
        cfg.graph.n = jg.at("n").get<std::size_t>();
        cfg.graph.d = jg.at("d").get<std::size_t>();
    } else if (cfg.graph.family == "union_regulars") {
        detail::require_member(jg, "t", "'graph'");
        cfg.graph.t = jg.at("t").get<std::size_t>();
    } else if (cfg.graph.family == "file") {
        detail::require_member(jg, "path", "'graph'");
        cfg.graph.path = jg.at("path").get<std::string>();
    } else {
        throw std::invalid_argument("config: unknown graph family '" + cfg.graph.family + "'");
    }

    if (j.contains("algorithm")) cfg.algorithm = j.at("algorithm").get<std::string>();
    if (cfg.algorithm != "global" && cfg.algorithm != "parallel" && cfg.algorithm != "twoeps") {
        throw std::invalid_argument("config: unknown algorithm '" + cfg.algorithm + "'");
    }
    if (j.contains("profile")) cfg.profile_name = j.at("profile").get<std::string>();
    if (j.contains("overrides")) {
        const auto& jo = j.at("overrides");
        if (!jo.is_object()) throw std::invalid_argument("config: 'overrides' must be an object");
        for (auto it = jo.begin(); it != jo.end(); ++it) {
            cfg.overrides[it.key()] = it.value().get<double>();
        }
    }
    if (j.contains("space")) cfg.space = j.at("space").get<std::uint64_t>();
    if (cfg.space < 1) throw std::invalid_argument("config: 'space' must be at least 1");
    detail::require_member(j, "seeds", "top level");
    const auto& js = j.at("seeds");
    if (!js.is_array() || js.empty()) {
        throw std::invalid_argument("config: 'seeds' must be a nonempty array");
    }
    for (const auto& s : js) cfg.seeds.push_back(s.get<std::uint64_t>());
    if (j.contains("repetitions")) cfg.repetitions = j.at("repetitions").get<std::size_t>();
    if (cfg.repetitions < 1) throw std::invalid_argument("config: 'repetitions' must be at least 1");
    if (j.contains("eps")) cfg.eps = j.at("eps").get<double>();
    if (j.contains("twoeps_c")) cfg.twoeps_c = j.at("twoeps_c").get<std::size_t>();
    if (j.contains("out_dir")) cfg.out_dir = j.at("out_dir").get<std::string>();
    return cfg;
}

inline ExperimentConfig load_config_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("load_config_file: cannot open " + path);
    std::ostringstream buf;
    buf << is.rdbuf();
    return parse_config_json(buf.str());
}

struct ResultRecord {
    std::string config_id;
    std::uint64_t seed = 0;
    std::size_t rep = 0;
    std::size_t matching_size = 0;
    double ratio_upper_bound = 0.0;
    std::uint64_t rounds = 0;
    std::size_t blocks = 0;        // compression blocks (parallel), phases (global),
                                   // repetitions (twoeps)
    std::string violations;        // empty when the matching checked out
    double wall_ms = 0.0;
};

namespace detail {

inline std::string format_ratio(double r) {
    if (std::isinf(r)) return "inf";
    std::ostringstream os;
    os << r;
    return os.str();
}

}  // namespace detail

// wall_ms stays the last column so reruns can be compared byte for byte after
// cutting it off
inline void write_results_csv(std::ostream& os, const std::vector<ResultRecord>& records) {
    os << "config,seed,rep,matching_size,ratio_upper_bound,rounds,blocks,violations,wall_ms\n";
    for (const auto& r : records) {
        os << r.config_id << "," << r.seed << "," << r.rep << "," << r.matching_size << ","
           << detail::format_ratio(r.ratio_upper_bound) << "," << r.rounds << "," << r.blocks
           << "," << r.violations << "," << r.wall_ms << "\n";
    }
}

inline std::string results_json(const ExperimentConfig& cfg,
                                const std::vector<ResultRecord>& records) {
    nlohmann::json j;
    j["config"] = {
        {"graph", graph_spec_id(cfg.graph)},
        {"algorithm", cfg.algorithm},
        {"profile", cfg.profile_name},
        {"space", cfg.space},
        {"seeds", cfg.seeds},
        {"repetitions", cfg.repetitions},
    };
    if (cfg.algorithm == "twoeps") {
        j["config"]["eps"] = cfg.eps;
        j["config"]["c"] = cfg.twoeps_c;
    }
    j["results"] = nlohmann::json::array();
    for (const auto& r : records) {
        nlohmann::json rr = {
            {"seed", r.seed},
            {"rep", r.rep},
            {"matching_size", r.matching_size},
            {"rounds", r.rounds},
            {"blocks", r.blocks},
            {"violations", r.violations},
            {"wall_ms", r.wall_ms},
        };
        if (std::isinf(r.ratio_upper_bound)) rr["ratio_upper_bound"] = "inf";
        else rr["ratio_upper_bound"] = r.ratio_upper_bound;
        j["results"].push_back(std::move(rr));
    }
    return j.dump(2);
}

namespace detail {

struct LedgerRow {
    std::uint64_t seed;
    std::size_t rep;
    LedgerEntry entry;
};

inline void write_ledger_csv(std::ostream& os, const std::vector<LedgerRow>& rows) {
    os << "seed,rep,round,primitive,machines,max_sent,max_recv,max_stored\n";
    for (const auto& r : rows) {
        os << r.seed << "," << r.rep << "," << r.entry.round << "," << r.entry.primitive << ","
           << r.entry.machines << "," << r.entry.max_sent << "," << r.entry.max_recv << ","
           << r.entry.max_stored << "\n";
    }
}

}  // namespace detail

// runs every seed x repetition cell, verifies each matching, and writes
// results.csv / results.json / ledger.csv under out_dir when set.
// identical configs produce identical outputs except for the wall_ms column.
inline std::vector<ResultRecord> run_experiment(const ExperimentConfig& cfg) {
    std::vector<ResultRecord> records;
    std::vector<detail::LedgerRow> ledger_rows;
    const std::string config_id = graph_spec_id(cfg.graph) + "/" + cfg.algorithm;

    for (std::uint64_t seed : cfg.seeds) {
        RngStream master(seed);
        const Graph g = build_graph_from_spec(cfg.graph, master.fork(100).seed());
        ParamProfile profile = resolve_profile(cfg.profile_name,
                                               std::max<std::size_t>(g.vertex_count(), 2),
                                               cfg.overrides);
        for (std::size_t rep = 0; rep < cfg.repetitions; ++rep) {
            RngStream algo_rng = master.fork(200).fork(rep);
            ResultRecord rec;
            rec.config_id = config_id;
            rec.seed = seed;
            rec.rep = rep;
            const auto t0 = std::chrono::steady_clock::now();
            Matching matching;
            if (cfg.algorithm == "global") {
                Cluster c = make_cluster_for(g.vertex_count(), g.edge_count(), cfg.space);
                MpcGlobalResult res = mpc_global_alg(c, g, VertexSet::all(g.vertex_count()),
                                                     static_cast<double>(g.vertex_count()),
                                                     std::move(algo_rng));
                matching = std::move(res.matching);
                rec.rounds = c.rounds();
                rec.blocks = res.phases;
                for (const auto& e : c.ledger().entries()) {
                    ledger_rows.push_back({seed, rep, e});
                }
            } else if (cfg.algorithm == "parallel") {
                RunResult res = parallel_alg(g, cfg.space, profile, std::move(algo_rng));
                matching = std::move(res.matching);
                rec.rounds = res.total_rounds;
                rec.blocks = res.blocks.size();
                for (const auto& e : res.ledger.entries()) {
                    ledger_rows.push_back({seed, rep, e});
                }
            } else {
                TwoEpsReport res = repeat_for_two_plus_eps_report(g, cfg.space, cfg.eps, profile,
                                                                 std::move(algo_rng),
                                                                 cfg.twoeps_c);
                matching = std::move(res.matching);
                rec.rounds = res.total_rounds;
                rec.blocks = res.repetitions;
                for (const auto& led : res.per_rep_ledgers) {
                    for (const auto& e : led.entries()) ledger_rows.push_back({seed, rep, e});
                }
            }
            const auto t1 = std::chrono::steady_clock::now();
            rec.wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
            rec.matching_size = matching.size();
            if (auto bad = verify_matching(g, matching)) {
                rec.violations = bad->describe();
                rec.ratio_upper_bound = -1.0;
            } else {
                rec.ratio_upper_bound = approx_report(g, matching, seed).ratio_upper_bound;
            }
            records.push_back(std::move(rec));
        }
    }

    if (!cfg.out_dir.empty()) {
        std::filesystem::create_directories(cfg.out_dir);
        const std::filesystem::path dir(cfg.out_dir);
        {
            std::ofstream os(dir / "results.csv");
            if (!os) throw std::runtime_error("run_experiment: cannot write results.csv");
            write_results_csv(os, records);
        }
        {
            std::ofstream os(dir / "results.json");
            if (!os) throw std::runtime_error("run_experiment: cannot write results.json");
            os << results_json(cfg, records) << "\n";
        }
        {
            std::ofstream os(dir / "ledger.csv");
            if (!os) throw std::runtime_error("run_experiment: cannot write ledger.csv");
            detail::write_ledger_csv(os, ledger_rows);
        }
    }
    return records;
}

inline bool all_clean(const std::vector<ResultRecord>& records) {
    for (const auto& r : records) {
        if (!r.violations.empty()) return false;
    }
    return true;
}

// side-by-side round counts for two configs over the same graph and seeds
inline int compare_rounds(const ExperimentConfig& a, const ExperimentConfig& b,
                          std::ostream& os) {
    if (!(a.graph == b.graph)) {
        throw std::invalid_argument("compare_rounds: configs use different graphs");
    }
    if (a.seeds != b.seeds) {
        throw std::invalid_argument("compare_rounds: configs use different seeds");
    }
    ExperimentConfig ca = a;
    ExperimentConfig cb = b;
    ca.out_dir.clear();
    cb.out_dir.clear();
    ca.repetitions = 1;
    cb.repetitions = 1;
    const auto ra = run_experiment(ca);
    const auto rb = run_experiment(cb);
    os << "seed," << ca.algorithm << "_rounds," << cb.algorithm << "_rounds,ratio\n";
    for (std::size_t i = 0; i < ra.size(); ++i) {
        const double ratio = rb[i].rounds == 0
                                 ? 0.0
                                 : static_cast<double>(ra[i].rounds) /
                                       static_cast<double>(rb[i].rounds);
        os << ra[i].seed << "," << ra[i].rounds << "," << rb[i].rounds << "," << ratio << "\n";
    }
    return all_clean(ra) && all_clean(rb) ? 0 : 1;
}

}  // namespace mpcmatch
