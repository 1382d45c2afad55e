// acceptance gate: one pass/fail line per criterion, measured values printed,
// tolerances pinned in code. exits nonzero when any line fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "mpcmatch/mpcmatch.hpp"
#include "support/dp_oracle.hpp"

using namespace mpcmatch;
namespace fs = std::filesystem;

namespace {

struct CheckResult {
    std::string label;
    bool pass = false;
    std::string detail;
    double secs = 0;
};

std::vector<CheckResult> g_results;

template <typename Fn>
void run_check(const std::string& label, Fn&& fn) {
    const auto t0 = std::chrono::steady_clock::now();
    CheckResult r;
    r.label = label;
    try {
        fn(r);
    } catch (const std::exception& e) {
        r.pass = false;
        r.detail = std::string("unexpected exception: ") + e.what();
    }
    r.secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::cout << std::left << std::setw(4) << r.label << (r.pass ? "PASS  " : "FAIL  ")
              << r.detail << "  [" << std::fixed << std::setprecision(1) << r.secs << "s]\n"
              << std::defaultfloat;
    g_results.push_back(std::move(r));
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t k = v.size();
    return k % 2 ? v[k / 2] : 0.5 * (v[k / 2 - 1] + v[k / 2]);
}

std::uint64_t desk_space(std::size_t n) { return std::max<std::uint64_t>(1, n / 64); }

std::string read_file(const fs::path& p) {
    std::ifstream is(p);
    std::ostringstream buf;
    buf << is.rdbuf();
    return buf.str();
}

std::string strip_last_column(const std::string& text) {
    std::ostringstream out;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        auto pos = line.rfind(',');
        out << (pos == std::string::npos ? line : line.substr(0, pos)) << "\n";
    }
    return out.str();
}

Graph petersen() {
    return build_graph(10, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 0},
                            {5, 7}, {7, 9}, {9, 6}, {6, 8}, {8, 5},
                            {0, 5}, {1, 6}, {2, 7}, {3, 8}, {4, 9}});
}

// carried from the criterion-1 sweep into the criterion-2 line
struct HalvingStats {
    std::size_t phases_checked = 0;
    std::size_t violations = 0;
};
HalvingStats g_halving;

}  // namespace

// 1000 mixed runs, three graph families x three algorithms, all matchings valid
static void criterion1(CheckResult& r) {
    std::vector<Graph> graphs;
    graphs.push_back(gen_erdos_renyi(1000, 0.01, 9001));
    graphs.push_back(gen_random_regular(1000, 16, 9002));
    graphs.push_back(gen_union_of_regulars(6, 9003));
    std::vector<ParamProfile> profiles;
    for (const Graph& g : graphs) profiles.push_back(resolve_profile("desk", g.vertex_count()));

    const int runs = 1000;
    std::size_t bad = 0;
    for (int i = 0; i < runs; ++i) {
        const Graph& g = graphs[i % 3];
        const ParamProfile& prof = profiles[i % 3];
        const std::size_t n = g.vertex_count();
        const std::uint64_t seed = 40000 + static_cast<std::uint64_t>(i);
        Matching m;
        switch ((i / 3) % 3) {
            case 0: {
                GlobalTrace trace = global_alg_trace(g, static_cast<double>(n), RngStream(seed));
                m = trace.matching;
                // criterion 2 walk: replay removals, re-measuring surviving degrees
                VertexSet alive = VertexSet::all(n);
                double delta = static_cast<double>(n);
                for (const PhaseOutcome& ph : trace.phases) {
                    ph.heavy.for_each([&](Vertex v) { alive.erase(v); });
                    ph.friends.for_each([&](Vertex v) { alive.erase(v); });
                    ++g_halving.phases_checked;
                    if (static_cast<double>(max_degree_within(g, alive)) >= delta / 2.0)
                        ++g_halving.violations;
                    delta /= 2.0;
                }
                break;
            }
            case 1:
                m = parallel_alg(g, desk_space(n), prof, RngStream(seed)).matching;
                break;
            default:
                m = repeat_for_two_plus_eps(g, desk_space(n), 0.25, prof, RngStream(seed), 4);
        }
        if (verify_matching(g, m).has_value()) ++bad;
    }
    r.pass = bad == 0;
    std::ostringstream os;
    os << "validity: " << (runs - bad) << "/" << runs << " runs clean";
    r.detail = os.str();
}

static void criterion2(CheckResult& r) {
    r.pass = g_halving.phases_checked > 0 && g_halving.violations == 0;
    std::ostringstream os;
    os << "degree halving: " << g_halving.phases_checked << " phases from the validity sweep, "
       << g_halving.violations << " violations";
    r.detail = os.str();
}

// shared sweep for criteria 3 and 4: 20 random 64-regular graphs x 10 tapes
struct PhasePool {
    double sum_matched = 0;
    double sum_heavy = 0;
    double sum_friends = 0;
};
static PhasePool g_pool;

static void criterion3(CheckResult& r) {
    const std::size_t n = 2048;
    for (int gi = 0; gi < 20; ++gi) {
        Graph g = gen_random_regular(n, 64, 7000 + gi);
        for (int t = 0; t < 10; ++t) {
            GlobalTrace trace = global_alg_trace(g, static_cast<double>(n),
                                                 RngStream(7100 + 100 * gi + t));
            for (const PhaseOutcome& ph : trace.phases) {
                if (ph.heavy.empty()) continue;
                g_pool.sum_matched += static_cast<double>(ph.matched.size());
                g_pool.sum_heavy += static_cast<double>(ph.heavy.size());
                g_pool.sum_friends += static_cast<double>(ph.friends.size());
            }
        }
    }
    const double ratio = g_pool.sum_matched / g_pool.sum_heavy;
    r.pass = g_pool.sum_heavy > 0 && ratio >= 1.0 / 40.0;
    std::ostringstream os;
    os << "star-matching yield: pooled |matched|/|heavy| = " << ratio << ", need >= 0.025";
    r.detail = os.str();
}

static void criterion4(CheckResult& r) {
    const double ratio = g_pool.sum_friends / g_pool.sum_heavy;
    r.pass = g_pool.sum_heavy > 0 && ratio <= 0.275;
    std::ostringstream os;
    os << "friend volume: pooled |friends|/|heavy| = " << ratio << ", need <= 0.275";
    r.detail = os.str();
}

// emulated-phase cost form: role volume paid for by matched stars
static void criterion5(CheckResult& r) {
    const std::size_t n = 4096, m = 4;
    const double delta = 96.0;
    Graph g = gen_random_regular(n, 64, 77);
    ParamProfile desk = resolve_profile("desk", n);
    VertexSet all = VertexSet::all(n);

    const int trials = 200;
    double total_roles = 0, total_matched = 0;
    std::size_t bad = 0;
    for (int t = 0; t < trials; ++t) {
        AssignmentSampler sampler(m, RngStream(50000 + t));
        EmulatePhaseOutput out =
            emulate_phase(delta, g, all, m, sampler, desk, RngStream(60000 + t));
        if (!out.degree_precondition_ok || verify_matching(g, out.matched).has_value()) ++bad;
        for (const auto& mr : out.config.machines)
            total_roles += static_cast<double>(mr.heavy.size() + mr.friends.size());
        total_matched += static_cast<double>(out.matched.size());
    }
    const double lhs = total_roles / trials;
    const double rhs = 1200.0 * (total_matched / trials) + 1.0;
    r.pass = bad == 0 && lhs <= rhs;
    std::ostringstream os;
    os << "emulated-phase cost: mean roles " << lhs << " <= 1200*mean matched + 1 = " << rhs;
    r.detail = os.str();
}

// analytic stability of the heavy-sampling rate under small estimate shifts
static void criterion6(CheckResult& r) {
    std::size_t failures = 0, checked = 0;
    for (std::size_t n : {std::size_t{1000}, std::size_t{1000000}}) {
        ParamProfile p = resolve_profile("paper", n);
        const double a = alpha(p);
        const double dmax = 1.0 / (48.0 * std::log(static_cast<double>(n)));
        RngStream rng(2024 + n);
        auto check_pair = [&](double x, double d) {
            ++checked;
            const double xp = x + d * (rng.bernoulli(0.5) ? 1.0 : -1.0);
            const double lo = 1.0 - a * d, hi = 1.0 + a * d;
            const double h = mu_H(x, p), hp = mu_H(xp, p);
            const double c = mu_H_complement(x, p), cp = mu_H_complement(xp, p);
            if (!(hp >= h * lo - 1e-300 && hp <= h * hi + 1e-300)) ++failures;
            if (!(cp >= c * lo - 1e-300 && cp <= c * hi + 1e-300)) ++failures;
        };
        for (int t = 0; t < 100000; ++t) {
            const double x = -2.0 + 5.0 * rng.next_double();
            const double d = dmax * rng.next_double();
            if (d == 0.0) continue;
            check_pair(x, d);
        }
        for (double x : {-2.0, 0.0, 0.5 - dmax, 0.5, 0.5 + dmax, 1.0, 3.0}) check_pair(x, dmax);
    }
    r.pass = failures == 0;
    std::ostringstream os;
    os << "rate stability: " << failures << " bound violations in " << checked << " pairs";
    r.detail = os.str();
}

// booster vs the exact optimum on 16-vertex graphs
static void criterion7(CheckResult& r) {
    ParamProfile desk = resolve_profile("desk", 16);
    int within = 0;
    for (int s = 0; s < 100; ++s) {
        RngStream master(70000 + s);
        Graph g = gen_erdos_renyi(16, 0.3, master.fork(100).seed());
        Matching m = repeat_for_two_plus_eps(g, 1, 0.5, desk, master.fork(200), 4);
        const std::size_t opt = exact_max_matching(g);
        const bool ok = m.empty() ? opt == 0
                                  : static_cast<double>(opt) <=
                                        2.5 * static_cast<double>(m.size());
        if (ok) ++within;
    }
    r.pass = within >= 90;
    std::ostringstream os;
    os << "approximation vs exact: " << within << "/100 seeds within ratio 2.5, need >= 90";
    r.detail = os.str();
}

// constant-factor signal at 5000 vertices against the maximal-matching bracket
static void criterion8(CheckResult& r) {
    ParamProfile desk = resolve_profile("desk", 5000);
    std::vector<double> ratios;
    for (int s = 0; s < 100; ++s) {
        RngStream master(80000 + s);
        Graph g = gen_erdos_renyi(5000, 0.004, master.fork(100).seed());
        RunResult rr = parallel_alg(g, desk_space(5000), desk, master.fork(200));
        ratios.push_back(approx_report(g, rr.matching, master.fork(300).seed())
                             .ratio_upper_bound);
    }
    const double med = median(ratios);
    r.pass = med <= 10.0;
    std::ostringstream os;
    os << "constant factor: median ratio bound " << med << " over 100 seeds, need <= 10";
    r.detail = os.str();
}

// compressed rounds beat the phase-by-phase simulation at every size and seed
static void criterion9(CheckResult& r) {
    const std::size_t sizes[] = {1u << 14, 1u << 15, 1u << 16, 1u << 17, 1u << 18};
    std::size_t strict_failures = 0;
    std::uint64_t rounds_small = 0, rounds_big = 0;
    for (std::size_t n : sizes) {
        ParamProfile desk = resolve_profile("desk", n);
        const std::uint64_t s = n / 64;
        for (int seed = 0; seed < 20; ++seed) {
            RngStream master(90000 + 1000 * static_cast<std::uint64_t>(std::log2(n)) + seed);
            Graph g = gen_erdos_renyi(n, 8.0 / static_cast<double>(n), master.fork(100).seed());
            RunResult rr = parallel_alg(g, s, desk, master.fork(200));
            Cluster c = make_cluster_for(n, g.edge_count(), s);
            mpc_global_alg(c, g, VertexSet::all(n), static_cast<double>(n), master.fork(300));
            if (!(rr.total_rounds < c.rounds())) ++strict_failures;
            if (seed == 0 && n == sizes[0]) rounds_small = rr.total_rounds;
            if (seed == 0 && n == sizes[4]) rounds_big = rr.total_rounds;
        }
    }
    const double growth = static_cast<double>(rounds_big) / static_cast<double>(rounds_small);
    r.pass = strict_failures == 0 && growth < 18.0 / 14.0;
    std::ostringstream os;
    os << "round compression: " << strict_failures << "/100 non-improvements; rounds "
       << rounds_small << " -> " << rounds_big << ", growth " << growth << " < 1.2857";
    r.detail = os.str();
}

// space audit on real ledgers plus both security-path exercises
static void criterion10(CheckResult& r) {
    Graph g = gen_erdos_renyi(1000, 0.01, 9001);
    ParamProfile desk = resolve_profile("desk", 1000);
    const std::uint64_t s = desk_space(1000);
    const std::uint64_t budget = kSpaceBudgetFactor * effective_space(s, 1000);

    std::size_t entries = 0, over = 0;
    auto scan = [&](const RoundLedger& led) {
        for (const LedgerEntry& e : led.entries()) {
            ++entries;
            if (e.max_sent > budget || e.max_recv > budget || e.max_stored > budget) ++over;
        }
    };
    {
        Cluster c = make_cluster_for(1000, g.edge_count(), s);
        mpc_global_alg(c, g, VertexSet::all(1000), 1000.0, RngStream(1));
        scan(c.ledger());
    }
    scan(parallel_alg(g, s, desk, RngStream(2)).ledger);
    for (const RoundLedger& led :
         repeat_for_two_plus_eps_report(g, s, 0.25, desk, RngStream(3), 4).per_rep_ledgers)
        scan(led);

    // adversarial exercise 1: zero tolerance forces whole-machine deletion
    Graph dense = gen_erdos_renyi(256, 0.1, 77);
    ParamProfile strict = resolve_profile("desk", 256, {{"overflow_factor", 0.0}});
    RunResult zr = parallel_alg(dense, desk_space(256), strict, RngStream(30));
    std::size_t zeroed = 0;
    for (const auto& b : zr.blocks) zeroed += b.machines_zeroed;
    const bool zeroing_ok = zeroed >= 1 && !verify_matching(dense, zr.matching).has_value();

    // adversarial exercise 2: a shard overflowing its machine is flagged, not fatal
    Graph k4 = build_graph(4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}});
    Cluster tiny(2, 10);
    std::vector<std::uint32_t> phi(4, 0);
    PartitionOutcome part = partition_to_machines(tiny, k4, VertexSet::all(4), phi, 2);
    const bool flag_ok = part.overflow[0] == 1 && part.overflow_count() == 1;

    r.pass = over == 0 && zeroing_ok && flag_ok;
    std::ostringstream os;
    os << "space audit: " << over << "/" << entries << " ledger entries over budget; zeroed "
       << zeroed << " machines cleanly; overflow flagged " << (flag_ok ? "yes" : "no");
    r.detail = os.str();
}

// exact solver against the independent subset-DP oracle
static void criterion11(CheckResult& r) {
    RngStream seeds(31400);
    std::size_t agree = 0;
    const int total = 500;
    for (int t = 0; t < total; ++t) {
        const std::size_t n = 6 + t % 7;
        const double p = (t % 3 == 0) ? 0.15 : (t % 3 == 1 ? 0.3 : 0.6);
        Graph g = gen_erdos_renyi(n, p, seeds.next_u64());
        if (exact_max_matching(g) == testsupport::dp_max_matching(g)) ++agree;
    }
    const bool pet = exact_max_matching(petersen()) == 5;
    r.pass = agree == total && pet;
    std::ostringstream os;
    os << "oracle cross-check: " << agree << "/" << total
       << " graphs agree; Petersen == 5: " << (pet ? "yes" : "no");
    r.detail = os.str();
}

// identical outputs for identical master seeds, through the full report path
static void criterion12(CheckResult& r) {
    fs::path base = fs::temp_directory_path() / "mpcmatch_acceptance";
    fs::remove_all(base);
    std::size_t mismatches = 0;
    for (const std::string algo : {"global", "parallel", "twoeps"}) {
        ExperimentConfig cfg;
        cfg.graph = {"er", 1000, 0.01, 0, 0, ""};
        cfg.algorithm = algo;
        cfg.space = desk_space(1000);
        cfg.seeds = {1, 2};
        cfg.eps = 0.5;
        cfg.twoeps_c = 1;

        cfg.out_dir = (base / (algo + "_a")).string();
        auto ra = run_experiment(cfg);
        cfg.out_dir = (base / (algo + "_b")).string();
        auto rb = run_experiment(cfg);

        for (std::size_t i = 0; i < ra.size(); ++i) {
            if (ra[i].matching_size != rb[i].matching_size ||
                ra[i].ratio_upper_bound != rb[i].ratio_upper_bound ||
                ra[i].rounds != rb[i].rounds || ra[i].blocks != rb[i].blocks ||
                ra[i].violations != rb[i].violations)
                ++mismatches;
        }
        if (strip_last_column(read_file(fs::path(cfg.out_dir) / "results.csv")) !=
            strip_last_column(read_file(base / (algo + "_a") / "results.csv")))
            ++mismatches;
        if (read_file(fs::path(cfg.out_dir) / "ledger.csv") !=
            read_file(base / (algo + "_a") / "ledger.csv"))
            ++mismatches;
    }
    r.pass = mismatches == 0;
    std::ostringstream os;
    os << "determinism: " << mismatches << " mismatches across repeated runs of 3 algorithms";
    r.detail = os.str();
}

// module invariant carried alongside the criteria: median matched fraction of
// the maximal-matching upper bound on ER(500, 0.05)
static void invariant_constant_factor(CheckResult& r) {
    std::vector<double> fracs;
    for (int s = 0; s < 100; ++s) {
        RngStream master(95000 + s);
        Graph g = gen_erdos_renyi(500, 0.05, master.fork(100).seed());
        Matching m = global_alg(g, master.fork(200));
        const MaximalBound mb = maximal_bound(g, master.fork(300).seed());
        fracs.push_back(mb.upper == 0 ? 1.0
                                      : static_cast<double>(m.size()) /
                                            static_cast<double>(mb.upper));
    }
    const double med = median(fracs);
    r.pass = med >= 0.1;
    std::ostringstream os;
    os << "constant-factor invariant: median matched fraction " << med << ", need >= 0.1";
    r.detail = os.str();
}

int main() {
    std::cout << "acceptance checks (12 criteria + 1 module invariant)\n";
    run_check("C1", criterion1);
    run_check("C2", criterion2);
    run_check("C3", criterion3);
    run_check("C4", criterion4);
    run_check("C5", criterion5);
    run_check("C6", criterion6);
    run_check("C7", criterion7);
    run_check("C8", criterion8);
    run_check("C9", criterion9);
    run_check("C10", criterion10);
    run_check("C11", criterion11);
    run_check("C12", criterion12);
    run_check("INV", invariant_constant_factor);

    std::size_t failed = 0;
    for (const auto& c : g_results) failed += !c.pass;
    std::cout << "RESULT: " << (g_results.size() - failed) << "/" << g_results.size()
              << " checks passed";
    if (failed) std::cout << ", " << failed << " FAILED";
    std::cout << "\n";
    return failed == 0 ? 0 : 1;
}
