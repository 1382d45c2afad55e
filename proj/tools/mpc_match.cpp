#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "mpcmatch/experiment.hpp"

using namespace mpcmatch;

namespace {

void print_records(const std::vector<ResultRecord>& records) {
    for (const auto& r : records) {
        std::cout << r.config_id << " seed=" << r.seed << " rep=" << r.rep
                  << ": matched=" << r.matching_size;
        if (r.violations.empty()) {
            std::cout << " ratio<=" << detail::format_ratio(r.ratio_upper_bound);
        }
        std::cout << " rounds=" << r.rounds << " blocks=" << r.blocks;
        if (!r.violations.empty()) std::cout << "  VIOLATION: " << r.violations;
        std::cout << "\n";
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"simulated-cluster matching experiments"};
    app.require_subcommand(1);

    std::string config_path;
    std::string algo_override, profile_override, out_override;
    std::uint64_t seed_override = 0;
    std::uint64_t space_override = 0;
    bool seed_set = false;

    CLI::App* run = app.add_subcommand("run", "run the experiment described by a config file");
    run->add_option("--config", config_path, "experiment config (json)")
        ->required()
        ->check(CLI::ExistingFile);
    run->add_option("--seed", seed_override, "replace the config's seed list with this one seed")
        ->each([&](const std::string&) { seed_set = true; });
    run->add_option("--profile", profile_override, "parameter profile (paper|desk)");
    run->add_option("--space", space_override, "per-machine space in words");
    run->add_option("--algo", algo_override, "algorithm to run")
        ->check(CLI::IsMember({"global", "parallel", "twoeps"}));
    run->add_option("--out", out_override, "directory for results.csv / results.json / ledger.csv");

    std::string cmp_a, cmp_b;
    CLI::App* cmp = app.add_subcommand("compare", "round counts of two configs side by side");
    cmp->add_option("--a", cmp_a, "first config")->required()->check(CLI::ExistingFile);
    cmp->add_option("--b", cmp_b, "second config")->required()->check(CLI::ExistingFile);

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            ExperimentConfig cfg = load_config_file(config_path);
            if (seed_set) cfg.seeds = {seed_override};
            if (!profile_override.empty()) cfg.profile_name = profile_override;
            if (space_override > 0) cfg.space = space_override;
            if (!algo_override.empty()) cfg.algorithm = algo_override;
            if (!out_override.empty()) cfg.out_dir = out_override;

            auto records = run_experiment(cfg);
            print_records(records);
            if (!cfg.out_dir.empty()) std::cout << "wrote " << cfg.out_dir << "\n";
            if (!all_clean(records)) {
                std::cerr << "matching violations found\n";
                return 1;
            }
            return 0;
        }
        ExperimentConfig a = load_config_file(cmp_a);
        ExperimentConfig b = load_config_file(cmp_b);
        return compare_rounds(a, b, std::cout);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
