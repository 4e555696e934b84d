// SPDX-License-Identifier: Apache-2.0
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "fcs/io.hpp"
#include "fcs/registry.hpp"
#include "fcs/simulator.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitValidation = 2;
constexpr int kExitRuntime = 3;

std::string known_policies() {
    std::string s;
    for (const auto& id : fcs::policy_ids()) {
        if (!s.empty()) s += ", ";
        s += id;
    }
    return s;
}

int do_run(const fcs::io::RunManifest& manifest) {
    try {
        fcs::io::run_manifest(manifest, std::cout);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return kExitOk;
}

int do_bench(const std::vector<std::string>& policies, int n_max, int repeats,
             std::uint64_t seed, const std::string& out_path) {
    try {
        for (const auto& id : policies) fcs::find_policy(id);
        const auto rows = fcs::runtime_bench(policies, n_max, repeats, seed);
        if (out_path.empty()) {
            fcs::io::write_bench_tsv(rows, std::cout);
        } else {
            std::ofstream out(out_path, std::ios::binary);
            if (!out) {
                std::cerr << "error: cannot write '" << out_path << "'\n";
                return kExitRuntime;
            }
            fcs::io::write_bench_tsv(rows, out);
            std::cout << "wrote " << out_path << "\n";
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return kExitOk;
}

int do_validate(const std::string& scenario_path) {
    fcs::ScenarioConfig cfg;
    try {
        cfg = fcs::io::load_scenario_file(scenario_path);
    } catch (const std::exception& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitValidation;
    }
    const auto violations = fcs::validate_scenario(cfg);
    if (violations.empty()) {
        std::cout << "valid\n";
        return kExitOk;
    }
    for (const auto& v : violations) std::cout << v << "\n";
    return kExitValidation;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "fcsim - fair power allocation for capacity-constrained EV fast "
        "charging stations"};
    app.require_subcommand(1);

    fcs::io::RunManifest manifest;
    auto* run = app.add_subcommand(
        "run", "simulate a scenario under one or more allocation policies");
    run->add_option("--scenario", manifest.scenario_path, "scenario file (json)")
        ->required();
    run->add_option("--policies", manifest.policies,
                    "policy ids (" + known_policies() + ")")
        ->required()
        ->delimiter(',');
    run->add_option("--seed", manifest.seeds,
                    "override the scenario seed (repeatable)")
        ->delimiter(',');
    run->add_option("--out", manifest.out_dir, "output directory")->required();
    run->add_option("--taus", manifest.taus_minutes,
                    "SoC envy-freeness horizons in minutes")
        ->delimiter(',');

    std::vector<std::string> bench_policies = {"fair-opap", "muw", "mew", "mnw"};
    int n_max = 300;
    int repeats = 5;
    std::uint64_t bench_seed = 7;
    std::string bench_out;
    auto* bench = app.add_subcommand(
        "bench", "time single allocation calls for growing EV counts");
    bench->add_option("--policies", bench_policies, "policy ids")->delimiter(',');
    bench->add_option("--nmax", n_max, "largest EV count")
        ->check(CLI::Range(1, 100000));
    bench->add_option("--repeats", repeats, "timing repeats per point")
        ->check(CLI::Range(1, 1000));
    bench->add_option("--seed", bench_seed, "instance seed");
    bench->add_option("--out", bench_out, "output file (stdout when absent)");

    std::string validate_path;
    auto* validate = app.add_subcommand(
        "validate", "check a scenario file against the station invariants");
    validate->add_option("--scenario", validate_path, "scenario file (json)")
        ->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    if (run->parsed()) {
        if (manifest.policies.empty()) {
            std::cerr << "error: at least one policy is required\n";
            return kExitUsage;
        }
        return do_run(manifest);
    }
    if (bench->parsed()) {
        if (bench_policies.empty()) {
            std::cerr << "error: at least one policy is required\n";
            return kExitUsage;
        }
        return do_bench(bench_policies, n_max, repeats, bench_seed, bench_out);
    }
    return do_validate(validate_path);
}
