// SPDX-License-Identifier: Apache-2.0
//
// Part of secbeam. Copyright (c) 2026 the secbeam authors.

#include <CLI11.hpp>

#include "secbeam/harness.hpp"

#include <cctype>
#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

namespace {

secbeam::ScenarioConfig load_config(const std::string& path) {
    if (path.empty()) return secbeam::ScenarioConfig{};
    return secbeam::parse_config_file(path);
}

std::vector<secbeam::Scheme> parse_scheme_list(const std::string& csv) {
    std::vector<secbeam::Scheme> out;
    std::string cur;
    for (char c : csv + ",") {
        if (c == ',') {
            if (!cur.empty()) out.push_back(secbeam::scheme_from_name(cur));
            cur.clear();
        } else if (!std::isspace(static_cast<unsigned char>(c))) {
            cur += c;
        }
    }
    if (out.empty()) throw std::runtime_error("at least one scheme required");
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"secure layered video multicast beamforming simulator"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = "out";
    std::string schemes_csv = "sdr,scheme1,scheme2,baseline";
    std::string solution_path;
    std::uint64_t trial = 0;
    long long seed = -1;
    int samples = 0;
    bool dump_sdp = false;

    CLI::App* solve = app.add_subcommand("solve", "solve one realization and write result files");
    solve->add_option("--config", config_path, "scenario config file (built-in defaults if omitted)");
    solve->add_option("--trial", trial, "realization index");
    solve->add_option("--schemes", schemes_csv, "comma-separated subset of sdr,scheme1,scheme2,baseline");
    solve->add_option("--out", out_dir, "output directory");
    solve->add_option("--samples", samples, "override the verification sample count");
    solve->add_option("--seed", seed, "override the config seed");
    solve->add_flag("--dump-sdp", dump_sdp, "also write the relaxed problem in text form");

    CLI::App* sweep = app.add_subcommand("sweep", "run an axis sweep and write results.csv + summary.json");
    sweep->add_option("--config", config_path, "sweep config file")->required();
    sweep->add_option("--out", out_dir, "output directory");
    sweep->add_option("--seed", seed, "override the config seed");

    CLI::App* verify = app.add_subcommand("verify", "re-verify a written solution file");
    verify->add_option("solution", solution_path, "path to solution.json")->required();
    verify->add_option("--samples", samples, "override the verification sample count");

    app.add_subcommand("selftest", "run built-in smoke checks");

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand("solve")) {
            secbeam::ScenarioConfig cfg = load_config(config_path);
            if (seed >= 0) cfg.seed = std::uint64_t(seed);
            secbeam::SingleOptions so;
            so.schemes = parse_scheme_list(schemes_csv);
            so.trial = trial;
            so.out_dir = out_dir;
            so.dump_sdp = dump_sdp;
            so.n_samples = samples;
            return secbeam::run_single(cfg, so, std::cout);
        }
        if (app.got_subcommand("sweep")) {
            secbeam::SweepSpec sw = secbeam::parse_sweep_file(config_path);
            if (seed >= 0) sw.base.seed = std::uint64_t(seed);
            return secbeam::run_sweep(sw, out_dir, std::cout);
        }
        if (app.got_subcommand("verify"))
            return secbeam::run_verify(solution_path, samples, std::cout);
        return secbeam::run_selftest(std::cout);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
