// SPDX-License-Identifier: Apache-2.0
//
// Part of secbeam. Copyright (c) 2026 the secbeam authors.

#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "secbeam/harness.hpp"

using namespace secbeam;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("secbeam_test_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p);
    REQUIRE(f.good());
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

// results.csv with the trailing (nondeterministic) runtime column removed
std::string csv_without_runtime(const fs::path& p) {
    std::istringstream in(slurp(p));
    std::string line, out;
    while (std::getline(in, line)) {
        const auto cut = line.rfind(',');
        REQUIRE(cut != std::string::npos);
        out += line.substr(0, cut) + "\n";
    }
    return out;
}

ScenarioConfig fast_config() {
    ScenarioConfig cfg;
    cfg.n_chance_samples = 300;
    cfg.n_rand = 10;
    return cfg;
}

}  // namespace

TEST_CASE("json round trips preserve vectors, matrices and configs") {
    CVector v(3);
    v[0] = {1.25, -0.5};
    v[2] = {0.0, 2.0};
    const CVector v2 = cvector_from_json(to_json(v));
    for (std::size_t i = 0; i < 3; ++i) CHECK(v[i] == v2[i]);

    HermitianMatrix m(2);
    m(0, 0) = 2.0;
    m(1, 1) = 0.5;
    m(0, 1) = {0.25, -0.75};
    m(1, 0) = {0.25, 0.75};
    const HermitianMatrix m2 = matrix_from_json(to_json(m));
    CHECK(m2.max_abs() == m.max_abs());
    CHECK((m2 - m).max_abs() == 0.0);

    ScenarioConfig cfg;
    cfg.n_video = 4;
    cfg.kappa = 0.5;
    cfg.seed = 17;
    const ScenarioConfig back = config_from_json(config_to_json(cfg));
    CHECK(back.n_video == 4);
    CHECK(back.kappa == Catch::Approx(0.5).epsilon(1e-9));
    CHECK(back.seed == 17);
    CHECK(back.sinr_req[2] == Catch::Approx(cfg.sinr_req[2]).epsilon(1e-9));

    const ChannelRealization real = generate_scenario(cfg, 5);
    const ChannelRealization r2 = realization_from_json(realization_to_json(real));
    REQUIRE(r2.receivers.size() == real.receivers.size());
    CHECK(r2.trial_index == real.trial_index);
    for (std::size_t i = 0; i < real.receivers.size(); ++i) {
        CHECK(r2.receivers[i].role == real.receivers[i].role);
        CHECK(r2.receivers[i].distance_m == real.receivers[i].distance_m);
        for (std::size_t k = 0; k < real.receivers[i].h.dim(); ++k)
            CHECK(r2.receivers[i].h[k] == real.receivers[i].h[k]);
    }
}

TEST_CASE("malformed serialized matrices are rejected") {
    nlohmann::json ragged = nlohmann::json::array();
    ragged.push_back({{{1.0, 0.0}}, {{0.0, 0.0}}});
    ragged.push_back({{{0.0, 0.0}}});
    CHECK_THROWS(matrix_from_json(ragged));
    nlohmann::json skew = to_json(HermitianMatrix::identity(2));
    skew[0][1] = {0.5, 0.0};  // (1,0) stays zero: not Hermitian
    CHECK_THROWS(matrix_from_json(skew));
    CHECK_THROWS(role_from_name("visitor"));
}

TEST_CASE("single run writes verifiable, byte-deterministic result files") {
    const ScenarioConfig cfg = fast_config();
    SingleOptions so;
    so.trial = 1;
    so.n_samples = 300;
    so.dump_sdp = true;

    const fs::path d1 = fresh_dir("single_a");
    so.out_dir = d1.string();
    std::ostringstream log1;
    REQUIRE(run_single(cfg, so, log1) == 0);
    CHECK(fs::exists(d1 / "solution.json"));
    CHECK(fs::exists(d1 / "report.json"));
    CHECK(fs::exists(d1 / "problem.sdp"));
    CHECK(log1.str().find("sdr:") != std::string::npos);

    const fs::path d2 = fresh_dir("single_b");
    so.out_dir = d2.string();
    std::ostringstream log2;
    REQUIRE(run_single(cfg, so, log2) == 0);
    CHECK(slurp(d1 / "solution.json") == slurp(d2 / "solution.json"));
    CHECK(slurp(d1 / "report.json") == slurp(d2 / "report.json"));

    const nlohmann::json doc = nlohmann::json::parse(slurp(d1 / "solution.json"));
    REQUIRE(doc.at("solutions").size() == 4);
    CHECK(doc.at("solutions")[0].at("scheme") == "sdr");
    CHECK(doc.at("solutions")[0].contains("rank"));
    const nlohmann::json rep = nlohmann::json::parse(slurp(d1 / "report.json"));
    for (const auto& sj : rep.at("schemes")) {
        CHECK(sj.at("status") == "optimal");
        CHECK(sj.at("verified").get<bool>());
        CHECK(sj.at("margins").at("min_margin").get<double>() >= -kVerifyTol);
    }

    // round trip through the independent verifier
    std::ostringstream vlog;
    CHECK(run_verify((d1 / "solution.json").string(), 300, vlog) == 0);

    // tampering with the base layer must be caught
    nlohmann::json bad = doc;
    nlohmann::json& layer = bad["solutions"][0]["solution"]["layers"][0];
    HermitianMatrix w = matrix_from_json(layer);
    w *= 0.25;
    layer = to_json(w);
    const fs::path tampered = d1 / "tampered.json";
    {
        std::ofstream f(tampered);
        f << bad.dump(2) << "\n";
    }
    std::ostringstream vlog2;
    CHECK(run_verify(tampered.string(), 300, vlog2) == 1);
    CHECK(vlog2.str().find("VIOLATED") != std::string::npos);
}

TEST_CASE("verify rejects unreadable or foreign files") {
    std::ostringstream log;
    CHECK(run_verify("/nonexistent/solution.json", 0, log) == 2);
    const fs::path d = fresh_dir("foreign");
    {
        std::ofstream f(d / "other.json");
        f << "{\"format\": \"something else\"}\n";
    }
    CHECK(run_verify((d / "other.json").string(), 0, log) == 2);
}

TEST_CASE("sweep emits the documented csv shape and deterministic rows") {
    SweepSpec sw;
    sw.base = fast_config();
    sw.axis = "n_receivers";
    sw.axis_values = {3, 4};
    sw.trials_per_point = 2;
    sw.schemes = {"sdr", "baseline"};

    const fs::path d1 = fresh_dir("sweep_a");
    std::ostringstream log1;
    REQUIRE(run_sweep(sw, d1.string(), log1) == 0);
    const std::string csv = slurp(d1 / "results.csv");
    std::istringstream lines(csv);
    std::string header;
    std::getline(lines, header);
    CHECK(header ==
          "axis_value,scheme,trial_index,total_power_dbm,harvested_total_dbm,"
          "chance_p_hat,secrecy_ok_fraction,status,runtime_ms");
    int rows = 0;
    for (std::string line; std::getline(lines, line);) ++rows;
    CHECK(rows == 2 * 2 * 2);

    // a second run with a different worker count matches modulo runtime
    setenv("SECBEAM_THREADS", "3", 1);
    const fs::path d2 = fresh_dir("sweep_b");
    std::ostringstream log2;
    REQUIRE(run_sweep(sw, d2.string(), log2) == 0);
    unsetenv("SECBEAM_THREADS");
    CHECK(csv_without_runtime(d1 / "results.csv") == csv_without_runtime(d2 / "results.csv"));
    CHECK(slurp(d1 / "summary.json") == slurp(d2 / "summary.json"));

    const nlohmann::json summary = nlohmann::json::parse(slurp(d1 / "summary.json"));
    CHECK(summary.at("axis") == "n_receivers");
    REQUIRE(summary.at("points").size() == 2);
    const auto& plot = summary.at("plot");
    CHECK(plot.at("x") == nlohmann::json({3, 4}));
    for (const std::string s : {"sdr", "baseline"}) {
        REQUIRE(plot.at("series").contains(s));
        CHECK(plot.at("series").at(s).at("mean_power_dbm").size() == 2);
    }
    for (const auto& pj : summary.at("points"))
        for (const auto& [name, st] : pj.at("schemes").items()) {
            (void)name;
            CHECK(st.at("n_trials").get<int>() == 2);
            CHECK(st.at("n_optimal").get<int>() == 2);
            CHECK(std::isfinite(st.at("mean_power_dbm").get<double>()));
        }

    // the relaxation lower-bounds the baseline on every row
    std::istringstream again(slurp(d1 / "results.csv"));
    std::string line;
    std::getline(again, line);
    std::map<std::string, double> power;
    while (std::getline(again, line)) {
        std::istringstream ls(line);
        std::string axis, scheme, trial, dbm;
        std::getline(ls, axis, ',');
        std::getline(ls, scheme, ',');
        std::getline(ls, trial, ',');
        std::getline(ls, dbm, ',');
        power[axis + "/" + trial + "/" + scheme] = std::stod(dbm);
    }
    for (const auto& [key, dbm] : power) {
        if (key.size() < 4 || key.substr(key.size() - 3) != "sdr") continue;
        const std::string base_key = key.substr(0, key.size() - 3) + "baseline";
        REQUIRE(power.count(base_key) == 1);
        CHECK(power[base_key] >= dbm - 1e-6);
    }
}

TEST_CASE("axis application and scheme parsing reject nonsense") {
    SweepSpec sw;
    sw.axis = "n_antennas";
    CHECK(apply_axis(sw, 8).n_antennas == 8);
    sw.axis = "n_receivers";
    CHECK(apply_axis(sw, 5).n_video == 5);
    CHECK_THROWS(apply_axis(sw, 1));  // below the fixed basic count
    std::istringstream bad("axis = power\naxis_values = 1\n");
    CHECK_THROWS(parse_sweep(bad));
}
