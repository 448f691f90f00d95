// SPDX-License-Identifier: Apache-2.0
// Part of secbeam. Copyright (c) 2026 the secbeam authors.
#pragma once

// Run orchestration behind the command-line front end: single-trial solves
// with result files, sweeps over a scenario axis with a worker pool,
// re-verification of result files, and a smoke selftest.

#include "secbeam/serialize.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

namespace secbeam {

// Deterministic-margin tolerance used wherever a solution is accepted or
// rejected after re-verification.
constexpr double kVerifyTol = 1e-6;

namespace detail {

inline double elapsed_ms(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
        .count();
}

inline std::string num_text(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return std::string(buf);
}

inline bool chance_ok(const ScenarioConfig& cfg, const ChanceMonteCarlo& mc) {
    // the verification stream is deterministic per (seed, trial), so this
    // three-sigma gate cannot flake between repeated runs
    return cfg.kappa == 0.0 || mc.p_hat >= cfg.kappa - 3.0 * mc.std_error - 1e-12;
}

}  // namespace detail

struct SingleOptions {
    std::vector<Scheme> schemes = {Scheme::sdr, Scheme::scheme1, Scheme::scheme2,
                                   Scheme::baseline};
    std::uint64_t trial = 0;
    std::string out_dir = "out";
    bool dump_sdp = false;
    int n_samples = 0;  // 0: n_chance_samples from the config
};

inline SchemeOutcome run_scheme(const ScenarioConfig& cfg, const ChannelRealization& real,
                                const SdrResult& sdr, Scheme s) {
    switch (s) {
        case Scheme::sdr: return sdr.outcome;
        case Scheme::scheme1: return extract_scheme1(cfg, real, sdr);
        case Scheme::scheme2: return extract_scheme2(cfg, real, sdr);
        case Scheme::baseline: return solve_baseline_mrt(cfg, real);
    }
    throw std::logic_error("run_scheme: unknown scheme");
}

// Solves one realization with the requested schemes, writes solution.json
// and report.json into out_dir, and returns 0 iff every scheme reached an
// optimum that passes independent verification.
inline int run_single(const ScenarioConfig& cfg, const SingleOptions& so, std::ostream& log) {
    validate(cfg);
    std::filesystem::create_directories(so.out_dir);
    const ChannelRealization real = generate_scenario(cfg, so.trial);
    bool needs_sdr = false;
    for (Scheme s : so.schemes) needs_sdr = needs_sdr || s != Scheme::baseline;
    SdrResult sdr;
    if (needs_sdr) sdr = solve_sdr(cfg, real);

    nlohmann::json sol_doc;
    sol_doc["format"] = "secbeam-solution v1";
    sol_doc["config"] = config_to_json(cfg);
    sol_doc["realization"] = realization_to_json(real);
    sol_doc["solutions"] = nlohmann::json::array();
    nlohmann::json rep_doc;
    rep_doc["format"] = "secbeam-report v1";
    rep_doc["trial_index"] = so.trial;
    rep_doc["schemes"] = nlohmann::json::array();

    bool all_ok = true;
    for (Scheme s : so.schemes) {
        const SchemeOutcome o = run_scheme(cfg, real, sdr, s);
        nlohmann::json oj = outcome_to_json(o);
        if (s == Scheme::sdr && o.status == SolveStatus::optimal)
            oj["rank"] = rank_report_to_json(sdr.rank);
        sol_doc["solutions"].push_back(std::move(oj));

        nlohmann::json rj;
        rj["scheme"] = scheme_name(s);
        rj["status"] = status_name(o.status);
        if (o.status == SolveStatus::optimal) {
            const VerificationReport rep = verify_solution(cfg, real, o.solution);
            const ChanceMonteCarlo mc = monte_carlo_chance(cfg, real, o.solution, so.n_samples);
            rj["margins"] = margins_to_json(rep);
            rj["chance"] = chance_to_json(mc);
            const bool ok = rep.ok(kVerifyTol) && detail::chance_ok(cfg, mc);
            rj["verified"] = ok;
            all_ok = all_ok && ok;
            log << scheme_name(s) << ": " << detail::num_text(watts_to_dbm(o.solution.total_power))
                << " dBm, min margin " << detail::num_text(rep.min_margin) << ", outage pass rate "
                << detail::num_text(mc.p_hat) << (ok ? "" : "  [VIOLATED]") << "\n";
        } else {
            all_ok = false;
            log << scheme_name(s) << ": " << status_name(o.status) << "\n";
        }
        rep_doc["schemes"].push_back(std::move(rj));
    }

    if (so.dump_sdp) {
        const RelaxedProblem rp = build_relaxed_problem(cfg, real);
        std::ofstream f(std::filesystem::path(so.out_dir) / "problem.sdp");
        dump_problem(rp.p, f);
    }
    {
        std::ofstream f(std::filesystem::path(so.out_dir) / "solution.json");
        f << sol_doc.dump(2) << "\n";
    }
    {
        std::ofstream f(std::filesystem::path(so.out_dir) / "report.json");
        f << rep_doc.dump(2) << "\n";
    }
    return all_ok ? 0 : 1;
}

inline int thread_count() {
    if (const char* s = std::getenv("SECBEAM_THREADS")) {
        const int v = std::atoi(s);
        if (v >= 1) return std::min(v, 64);
    }
    const unsigned hc = std::thread::hardware_concurrency();
    return hc ? int(std::min(hc, 8u)) : 1;
}

struct SweepRow {
    int axis_value = 0;
    Scheme scheme = Scheme::sdr;
    std::uint64_t trial = 0;
    SolveStatus status = SolveStatus::numerical_failure;
    double power_w = std::numeric_limits<double>::quiet_NaN();
    double harvested_w = std::numeric_limits<double>::quiet_NaN();
    double p_hat = std::numeric_limits<double>::quiet_NaN();
    double secrecy_ok = std::numeric_limits<double>::quiet_NaN();
    double runtime_ms = 0.0;
};

inline ScenarioConfig apply_axis(const SweepSpec& sw, int value) {
    ScenarioConfig c = sw.base;
    if (sw.axis == "n_receivers")
        c.n_video = value;
    else
        c.n_antennas = value;
    validate(c);
    return c;
}

namespace detail {

inline std::vector<SweepRow> sweep_trial(const ScenarioConfig& cfg, int axis_value,
                                         std::uint64_t trial,
                                         const std::vector<Scheme>& schemes) {
    const ChannelRealization real = generate_scenario(cfg, trial);
    bool needs_sdr = false;
    for (Scheme s : schemes) needs_sdr = needs_sdr || s != Scheme::baseline;
    SdrResult sdr;
    double sdr_ms = 0.0;
    if (needs_sdr) {
        const auto t0 = std::chrono::steady_clock::now();
        sdr = solve_sdr(cfg, real);
        sdr_ms = elapsed_ms(t0);
    }
    std::vector<SweepRow> rows;
    for (Scheme s : schemes) {
        SweepRow row;
        row.axis_value = axis_value;
        row.scheme = s;
        row.trial = trial;
        const auto t0 = std::chrono::steady_clock::now();
        const SchemeOutcome o = run_scheme(cfg, real, sdr, s);
        // the shared relaxation cost lands on the scheme it belongs to; the
        // extraction rows carry only their own work on top of it
        row.runtime_ms = elapsed_ms(t0) + (s == Scheme::sdr ? sdr_ms : 0.0);
        row.status = o.status;
        if (o.status == SolveStatus::optimal) {
            row.power_w = o.solution.total_power;
            row.harvested_w = harvested_total_w(cfg, real, o.solution);
            const ChanceMonteCarlo mc = monte_carlo_chance(cfg, real, o.solution);
            row.p_hat = mc.p_hat;
            row.secrecy_ok = mc.secrecy_ok_fraction;
        }
        rows.push_back(row);
    }
    return rows;
}

struct SeriesStats {
    int n_trials = 0;
    int n_optimal = 0;
    double mean_power_dbm = std::numeric_limits<double>::quiet_NaN();
    double stderr_power_dbm = 0.0;
    double mean_harvested_dbm = std::numeric_limits<double>::quiet_NaN();
    double mean_p_hat = std::numeric_limits<double>::quiet_NaN();
    double mean_secrecy_ok = std::numeric_limits<double>::quiet_NaN();
};

inline SeriesStats aggregate(const std::vector<const SweepRow*>& rows) {
    SeriesStats st;
    st.n_trials = int(rows.size());
    std::vector<double> dbm;
    double hsum = 0.0, psum = 0.0, ssum = 0.0;
    for (const SweepRow* r : rows) {
        if (r->status != SolveStatus::optimal) continue;
        ++st.n_optimal;
        dbm.push_back(watts_to_dbm(r->power_w));
        hsum += watts_to_dbm(r->harvested_w);
        psum += r->p_hat;
        ssum += r->secrecy_ok;
    }
    if (st.n_optimal == 0) return st;
    double m = 0.0;
    for (double v : dbm) m += v;
    m /= dbm.size();
    st.mean_power_dbm = m;
    if (dbm.size() > 1) {
        double ss = 0.0;
        for (double v : dbm) ss += (v - m) * (v - m);
        st.stderr_power_dbm = std::sqrt(ss / (dbm.size() - 1) / dbm.size());
    }
    st.mean_harvested_dbm = hsum / st.n_optimal;
    st.mean_p_hat = psum / st.n_optimal;
    st.mean_secrecy_ok = ssum / st.n_optimal;
    return st;
}

}  // namespace detail

// Sweeps the configured axis, writing results.csv (one row per point, trial
// and scheme) and summary.json (per-point aggregates plus plottable series).
// Trials run on a worker pool; rows land in deterministic order regardless
// of scheduling, and runtime_ms is the only nondeterministic column.
inline int run_sweep(const SweepSpec& sw, const std::string& out_dir, std::ostream& log) {
    std::vector<ScenarioConfig> point_cfgs;
    for (int v : sw.axis_values) point_cfgs.push_back(apply_axis(sw, v));
    std::vector<Scheme> schemes;
    for (const std::string& n : sw.schemes) schemes.push_back(scheme_from_name(n));

    struct Task {
        std::size_t point;
        std::uint64_t trial;
    };
    std::vector<Task> tasks;
    for (std::size_t p = 0; p < point_cfgs.size(); ++p)
        for (int t = 0; t < sw.trials_per_point; ++t) tasks.push_back({p, std::uint64_t(t)});
    std::vector<std::vector<SweepRow>> results(tasks.size());

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= tasks.size()) break;
            results[i] = detail::sweep_trial(point_cfgs[tasks[i].point],
                                             sw.axis_values[tasks[i].point], tasks[i].trial,
                                             schemes);
        }
    };
    const int nthreads = thread_count();
    std::vector<std::thread> pool;
    for (int t = 1; t < nthreads; ++t) pool.emplace_back(worker);
    worker();
    for (std::thread& t : pool) t.join();

    std::filesystem::create_directories(out_dir);
    bool all_ok = true;
    {
        std::ofstream csv(std::filesystem::path(out_dir) / "results.csv");
        csv << "axis_value,scheme,trial_index,total_power_dbm,harvested_total_dbm,"
               "chance_p_hat,secrecy_ok_fraction,status,runtime_ms\n";
        for (const auto& rows : results)
            for (const SweepRow& r : rows) {
                all_ok = all_ok && r.status == SolveStatus::optimal;
                csv << r.axis_value << "," << scheme_name(r.scheme) << "," << r.trial << ","
                    << detail::num_text(watts_to_dbm(r.power_w)) << ","
                    << detail::num_text(watts_to_dbm(r.harvested_w)) << ","
                    << detail::num_text(r.p_hat) << "," << detail::num_text(r.secrecy_ok) << ","
                    << status_name(r.status) << "," << detail::num_text(r.runtime_ms) << "\n";
            }
    }

    nlohmann::json summary;
    summary["format"] = "secbeam-summary v1";
    summary["axis"] = sw.axis;
    summary["trials_per_point"] = sw.trials_per_point;
    nlohmann::json points = nlohmann::json::array();
    nlohmann::json plot;
    plot["x"] = sw.axis_values;
    nlohmann::json series;
    for (Scheme s : schemes) {
        nlohmann::json se;
        se["mean_power_dbm"] = nlohmann::json::array();
        se["stderr_power_dbm"] = nlohmann::json::array();
        se["mean_harvested_dbm"] = nlohmann::json::array();
        series[scheme_name(s)] = std::move(se);
    }
    for (std::size_t p = 0; p < point_cfgs.size(); ++p) {
        nlohmann::json pj;
        pj["axis_value"] = sw.axis_values[p];
        nlohmann::json per_scheme;
        for (Scheme s : schemes) {
            std::vector<const SweepRow*> rows;
            for (std::size_t i = 0; i < tasks.size(); ++i) {
                if (tasks[i].point != p) continue;
                for (const SweepRow& r : results[i])
                    if (r.scheme == s) rows.push_back(&r);
            }
            const detail::SeriesStats st = detail::aggregate(rows);
            per_scheme[scheme_name(s)] = {{"n_trials", st.n_trials},
                                          {"n_optimal", st.n_optimal},
                                          {"mean_power_dbm", st.mean_power_dbm},
                                          {"stderr_power_dbm", st.stderr_power_dbm},
                                          {"mean_harvested_dbm", st.mean_harvested_dbm},
                                          {"mean_p_hat", st.mean_p_hat},
                                          {"mean_secrecy_ok", st.mean_secrecy_ok}};
            series[scheme_name(s)]["mean_power_dbm"].push_back(st.mean_power_dbm);
            series[scheme_name(s)]["stderr_power_dbm"].push_back(st.stderr_power_dbm);
            series[scheme_name(s)]["mean_harvested_dbm"].push_back(st.mean_harvested_dbm);
        }
        pj["schemes"] = std::move(per_scheme);
        points.push_back(std::move(pj));
    }
    summary["points"] = std::move(points);
    plot["series"] = std::move(series);
    summary["plot"] = std::move(plot);
    {
        std::ofstream f(std::filesystem::path(out_dir) / "summary.json");
        f << summary.dump(2) << "\n";
    }
    log << "sweep: " << tasks.size() << " trials x " << schemes.size() << " schemes across "
        << sw.axis_values.size() << " points -> " << out_dir << "\n";
    return all_ok ? 0 : 1;
}

// Re-verifies a solution file from scratch: margins from the embedded
// realization, outage rate by fresh Monte Carlo. Nonzero exit on any
// violated recorded solution; schemes recorded as failed solves are
// reported but do not fail verification.
inline int run_verify(const std::string& solution_path, int n_samples, std::ostream& log) {
    std::ifstream f(solution_path);
    if (!f) {
        log << "cannot open " << solution_path << "\n";
        return 2;
    }
    nlohmann::json doc = nlohmann::json::parse(f);
    if (doc.value("format", "") != std::string("secbeam-solution v1")) {
        log << "unrecognized solution format\n";
        return 2;
    }
    const ScenarioConfig cfg = config_from_json(doc.at("config"));
    const ChannelRealization real = realization_from_json(doc.at("realization"));
    bool all_ok = true;
    for (const auto& oj : doc.at("solutions")) {
        const std::string name = oj.at("scheme").get<std::string>();
        if (oj.at("status").get<std::string>() != std::string("optimal")) {
            log << name << ": recorded as " << oj.at("status").get<std::string>()
                << ", nothing to verify\n";
            continue;
        }
        const BeamformingSolution sol = solution_from_json(oj.at("solution"));
        const VerificationReport rep = verify_solution(cfg, real, sol);
        const ChanceMonteCarlo mc = monte_carlo_chance(cfg, real, sol, n_samples);
        const bool ok = rep.ok(kVerifyTol) && detail::chance_ok(cfg, mc);
        all_ok = all_ok && ok;
        log << name << ": min margin " << detail::num_text(rep.min_margin)
            << ", outage pass rate " << detail::num_text(mc.p_hat) << " ("
            << (ok ? "ok" : "VIOLATED") << ")\n";
    }
    return all_ok ? 0 : 1;
}

// Smoke test of the numerical core: closed-form identities, one solved
// instance against its analytic optimum, and the scheme ordering chain on a
// handful of seeded scenarios.
inline int run_selftest(std::ostream& log) {
    bool all_ok = true;
    auto check = [&](const char* name, bool ok) {
        all_ok = all_ok && ok;
        log << "selftest: " << name << ": " << (ok ? "pass" : "FAIL") << "\n";
    };

    {
        bool ok = true;
        for (double p : {0.5, 0.9, 0.95, 0.99}) {
            ok = ok && std::abs(chi2_inv(p, 2) - (-2.0 * std::log1p(-p))) < 1e-9;
        }
        ok = ok && std::abs(chi2_cdf(chi2_inv(0.9974906, 12), 12) - 0.9974906) < 1e-9;
        check("chi-square quantile identities", ok);
    }
    {
        HermitianMatrix h(3);
        h(0, 0) = 2.0;
        h(1, 1) = -1.0;
        h(2, 2) = 0.5;
        h(0, 1) = {0.3, 0.7};
        h(1, 0) = {0.3, -0.7};
        h.symmetrize();
        const Mat e = real_embedding(h);
        const SymEig se = jacobi_eig_sym(e);
        const auto he = eig_hermitian(h);
        bool ok = std::abs(se.values.front() - he.eigenvalues.front()) < 1e-9;
        ok = ok && std::abs(se.values.back() - he.eigenvalues.back()) < 1e-9;
        check("real embedding preserves the spectrum", ok);
    }
    {
        ScenarioConfig cfg;
        cfg.n_video = 1;
        cfg.n_basic = 0;
        cfg.n_idle = 0;
        cfg.n_layers = 1;
        cfg.sinr_req = {db_to_linear(6.0)};
        cfg.kappa = 0.0;
        const ChannelRealization real = generate_scenario(cfg, 0);
        const double oracle = cfg.sinr_req[0] * cfg.noise_w / real.receivers[0].h.norm_sq();
        SdrResult sdr = solve_sdr(cfg, real);
        bool ok = sdr.outcome.status == SolveStatus::optimal &&
                  std::abs(sdr.outcome.solution.total_power - oracle) < 1e-6 * oracle;
        // a single receiver makes the matched-filter baseline optimal too
        const SchemeOutcome mrt = solve_baseline_mrt(cfg, real);
        ok = ok && mrt.status == SolveStatus::optimal &&
             std::abs(mrt.solution.total_power - oracle) < 1e-6 * oracle;
        check("single-receiver optimum matches the matched filter", ok);
    }
    {
        // the relaxation lower-bounds every feasible construction per trial;
        // the matched-filter baseline is only claimed worse on average
        ScenarioConfig cfg;
        cfg.n_rand = 16;
        bool ok = true;
        double s1_sum = 0.0, mrt_sum = 0.0;
        for (std::uint64_t trial = 0; trial < 10 && ok; ++trial) {
            const ChannelRealization real = generate_scenario(cfg, trial);
            SdrResult sdr = solve_sdr(cfg, real);
            ok = sdr.outcome.status == SolveStatus::optimal;
            if (!ok) break;
            const double lb = sdr.outcome.solution.total_power;
            const SchemeOutcome s1 = run_scheme(cfg, real, sdr, Scheme::scheme1);
            const SchemeOutcome s2 = run_scheme(cfg, real, sdr, Scheme::scheme2);
            const SchemeOutcome mrt = run_scheme(cfg, real, sdr, Scheme::baseline);
            ok = s1.status == SolveStatus::optimal && s2.status == SolveStatus::optimal &&
                 mrt.status == SolveStatus::optimal;
            if (!ok) break;
            const double slack = 1e-6 * (1.0 + lb);
            ok = s1.solution.total_power >= lb - slack &&
                 s2.solution.total_power >= lb - slack &&
                 mrt.solution.total_power >= lb - slack;
            s1_sum += s1.solution.total_power;
            mrt_sum += mrt.solution.total_power;
        }
        ok = ok && mrt_sum >= s1_sum;
        check("scheme ordering chain on seeded scenarios", ok);
    }
    {
        ScenarioConfig cfg;
        const ChannelRealization a = generate_scenario(cfg, 7);
        const ChannelRealization b = generate_scenario(cfg, 7);
        bool ok = a.receivers.size() == b.receivers.size();
        for (std::size_t i = 0; ok && i < a.receivers.size(); ++i) {
            ok = a.receivers[i].distance_m == b.receivers[i].distance_m;
            for (std::size_t k = 0; ok && k < a.receivers[i].h.dim(); ++k)
                ok = a.receivers[i].h[k] == b.receivers[i].h[k];
        }
        check("scenario generation is deterministic", ok);
    }
    return all_ok ? 0 : 1;
}

}  // namespace secbeam
