// SPDX-License-Identifier: Apache-2.0
//
// Part of secbeam. Copyright (c) 2026 the secbeam authors.

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>

#include "secbeam/evaluator.hpp"

using namespace secbeam;

namespace {

ChannelRealization fixed_channels(std::vector<CVector> hs, std::vector<ReceiverRole> roles) {
    ChannelRealization real;
    real.trial_index = 0;
    for (std::size_t i = 0; i < hs.size(); ++i) {
        Receiver r;
        r.role = roles[i];
        r.distance_m = 5.0;
        r.h = std::move(hs[i]);
        real.receivers.push_back(std::move(r));
    }
    return real;
}

CVector axis_channel(std::size_t n, std::size_t axis, double magnitude) {
    CVector h(n);
    h[axis] = magnitude;
    return h;
}

BeamformingSolution from_covariances(std::vector<HermitianMatrix> layers, HermitianMatrix energy) {
    return detail::covariances_to_solution(std::move(layers), std::move(energy));
}

}  // namespace

TEST_CASE("layer SINRs follow the hand-computed rank-one chain") {
    // two rank-one layers along different axes, receiver sees both
    const std::size_t n = 3;
    CVector w1(n), w2(n);
    w1[0] = 2.0;
    w2[1] = {0.0, 1.5};
    CVector h(n);
    h[0] = {0.6, 0.8};
    h[1] = 0.5;
    const double noise = 0.04;
    BeamformingSolution sol =
        from_covariances({HermitianMatrix::outer(w1), HermitianMatrix::outer(w2)},
                         HermitianMatrix(n));
    // |h^H w|^2 by hand: |conj(0.6+0.8i) * 2|^2 = 4, |conj(0.5) * 1.5i|^2 = 0.5625
    const double s1 = 4.0, s2 = 0.5625;
    CHECK(sinr_legitimate(h, sol, 0, noise) == Catch::Approx(s1 / (s2 + noise)).epsilon(1e-12));
    CHECK(sinr_legitimate(h, sol, 1, noise) == Catch::Approx(s2 / noise).epsilon(1e-12));
    // the eavesdropper additionally eats the energy beam
    HermitianMatrix we = HermitianMatrix::identity(n);
    we *= 0.3;
    sol = from_covariances(sol.layer_covariances, we);
    const double gn = h.norm_sq();
    CHECK(sinr_eavesdropper(h, sol, 0, noise) ==
          Catch::Approx(s1 / (s2 + 0.3 * gn + noise)).epsilon(1e-12));
    CHECK(sinr_eavesdropper(h, sol, 1, noise) ==
          Catch::Approx(s2 / (0.3 * gn + noise)).epsilon(1e-12));
}

TEST_CASE("growing the energy beam only hurts the eavesdropper") {
    const std::size_t n = 4;
    CVector w(n);
    w[0] = 1.0;
    w[2] = 0.5;
    CVector g(n);
    g[0] = {0.3, -0.4};
    g[2] = 0.9;
    const HermitianMatrix w1 = HermitianMatrix::outer(w);
    double prev = std::numeric_limits<double>::infinity();
    for (double p : {0.0, 0.5, 2.0, 8.0}) {
        HermitianMatrix we = HermitianMatrix::identity(n);
        we *= p / double(n);
        BeamformingSolution sol = from_covariances({w1}, we);
        CHECK(sinr_legitimate(g, sol, 0, 0.01) ==
              Catch::Approx(quad_form(g, w1) / 0.01).epsilon(1e-12));
        const double se = sinr_eavesdropper(g, sol, 0, 0.01);
        CHECK(se < prev);
        prev = se;
    }
}

TEST_CASE("harvested power matches the isotropic closed form") {
    const std::size_t n = 5;
    const double p = 3.2, eff = 0.5;
    HermitianMatrix we = HermitianMatrix::identity(n);
    we *= p / double(n);
    const CVector h = axis_channel(n, 2, 0.07);
    BeamformingSolution sol = from_covariances({HermitianMatrix(n)}, we);
    CHECK(harvested_power_w(h, sol, eff) ==
          Catch::Approx(eff * p * h.norm_sq() / double(n)).epsilon(1e-12));
}

TEST_CASE("audience of the base layer includes basic receivers, upper layers do not") {
    ChannelRealization real = fixed_channels(
        {axis_channel(2, 0, 1.0), axis_channel(2, 1, 1.0), axis_channel(2, 0, 0.5)},
        {ReceiverRole::basic, ReceiverRole::premium, ReceiverRole::idle});
    CHECK(layer_audience(real, 0) == std::vector<std::size_t>{0, 1});
    CHECK(layer_audience(real, 1) == std::vector<std::size_t>{1});
}

TEST_CASE("margins sit at zero on an exactly tight solution") {
    // single premium receiver served by a matched filter at exactly the
    // required SINR; single idle receiver harvesting exactly the floor
    ScenarioConfig cfg;
    cfg.n_video = 1;
    cfg.n_basic = 0;
    cfg.n_idle = 1;
    cfg.n_layers = 1;
    cfg.sinr_req = {db_to_linear(6.0)};
    cfg.kappa = 0.0;
    const std::size_t n = cfg.n_antennas;
    const double hp = 0.05, hi = 0.02;
    const ChannelRealization real =
        fixed_channels({axis_channel(n, 0, hp), axis_channel(n, 1, hi)},
                       {ReceiverRole::premium, ReceiverRole::idle});
    CVector w(n);
    w[0] = std::sqrt(cfg.sinr_req[0] * cfg.noise_w) / hp;
    CVector we(n);
    we[1] = std::sqrt(cfg.harvest_floor_w / cfg.harvest_eff) / hi;
    BeamformingSolution sol =
        from_covariances({HermitianMatrix::outer(w)}, HermitianMatrix::outer(we));
    const VerificationReport rep = verify_solution(cfg, real, sol);
    REQUIRE(rep.entries.size() == 2);
    for (const MarginEntry& e : rep.entries) CHECK(e.margin == Catch::Approx(0.0).margin(1e-9));
    CHECK(rep.ok(1e-9));
    // shrink the beam: the video margin goes negative by the power deficit
    w[0] *= 0.9;
    sol = from_covariances({HermitianMatrix::outer(w)}, HermitianMatrix::outer(we));
    const VerificationReport bad = verify_solution(cfg, real, sol);
    CHECK(bad.min_margin == Catch::Approx(0.81 - 1.0).epsilon(1e-9));
    CHECK(!bad.ok(1e-6));
}

TEST_CASE("secrecy target reproduces the closed-form floor") {
    ScenarioConfig cfg;  // defaults: 6 dB base layer requirement, -10 dB tolerance
    const ChannelRealization real = generate_scenario(cfg, 0);
    SdrResult sdr = solve_sdr(cfg, real);
    REQUIRE(sdr.outcome.status == SolveStatus::optimal);
    const ChanceMonteCarlo mc = monte_carlo_chance(cfg, real, sdr.outcome.solution, 500);
    CHECK(mc.secrecy_target_bits == Catch::Approx(2.179).margin(1e-3));
    // any sample set below tolerance certifies the target, so the secrecy
    // fraction dominates the outage estimate whenever the SINR rows hold
    CHECK(mc.worst_audience_rate_bits >= std::log2(1.0 + cfg.sinr_req[0]) - 1e-6);
    CHECK(mc.secrecy_ok_fraction >= mc.p_hat);
    CHECK(mc.n_samples == 500);
    CHECK(mc.j_eavesdroppers == cfg.n_eavesdroppers);
}

TEST_CASE("optimizer and evaluator agree on the default scenario") {
    ScenarioConfig cfg;
    for (std::uint64_t trial = 0; trial < 4; ++trial) {
        const ChannelRealization real = generate_scenario(cfg, trial);
        SdrResult sdr = solve_sdr(cfg, real);
        REQUIRE(sdr.outcome.status == SolveStatus::optimal);
        const VerificationReport rep = verify_solution(cfg, real, sdr.outcome.solution);
        CHECK(rep.ok(1e-6));
        // constraint count: premium * layers + basic + idle + interception
        const std::size_t want =
            std::size_t(cfg.n_premium()) * cfg.n_layers + cfg.n_basic + cfg.n_idle + 1;
        CHECK(rep.entries.size() == want);
    }
}

TEST_CASE("isotropic base layer at the eigenvalue bound meets the outage target exactly") {
    // W_1 = threshold * I turns the interception event into a chi-square tail
    // with the quantile the bound was built from, so the empirical pass rate
    // must land on kappa itself. One eavesdropper isolates the per-draw rate.
    ScenarioConfig cfg;
    cfg.n_video = 1;
    cfg.n_basic = 0;
    cfg.n_idle = 0;
    cfg.n_layers = 1;
    cfg.sinr_req = {db_to_linear(6.0)};
    cfg.n_eavesdroppers = 1;
    const double thr = safe_threshold(cfg.chance_spec());
    HermitianMatrix w1 = HermitianMatrix::identity(cfg.n_antennas);
    w1 *= thr;
    const BeamformingSolution sol = from_covariances({w1}, HermitianMatrix(cfg.n_antennas));
    const ChannelRealization real = generate_scenario(cfg, 3);
    const int n = 20000;
    const ChanceMonteCarlo mc = monte_carlo_chance(cfg, real, sol, n);
    CHECK(mc.std_error > 0.0);
    CHECK(mc.p_hat == Catch::Approx(cfg.kappa).margin(3.5 * mc.std_error));
    // the deterministic certificate agrees: the bound holds with zero margin
    const SafeCheck sc = check_safe(q_matrix(sol.layer_covariances, sol.energy_covariance,
                                             cfg.sinr_tol1),
                                    cfg.chance_spec());
    CHECK(sc.lambda == Catch::Approx(sc.threshold).epsilon(1e-12));
}

TEST_CASE("verification draws are deterministic per trial and fresh across trials") {
    ScenarioConfig cfg;
    const ChannelRealization r0 = generate_scenario(cfg, 0);
    SdrResult sdr = solve_sdr(cfg, r0);
    REQUIRE(sdr.outcome.status == SolveStatus::optimal);
    const ChanceMonteCarlo a = monte_carlo_chance(cfg, r0, sdr.outcome.solution, 400);
    const ChanceMonteCarlo b = monte_carlo_chance(cfg, r0, sdr.outcome.solution, 400);
    CHECK(a.p_hat == b.p_hat);
    CHECK(a.secrecy_ok_fraction == b.secrecy_ok_fraction);
    Rng s0({cfg.seed, kStreamEavesdropper, 0});
    Rng s1({cfg.seed, kStreamEavesdropper, 1});
    const CVector g0 = draw_eavesdropper_channel(s0, cfg);
    const CVector g1 = draw_eavesdropper_channel(s1, cfg);
    bool same = true;
    for (std::size_t i = 0; i < g0.dim() && same; ++i) same = (g0[i] == g1[i]);
    CHECK(!same);
}
