// SPDX-License-Identifier: Apache-2.0
//
// Part of secbeam. Copyright (c) 2026 the secbeam authors.

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "secbeam/chance.hpp"
#include "secbeam/hermitian.hpp"
#include "secbeam/rng.hpp"
#include "secbeam/units.hpp"

namespace secbeam {

enum class ReceiverRole { premium, basic, idle };

inline const char* role_name(ReceiverRole r) {
    switch (r) {
        case ReceiverRole::premium: return "premium";
        case ReceiverRole::basic: return "basic";
        default: return "idle";
    }
}

// Scenario parameters in internal units (watts, linear ratios); dB values
// from the config file are converted once at parse time. Video receivers
// split into premium (all layers) and basic (base layer only); idle
// receivers harvest energy and are counted on top of the video receivers.
struct ScenarioConfig {
    int n_antennas = 6;
    int n_video = 3;   // premium + basic
    int n_basic = 2;
    int n_idle = 2;
    int n_layers = 3;
    int n_eavesdroppers = 4;
    std::vector<double> sinr_req = {db_to_linear(6.0), db_to_linear(9.0), db_to_linear(12.0)};
    double sinr_tol1 = db_to_linear(-10.0);
    double kappa = 0.99;  // 0 is the documented sentinel disabling the outage constraint
    double noise_w = dbm_to_watts(-23.0);
    double harvest_floor_w = dbm_to_watts(0.0);
    double harvest_eff = 0.5;
    double carrier_hz = 470e6;
    double ref_distance_m = 2.0;
    double max_distance_m = 20.0;
    double antenna_gain_dbi = 10.0;
    double rician_k = db_to_linear(6.0);
    double eav_noise_norm = 1.0;  // noise in normalized eavesdropper-channel units
    double pl_breakpoint_m = 10.0;
    double pl_slope_near = 2.0;
    double pl_slope_far = 3.5;
    std::uint64_t seed = 1;
    int n_rand = 50;
    int n_chance_samples = 10000;

    int n_premium() const { return n_video - n_basic; }
    int n_receivers() const { return n_video + n_idle; }

    ChanceSpec chance_spec() const {
        ChanceSpec s;
        s.gamma_tol1 = sinr_tol1;
        s.sigma_tilde_sq = eav_noise_norm;
        s.kappa = kappa;
        s.j_eavesdroppers = n_eavesdroppers;
        s.n_t = n_antennas;
        return s;
    }
};

inline void validate(const ScenarioConfig& c) {
    auto fail = [](const std::string& m) { throw std::domain_error("ScenarioConfig: " + m); };
    if (c.n_antennas < 1 || c.n_antennas > 16) fail("n_antennas must lie in [1, 16]");
    if (c.n_video < 0) fail("n_video_receivers must be >= 0");
    if (c.n_basic < 0 || c.n_basic > c.n_video) fail("n_basic must lie in [0, n_video_receivers]");
    if (c.n_idle < 0) fail("n_idle must be >= 0");
    if (c.n_receivers() < 1) fail("at least one receiver required");
    if (c.n_layers < 1) fail("n_layers must be >= 1");
    if (int(c.sinr_req.size()) != c.n_layers) fail("sinr_req_db must list one value per layer");
    for (double g : c.sinr_req)
        if (!(g > 0.0)) fail("sinr_req_db entries must be finite");
    if (!(c.sinr_tol1 > 0.0)) fail("sinr_tol_db must be finite");
    if (!(c.kappa >= 0.0 && c.kappa < 1.0)) fail("kappa must lie in [0, 1); 0 disables the outage constraint");
    if (c.kappa > 0.0 && c.n_eavesdroppers < 1) fail("n_eavesdroppers must be >= 1");
    if (!(c.noise_w > 0.0)) fail("noise_dbm must be finite");
    if (!(c.harvest_floor_w >= 0.0)) fail("harvest floor must be >= 0");
    if (!(c.harvest_eff > 0.0 && c.harvest_eff <= 1.0)) fail("harvest_eff must lie in (0, 1]");
    if (!(c.carrier_hz > 0.0)) fail("carrier_hz must be > 0");
    if (!(c.ref_distance_m > 0.0)) fail("ref_distance_m must be > 0");
    if (!(c.max_distance_m >= c.ref_distance_m)) fail("max_distance_m must be >= ref_distance_m");
    if (!(c.pl_breakpoint_m >= c.ref_distance_m)) fail("pl_breakpoint_m must be >= ref_distance_m");
    if (!(c.rician_k > 0.0)) fail("rician_k_db must be finite");
    if (!(c.eav_noise_norm > 0.0)) fail("eav_noise_norm must be > 0");
    if (c.n_rand < 1) fail("n_rand must be >= 1");
    if (c.n_chance_samples < 1) fail("n_chance_samples must be >= 1");
}

// Two-slope indoor path loss with free-space behaviour up to the breakpoint
// and a steeper slope beyond it, minus the joint antenna gain. Returned in
// dB of attenuation (positive).
inline double path_loss_db(double distance_m, const ScenarioConfig& cfg) {
    if (distance_m < cfg.ref_distance_m)
        throw std::domain_error("path_loss_db: distance below the reference distance");
    const double c0 = 299792458.0;
    const double fspl_ref =
        20.0 * std::log10(4.0 * 3.14159265358979323846 * cfg.ref_distance_m * cfg.carrier_hz / c0);
    double pl;
    if (distance_m <= cfg.pl_breakpoint_m) {
        pl = fspl_ref + 10.0 * cfg.pl_slope_near * std::log10(distance_m / cfg.ref_distance_m);
    } else {
        pl = fspl_ref +
             10.0 * cfg.pl_slope_near * std::log10(cfg.pl_breakpoint_m / cfg.ref_distance_m) +
             10.0 * cfg.pl_slope_far * std::log10(distance_m / cfg.pl_breakpoint_m);
    }
    return pl - cfg.antenna_gain_dbi;
}

// Rician fading with uniform per-entry line-of-sight phases and complex
// normal scatter; E{||h||^2} = pl_linear * n_antennas.
inline CVector draw_rician_channel(Rng& rng, double pl_linear, const ScenarioConfig& cfg) {
    const double k = cfg.rician_k;
    const double los = std::sqrt(pl_linear * k / (k + 1.0));
    const double nlos_var = pl_linear / (k + 1.0);
    CVector h(cfg.n_antennas);
    for (int i = 0; i < cfg.n_antennas; ++i) {
        const double phase = rng.uniform(0.0, 6.283185307179586476925286766559);
        h[i] = los * cx(std::cos(phase), std::sin(phase)) + rng.cnormal(nlos_var);
    }
    return h;
}

// Normalized eavesdropper channel: real and imaginary parts of each entry are
// unit-variance normals, so ||g~||^2 is chi-square with 2 * n_antennas
// degrees of freedom. This is the same convention safe_threshold quantizes
// against; the two must never diverge.
inline CVector draw_eavesdropper_channel(Rng& rng, const ScenarioConfig& cfg) {
    CVector g(cfg.n_antennas);
    for (int i = 0; i < cfg.n_antennas; ++i) g[i] = rng.cnormal(2.0);
    return g;
}

struct Receiver {
    ReceiverRole role = ReceiverRole::idle;
    double distance_m = 0.0;
    CVector h;  // channel in watt units (path loss folded in)
};

// One fading realization of all legitimate receivers. Eavesdropper channels
// are intentionally absent: the optimizer never sees them, only the
// statistical verifier draws them.
struct ChannelRealization {
    std::uint64_t trial_index = 0;
    std::vector<Receiver> receivers;

    std::vector<std::size_t> with_role(ReceiverRole r) const {
        std::vector<std::size_t> idx;
        for (std::size_t i = 0; i < receivers.size(); ++i)
            if (receivers[i].role == r) idx.push_back(i);
        return idx;
    }
};

// Draws distances uniform on [ref_distance, max_distance] and Rician fades,
// one private stream per (seed, trial, receiver), so realizations are
// bit-identical for a given (config, seed, trial) and receiver i keeps its
// channel when the receiver count grows. Roles by index: premium first,
// then basic, then idle.
inline ChannelRealization generate_scenario(const ScenarioConfig& cfg, std::uint64_t trial_index) {
    validate(cfg);
    ChannelRealization real;
    real.trial_index = trial_index;
    const int k_total = cfg.n_receivers();
    real.receivers.resize(k_total);
    for (int r = 0; r < k_total; ++r) {
        Rng stream({cfg.seed, kStreamReceiver, trial_index, std::uint64_t(r)});
        Receiver& rec = real.receivers[r];
        rec.role = r < cfg.n_premium()          ? ReceiverRole::premium
                   : r < cfg.n_video            ? ReceiverRole::basic
                                                : ReceiverRole::idle;
        rec.distance_m = stream.uniform(cfg.ref_distance_m, cfg.max_distance_m);
        const double pl_linear = db_to_linear(-path_loss_db(rec.distance_m, cfg));
        rec.h = draw_rician_channel(stream, pl_linear, cfg);
    }
    return real;
}

}  // namespace secbeam
