// SPDX-License-Identifier: Apache-2.0
// Part of secbeam. Copyright (c) 2026 the secbeam authors.
#pragma once

// Independent verification of beamforming solutions. Everything here is
// recomputed from raw channels and covariances through quad_form; none of the
// optimizer's constraint-assembly code is reused, so an agreement between the
// two is evidence, not tautology.

#include "secbeam/chance.hpp"
#include "secbeam/channel.hpp"
#include "secbeam/power_alloc.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace secbeam {

// Post-cancellation SINR of a layer at a legitimate receiver. Lower layers
// are decoded and removed, higher layers interfere. The energy beam carries a
// sequence the receivers know, so it is cancelled as well; the interception
// bound below is where it earns its keep.
inline double sinr_legitimate(const CVector& h, const BeamformingSolution& sol,
                              std::size_t layer, double noise_w) {
    if (layer >= sol.layer_covariances.size())
        throw std::invalid_argument("sinr_legitimate: layer out of range");
    double denom = noise_w;
    for (std::size_t t = layer + 1; t < sol.layer_covariances.size(); ++t)
        denom += quad_form(h, sol.layer_covariances[t]);
    return quad_form(h, sol.layer_covariances[layer]) / denom;
}

// Interception SINR upper bound at a normalized eavesdropper channel. The
// eavesdropper is granted the same layered cancellation as a paying receiver
// but cannot strip the energy beam, which acts as artificial noise.
inline double sinr_eavesdropper(const CVector& g, const BeamformingSolution& sol,
                                std::size_t layer, double noise_norm) {
    if (layer >= sol.layer_covariances.size())
        throw std::invalid_argument("sinr_eavesdropper: layer out of range");
    double denom = noise_norm + quad_form(g, sol.energy_covariance);
    for (std::size_t t = layer + 1; t < sol.layer_covariances.size(); ++t)
        denom += quad_form(g, sol.layer_covariances[t]);
    return quad_form(g, sol.layer_covariances[layer]) / denom;
}

inline double harvested_power_w(const CVector& h, const BeamformingSolution& sol, double eff) {
    double p = quad_form(h, sol.energy_covariance);
    for (const auto& w : sol.layer_covariances) p += quad_form(h, w);
    return eff * p;
}

inline double harvested_total_w(const ScenarioConfig& cfg, const ChannelRealization& real,
                                const BeamformingSolution& sol) {
    double p = 0.0;
    for (std::size_t i : real.with_role(ReceiverRole::idle))
        p += harvested_power_w(real.receivers[i].h, sol, cfg.harvest_eff);
    return p;
}

// Receivers that must decode a given layer: every premium receiver, plus the
// basic ones for the base layer only.
inline std::vector<std::size_t> layer_audience(const ChannelRealization& real, std::size_t layer) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < real.receivers.size(); ++i) {
        const ReceiverRole r = real.receivers[i].role;
        if (r == ReceiverRole::premium || (layer == 0 && r == ReceiverRole::basic)) idx.push_back(i);
    }
    return idx;
}

struct MarginEntry {
    std::string constraint;  // "video_sinr", "basic_sinr", "harvest", "interception"
    int receiver = -1;       // index into the realization, -1 when not per-receiver
    int layer = -1;          // 0-based, -1 when not layered
    double margin = 0.0;     // relative slack; negative means violated
};

struct VerificationReport {
    std::vector<MarginEntry> entries;
    double min_margin = std::numeric_limits<double>::infinity();

    bool ok(double tol) const { return min_margin >= -tol; }
};

// Relative margins of every deterministic constraint. SINR rows report
// sinr / requirement - 1, harvesting rows harvested / floor - 1, and the
// interception bound 1 - lambda / threshold; all are zero exactly at the
// boundary, which keeps one violation tolerance meaningful across rows of
// wildly different physical scale.
inline VerificationReport verify_solution(const ScenarioConfig& cfg, const ChannelRealization& real,
                                          const BeamformingSolution& sol) {
    if (sol.layer_covariances.size() != std::size_t(cfg.n_layers))
        throw std::invalid_argument("verify_solution: layer count does not match the config");
    VerificationReport rep;
    auto push = [&rep](const char* c, int r, int l, double m) {
        rep.min_margin = std::min(rep.min_margin, m);
        rep.entries.push_back({c, r, l, m});
    };
    for (std::size_t i = 0; i < real.receivers.size(); ++i) {
        const Receiver& rec = real.receivers[i];
        switch (rec.role) {
            case ReceiverRole::premium:
                for (int l = 0; l < cfg.n_layers; ++l)
                    push("video_sinr", int(i), l,
                         sinr_legitimate(rec.h, sol, l, cfg.noise_w) / cfg.sinr_req[l] - 1.0);
                break;
            case ReceiverRole::basic:
                push("basic_sinr", int(i), 0,
                     sinr_legitimate(rec.h, sol, 0, cfg.noise_w) / cfg.sinr_req[0] - 1.0);
                break;
            case ReceiverRole::idle:
                if (cfg.harvest_floor_w > 0.0)
                    push("harvest", int(i), -1,
                         harvested_power_w(rec.h, sol, cfg.harvest_eff) / cfg.harvest_floor_w - 1.0);
                break;
        }
    }
    if (cfg.kappa > 0.0) {
        const HermitianMatrix q =
            q_matrix(sol.layer_covariances, sol.energy_covariance, cfg.sinr_tol1);
        const SafeCheck sc = check_safe(q, cfg.chance_spec());
        push("interception", -1, 0, 1.0 - sc.lambda / sc.threshold);
    }
    return rep;
}

struct ChanceMonteCarlo {
    int n_samples = 0;
    int j_eavesdroppers = 0;
    double p_hat = 0.0;      // frequency of every eavesdropper staying below tolerance
    double std_error = 0.0;  // binomial standard error sqrt(p(1-p)/n)
    double secrecy_ok_fraction = 0.0;
    double secrecy_target_bits = 0.0;  // log2(1+req_1) - log2(1+tol)
    double worst_audience_rate_bits = 0.0;
};

// Empirical check of the interception outage target by fresh eavesdropper
// draws. The verification stream is keyed by (seed, trial) only, so repeated
// runs on the same trial see identical samples regardless of scheme. Secrecy
// bookkeeping rides along: base-layer secrecy is the worst audience rate
// minus the best interception rate of the sample set, floored at zero.
inline ChanceMonteCarlo monte_carlo_chance(const ScenarioConfig& cfg, const ChannelRealization& real,
                                           const BeamformingSolution& sol, int n_samples = 0) {
    validate(cfg);
    ChanceMonteCarlo mc;
    mc.n_samples = n_samples > 0 ? n_samples : cfg.n_chance_samples;
    mc.j_eavesdroppers = cfg.n_eavesdroppers;
    mc.secrecy_target_bits = std::log2(1.0 + cfg.sinr_req.front()) - std::log2(1.0 + cfg.sinr_tol1);
    double worst_leg = std::numeric_limits<double>::infinity();
    for (std::size_t i : layer_audience(real, 0))
        worst_leg = std::min(
            worst_leg, std::log2(1.0 + sinr_legitimate(real.receivers[i].h, sol, 0, cfg.noise_w)));
    mc.worst_audience_rate_bits = worst_leg;
    Rng stream({cfg.seed, kStreamEavesdropper, real.trial_index});
    long below = 0, sec_ok = 0;
    for (int s = 0; s < mc.n_samples; ++s) {
        double worst = 0.0;
        for (int e = 0; e < mc.j_eavesdroppers; ++e) {
            const CVector g = draw_eavesdropper_channel(stream, cfg);
            worst = std::max(worst, sinr_eavesdropper(g, sol, 0, cfg.eav_noise_norm));
        }
        if (worst <= cfg.sinr_tol1) ++below;
        const double cap = std::max(0.0, worst_leg - std::log2(1.0 + worst));
        // tolerance absorbs solver-level slack in a tight audience rate
        if (cap >= mc.secrecy_target_bits - 1e-6) ++sec_ok;
    }
    mc.p_hat = double(below) / mc.n_samples;
    mc.std_error = std::sqrt(mc.p_hat * (1.0 - mc.p_hat) / mc.n_samples);
    mc.secrecy_ok_fraction = double(sec_ok) / mc.n_samples;
    return mc;
}

}  // namespace secbeam
