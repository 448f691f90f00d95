// SPDX-License-Identifier: Apache-2.0
//
// Part of secbeam. Copyright (c) 2026 the secbeam authors.

#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "secbeam/chance.hpp"
#include "secbeam/channel.hpp"
#include "secbeam/hermitian.hpp"
#include "secbeam/rng.hpp"
#include "secbeam/sdp.hpp"

namespace secbeam {

// Transmit strategies compared by the simulator. "sdr" is the relaxed
// optimum over covariances and lower-bounds everything else; the two
// extraction schemes recover rank-one beamformers from it; "baseline"
// matched-filters every layer at the strongest active receiver.
enum class Scheme { sdr, scheme1, scheme2, baseline };

inline const char* scheme_name(Scheme s) {
    switch (s) {
        case Scheme::sdr: return "sdr";
        case Scheme::scheme1: return "scheme1";
        case Scheme::scheme2: return "scheme2";
        default: return "baseline";
    }
}

inline Scheme scheme_from_name(const std::string& n) {
    if (n == "sdr") return Scheme::sdr;
    if (n == "scheme1") return Scheme::scheme1;
    if (n == "scheme2") return Scheme::scheme2;
    if (n == "baseline") return Scheme::baseline;
    throw std::invalid_argument("unknown scheme: " + n);
}

struct BeamformingSolution {
    std::vector<HermitianMatrix> layer_covariances;  // one per video layer
    HermitianMatrix energy_covariance;
    double total_power = 0.0;  // watts
    bool rank_one = false;     // every layer covariance has numeric rank <= 1
    std::vector<CVector> beamformers;  // filled iff rank_one
};

// Rank structure of a relaxed optimum. The squared-rank budget only binds
// when the eigenvalue-bound multiplier is inactive (phi below threshold);
// the bound on the first layer holds unconditionally.
struct RankReport {
    std::vector<std::size_t> layer_ranks;
    std::size_t energy_rank = 0;
    bool w1_bound_ok = false;
    std::size_t rank_squared_sum = 0;
    std::size_t rank_squared_bound = 0;
    bool sum_bound_applicable = false;
    bool sum_bound_ok = false;
    double phi = 0.0;  // trace of the slack-block dual of the eigenvalue bound
};

struct SchemeOutcome {
    Scheme scheme = Scheme::sdr;
    SolveStatus status = SolveStatus::numerical_failure;
    BeamformingSolution solution;  // valid iff status == optimal
    int iterations = 0;            // interior-point iterations (summed over solves)
    int candidates_tried = 0;      // randomized extraction only
    int chosen_candidate = -1;     // randomized extraction only
    bool passthrough = false;      // extraction inherited an already rank-one optimum
};

namespace detail {

inline std::vector<double> layer_sinr_linear(const ScenarioConfig& cfg) { return cfg.sinr_req; }

constexpr double kPhiActiveThreshold = 1e-7;
constexpr double kRankRelTol = 1e-6;
constexpr double kRankAbsTol = 1e-7;

// scale anchors the floor so an all-roundoff matrix (a layer or harvest
// covariance the optimizer drove to zero) counts as rank zero instead of
// full rank by self-comparison.
inline std::size_t psd_rank(const HermitianMatrix& w, double scale) {
    const auto eig = eig_hermitian(w);
    const double top = eig.eigenvalues.front();
    const double floor = std::max(kRankRelTol * std::max(top, 0.0), kRankAbsTol * scale);
    if (top <= floor) return 0;
    std::size_t r = 0;
    for (double v : eig.eigenvalues)
        if (v > floor) ++r;
    return r;
}

}  // namespace detail

struct RelaxedProblem {
    SdpProblem p;
    std::vector<BlockId> layer_blocks;
    BlockId energy_block = 0;
    std::optional<BlockId> lmi_slack;
};

// Relaxed covariance program: minimize total transmit power subject to
// per-layer SINR floors at the video receivers, a harvested-power floor at
// the idle receivers, and (for kappa > 0) the eigenvalue bound that makes
// the interception-outage requirement safe. Video receivers strip the
// energy beam before decoding, so it appears in no SINR denominator.
inline RelaxedProblem build_relaxed_problem(const ScenarioConfig& cfg,
                                            const ChannelRealization& real) {
    validate(cfg);
    RelaxedProblem rp;
    const int n = cfg.n_antennas;
    const int L = cfg.n_layers;
    for (int l = 0; l < L; ++l) {
        BlockId b = rp.p.add_block("layer" + std::to_string(l + 1), n);
        rp.p.set_block_cost(b, HermitianMatrix::identity(n));
        rp.layer_blocks.push_back(b);
    }
    rp.energy_block = rp.p.add_block("energy", n);
    rp.p.set_block_cost(rp.energy_block, HermitianMatrix::identity(n));

    const auto gamma = detail::layer_sinr_linear(cfg);
    for (const Receiver& rec : real.receivers) {
        const HermitianMatrix h_outer = HermitianMatrix::outer(rec.h);
        if (rec.role == ReceiverRole::idle) {
            SdpProblem::Expr e;
            for (int l = 0; l < L; ++l) e.block_terms.emplace_back(rp.layer_blocks[l], h_outer);
            e.block_terms.emplace_back(rp.energy_block, h_outer);
            rp.p.add_constraint(std::move(e), Relation::ge,
                                cfg.harvest_floor_w / cfg.harvest_eff);
            continue;
        }
        const int decoded_layers = (rec.role == ReceiverRole::premium) ? L : 1;
        for (int l = 0; l < decoded_layers; ++l) {
            SdpProblem::Expr e;
            e.block_terms.emplace_back(rp.layer_blocks[l], h_outer);
            for (int t = l + 1; t < L; ++t)
                e.block_terms.emplace_back(rp.layer_blocks[t], -gamma[l] * h_outer);
            rp.p.add_constraint(std::move(e), Relation::ge, gamma[l] * cfg.noise_w);
        }
    }

    if (cfg.kappa > 0.0) {
        LmiCombo combo;
        combo.block_terms.emplace_back(rp.layer_blocks[0], 1.0);
        for (int t = 1; t < L; ++t) combo.block_terms.emplace_back(rp.layer_blocks[t], -cfg.sinr_tol1);
        combo.block_terms.emplace_back(rp.energy_block, -cfg.sinr_tol1);
        rp.lmi_slack = add_lmi_eig_bound(rp.p, combo, safe_threshold(cfg.chance_spec()));
    }
    return rp;
}

namespace detail {

inline BeamformingSolution covariances_to_solution(std::vector<HermitianMatrix> layers,
                                                   HermitianMatrix energy) {
    BeamformingSolution sol;
    sol.layer_covariances = std::move(layers);
    sol.energy_covariance = std::move(energy);
    sol.total_power = sol.energy_covariance.trace_real();
    for (const auto& w : sol.layer_covariances) sol.total_power += w.trace_real();
    sol.rank_one = true;
    for (const auto& w : sol.layer_covariances)
        if (psd_rank(w, sol.total_power) > 1) sol.rank_one = false;
    if (sol.rank_one) {
        for (const auto& w : sol.layer_covariances) {
            const auto eig = eig_hermitian(w);
            CVector v = eig.eigenvectors[0];
            const double lam = std::max(0.0, eig.eigenvalues[0]);
            for (std::size_t i = 0; i < v.dim(); ++i) v[i] *= std::sqrt(lam);
            sol.beamformers.push_back(std::move(v));
        }
    }
    return sol;
}

}  // namespace detail

// Beamformers of an already rank-one solution. Refuses anything else: a
// covariance of rank two or more carries no single beam direction.
inline std::vector<CVector> recover_beamformers(const BeamformingSolution& sol) {
    if (!sol.rank_one)
        throw std::logic_error("recover_beamformers: solution is not rank one");
    return sol.beamformers;
}

struct SdrResult {
    SchemeOutcome outcome;
    RankReport rank;  // valid iff outcome.status == optimal
};

inline RankReport check_rank_conditions(const ScenarioConfig& cfg, const SdpSolution& s,
                                        const RelaxedProblem& rp) {
    RankReport r;
    double scale = s.blocks[rp.energy_block].trace_real();
    for (BlockId b : rp.layer_blocks) scale += s.blocks[b].trace_real();
    for (BlockId b : rp.layer_blocks) r.layer_ranks.push_back(detail::psd_rank(s.blocks[b], scale));
    r.energy_rank = detail::psd_rank(s.blocks[rp.energy_block], scale);
    const std::size_t cap = std::min<std::size_t>(cfg.n_receivers(), cfg.n_antennas);
    r.w1_bound_ok = r.layer_ranks[0] <= cap;
    r.rank_squared_sum = r.energy_rank * r.energy_rank;
    for (std::size_t rank : r.layer_ranks) r.rank_squared_sum += rank * rank;
    r.rank_squared_bound = std::size_t(cfg.n_premium()) * cfg.n_layers + cfg.n_basic + cfg.n_idle;
    r.phi = rp.lmi_slack ? s.block_duals[*rp.lmi_slack].trace_real() : 0.0;
    r.sum_bound_applicable = r.phi <= detail::kPhiActiveThreshold;
    r.sum_bound_ok = !r.sum_bound_applicable || r.rank_squared_sum <= r.rank_squared_bound;
    return r;
}

inline SdrResult solve_sdr(const ScenarioConfig& cfg, const ChannelRealization& real,
                           const SolverOptions& opts = {}) {
    SdrResult res;
    res.outcome.scheme = Scheme::sdr;
    RelaxedProblem rp = build_relaxed_problem(cfg, real);
    SdpSolution s = solve(rp.p, opts);
    res.outcome.status = s.status;
    res.outcome.iterations = s.iterations;
    if (s.status != SolveStatus::optimal) return res;
    std::vector<HermitianMatrix> layers;
    for (BlockId b : rp.layer_blocks) layers.push_back(s.blocks[b]);
    res.outcome.solution =
        detail::covariances_to_solution(std::move(layers), s.blocks[rp.energy_block]);
    res.rank = check_rank_conditions(cfg, s, rp);
    return res;
}

namespace detail {

// Scalar re-optimization shared by both extraction schemes and the
// baseline: layer directions are fixed unit vectors, layer powers and the
// energy covariance are re-optimized under the original constraints. When
// `isotropic_energy` is set the energy covariance is restricted to a scaled
// identity (one scalar) instead of a free PSD block.
struct DirectionSolve {
    SolveStatus status = SolveStatus::numerical_failure;
    std::vector<double> powers;
    HermitianMatrix energy;
    double objective = 0.0;
    int iterations = 0;
};

inline DirectionSolve solve_with_directions(const ScenarioConfig& cfg,
                                            const ChannelRealization& real,
                                            const std::vector<CVector>& dirs,
                                            bool isotropic_energy,
                                            const SolverOptions& opts = {}) {
    const int n = cfg.n_antennas;
    const int L = cfg.n_layers;
    DirectionSolve out;
    // Fixing the beam directions can park the optimum on a degenerate face
    // that defeats the interior-point endgame. The extraction only needs a
    // feasible construction, so after a numerical failure the requirements
    // are tightened by a sliver and the solve repeated: the tightened
    // solution satisfies the original constraints with margin to spare, at
    // a cost shift below any reported digit.
    for (const double tighten : {0.0, 1e-5, 1e-4}) {
        SdpProblem p;
        std::vector<ScalarId> alpha;
        for (int l = 0; l < L; ++l) {
            ScalarId a = p.add_scalar("p" + std::to_string(l + 1));
            p.set_scalar_cost(a, 1.0);
            alpha.push_back(a);
        }
        std::optional<BlockId> we_block;
        std::optional<ScalarId> we_scalar;
        if (isotropic_energy) {
            we_scalar = p.add_scalar("pe");
            p.set_scalar_cost(*we_scalar, 1.0);
        } else {
            we_block = p.add_block("energy", n);
            p.set_block_cost(*we_block, HermitianMatrix::identity(n));
        }

        auto gamma = layer_sinr_linear(cfg);
        for (double& g : gamma) g *= 1.0 + tighten;
        for (const Receiver& rec : real.receivers) {
            std::vector<double> q(L);
            for (int l = 0; l < L; ++l) q[l] = quad_form(rec.h, HermitianMatrix::outer(dirs[l]));
            if (rec.role == ReceiverRole::idle) {
                SdpProblem::Expr e;
                for (int l = 0; l < L; ++l) e.scalar_terms.emplace_back(alpha[l], q[l]);
                if (isotropic_energy)
                    e.scalar_terms.emplace_back(*we_scalar, rec.h.norm_sq() / n);
                else
                    e.block_terms.emplace_back(*we_block, HermitianMatrix::outer(rec.h));
                p.add_constraint(std::move(e), Relation::ge,
                                 (1.0 + tighten) * cfg.harvest_floor_w / cfg.harvest_eff);
                continue;
            }
            const int decoded_layers = (rec.role == ReceiverRole::premium) ? L : 1;
            for (int l = 0; l < decoded_layers; ++l) {
                SdpProblem::Expr e;
                e.scalar_terms.emplace_back(alpha[l], q[l]);
                for (int t = l + 1; t < L; ++t)
                    e.scalar_terms.emplace_back(alpha[t], -gamma[l] * q[t]);
                p.add_constraint(std::move(e), Relation::ge, gamma[l] * cfg.noise_w);
            }
        }

        if (cfg.kappa > 0.0) {
            LmiCombo combo;
            combo.scalar_terms.emplace_back(alpha[0], HermitianMatrix::outer(dirs[0]));
            for (int t = 1; t < L; ++t)
                combo.scalar_terms.emplace_back(alpha[t],
                                                -cfg.sinr_tol1 * HermitianMatrix::outer(dirs[t]));
            if (isotropic_energy)
                combo.scalar_terms.emplace_back(
                    *we_scalar, (-cfg.sinr_tol1 / n) * HermitianMatrix::identity(n));
            else
                combo.block_terms.emplace_back(*we_block, -cfg.sinr_tol1);
            add_lmi_eig_bound(p, combo, (1.0 - tighten) * safe_threshold(cfg.chance_spec()));
        }

        SdpSolution s = solve(p, opts);
        out.status = s.status;
        out.iterations = s.iterations;
        if (s.status == SolveStatus::numerical_failure) continue;
        if (s.status != SolveStatus::optimal) return out;
        for (int l = 0; l < L; ++l) out.powers.push_back(std::max(0.0, s.scalars[alpha[l]]));
        if (isotropic_energy) {
            HermitianMatrix we = HermitianMatrix::identity(n);
            we *= std::max(0.0, s.scalars[*we_scalar]) / n;
            out.energy = std::move(we);
        } else {
            out.energy = s.blocks[*we_block];
        }
        out.objective = s.objective;
        return out;
    }
    return out;
}

inline SchemeOutcome outcome_from_directions(const ScenarioConfig& cfg, Scheme scheme,
                                             const std::vector<CVector>& dirs,
                                             const DirectionSolve& ds) {
    SchemeOutcome o;
    o.scheme = scheme;
    o.status = ds.status;
    o.iterations = ds.iterations;
    if (ds.status != SolveStatus::optimal) return o;
    std::vector<HermitianMatrix> layers;
    for (int l = 0; l < cfg.n_layers; ++l) {
        HermitianMatrix w = HermitianMatrix::outer(dirs[l]);
        w *= ds.powers[l];
        layers.push_back(std::move(w));
    }
    o.solution = covariances_to_solution(std::move(layers), ds.energy);
    return o;
}

inline std::vector<CVector> dominant_directions(const BeamformingSolution& sdr_sol) {
    std::vector<CVector> dirs;
    for (const auto& w : sdr_sol.layer_covariances) {
        const auto eig = eig_hermitian(w);
        dirs.push_back(eig.eigenvectors[0]);  // unit norm by construction
    }
    return dirs;
}

inline SchemeOutcome passthrough_outcome(const SdrResult& sdr, Scheme scheme) {
    SchemeOutcome o = sdr.outcome;
    o.scheme = scheme;
    o.passthrough = true;
    return o;
}

}  // namespace detail

// Deterministic extraction: keep the dominant eigenvector of each layer
// covariance as the beam direction and re-optimize all powers jointly.
// An already rank-one relaxed optimum passes through untouched.
inline SchemeOutcome extract_scheme1(const ScenarioConfig& cfg, const ChannelRealization& real,
                                     const SdrResult& sdr, const SolverOptions& opts = {}) {
    if (sdr.outcome.status != SolveStatus::optimal) {
        SchemeOutcome o;
        o.scheme = Scheme::scheme1;
        o.status = sdr.outcome.status;
        return o;
    }
    if (sdr.outcome.solution.rank_one) return detail::passthrough_outcome(sdr, Scheme::scheme1);
    const auto dirs = detail::dominant_directions(sdr.outcome.solution);
    const auto ds = detail::solve_with_directions(cfg, real, dirs, false, opts);
    return detail::outcome_from_directions(cfg, Scheme::scheme1, dirs, ds);
}

// Randomized extraction: candidate directions are drawn from the relaxed
// covariances (colored Gaussian, then normalized), powers re-optimized per
// candidate, best feasible candidate kept. Candidates are drawn
// sequentially from one stream, so a run with fewer candidates scores a
// prefix of a longer run's draws.
inline SchemeOutcome extract_scheme2(const ScenarioConfig& cfg, const ChannelRealization& real,
                                     const SdrResult& sdr, const SolverOptions& opts = {}) {
    if (sdr.outcome.status != SolveStatus::optimal) {
        SchemeOutcome o;
        o.scheme = Scheme::scheme2;
        o.status = sdr.outcome.status;
        return o;
    }
    if (sdr.outcome.solution.rank_one) return detail::passthrough_outcome(sdr, Scheme::scheme2);

    const int n = cfg.n_antennas;
    const int L = cfg.n_layers;
    std::vector<EigenDecomposition> eigs;
    for (const auto& w : sdr.outcome.solution.layer_covariances) eigs.push_back(eig_hermitian(w));

    Rng stream({cfg.seed, kStreamRandomization, real.trial_index});
    SchemeOutcome best;
    best.scheme = Scheme::scheme2;
    best.status = SolveStatus::infeasible;
    int total_iters = 0;
    for (int cand = 0; cand < cfg.n_rand; ++cand) {
        std::vector<CVector> dirs;
        for (int l = 0; l < L; ++l) {
            CVector d(n);
            for (int i = 0; i < n; ++i) {
                const cx r = stream.cnormal(1.0);
                const double root = std::sqrt(std::max(0.0, eigs[l].eigenvalues[i]));
                // d += sqrt(lambda_i) r_i u_i
                const CVector& u = eigs[l].eigenvectors[i];
                for (int a = 0; a < n; ++a) d[a] += root * r * u[a];
            }
            const double norm = std::sqrt(d.norm_sq());
            if (norm < 1e-12) {
                dirs = detail::dominant_directions(sdr.outcome.solution);
                break;
            }
            for (int a = 0; a < n; ++a) d[a] /= norm;
            dirs.push_back(std::move(d));
        }
        const auto ds = detail::solve_with_directions(cfg, real, dirs, false, opts);
        total_iters += ds.iterations;
        ++best.candidates_tried;
        if (ds.status != SolveStatus::optimal) continue;
        if (best.status != SolveStatus::optimal || ds.objective < best.solution.total_power) {
            SchemeOutcome o = detail::outcome_from_directions(cfg, Scheme::scheme2, dirs, ds);
            o.candidates_tried = best.candidates_tried;
            o.chosen_candidate = cand;
            best = std::move(o);
        }
    }
    best.iterations = total_iters;
    best.candidates_tried = cfg.n_rand;
    return best;
}

// Reference strategy: every layer matched-filters the strongest active
// receiver (ties to the lowest index) and the energy beam is isotropic.
// Powers are still optimized, so the comparison isolates the loss from the
// inflexible directions.
inline SchemeOutcome solve_baseline_mrt(const ScenarioConfig& cfg, const ChannelRealization& real,
                                        const SolverOptions& opts = {}) {
    validate(cfg);
    std::size_t best_k = real.receivers.size();
    double best_gain = -1.0;
    for (std::size_t k = 0; k < real.receivers.size(); ++k) {
        if (real.receivers[k].role == ReceiverRole::idle) continue;
        const double g = real.receivers[k].h.norm_sq();
        if (g > best_gain) {
            best_gain = g;
            best_k = k;
        }
    }
    if (best_k == real.receivers.size())
        throw std::invalid_argument("baseline requires at least one video receiver");
    CVector dir = real.receivers[best_k].h;
    const double norm = std::sqrt(dir.norm_sq());
    for (std::size_t i = 0; i < dir.dim(); ++i) dir[i] /= norm;
    std::vector<CVector> dirs(cfg.n_layers, dir);
    const auto ds = detail::solve_with_directions(cfg, real, dirs, true, opts);
    return detail::outcome_from_directions(cfg, Scheme::baseline, dirs, ds);
}

}  // namespace secbeam
