// SPDX-License-Identifier: Apache-2.0
//
// Part of secbeam. Copyright (c) 2026 the secbeam authors.

#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "secbeam/hermitian.hpp"

namespace secbeam {

namespace detail {

// Regularized lower incomplete gamma P(a, x), series branch (x < a + 1).
inline double gamma_p_series(double a, double x) {
    double ap = a;
    double sum = 1.0 / a;
    double del = sum;
    for (int n = 0; n < 500; ++n) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::abs(del) < std::abs(sum) * 1e-16) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Regularized upper incomplete gamma Q(a, x), Lentz continued fraction
// (x >= a + 1).
inline double gamma_q_contfrac(double a, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 500; ++i) {
        const double an = -double(i) * (double(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < 1e-16) break;
    }
    return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

}  // namespace detail

// CDF of the central chi-square distribution with `dof` degrees of freedom.
inline double chi2_cdf(double x, int dof) {
    if (dof < 1) throw std::domain_error("chi2_cdf: dof must be >= 1");
    if (x < 0.0) throw std::domain_error("chi2_cdf: negative argument");
    if (x == 0.0) return 0.0;
    const double a = 0.5 * double(dof);
    const double t = 0.5 * x;
    if (t < a + 1.0) return detail::gamma_p_series(a, t);
    return 1.0 - detail::gamma_q_contfrac(a, t);
}

// Quantile of the chi-square distribution by bisection on the documented
// bracket [0, dof + 40*sqrt(dof)]; probabilities whose quantile lies above
// the bracket saturate at its top. Resolves x to ~1e-13, well inside the
// 1e-10 contract.
inline double chi2_inv(double p, int dof) {
    if (dof < 1) throw std::domain_error("chi2_inv: dof must be >= 1");
    if (!(p > 0.0 && p < 1.0)) throw std::domain_error("chi2_inv: p must lie in (0, 1)");
    double lo = 0.0;
    double hi = double(dof) + 40.0 * std::sqrt(double(dof));
    if (chi2_cdf(hi, dof) < p) return hi;
    for (int it = 0; it < 200 && hi - lo > 1e-13 * (1.0 + hi); ++it) {
        const double mid = 0.5 * (lo + hi);
        if (chi2_cdf(mid, dof) < p)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

// Parameters of the collective outage requirement on the first video layer:
// Pr{ all J eavesdroppers see SINR <= gamma_tol1 } >= kappa, with
// eavesdropper channels normalized so ||g~||^2 is chi-square with 2*n_t
// degrees of freedom and sigma_tilde_sq the noise in those units.
struct ChanceSpec {
    double gamma_tol1 = 0.1;
    double sigma_tilde_sq = 1.0;
    double kappa = 0.99;
    int j_eavesdroppers = 4;
    int n_t = 6;
};

inline void validate(const ChanceSpec& s) {
    if (!(s.gamma_tol1 > 0.0)) throw std::domain_error("ChanceSpec: gamma_tol1 must be > 0");
    if (!(s.sigma_tilde_sq > 0.0)) throw std::domain_error("ChanceSpec: sigma_tilde_sq must be > 0");
    if (!(s.kappa > 0.0 && s.kappa < 1.0)) throw std::domain_error("ChanceSpec: kappa must lie in (0, 1)");
    if (s.j_eavesdroppers < 1) throw std::domain_error("ChanceSpec: j_eavesdroppers must be >= 1");
    if (s.n_t < 1) throw std::domain_error("ChanceSpec: n_t must be >= 1");
}

// Largest admissible lambda_max of the layer-1 excess matrix Q: capping
// lambda_max(Q) at this value guarantees the collective outage requirement,
// because g~^H Q g~ <= lambda_max(Q) * ||g~||^2 and ||g~||^2 is chi-square
// with 2*n_t degrees of freedom per eavesdropper, independently across the
// J eavesdroppers.
inline double safe_threshold(const ChanceSpec& s) {
    validate(s);
    const double p_single = std::pow(s.kappa, 1.0 / double(s.j_eavesdroppers));
    return s.gamma_tol1 * s.sigma_tilde_sq / chi2_inv(p_single, 2 * s.n_t);
}

// Q = W_1 - gamma_tol1 * (sum_{t>=2} W_t + W_E): positive directions of Q are
// exactly those in which an eavesdropper's layer-1 SINR can exceed gamma_tol1.
inline HermitianMatrix q_matrix(const std::vector<HermitianMatrix>& w_layers,
                                const HermitianMatrix& w_e, double gamma_tol1) {
    if (w_layers.empty()) throw std::invalid_argument("q_matrix: at least one layer required");
    const std::size_t n = w_layers.front().dim();
    for (const HermitianMatrix& w : w_layers)
        if (w.dim() != n) throw std::invalid_argument("q_matrix: layer dimension mismatch");
    if (w_e.dim() != n) throw std::invalid_argument("q_matrix: energy block dimension mismatch");
    HermitianMatrix q = w_layers.front();
    for (std::size_t t = 1; t < w_layers.size(); ++t) q -= gamma_tol1 * w_layers[t];
    q -= gamma_tol1 * w_e;
    return q;
}

struct SafeCheck {
    bool satisfied = false;
    double lambda = 0.0;     // lambda_max(Q)
    double threshold = 0.0;  // safe_threshold(spec)
    double margin = 0.0;     // threshold - lambda; >= 0 iff satisfied
};

inline SafeCheck check_safe(const HermitianMatrix& q, const ChanceSpec& spec) {
    SafeCheck c;
    c.lambda = lambda_max(q);
    c.threshold = safe_threshold(spec);
    c.margin = c.threshold - c.lambda;
    c.satisfied = c.margin >= 0.0;
    return c;
}

}  // namespace secbeam
