// SPDX-License-Identifier: Apache-2.0
//
// Part of secbeam. Copyright (c) 2026 the secbeam authors.

#pragma once

#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "secbeam/dense.hpp"
#include "secbeam/hermitian.hpp"

namespace secbeam {

// Small dense semidefinite programs over complex Hermitian PSD blocks and
// nonnegative scalars:
//
//   minimize    sum_b tr(C_b X_b) + sum_i c_i s_i
//   subject to  sum_b tr(A_jb X_b) + sum_i a_ji s_i  {>=, =, <=}  r_j
//               X_b >= 0 (Hermitian PSD),  s_i >= 0
//
// Internally each complex block is replaced by its real symmetric embedding
// [[Re X, -Im X], [Im X, Re X]] and every data matrix by half its embedding,
// which keeps all inner products, objective values, and duals in the
// original complex-trace units (tr over the embedding double-counts).
// Inequality rows get a nonnegative slack, scalars ride along as 1x1 blocks,
// and the resulting equality-form problem is solved by an infeasible-start
// primal-dual path-following method: Nesterov-Todd scaling W (W Z W = X per
// block), Mehrotra predictor-corrector, and a dense Schur complement
// M_ij = sum_b <A_i, W A_j W> factored by Cholesky with a diagonal ridge
// fallback for linearly dependent rows.
//
// Sizing assumption baked into the design: total embedded dimension and the
// constraint count both stay in the low hundreds, so O(m^2), O(m n^2) and
// O(n^3) steps are all trivially affordable and no sparsity beyond the
// per-row triplet lists is exploited.

using BlockId = std::size_t;
using ScalarId = std::size_t;

enum class Relation { ge, eq, le };

enum class SolveStatus { optimal, infeasible, unbounded, numerical_failure };

inline const char* status_name(SolveStatus s) {
    switch (s) {
        case SolveStatus::optimal: return "optimal";
        case SolveStatus::infeasible: return "infeasible";
        case SolveStatus::unbounded: return "unbounded";
        default: return "numerical_failure";
    }
}

class SdpProblem {
public:
    struct Expr {
        std::vector<std::pair<BlockId, HermitianMatrix>> block_terms;
        std::vector<std::pair<ScalarId, double>> scalar_terms;
    };

    struct Constraint {
        Expr expr;
        Relation rel = Relation::ge;
        double rhs = 0.0;
    };

    BlockId add_block(std::string name, std::size_t dim) {
        if (dim < 1 || dim > 64) throw std::invalid_argument("SdpProblem: block dim out of range");
        block_names_.push_back(std::move(name));
        block_dims_.push_back(dim);
        block_costs_.push_back(HermitianMatrix(dim));
        return block_names_.size() - 1;
    }

    ScalarId add_scalar(std::string name) {
        scalar_names_.push_back(std::move(name));
        scalar_costs_.push_back(0.0);
        return scalar_names_.size() - 1;
    }

    void set_block_cost(BlockId b, HermitianMatrix c) {
        if (c.dim() != block_dims_.at(b))
            throw std::invalid_argument("SdpProblem: cost dimension mismatch");
        c.require_hermitian();
        c.symmetrize();
        block_costs_.at(b) = std::move(c);
    }

    void set_scalar_cost(ScalarId i, double c) { scalar_costs_.at(i) = c; }

    void add_constraint(Expr e, Relation rel, double rhs) {
        for (auto& [b, m] : e.block_terms) {
            if (m.dim() != block_dims_.at(b))
                throw std::invalid_argument("SdpProblem: constraint matrix dimension mismatch");
            m.require_hermitian();
            m.symmetrize();
        }
        for (auto& [i, c] : e.scalar_terms) {
            (void)c;
            if (i >= scalar_names_.size())
                throw std::invalid_argument("SdpProblem: unknown scalar in constraint");
        }
        constraints_.push_back(Constraint{std::move(e), rel, rhs});
    }

    std::size_t n_blocks() const { return block_dims_.size(); }
    std::size_t n_scalars() const { return scalar_names_.size(); }
    std::size_t n_constraints() const { return constraints_.size(); }
    std::size_t block_dim(BlockId b) const { return block_dims_.at(b); }
    const std::string& block_name(BlockId b) const { return block_names_.at(b); }
    const std::string& scalar_name(ScalarId i) const { return scalar_names_.at(i); }
    const HermitianMatrix& block_cost(BlockId b) const { return block_costs_.at(b); }
    double scalar_cost(ScalarId i) const { return scalar_costs_.at(i); }
    const std::vector<Constraint>& constraints() const { return constraints_; }

private:
    std::vector<std::string> block_names_;
    std::vector<std::size_t> block_dims_;
    std::vector<HermitianMatrix> block_costs_;
    std::vector<std::string> scalar_names_;
    std::vector<double> scalar_costs_;
    std::vector<Constraint> constraints_;
};

struct SolverOptions {
    int max_iters = 200;
    double tol_gap = 1e-8;   // relative duality gap
    double tol_feas = 1e-8;  // relative primal/dual residuals
    int verbose = 0;         // 0 silent, 1 per-iteration lines on stderr
};

struct Residuals {
    double primal_infeas = 0.0;  // worst constraint violation plus PSD deficit, problem units
    double dual_infeas = 0.0;    // worst dual equation violation, problem units
    double gap = 0.0;            // complementarity sum_b tr(X_b Z_b) + sum_i s_i z_i
};

struct SdpSolution {
    SolveStatus status = SolveStatus::numerical_failure;
    std::vector<HermitianMatrix> blocks;
    std::vector<double> scalars;
    std::vector<HermitianMatrix> block_duals;   // cone duals Z_b
    std::vector<double> scalar_duals;           // cone duals z_i >= 0
    std::vector<double> constraint_duals;       // y_j (>= 0 for >=-rows, <= 0 for <=-rows)
    double objective = 0.0;
    double dual_objective = 0.0;
    double duality_gap = 0.0;
    int iterations = 0;
    Residuals residuals;
};

// Recomputes feasibility measures of (possibly externally produced) primal
// and dual values against the problem data, in problem units. This is the
// reference the solver itself is judged by in the tests.
inline Residuals residuals(const SdpProblem& p, const SdpSolution& s) {
    Residuals r;
    for (const auto& con : p.constraints()) {
        double v = 0.0;
        for (const auto& [b, m] : con.expr.block_terms) v += trace_product(m, s.blocks.at(b));
        for (const auto& [i, c] : con.expr.scalar_terms) v += c * s.scalars.at(i);
        double viol = 0.0;
        if (con.rel == Relation::ge) viol = std::max(0.0, con.rhs - v);
        else if (con.rel == Relation::le) viol = std::max(0.0, v - con.rhs);
        else viol = std::abs(v - con.rhs);
        r.primal_infeas = std::max(r.primal_infeas, viol);
    }
    for (std::size_t b = 0; b < p.n_blocks(); ++b) {
        const double lmin = eig_hermitian(s.blocks[b]).eigenvalues.back();
        r.primal_infeas = std::max(r.primal_infeas, std::max(0.0, -lmin));
    }
    for (std::size_t i = 0; i < p.n_scalars(); ++i)
        r.primal_infeas = std::max(r.primal_infeas, std::max(0.0, -s.scalars[i]));

    // dual equations: C_b - sum_j y_j A_jb = Z_b, c_i - sum_j y_j a_ji = z_i
    std::vector<HermitianMatrix> zd;
    zd.reserve(p.n_blocks());
    for (std::size_t b = 0; b < p.n_blocks(); ++b) zd.push_back(p.block_cost(b));
    std::vector<double> zs(p.n_scalars());
    for (std::size_t i = 0; i < p.n_scalars(); ++i) zs[i] = p.scalar_cost(i);
    for (std::size_t j = 0; j < p.n_constraints(); ++j) {
        const double y = s.constraint_duals.at(j);
        for (const auto& [b, m] : p.constraints()[j].expr.block_terms) zd[b] -= y * m;
        for (const auto& [i, c] : p.constraints()[j].expr.scalar_terms) zs[i] -= y * c;
    }
    for (std::size_t b = 0; b < p.n_blocks(); ++b) {
        const HermitianMatrix diff = zd[b] - s.block_duals.at(b);
        double fro = 0.0;
        for (std::size_t i = 0; i < diff.dim(); ++i)
            for (std::size_t j = 0; j < diff.dim(); ++j) fro += std::norm(diff(i, j));
        r.dual_infeas = std::max(r.dual_infeas, std::sqrt(fro));
    }
    for (std::size_t i = 0; i < p.n_scalars(); ++i)
        r.dual_infeas = std::max(r.dual_infeas, std::abs(zs[i] - s.scalar_duals.at(i)));

    r.gap = 0.0;
    for (std::size_t b = 0; b < p.n_blocks(); ++b)
        r.gap += trace_product(s.blocks[b], s.block_duals[b]);
    for (std::size_t i = 0; i < p.n_scalars(); ++i) r.gap += s.scalars[i] * s.scalar_duals[i];
    return r;
}

namespace detail {

struct Triplet {
    std::size_t r, c;
    double v;
};

struct IrowTerm {
    std::size_t iblock;
    std::vector<Triplet> trip;        // all nonzero entries of the embedded matrix
    std::optional<Mat> dense;         // kept only when dense enough to matter
};

struct Irow {
    std::vector<IrowTerm> terms;
    double rhs = 0.0;
};

struct Iblock {
    std::size_t dim = 0;
    int complex_src = -1;  // user block index when this is an embedded complex block
    int scalar_src = -1;   // user scalar index when this is a 1x1 scalar block
};

// half real embedding of a Hermitian matrix: <emb(A), emb(X)> = tr(A X)
inline Mat half_embedding(const HermitianMatrix& a) {
    Mat m = real_embedding(a);
    m *= 0.5;
    return m;
}

inline void collect_triplets(const Mat& m, std::vector<Triplet>& out) {
    out.clear();
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            if (m(i, j) != 0.0) out.push_back({i, j, m(i, j)});
}

inline IrowTerm make_term(std::size_t iblock, const Mat& m) {
    IrowTerm t;
    t.iblock = iblock;
    collect_triplets(m, t.trip);
    if (t.trip.size() > 2 * m.rows()) t.dense = m;
    return t;
}

// K = W A W for symmetric W and the term's sparse/dense coefficient A
inline Mat sandwich(const Mat& w, const IrowTerm& t) {
    if (t.dense) return w * (*t.dense * w);
    const std::size_t n = w.rows();
    Mat k(n, n);
    for (const Triplet& tr : t.trip) {
        // v * w_col(r) w_col(c)^T   (W symmetric: column = row)
        for (std::size_t i = 0; i < n; ++i) {
            const double wir = w(i, tr.r) * tr.v;
            if (wir == 0.0) continue;
            for (std::size_t j = 0; j < n; ++j) k(i, j) += wir * w(tr.c, j);
        }
    }
    return k;
}

inline double term_dot(const IrowTerm& t, const Mat& m) {
    double s = 0.0;
    for (const Triplet& tr : t.trip) s += tr.v * m(tr.r, tr.c);
    return s;
}

struct InternalForm {
    std::vector<Iblock> blocks;
    std::vector<Mat> cost;   // per internal block
    std::vector<Irow> rows;
    std::vector<double> b;
    std::vector<double> row_scale;  // applied multiplier; divide duals back out
    std::size_t total_dim = 0;
};

inline InternalForm build_internal(const SdpProblem& p) {
    InternalForm f;
    std::vector<std::size_t> cplx_iblock(p.n_blocks()), scal_iblock(p.n_scalars());
    for (std::size_t b = 0; b < p.n_blocks(); ++b) {
        Iblock ib;
        ib.dim = 2 * p.block_dim(b);
        ib.complex_src = int(b);
        cplx_iblock[b] = f.blocks.size();
        f.blocks.push_back(ib);
        f.cost.push_back(half_embedding(p.block_cost(b)));
    }
    for (std::size_t i = 0; i < p.n_scalars(); ++i) {
        Iblock ib;
        ib.dim = 1;
        ib.scalar_src = int(i);
        scal_iblock[i] = f.blocks.size();
        f.blocks.push_back(ib);
        Mat c(1, 1);
        c(0, 0) = p.scalar_cost(i);
        f.cost.push_back(c);
    }
    for (const auto& con : p.constraints()) {
        Irow row;
        row.rhs = con.rhs;
        // coalesce repeated references to one block so each (row, block)
        // pair yields exactly one term; the Schur assembly relies on that
        std::vector<std::pair<std::size_t, Mat>> acc;
        auto accumulate = [&acc](std::size_t ib, const Mat& m) {
            for (auto& [blk, sum] : acc)
                if (blk == ib) { sum += m; return; }
            acc.emplace_back(ib, m);
        };
        for (const auto& [b, m] : con.expr.block_terms)
            accumulate(cplx_iblock[b], half_embedding(m));
        for (const auto& [i, c] : con.expr.scalar_terms) {
            Mat m(1, 1);
            m(0, 0) = c;
            accumulate(scal_iblock[i], m);
        }
        // equilibrate: rows of this family span many orders of magnitude
        // (channel products vs unit basis matrices); a unit-norm row keeps
        // the Schur complement well conditioned
        double fro = 0.0;
        for (const auto& [ib, m] : acc) {
            (void)ib;
            const double v = m.frobenius();
            fro += v * v;
        }
        fro = std::sqrt(fro);
        const double scale = (fro > 1e-300) ? 1.0 / fro : 1.0;
        row.rhs *= scale;
        f.row_scale.push_back(scale);
        for (auto& [ib, m] : acc) {
            m *= scale;
            row.terms.push_back(make_term(ib, m));
        }
        if (con.rel != Relation::eq) {
            Iblock slack;
            slack.dim = 1;
            const std::size_t sb = f.blocks.size();
            f.blocks.push_back(slack);
            f.cost.push_back(Mat(1, 1));
            Mat m(1, 1);
            m(0, 0) = (con.rel == Relation::ge) ? -1.0 : 1.0;
            row.terms.push_back(make_term(sb, m));
        }
        f.b.push_back(row.rhs);
        f.rows.push_back(std::move(row));
    }
    for (const Iblock& ib : f.blocks) f.total_dim += ib.dim;
    return f;
}

// maps the embedded iterate back to a complex Hermitian matrix, projecting
// onto the embedding structure first (averages the two copies)
inline HermitianMatrix from_embedding(const Mat& y) {
    const std::size_t n = y.rows() / 2;
    HermitianMatrix x(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const double re = 0.5 * (y(i, j) + y(n + i, n + j));
            const double im = 0.5 * (y(n + i, j) - y(i, n + j));
            x(i, j) = cx(re, im);
        }
    x.symmetrize();
    return x;
}

// largest alpha in (0, 1] with X + alpha * dX staying PSD, shrunk by tau;
// lx is the Cholesky factor of X
inline double step_length(const Mat& lx, const Mat& dx, double tau) {
    Mat s = dx;
    solve_lower_mat(lx, s);                 // L^{-1} dX
    Mat st = s.transposed();
    solve_lower_mat(lx, st);                // L^{-1} dX L^{-T}, symmetric
    symmetrize(st);
    const double lmin = jacobi_eig_sym(st).values.back();
    if (lmin >= 0.0) return 1.0;
    return std::min(1.0, tau / (-lmin));
}

}  // namespace detail

inline SdpSolution solve(const SdpProblem& p, const SolverOptions& opts = {}) {
    using namespace detail;
    const InternalForm f = build_internal(p);
    const std::size_t nb = f.blocks.size();
    const std::size_t m = f.rows.size();
    const double ntot = double(std::max<std::size_t>(1, f.total_dim));

    SdpSolution sol;
    sol.blocks.assign(p.n_blocks(), HermitianMatrix());
    sol.scalars.assign(p.n_scalars(), 0.0);
    sol.block_duals.assign(p.n_blocks(), HermitianMatrix());
    sol.scalar_duals.assign(p.n_scalars(), 0.0);
    sol.constraint_duals.assign(m, 0.0);

    // data norms for the starting point and the relative measures
    double bnorm = 0.0, max_row_norm = 0.0, cnorm = 0.0;
    for (double v : f.b) bnorm += v * v;
    bnorm = std::sqrt(bnorm);
    for (const Irow& row : f.rows) {
        double fro = 0.0;
        for (const auto& t : row.terms)
            for (const auto& tr : t.trip) fro += tr.v * tr.v;
        max_row_norm = std::max(max_row_norm, std::sqrt(fro));
    }
    for (const Mat& c : f.cost) cnorm = std::max(cnorm, c.frobenius());

    double xi = 10.0, eta = 10.0;
    for (std::size_t j = 0; j < m; ++j) {
        double fro = 0.0;
        for (const auto& t : f.rows[j].terms)
            for (const auto& tr : t.trip) fro += tr.v * tr.v;
        xi = std::max(xi, ntot * (1.0 + std::abs(f.b[j])) / (1.0 + std::sqrt(fro)));
    }
    eta = std::max({eta, std::sqrt(ntot), (1.0 + std::max(cnorm, max_row_norm))});

    std::vector<Mat> X(nb), Z(nb);
    for (std::size_t ib = 0; ib < nb; ++ib) {
        X[ib] = Mat::identity(f.blocks[ib].dim);
        X[ib] *= xi;
        Z[ib] = Mat::identity(f.blocks[ib].dim);
        Z[ib] *= eta;
    }
    std::vector<double> y(m, 0.0);

    auto finalize = [&](SolveStatus status, int iters) {
        sol.status = status;
        sol.iterations = iters;
        for (std::size_t ib = 0; ib < nb; ++ib) {
            const Iblock& blk = f.blocks[ib];
            if (blk.complex_src >= 0) {
                sol.blocks[blk.complex_src] = from_embedding(X[ib]);
                Mat zd = Z[ib];
                zd *= 2.0;  // data matrices carry 1/2, so duals map back doubled
                sol.block_duals[blk.complex_src] = from_embedding(zd);
            } else if (blk.scalar_src >= 0) {
                sol.scalars[blk.scalar_src] = X[ib](0, 0);
                sol.scalar_duals[blk.scalar_src] = Z[ib](0, 0);
            }
        }
        sol.constraint_duals = y;
        for (std::size_t j = 0; j < m; ++j) sol.constraint_duals[j] *= f.row_scale[j];
        double pobj = 0.0;
        for (std::size_t ib = 0; ib < nb; ++ib) pobj += dot(f.cost[ib], X[ib]);
        double dobj = 0.0;
        for (std::size_t j = 0; j < m; ++j) dobj += f.b[j] * y[j];
        sol.objective = pobj;
        sol.dual_objective = dobj;
        double gap = 0.0;
        for (std::size_t ib = 0; ib < nb; ++ib) gap += dot(X[ib], Z[ib]);
        sol.duality_gap = gap;
        if (status == SolveStatus::optimal) sol.residuals = residuals(p, sol);
        return sol;
    };

    double best_mu = std::numeric_limits<double>::infinity();
    int stalled = 0;
    double prev_alpha = 1.0;
    // Iterates can degrade after reaching contract accuracy when the
    // endgame turns hostile; the best contract-grade iterate is kept so a
    // later stall cannot lose it.
    double best_quality = std::numeric_limits<double>::infinity();
    bool have_best = false;
    std::vector<Mat> bestX, bestZ;
    std::vector<double> best_y;
    // Near a degenerate face an aggressive endgame step can inject a
    // feasibility error the Schur system cannot see again. One rollback to
    // the previous iterate is allowed, after which steps stay damped.
    std::vector<Mat> prevX, prevZ;
    std::vector<double> prev_y;
    double prev_pinf = std::numeric_limits<double>::infinity();
    bool cautious = false, rolled = false;

    // Farkas-type ray checks, shared by the in-loop early exit (strict
    // gates) and the stall/iteration-cap classification (relaxed gates).
    auto primal_infeas_cert = [&](const std::vector<double>& yv, double tol, double ygate) {
        if (m == 0) return false;
        double by = 0.0, ymax = 0.0;
        for (std::size_t j = 0; j < m; ++j) {
            by += f.b[j] * yv[j];
            ymax = std::max(ymax, std::abs(yv[j]));
        }
        if (!(by > 1e-8 * (1.0 + ymax)) || ymax < ygate) return false;
        for (std::size_t ib = 0; ib < nb; ++ib) {
            Mat zh(f.blocks[ib].dim, f.blocks[ib].dim);
            bool touched = false;
            for (std::size_t j = 0; j < m; ++j)
                for (const auto& t : f.rows[j].terms)
                    if (t.iblock == ib) {
                        touched = true;
                        for (const auto& tr : t.trip) zh(tr.r, tr.c) -= (yv[j] / by) * tr.v;
                    }
            if (!touched) continue;
            symmetrize(zh);
            if (min_eigenvalue(zh) < -tol * (1.0 + zh.max_abs())) return false;
        }
        return true;
    };
    auto unbounded_cert = [&](const std::vector<Mat>& xv, double tol, double xgate) {
        double xnorm = 0.0;
        for (std::size_t ib = 0; ib < nb; ++ib) xnorm += xv[ib].frobenius();
        if (xnorm < xgate) return false;
        double cx_val = 0.0;
        for (std::size_t ib = 0; ib < nb; ++ib) cx_val += dot(f.cost[ib], xv[ib]);
        if (!(cx_val < -tol * xnorm)) return false;
        for (std::size_t j = 0; j < m; ++j) {
            double v = 0.0;
            for (const auto& t : f.rows[j].terms) v += term_dot(t, xv[t.iblock]);
            if (std::abs(v) > tol * xnorm) return false;
        }
        return true;
    };
    // Endgame steps strand a primal residual the Schur system cannot see:
    // once a constraint goes active its row weight in the normal matrix
    // shrinks to the evaluation noise floor, so no amount of refinement
    // through that factorization recovers the row. The rows themselves are
    // equilibrated and well conditioned, so a direct least-norm projection
    // of X onto {A(X) = b} restores them. 1x1 blocks pinned at the cone
    // boundary cannot absorb their share; an active-set pass freezes them
    // and redistributes the motion into the interior blocks. The result is
    // accepted only by the callers below, after the PSD guard here and a
    // fresh tolerance check there.
    auto project_rows = [&](std::vector<Mat>& xc) -> bool {
        if (m == 0) return false;
        const std::vector<Mat> base = xc;
        std::vector<char> frozen(nb, 0);
        for (int round = 0; round < 8; ++round) {
            Mat g(m, m);
            std::vector<Mat> acc(nb);
            std::vector<char> used(nb, 0);
            for (std::size_t a = 0; a < m; ++a) {
                std::fill(used.begin(), used.end(), char(0));
                for (const auto& t : f.rows[a].terms) {
                    if (frozen[t.iblock]) continue;
                    if (!used[t.iblock]) {
                        acc[t.iblock] = Mat(f.blocks[t.iblock].dim, f.blocks[t.iblock].dim);
                        used[t.iblock] = 1;
                    }
                    for (const auto& tr : t.trip) acc[t.iblock](tr.r, tr.c) += tr.v;
                }
                for (std::size_t c2 = a; c2 < m; ++c2) {
                    double s = 0.0;
                    for (const auto& t : f.rows[c2].terms)
                        if (!frozen[t.iblock] && used[t.iblock]) s += term_dot(t, acc[t.iblock]);
                    g(a, c2) = s;
                    g(c2, a) = s;
                }
            }
            std::vector<double> lam(m);
            for (std::size_t j = 0; j < m; ++j) {
                double v = 0.0;
                for (const auto& t : f.rows[j].terms) v += term_dot(t, base[t.iblock]);
                lam[j] = f.b[j] - v;
            }
            Mat gl;
            if (cholesky(g, gl, 1e-300)) {
                solve_lower(gl, lam);
                solve_lower_t(gl, lam);
            } else {
                // dependent or fully frozen rows: least-norm over what moves
                const SymEig ge = jacobi_eig_sym(g);
                const std::vector<double> rhs = lam;
                std::fill(lam.begin(), lam.end(), 0.0);
                const double lmax = ge.values.empty() ? 0.0 : std::max(0.0, ge.values.front());
                const double clip = 1e-12 * std::max(lmax, 1e-300);
                for (std::size_t k = 0; k < m; ++k) {
                    if (ge.values[k] <= clip) continue;
                    double qr = 0.0;
                    for (std::size_t i = 0; i < m; ++i) qr += ge.vectors(i, k) * rhs[i];
                    qr /= ge.values[k];
                    for (std::size_t i = 0; i < m; ++i) lam[i] += qr * ge.vectors(i, k);
                }
            }
            xc = base;
            for (std::size_t j = 0; j < m; ++j)
                for (const auto& t : f.rows[j].terms) {
                    if (frozen[t.iblock]) continue;
                    for (const auto& tr : t.trip) xc[t.iblock](tr.r, tr.c) += lam[j] * tr.v;
                }
            bool redo = false;
            for (std::size_t ib = 0; ib < nb; ++ib) {
                if (f.blocks[ib].dim != 1 || frozen[ib]) continue;
                if (xc[ib](0, 0) < 0.0) {
                    frozen[ib] = 1;
                    redo = true;
                }
            }
            if (redo) continue;
            // the dip allowance is relative to each block's own scale: for a
            // slack block whose positive semidefiniteness IS the constraint,
            // an indefiniteness that looks negligible next to the largest
            // blocks can still be a material violation of its own bound
            for (std::size_t ib = 0; ib < nb; ++ib)
                if (jacobi_eig_sym(xc[ib]).values.back() < -1e-9 * (1.0 + xc[ib].frobenius()))
                    return false;
            return true;
        }
        return false;
    };
    // Accuracy the solver promises its callers; an iterate meeting it is an
    // acceptable optimum even when the strict internal targets are out of
    // numerical reach.
    auto contract_met = [&](const std::vector<Mat>& xv) {
        double gap = 0.0, pobj = 0.0;
        for (std::size_t ib = 0; ib < nb; ++ib) {
            gap += dot(xv[ib], Z[ib]);
            pobj += dot(f.cost[ib], xv[ib]);
        }
        double pinf = 0.0;
        for (std::size_t j = 0; j < m; ++j) {
            double v = 0.0;
            for (const auto& t : f.rows[j].terms) v += term_dot(t, xv[t.iblock]);
            const double d = f.b[j] - v;
            pinf += d * d;
        }
        pinf = std::sqrt(pinf);
        double dinf = 0.0;
        for (std::size_t ib = 0; ib < nb; ++ib) {
            Mat rd = f.cost[ib] - Z[ib];
            for (std::size_t j = 0; j < m; ++j)
                for (const auto& t : f.rows[j].terms)
                    if (t.iblock == ib)
                        for (const auto& tr : t.trip) rd(tr.r, tr.c) -= y[j] * tr.v;
            dinf = std::max(dinf, rd.frobenius());
        }
        const double scale_d = std::max({cnorm, max_row_norm, 1e-3});
        return gap <= 1e-7 * (1.0 + std::abs(pobj)) && pinf <= 1e-7 * (1.0 + bnorm) &&
               dinf <= 1e-7 * (1.0 + scale_d);
    };
    auto classify_failure = [&](int iter) {
        if (contract_met(X)) return finalize(SolveStatus::optimal, iter);
        if (std::vector<Mat> xc = X; project_rows(xc) && contract_met(xc)) {
            X = std::move(xc);
            return finalize(SolveStatus::optimal, iter);
        }
        if (have_best) {
            X = bestX;
            y = best_y;
            Z = bestZ;
            return finalize(SolveStatus::optimal, iter);
        }
        if (primal_infeas_cert(y, 1e-6, 0.0)) return finalize(SolveStatus::infeasible, iter);
        if (unbounded_cert(X, 1e-6, 1e2 * xi * std::sqrt(ntot)))
            return finalize(SolveStatus::unbounded, iter);
        return finalize(SolveStatus::numerical_failure, iter);
    };

    for (int iter = 0; iter < opts.max_iters; ++iter) {
        // residuals of the current iterate
        std::vector<double> rp(m);
        for (std::size_t j = 0; j < m; ++j) {
            double v = 0.0;
            for (const auto& t : f.rows[j].terms) v += term_dot(t, X[t.iblock]);
            rp[j] = f.b[j] - v;
        }
        std::vector<Mat> Rd(nb);
        for (std::size_t ib = 0; ib < nb; ++ib) Rd[ib] = f.cost[ib] - Z[ib];
        for (std::size_t j = 0; j < m; ++j)
            for (const auto& t : f.rows[j].terms)
                for (const auto& tr : t.trip) Rd[t.iblock](tr.r, tr.c) -= y[j] * tr.v;

        double gap = 0.0, pobj = 0.0, dobj = 0.0;
        for (std::size_t ib = 0; ib < nb; ++ib) {
            gap += dot(X[ib], Z[ib]);
            pobj += dot(f.cost[ib], X[ib]);
        }
        for (std::size_t j = 0; j < m; ++j) dobj += f.b[j] * y[j];
        const double mu = gap / ntot;
        double pinf = 0.0, dinf = 0.0;
        for (double v : rp) pinf += v * v;
        pinf = std::sqrt(pinf);
        for (std::size_t ib = 0; ib < nb; ++ib) dinf = std::max(dinf, Rd[ib].frobenius());

        // Optimal objectives here can be many orders below 1 (milliwatt
        // scales), so the gap and residual targets are tied to the data and
        // objective magnitudes rather than to 1 + |obj|. The absolute gap
        // floor lets zero-objective problems terminate.
        const double scale_p = std::max(bnorm, 1e-3);
        const double scale_d = std::max({cnorm, max_row_norm, 1e-3});
        const double gap_floor = 1e-14 * scale_d * ntot * xi;
        const double gap_target =
            opts.tol_gap * std::max(std::abs(pobj), std::abs(dobj)) + gap_floor;
        const bool conv = pinf <= opts.tol_feas * scale_p && dinf <= opts.tol_feas * scale_d &&
                          gap <= gap_target;
        // fallback accuracy: the usual solver-style relative measures
        const bool conv_loose = pinf / (1.0 + bnorm) <= opts.tol_feas &&
                                dinf / (1.0 + scale_d) <= opts.tol_feas &&
                                gap / (1.0 + std::abs(pobj) + std::abs(dobj)) <= opts.tol_gap;

        if (opts.verbose)
            std::fprintf(stderr, "  ipm iter %3d  mu %.3e  gap %.3e  pinf %.3e  dinf %.3e\n",
                         iter, mu, gap, pinf, dinf);

        if (!rolled && !prevX.empty() && pinf > 100.0 * (prev_pinf + 1e-14) &&
            pinf > opts.tol_feas * scale_p && gap <= 1e-4 * (1.0 + std::abs(pobj))) {
            X = prevX;
            y = prev_y;
            Z = prevZ;
            rolled = true;
            cautious = true;
            continue;
        }
        prevX = X;
        prevZ = Z;
        prev_y = y;
        prev_pinf = pinf;

        {
            const double q = std::max({gap / (1e-7 * (1.0 + std::abs(pobj))),
                                       pinf / (1e-7 * (1.0 + bnorm)),
                                       dinf / (1e-7 * (1.0 + scale_d))});
            if (q <= 1.0 && q < best_quality) {
                best_quality = q;
                have_best = true;
                bestX = X;
                bestZ = Z;
                best_y = y;
            }
        }

        if (conv) return finalize(SolveStatus::optimal, iter);

        // gap and dual residual at target with only the primal residual
        // stranded: shed it by projection and re-test at full strictness
        if (dinf <= opts.tol_feas * scale_d && pinf > opts.tol_feas * scale_p &&
            pinf <= 1e-3 * (1.0 + bnorm) && gap <= 10.0 * gap_target) {
            std::vector<Mat> xc = X;
            if (project_rows(xc)) {
                double pobj2 = 0.0, gap2 = 0.0, pinf2 = 0.0;
                for (std::size_t ib = 0; ib < nb; ++ib) {
                    pobj2 += dot(f.cost[ib], xc[ib]);
                    gap2 += dot(xc[ib], Z[ib]);
                }
                for (std::size_t j = 0; j < m; ++j) {
                    double v = 0.0;
                    for (const auto& t : f.rows[j].terms) v += term_dot(t, xc[t.iblock]);
                    const double d = f.b[j] - v;
                    pinf2 += d * d;
                }
                pinf2 = std::sqrt(pinf2);
                const double gt2 =
                    opts.tol_gap * std::max(std::abs(pobj2), std::abs(dobj)) + gap_floor;
                if (pinf2 <= opts.tol_feas * scale_p && gap2 <= gt2) {
                    X = std::move(xc);
                    return finalize(SolveStatus::optimal, iter);
                }
            }
        }

        if (iter >= 3 && primal_infeas_cert(y, 1e-7, 1e3))
            return finalize(SolveStatus::infeasible, iter);
        if (iter >= 3 && unbounded_cert(X, 1e-7, 1e6 * xi * std::sqrt(ntot)))
            return finalize(SolveStatus::unbounded, iter);

        if (mu < 0.9 * best_mu) {
            best_mu = mu;
            stalled = 0;
        } else if (++stalled > 40) {
            if (conv_loose) return finalize(SolveStatus::optimal, iter);
            return classify_failure(iter);
        }

        // NT scaling per block: W Z W = X
        std::vector<Mat> Lx(nb), W(nb), Zinv(nb);
        bool factor_ok = true;
        for (std::size_t ib = 0; ib < nb && factor_ok; ++ib) {
            const std::size_t n = f.blocks[ib].dim;
            if (!cholesky(X[ib], Lx[ib])) { factor_ok = false; break; }
            Mat Lz;
            if (!cholesky(Z[ib], Lz)) { factor_ok = false; break; }
            // T = Lx^T Z Lx, spectral root, W = Lx U D^{ -1/2 } U^T Lx^T
            Mat T = Lx[ib].transposed() * Z[ib] * Lx[ib];
            symmetrize(T);
            const SymEig te = jacobi_eig_sym(T);
            if (te.values.back() <= 0.0) { factor_ok = false; break; }
            Mat root(n, n);
            for (std::size_t a = 0; a < n; ++a)
                for (std::size_t c2 = 0; c2 < n; ++c2) {
                    double s = 0.0;
                    for (std::size_t k = 0; k < n; ++k)
                        s += te.vectors(a, k) * te.vectors(c2, k) / std::sqrt(te.values[k]);
                    root(a, c2) = s;
                }
            W[ib] = Lx[ib] * root * Lx[ib].transposed();
            symmetrize(W[ib]);
            // Z^{-1} via the Cholesky factor
            Mat zi = Mat::identity(n);
            solve_lower_mat(Lz, zi);
            solve_lower_t_mat(Lz, zi);
            symmetrize(zi);
            Zinv[ib] = std::move(zi);
        }
        if (!factor_ok) return classify_failure(iter);

        // Schur complement M_ij = sum_b <A_i, W A_j W>
        Mat M(m, m);
        std::vector<std::vector<std::size_t>> rows_of_block(nb);
        for (std::size_t j = 0; j < m; ++j)
            for (const auto& t : f.rows[j].terms) rows_of_block[t.iblock].push_back(j);
        for (std::size_t ib = 0; ib < nb; ++ib) {
            const auto& rows = rows_of_block[ib];
            for (std::size_t jj = 0; jj < rows.size(); ++jj) {
                const std::size_t j = rows[jj];
                const IrowTerm* tj = nullptr;
                for (const auto& t : f.rows[j].terms)
                    if (t.iblock == ib) tj = &t;
                const Mat K = sandwich(W[ib], *tj);
                for (std::size_t ii = 0; ii <= jj; ++ii) {
                    const std::size_t i = rows[ii];
                    const IrowTerm* ti = nullptr;
                    for (const auto& t : f.rows[i].terms)
                        if (t.iblock == ib) ti = &t;
                    const double v = term_dot(*ti, K);
                    if (i <= j) M(i, j) += v; else M(j, i) += v;
                }
            }
        }
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = i + 1; j < m; ++j) M(j, i) = M(i, j);

        // Factor the Schur complement. Cholesky is the fast path; linearly
        // dependent rows or endgame degeneracy switch to a clipped spectral
        // solve, which yields the least-norm multiplier step instead of
        // amplifying the near-null modes.
        Mat Lm;
        SymEig meig;
        bool eigen_path = false;
        if (m > 0) {
            const bool chol_ok = (stalled <= 3) && cholesky(M, Lm, 1e-300);
            if (!chol_ok) {
                meig = jacobi_eig_sym(M);
                eigen_path = true;
            }
        }

        // A(W Rd W) is shared by predictor and corrector
        std::vector<Mat> WRdW(nb);
        for (std::size_t ib = 0; ib < nb; ++ib) {
            WRdW[ib] = W[ib] * Rd[ib] * W[ib];
            symmetrize(WRdW[ib]);
        }

        auto solve_direction = [&](const std::vector<Mat>& Rc, std::vector<Mat>& dX,
                                   std::vector<double>& dy, std::vector<Mat>& dZ) {
            dy.assign(m, 0.0);
            for (std::size_t j = 0; j < m; ++j) {
                double v = rp[j];
                for (const auto& t : f.rows[j].terms) {
                    v -= term_dot(t, Rc[t.iblock]);
                    v += term_dot(t, WRdW[t.iblock]);
                }
                dy[j] = v;
            }
            if (m > 0 && eigen_path) {
                const std::vector<double> rhs = dy;
                std::fill(dy.begin(), dy.end(), 0.0);
                const double lmax = meig.values.empty() ? 0.0 : std::max(0.0, meig.values.front());
                const double clip = 1e-13 * std::max(lmax, 1e-300);
                for (std::size_t k = 0; k < m; ++k) {
                    if (meig.values[k] <= clip) continue;
                    double qr = 0.0;
                    for (std::size_t i = 0; i < m; ++i) qr += meig.vectors(i, k) * rhs[i];
                    qr /= meig.values[k];
                    for (std::size_t i = 0; i < m; ++i) dy[i] += qr * meig.vectors(i, k);
                }
            } else if (m > 0) {
                const std::vector<double> rhs = dy;
                solve_lower(Lm, dy);
                solve_lower_t(Lm, dy);
                // refinement recovers the digits the endgame conditioning costs
                for (int pass = 0; pass < 2; ++pass) {
                    std::vector<double> res(m);
                    for (std::size_t i = 0; i < m; ++i) {
                        double v = rhs[i];
                        for (std::size_t j = 0; j < m; ++j) v -= M(i, j) * dy[j];
                        res[i] = v;
                    }
                    solve_lower(Lm, res);
                    solve_lower_t(Lm, res);
                    for (std::size_t i = 0; i < m; ++i) dy[i] += res[i];
                }
            }
            dZ.assign(nb, Mat());
            for (std::size_t ib = 0; ib < nb; ++ib) dZ[ib] = Rd[ib];
            for (std::size_t j = 0; j < m; ++j)
                for (const auto& t : f.rows[j].terms)
                    for (const auto& tr : t.trip) dZ[t.iblock](tr.r, tr.c) -= dy[j] * tr.v;
            for (std::size_t ib = 0; ib < nb; ++ib) symmetrize(dZ[ib]);
            dX.assign(nb, Mat());
            for (std::size_t ib = 0; ib < nb; ++ib) {
                dX[ib] = Rc[ib] - W[ib] * dZ[ib] * W[ib];
                symmetrize(dX[ib]);
            }
            // The Newton system promises A(dX) = rp, but the recovery above
            // loses digits to ||W||^2 cancellation once the iterate spreads
            // over many decades; the leak freezes the primal residual while
            // mu keeps collapsing. Re-solving the defect through the same
            // factorization restores the identity to working accuracy.
            for (int pass = 0; pass < 2 && m > 0; ++pass) {
                std::vector<double> err(m);
                double en = 0.0, rn = 0.0;
                for (std::size_t j = 0; j < m; ++j) {
                    double v = rp[j];
                    for (const auto& t : f.rows[j].terms) v -= term_dot(t, dX[t.iblock]);
                    err[j] = v;
                    en += v * v;
                    rn += rp[j] * rp[j];
                }
                if (en <= 1e-26 * (1.0 + rn)) break;
                std::vector<double> dy2 = err;
                if (eigen_path) {
                    std::fill(dy2.begin(), dy2.end(), 0.0);
                    const double lmax =
                        meig.values.empty() ? 0.0 : std::max(0.0, meig.values.front());
                    const double clip = 1e-13 * std::max(lmax, 1e-300);
                    for (std::size_t k = 0; k < m; ++k) {
                        if (meig.values[k] <= clip) continue;
                        double qr = 0.0;
                        for (std::size_t i = 0; i < m; ++i) qr += meig.vectors(i, k) * err[i];
                        qr /= meig.values[k];
                        for (std::size_t i = 0; i < m; ++i) dy2[i] += qr * meig.vectors(i, k);
                    }
                } else {
                    solve_lower(Lm, dy2);
                    solve_lower_t(Lm, dy2);
                }
                for (std::size_t ib = 0; ib < nb; ++ib) {
                    Mat s2(f.blocks[ib].dim, f.blocks[ib].dim);
                    bool touched = false;
                    for (std::size_t j = 0; j < m; ++j)
                        for (const auto& t : f.rows[j].terms)
                            if (t.iblock == ib) {
                                touched = true;
                                for (const auto& tr : t.trip) s2(tr.r, tr.c) += dy2[j] * tr.v;
                            }
                    if (!touched) continue;
                    symmetrize(s2);
                    dZ[ib] -= s2;
                    Mat dx2 = W[ib] * s2 * W[ib];
                    symmetrize(dx2);
                    dX[ib] += dx2;
                }
                for (std::size_t j = 0; j < m; ++j) dy[j] += dy2[j];
            }
        };

        const double tau = cautious ? 0.8 : (gap > 1e3 * gap_target) ? 0.95 : 0.98;

        // predictor: Rc = -X
        std::vector<Mat> Rc(nb);
        for (std::size_t ib = 0; ib < nb; ++ib) {
            Rc[ib] = X[ib];
            Rc[ib] *= -1.0;
        }
        std::vector<Mat> dXa, dZa;
        std::vector<double> dya;
        solve_direction(Rc, dXa, dya, dZa);

        double ap = 1.0, ad = 1.0;
        for (std::size_t ib = 0; ib < nb; ++ib) {
            ap = std::min(ap, step_length(Lx[ib], dXa[ib], tau));
            Mat Lz;
            cholesky(Z[ib], Lz);
            ad = std::min(ad, step_length(Lz, dZa[ib], tau));
        }
        double mu_aff = 0.0;
        for (std::size_t ib = 0; ib < nb; ++ib) {
            Mat xa = X[ib];
            Mat dxs = dXa[ib];
            dxs *= ap;
            xa += dxs;
            Mat za = Z[ib];
            Mat dzs = dZa[ib];
            dzs *= ad;
            za += dzs;
            mu_aff += dot(xa, za);
        }
        mu_aff /= ntot;
        double sigma = std::pow(std::max(0.0, mu_aff / mu), 3.0);
        if (cautious) sigma = std::max(sigma, 0.3);
        // collapsed steps mean the iterate sits on the cone boundary; bias
        // toward the central path to pull it back into the interior
        if (prev_alpha < 0.05) sigma = std::max(sigma, 0.5);
        sigma = std::min(1.0, std::max(sigma, 1e-10));

        // corrector: Rc = sigma mu Z^{-1} - X - sym(dXa dZa Z^{-1})
        for (std::size_t ib = 0; ib < nb; ++ib) {
            Mat rc = Zinv[ib];
            rc *= sigma * mu;
            rc -= X[ib];
            Mat so = dXa[ib] * dZa[ib] * Zinv[ib];
            symmetrize(so);
            rc -= so;
            Rc[ib] = std::move(rc);
        }
        std::vector<Mat> dX, dZ;
        std::vector<double> dy;
        solve_direction(Rc, dX, dy, dZ);

        bool finite = true;
        for (std::size_t ib = 0; ib < nb && finite; ++ib)
            finite = std::isfinite(dX[ib].frobenius()) && std::isfinite(dZ[ib].frobenius());
        if (!finite) {
            dX = dXa;
            dy = dya;
            dZ = dZa;
        }

        ap = 1.0;
        ad = 1.0;
        for (std::size_t ib = 0; ib < nb; ++ib) {
            ap = std::min(ap, step_length(Lx[ib], dX[ib], tau));
            Mat Lz;
            cholesky(Z[ib], Lz);
            ad = std::min(ad, step_length(Lz, dZ[ib], tau));
        }
        if (ap < 1e-10 && ad < 1e-10) {
            if (++stalled > 5) return classify_failure(iter);
        }
        for (std::size_t ib = 0; ib < nb; ++ib) {
            Mat dxs = dX[ib];
            dxs *= ap;
            X[ib] += dxs;
            Mat dzs = dZ[ib];
            dzs *= ad;
            Z[ib] += dzs;
        }
        for (std::size_t j = 0; j < m; ++j) y[j] += ad * dy[j];
        prev_alpha = std::min(ap, ad);

        // After a rollback every step washes its leaked residual out again,
        // with an eigenvalue floor keeping the cleaned iterate strictly
        // inside the cone for the next NT factorization.
        if (cautious) {
            std::vector<Mat> xs = X;
            if (project_rows(xs)) {
                for (std::size_t ib = 0; ib < nb; ++ib) {
                    const std::size_t n = f.blocks[ib].dim;
                    const double fl = 1e-13 * (1.0 + xs[ib].frobenius());
                    const SymEig xe = jacobi_eig_sym(xs[ib]);
                    if (xe.values.back() >= fl) continue;
                    Mat rec(n, n);
                    for (std::size_t k = 0; k < n; ++k) {
                        const double v = std::max(xe.values[k], fl);
                        for (std::size_t a = 0; a < n; ++a)
                            for (std::size_t c2 = 0; c2 < n; ++c2)
                                rec(a, c2) += v * xe.vectors(a, k) * xe.vectors(c2, k);
                    }
                    xs[ib] = std::move(rec);
                }
                X = std::move(xs);
            }
        }
    }
    return classify_failure(opts.max_iters);
}

// Linear combination of problem variables whose largest eigenvalue is to be
// bounded: Q = sum_b coeff_b X_b + sum_i s_i M_i.
struct LmiCombo {
    std::vector<std::pair<BlockId, double>> block_terms;
    std::vector<std::pair<ScalarId, HermitianMatrix>> scalar_terms;
};

// Appends the constraint lambda_max(Q) <= bound by introducing a slack PSD
// block S with S + Q = bound * I, written as one scalar equality per
// Hermitian basis element (n diagonal, n(n-1)/2 real and as many imaginary
// off-diagonal components). Returns the slack block; its cone dual is the
// multiplier matrix of the bound, whose trace plays the role of a scalar
// eigenvalue-bound multiplier.
inline BlockId add_lmi_eig_bound(SdpProblem& p, const LmiCombo& combo, double bound) {
    std::size_t dim = 0;
    for (const auto& [b, c] : combo.block_terms) {
        (void)c;
        if (dim == 0) dim = p.block_dim(b);
        else if (dim != p.block_dim(b))
            throw std::invalid_argument("add_lmi_eig_bound: inconsistent block dimensions");
    }
    for (const auto& [i, mcoef] : combo.scalar_terms) {
        (void)i;
        if (dim == 0) dim = mcoef.dim();
        else if (dim != mcoef.dim())
            throw std::invalid_argument("add_lmi_eig_bound: inconsistent scalar matrix dimensions");
    }
    if (dim == 0) throw std::invalid_argument("add_lmi_eig_bound: empty combination");

    const BlockId slack = p.add_block("lmi_slack", dim);

    auto add_basis_row = [&](const HermitianMatrix& basis, double rhs) {
        SdpProblem::Expr e;
        e.block_terms.emplace_back(slack, basis);
        for (const auto& [b, c] : combo.block_terms) e.block_terms.emplace_back(b, c * basis);
        for (const auto& [i, mcoef] : combo.scalar_terms)
            e.scalar_terms.emplace_back(i, trace_product(basis, mcoef));
        p.add_constraint(std::move(e), Relation::eq, rhs);
    };

    for (std::size_t d = 0; d < dim; ++d) {
        HermitianMatrix basis(dim);
        basis(d, d) = 1.0;
        add_basis_row(basis, bound);
    }
    for (std::size_t r = 0; r < dim; ++r)
        for (std::size_t c = r + 1; c < dim; ++c) {
            HermitianMatrix re(dim);
            re(r, c) = 1.0;
            re(c, r) = 1.0;
            add_basis_row(re, 0.0);
            HermitianMatrix im(dim);
            im(r, c) = cx(0.0, 1.0);
            im(c, r) = cx(0.0, -1.0);
            add_basis_row(im, 0.0);
        }
    return slack;
}

// Plain-text dump for cross-checking against external solvers. Format:
//   sdp-problem v1
//   block <index> <name> dim <d>
//   scalar <index> <name> cost <c>
//   objective block <index> nnz <k>      followed by k lines "r c re im"
//   constraint <index> <ge|eq|le> rhs <v>
//     block-term <index> nnz <k>         followed by k lines "r c re im"
//     scalar-term <index> coeff <v>
inline void dump_problem(const SdpProblem& p, std::ostream& os) {
    os << "sdp-problem v1\n";
    for (std::size_t b = 0; b < p.n_blocks(); ++b)
        os << "block " << b << " " << p.block_name(b) << " dim " << p.block_dim(b) << "\n";
    for (std::size_t i = 0; i < p.n_scalars(); ++i)
        os << "scalar " << i << " " << p.scalar_name(i) << " cost " << p.scalar_cost(i) << "\n";
    auto dump_matrix = [&os](const HermitianMatrix& m) {
        std::size_t nnz = 0;
        for (std::size_t r = 0; r < m.dim(); ++r)
            for (std::size_t c = 0; c < m.dim(); ++c)
                if (m(r, c) != cx(0.0, 0.0)) ++nnz;
        os << " nnz " << nnz << "\n";
        for (std::size_t r = 0; r < m.dim(); ++r)
            for (std::size_t c = 0; c < m.dim(); ++c)
                if (m(r, c) != cx(0.0, 0.0))
                    os << r << " " << c << " " << m(r, c).real() << " " << m(r, c).imag() << "\n";
    };
    for (std::size_t b = 0; b < p.n_blocks(); ++b) {
        os << "objective block " << b;
        dump_matrix(p.block_cost(b));
    }
    const char* rel_names[] = {"ge", "eq", "le"};
    for (std::size_t j = 0; j < p.n_constraints(); ++j) {
        const auto& con = p.constraints()[j];
        os << "constraint " << j << " " << rel_names[int(con.rel)] << " rhs " << con.rhs << "\n";
        for (const auto& [b, m] : con.expr.block_terms) {
            os << "block-term " << b;
            dump_matrix(m);
        }
        for (const auto& [i, c] : con.expr.scalar_terms)
            os << "scalar-term " << i << " coeff " << c << "\n";
    }
}

}  // namespace secbeam
