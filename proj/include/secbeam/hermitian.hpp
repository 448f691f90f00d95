// SPDX-License-Identifier: Apache-2.0
//
// Part of secbeam. Copyright (c) 2026 the secbeam authors.

#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "secbeam/dense.hpp"

namespace secbeam {

using cx = std::complex<double>;

class CVector {
public:
    CVector() = default;
    explicit CVector(std::size_t n) : e_(n) {}
    explicit CVector(std::vector<cx> entries) : e_(std::move(entries)) {}

    std::size_t dim() const { return e_.size(); }
    cx& operator[](std::size_t i) { return e_[i]; }
    const cx& operator[](std::size_t i) const { return e_[i]; }
    const std::vector<cx>& entries() const { return e_; }

    double norm_sq() const {
        double s = 0.0;
        for (const cx& z : e_) s += std::norm(z);
        return s;
    }

private:
    std::vector<cx> e_;
};

// <a, b> = sum_i conj(a_i) b_i.
inline cx inner(const CVector& a, const CVector& b) {
    if (a.dim() != b.dim()) throw std::invalid_argument("inner: dimension mismatch");
    cx s = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i) s += std::conj(a[i]) * b[i];
    return s;
}

// Dense complex matrix kept Hermitian by its producers; consumers that need a
// guarantee call require_hermitian(), which allows entry noise up to
// 1e-12 * max(1, largest |entry|).
class HermitianMatrix {
public:
    HermitianMatrix() = default;
    explicit HermitianMatrix(std::size_t dim) : n_(dim), a_(dim * dim, cx(0.0, 0.0)) {}

    std::size_t dim() const { return n_; }
    cx& operator()(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
    const cx& operator()(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }

    static HermitianMatrix identity(std::size_t n) {
        HermitianMatrix m(n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    // h h^H
    static HermitianMatrix outer(const CVector& h) {
        HermitianMatrix m(h.dim());
        for (std::size_t i = 0; i < h.dim(); ++i)
            for (std::size_t j = 0; j < h.dim(); ++j) m(i, j) = h[i] * std::conj(h[j]);
        return m;
    }

    double trace_real() const {
        double s = 0.0;
        for (std::size_t i = 0; i < n_; ++i) s += a_[i * n_ + i].real();
        return s;
    }

    double max_abs() const {
        double m = 0.0;
        for (const cx& z : a_) m = std::max(m, std::abs(z));
        return m;
    }

    double hermiticity_error() const {
        double m = 0.0;
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = i; j < n_; ++j)
                m = std::max(m, std::abs(a_[i * n_ + j] - std::conj(a_[j * n_ + i])));
        return m;
    }

    void require_hermitian() const {
        if (hermiticity_error() > 1e-12 * std::max(1.0, max_abs()))
            throw std::invalid_argument("HermitianMatrix: input is not Hermitian within tolerance");
    }

    // (A + A^H) / 2, also forcing real diagonal.
    void symmetrize() {
        for (std::size_t i = 0; i < n_; ++i) {
            a_[i * n_ + i] = cx(a_[i * n_ + i].real(), 0.0);
            for (std::size_t j = i + 1; j < n_; ++j) {
                const cx v = 0.5 * (a_[i * n_ + j] + std::conj(a_[j * n_ + i]));
                a_[i * n_ + j] = v;
                a_[j * n_ + i] = std::conj(v);
            }
        }
    }

    HermitianMatrix& operator+=(const HermitianMatrix& o) {
        for (std::size_t i = 0; i < a_.size(); ++i) a_[i] += o.a_[i];
        return *this;
    }
    HermitianMatrix& operator-=(const HermitianMatrix& o) {
        for (std::size_t i = 0; i < a_.size(); ++i) a_[i] -= o.a_[i];
        return *this;
    }
    HermitianMatrix& operator*=(double s) {
        for (cx& z : a_) z *= s;
        return *this;
    }

private:
    std::size_t n_ = 0;
    std::vector<cx> a_;
};

inline HermitianMatrix operator+(HermitianMatrix a, const HermitianMatrix& b) { return a += b; }
inline HermitianMatrix operator-(HermitianMatrix a, const HermitianMatrix& b) { return a -= b; }
inline HermitianMatrix operator*(double s, HermitianMatrix a) { return a *= s; }

// Re tr(A B) for Hermitian A, B (the value is exactly real in that case).
inline double trace_product(const HermitianMatrix& a, const HermitianMatrix& b) {
    if (a.dim() != b.dim()) throw std::invalid_argument("trace_product: dimension mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i)
        for (std::size_t j = 0; j < a.dim(); ++j) {
            const cx& x = a(i, j);
            const cx& y = b(j, i);
            s += x.real() * y.real() - x.imag() * y.imag();
        }
    return s;
}

struct EigenDecomposition {
    std::vector<double> eigenvalues;  // descending
    std::vector<CVector> eigenvectors;  // orthonormal, eigenvectors[i] pairs with eigenvalues[i]
};

// Cyclic Jacobi with complex plane rotations. Off-diagonal mass is strictly
// decreasing per rotation; quadratic convergence gives machine precision in a
// handful of sweeps at dims <= 32.
inline EigenDecomposition eig_hermitian(HermitianMatrix a) {
    a.require_hermitian();
    a.symmetrize();
    const std::size_t n = a.dim();
    std::vector<std::vector<cx>> v(n, std::vector<cx>(n, cx(0.0, 0.0)));
    for (std::size_t i = 0; i < n; ++i) v[i][i] = 1.0;
    const double scale = std::max(a.max_abs(), 1e-300);
    for (int sweep = 0; sweep < 64; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) off += std::norm(a(p, q));
        if (std::sqrt(off) <= 1e-15 * scale * double(n)) break;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) {
                const cx z = a(p, q);
                const double m = std::abs(z);
                if (m <= 1e-18 * scale) continue;
                const cx u = z / m;  // phase of the pivot entry
                const double tau = (a(q, q).real() - a(p, p).real()) / (2.0 * m);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                // A <- J^H A J with J = I except J(p,p)=J(q,q)=c,
                // J(p,q)=s*u, J(q,p)=-s*conj(u).
                for (std::size_t k = 0; k < n; ++k) {
                    const cx akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp - s * std::conj(u) * akq;
                    a(k, q) = s * u * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const cx apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk - s * u * aqk;
                    a(q, k) = s * std::conj(u) * apk + c * aqk;
                }
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                a(p, p) = cx(a(p, p).real(), 0.0);
                a(q, q) = cx(a(q, q).real(), 0.0);
                for (std::size_t k = 0; k < n; ++k) {
                    const cx vkp = v[k][p], vkq = v[k][q];
                    v[k][p] = c * vkp - s * std::conj(u) * vkq;
                    v[k][q] = s * u * vkp + c * vkq;
                }
            }
    }
    EigenDecomposition e;
    e.eigenvalues.resize(n);
    for (std::size_t i = 0; i < n; ++i) e.eigenvalues[i] = a(i, i).real();
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t x, std::size_t y) { return e.eigenvalues[x] > e.eigenvalues[y]; });
    std::vector<double> sorted(n);
    e.eigenvectors.assign(n, CVector(n));
    for (std::size_t i = 0; i < n; ++i) {
        sorted[i] = e.eigenvalues[order[i]];
        for (std::size_t k = 0; k < n; ++k) e.eigenvectors[i][k] = v[k][order[i]];
    }
    e.eigenvalues = std::move(sorted);
    return e;
}

inline double lambda_max(const HermitianMatrix& a) {
    return eig_hermitian(a).eigenvalues.front();
}

// [[Re A, -Im A], [Im A, Re A]]; eigenvalues of A each appear twice and
// tr(embedding) = 2 tr(A).
inline Mat real_embedding(const HermitianMatrix& a) {
    const std::size_t n = a.dim();
    Mat m(2 * n, 2 * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const double re = a(i, j).real(), im = a(i, j).imag();
            m(i, j) = re;
            m(n + i, n + j) = re;
            m(i, n + j) = -im;
            m(n + i, j) = im;
        }
    return m;
}

// Eigenvalue-threshold rank: count of eigenvalues above rel_tol * lambda_max.
// Requires A PSD up to a -1e-9 floor (scaled); genuinely indefinite input is
// a contract violation.
inline int rank_numeric(const HermitianMatrix& a, double rel_tol = 1e-6) {
    const EigenDecomposition e = eig_hermitian(a);
    const double lmax = e.eigenvalues.front();
    const double lmin = e.eigenvalues.back();
    if (lmin < -1e-9 * std::max(1.0, lmax))
        throw std::domain_error("rank_numeric: matrix is indefinite beyond the PSD floor");
    if (lmax <= 0.0) return 0;
    int r = 0;
    for (double l : e.eigenvalues)
        if (l > rel_tol * lmax) ++r;
    return r;
}

// h^H W h for Hermitian W; exact value is real, the imaginary residue is
// checked against a scaled 1e-12 budget.
inline double quad_form(const CVector& h, const HermitianMatrix& w) {
    if (h.dim() != w.dim()) throw std::invalid_argument("quad_form: dimension mismatch");
    cx s = 0.0;
    for (std::size_t i = 0; i < h.dim(); ++i) {
        cx row = 0.0;
        for (std::size_t j = 0; j < h.dim(); ++j) row += w(i, j) * h[j];
        s += std::conj(h[i]) * row;
    }
    const double budget = 1e-12 * std::max(1.0, h.norm_sq() * std::max(1.0, w.max_abs()));
    if (std::abs(s.imag()) > budget)
        throw std::domain_error("quad_form: imaginary residue exceeds tolerance (non-Hermitian W?)");
    return s.real();
}

}  // namespace secbeam
