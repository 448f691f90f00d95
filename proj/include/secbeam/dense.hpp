// SPDX-License-Identifier: Apache-2.0
//
// Part of secbeam. Copyright (c) 2026 the secbeam authors.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace secbeam {

// Dense real matrix, row-major. Sized for the interior-point solver: every
// matrix in this project stays below ~130 rows, so all algorithms here are
// the simple O(n^3) ones with no blocking.
class Mat {
public:
    Mat() = default;
    Mat(std::size_t rows, std::size_t cols) : r_(rows), c_(cols), a_(rows * cols, 0.0) {}

    std::size_t rows() const { return r_; }
    std::size_t cols() const { return c_; }

    double& operator()(std::size_t i, std::size_t j) { return a_[i * c_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return a_[i * c_ + j]; }

    double* data() { return a_.data(); }
    const double* data() const { return a_.data(); }

    static Mat identity(std::size_t n) {
        Mat m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    Mat transposed() const {
        Mat t(c_, r_);
        for (std::size_t i = 0; i < r_; ++i)
            for (std::size_t j = 0; j < c_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    double max_abs() const {
        double m = 0.0;
        for (double v : a_) m = std::max(m, std::abs(v));
        return m;
    }

    double frobenius() const {
        double s = 0.0;
        for (double v : a_) s += v * v;
        return std::sqrt(s);
    }

    double trace() const {
        double s = 0.0;
        for (std::size_t i = 0; i < std::min(r_, c_); ++i) s += (*this)(i, i);
        return s;
    }

    Mat& operator+=(const Mat& o) {
        for (std::size_t i = 0; i < a_.size(); ++i) a_[i] += o.a_[i];
        return *this;
    }
    Mat& operator-=(const Mat& o) {
        for (std::size_t i = 0; i < a_.size(); ++i) a_[i] -= o.a_[i];
        return *this;
    }
    Mat& operator*=(double s) {
        for (double& v : a_) v *= s;
        return *this;
    }

private:
    std::size_t r_ = 0, c_ = 0;
    std::vector<double> a_;
};

inline Mat operator*(const Mat& a, const Mat& b) {
    if (a.cols() != b.rows()) throw std::invalid_argument("Mat multiply: shape mismatch");
    Mat c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double aik = a(i, k);
            if (aik == 0.0) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
        }
    return c;
}

inline Mat operator+(Mat a, const Mat& b) { return a += b; }
inline Mat operator-(Mat a, const Mat& b) { return a -= b; }
inline Mat operator*(double s, Mat a) { return a *= s; }

inline void symmetrize(Mat& m) {
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = i + 1; j < m.cols(); ++j) {
            const double v = 0.5 * (m(i, j) + m(j, i));
            m(i, j) = v;
            m(j, i) = v;
        }
}

inline double dot(const Mat& a, const Mat& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) s += a(i, j) * b(i, j);
    return s;
}

// Cholesky A = L L^T, lower L. Returns false (leaving `l` invalid) when a
// pivot drops below `min_pivot`; callers use that as the not-PD signal.
inline bool cholesky(const Mat& a, Mat& l, double min_pivot = 0.0) {
    const std::size_t n = a.rows();
    l = Mat(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        double d = a(j, j);
        for (std::size_t k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
        if (!(d > min_pivot)) return false;
        const double ljj = std::sqrt(d);
        l(j, j) = ljj;
        for (std::size_t i = j + 1; i < n; ++i) {
            double s = a(i, j);
            for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
            l(i, j) = s / ljj;
        }
    }
    return true;
}

// Solve L x = b in place (L lower triangular).
inline void solve_lower(const Mat& l, std::vector<double>& b) {
    const std::size_t n = l.rows();
    for (std::size_t i = 0; i < n; ++i) {
        double s = b[i];
        for (std::size_t k = 0; k < i; ++k) s -= l(i, k) * b[k];
        b[i] = s / l(i, i);
    }
}

// Solve L^T x = b in place.
inline void solve_lower_t(const Mat& l, std::vector<double>& b) {
    const std::size_t n = l.rows();
    for (std::size_t ii = n; ii-- > 0;) {
        double s = b[ii];
        for (std::size_t k = ii + 1; k < n; ++k) s -= l(k, ii) * b[k];
        b[ii] = s / l(ii, ii);
    }
}

// B <- L^{-1} B for matrix right-hand side.
inline void solve_lower_mat(const Mat& l, Mat& b) {
    const std::size_t n = l.rows();
    for (std::size_t j = 0; j < b.cols(); ++j)
        for (std::size_t i = 0; i < n; ++i) {
            double s = b(i, j);
            for (std::size_t k = 0; k < i; ++k) s -= l(i, k) * b(k, j);
            b(i, j) = s / l(i, i);
        }
}

// B <- L^{-T} B.
inline void solve_lower_t_mat(const Mat& l, Mat& b) {
    const std::size_t n = l.rows();
    for (std::size_t j = 0; j < b.cols(); ++j)
        for (std::size_t ii = n; ii-- > 0;) {
            double s = b(ii, j);
            for (std::size_t k = ii + 1; k < n; ++k) s -= l(k, ii) * b(k, j);
            b(ii, j) = s / l(ii, ii);
        }
}

struct SymEig {
    std::vector<double> values;  // descending
    Mat vectors;                 // column i pairs with values[i]
};

// Cyclic Jacobi for real symmetric matrices. Input is symmetrized first;
// accurate to machine precision at these sizes.
inline SymEig jacobi_eig_sym(Mat a) {
    const std::size_t n = a.rows();
    if (n != a.cols()) throw std::invalid_argument("jacobi_eig_sym: square input required");
    symmetrize(a);
    Mat v = Mat::identity(n);
    const double scale = std::max(a.max_abs(), 1e-300);
    for (int sweep = 0; sweep < 64; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
        if (std::sqrt(off) <= 1e-15 * scale * double(n)) break;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (std::abs(apq) <= 1e-18 * scale) continue;
                const double tau = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = c * vkp - s * vkq;
                    v(k, q) = s * vkp + c * vkq;
                }
            }
    }
    SymEig e;
    e.values.resize(n);
    for (std::size_t i = 0; i < n; ++i) e.values[i] = a(i, i);
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t x, std::size_t y) { return e.values[x] > e.values[y]; });
    std::vector<double> sorted(n);
    Mat vs(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        sorted[i] = e.values[order[i]];
        for (std::size_t k = 0; k < n; ++k) vs(k, i) = v(k, order[i]);
    }
    e.values = std::move(sorted);
    e.vectors = std::move(vs);
    return e;
}

inline double min_eigenvalue(const Mat& a) {
    SymEig e = jacobi_eig_sym(a);
    return e.values.back();
}

}  // namespace secbeam
