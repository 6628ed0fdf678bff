#pragma once

// Dense self-adjoint eigenvalues: Householder tridiagonalization followed by
// the implicitly shifted QL iteration. Complex Hermitian input is embedded as
// the real symmetric matrix [[Re, -Im], [Im, Re]] of twice the size.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "curvspec/error.hpp"

namespace curvspec {

using complex = std::complex<double>;

class HermitianMatrix {
public:
    HermitianMatrix() = default;
    explicit HermitianMatrix(std::size_t n) : n_(n), data_(n * n) {}

    std::size_t size() const noexcept { return n_; }

    complex& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
    const complex& operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }

    /// True when every stored imaginary part is exactly zero.
    bool is_real() const {
        return std::all_of(data_.begin(), data_.end(), [](const complex& z) { return z.imag() == 0.0; });
    }

    /// Exact check entry(i,j) == conj(entry(j,i)).
    bool is_hermitian() const {
        for (std::size_t i = 0; i < n_; ++i) {
            for (std::size_t j = i; j < n_; ++j) {
                if ((*this)(i, j) != std::conj((*this)(j, i))) return false;
            }
        }
        return true;
    }

    double max_abs() const {
        double m = 0.0;
        for (const auto& z : data_) m = std::max(m, std::abs(z));
        return m;
    }

    complex trace() const {
        complex t = 0.0;
        for (std::size_t i = 0; i < n_; ++i) t += (*this)(i, i);
        return t;
    }

private:
    std::size_t n_ = 0;
    std::vector<complex> data_;
};

struct Spectrum {
    std::vector<double> eigenvalues;  // ascending, with multiplicity
    std::size_t n = 0;                // matrix dimension
    std::string method;
    double convergence_estimate = 0.0;
    std::optional<int> cutoff;        // accepted Fourier cutoff, when applicable
    double pairing_gap = 0.0;         // largest split of a collapsed embedded pair

    double front() const { return eigenvalues.front(); }
    std::size_t count() const noexcept { return eigenvalues.size(); }
};

namespace detail {

// Reduces the dense symmetric n×n matrix `a` (row-major, both triangles) to
// tridiagonal form. On return d holds the diagonal and e[i] couples i and i+1.
inline void householder_tridiagonalize(std::vector<double>& a, std::size_t n, std::vector<double>& d,
                                       std::vector<double>& e) {
    d.assign(n, 0.0);
    e.assign(n, 0.0);
    std::vector<double> v(n), p(n);
    for (std::size_t k = 0; k + 2 < n; ++k) {
        const std::size_t m = n - k - 1;  // length of the column below the diagonal
        double norm2 = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            v[i] = a[(k + 1 + i) * n + k];
            norm2 += v[i] * v[i];
        }
        d[k] = a[k * n + k];
        // Scale-aware zero test: nothing left to eliminate below the subdiagonal.
        double tail = 0.0;
        for (std::size_t i = 1; i < m; ++i) tail += v[i] * v[i];
        if (tail == 0.0) {
            e[k] = v[0];
            continue;
        }
        const double norm = std::sqrt(norm2);
        const double alpha = v[0] > 0 ? -norm : norm;
        v[0] -= alpha;
        const double vtv = norm2 - 2.0 * alpha * (v[0] + alpha) + alpha * alpha;
        const double beta = 2.0 / vtv;

        // p = beta * B v, B the trailing block.
        double vtp = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            const double* row = &a[(k + 1 + i) * n + k + 1];
            double s = 0.0;
            for (std::size_t j = 0; j < m; ++j) s += row[j] * v[j];
            p[i] = beta * s;
            vtp += v[i] * p[i];
        }
        const double kfac = 0.5 * beta * vtp;
        for (std::size_t i = 0; i < m; ++i) p[i] -= kfac * v[i];  // p is now w

        for (std::size_t i = 0; i < m; ++i) {
            double* row = &a[(k + 1 + i) * n + k + 1];
            const double vi = v[i];
            const double wi = p[i];
            for (std::size_t j = 0; j < m; ++j) row[j] -= vi * p[j] + wi * v[j];
        }
        e[k] = alpha;
    }
    if (n >= 2) {
        d[n - 2] = a[(n - 2) * n + (n - 2)];
        e[n - 2] = a[(n - 1) * n + (n - 2)];
    }
    d[n - 1] = a[(n - 1) * n + (n - 1)];
    e[n - 1] = 0.0;
}

// Implicitly shifted QL on a symmetric tridiagonal matrix; eigenvalues only.
inline void tridiagonal_ql(std::vector<double>& d, std::vector<double>& e) {
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(d.size());
    constexpr double eps = std::numeric_limits<double>::epsilon();
    for (std::ptrdiff_t l = 0; l < n; ++l) {
        int iter = 0;
        std::ptrdiff_t m;
        do {
            for (m = l; m < n - 1; ++m) {
                const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
                if (std::abs(e[m]) <= eps * dd) break;
            }
            if (m != l) {
                if (++iter > 64) throw ConvergenceError("QL iteration did not converge", std::abs(e[l]));
                double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
                double r = std::hypot(g, 1.0);
                g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
                double s = 1.0, c = 1.0, p = 0.0;
                std::ptrdiff_t i;
                bool deflated = false;
                for (i = m - 1; i >= l; --i) {
                    double f = s * e[i];
                    const double b = c * e[i];
                    r = std::hypot(f, g);
                    e[i + 1] = r;
                    if (r == 0.0) {
                        d[i + 1] -= p;
                        e[m] = 0.0;
                        deflated = true;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[i + 1] - p;
                    r = (d[i] - g) * s + 2.0 * c * b;
                    p = s * r;
                    d[i + 1] = g + p;
                    g = c * r - b;
                }
                if (deflated) continue;
                d[l] -= p;
                e[l] = g;
                e[m] = 0.0;
            }
        } while (m != l);
    }
}

inline std::vector<double> real_symmetric_eigenvalues(std::vector<double> a, std::size_t n) {
    std::vector<double> d, e;
    householder_tridiagonalize(a, n, d, e);
    tridiagonal_ql(d, e);
    std::sort(d.begin(), d.end());
    return d;
}

} // namespace detail

/// All eigenvalues of a Hermitian matrix, ascending. Throws DomainError for an
/// empty or non-Hermitian matrix.
inline Spectrum sym_eigenvalues(const HermitianMatrix& m) {
    const std::size_t n = m.size();
    if (n == 0) throw DomainError("eigenvalue problem of dimension 0");
    if (!m.is_hermitian()) throw DomainError("matrix is not Hermitian");

    Spectrum out;
    out.n = n;
    if (m.is_real()) {
        std::vector<double> a(n * n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) a[i * n + j] = m(i, j).real();
        out.eigenvalues = detail::real_symmetric_eigenvalues(std::move(a), n);
        out.method = "householder-ql";
        return out;
    }

    const std::size_t n2 = 2 * n;
    std::vector<double> a(n2 * n2);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const complex z = m(i, j);
            a[i * n2 + j] = z.real();
            a[(i + n) * n2 + (j + n)] = z.real();
            a[i * n2 + (j + n)] = -z.imag();
            a[(i + n) * n2 + j] = z.imag();
        }
    }
    const std::vector<double> doubled = detail::real_symmetric_eigenvalues(std::move(a), n2);
    // Every eigenvalue of the embedding occurs exactly twice; collapse adjacent pairs.
    out.eigenvalues.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double lo = doubled[2 * i];
        const double hi = doubled[2 * i + 1];
        out.eigenvalues[i] = 0.5 * (lo + hi);
        const double scale = std::max({std::abs(lo), std::abs(hi), 1.0});
        out.pairing_gap = std::max(out.pairing_gap, (hi - lo) / scale);
    }
    out.method = "householder-ql-complex-embedding";
    return out;
}

} // namespace curvspec
