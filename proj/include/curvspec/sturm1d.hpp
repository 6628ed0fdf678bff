#pragma once

// Periodic Sturm–Liouville operator −4 d²/ds² + q(s) on [0, L], solved by
// Hill's method (Fourier–Galerkin truncation), with an independent
// finite-difference discretization for cross-checking.

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <vector>

#include "curvspec/eigensolve.hpp"
#include "curvspec/error.hpp"
#include "curvspec/geometry.hpp"

namespace curvspec {

/// Samples of a periodic potential on the uniform grid s_j = j·L/M together
/// with its discrete Fourier coefficients q_hat[k] = (1/M) Σ_j q_j e^{−2πi jk/M}.
struct Potential {
    double L = 0.0;
    std::vector<double> q;
    std::vector<complex> q_hat;

    std::size_t size() const noexcept { return q.size(); }

    /// Coefficient of e^{2πi k s/L} for any integer k (indices wrap mod M).
    complex coeff(long k) const {
        const long M = static_cast<long>(q_hat.size());
        long r = k % M;
        if (r < 0) r += M;
        return q_hat[static_cast<std::size_t>(r)];
    }
};

/// Direct DFT of the samples. Conjugate symmetry is imposed exactly.
inline Potential make_potential(double L, std::vector<double> q) {
    const std::size_t M = q.size();
    if (!(L > 0.0)) throw DomainError("potential period L must be positive");
    if (M == 0) throw DomainError("potential needs at least one sample");
    Potential p;
    p.L = L;
    p.q = std::move(q);
    p.q_hat.assign(M, complex(0.0, 0.0));

    std::vector<complex> twiddle(M);
    for (std::size_t j = 0; j < M; ++j) {
        const double ang = -2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(M);
        twiddle[j] = complex(std::cos(ang), std::sin(ang));
    }
    for (std::size_t k = 0; k <= M / 2; ++k) {
        double re = 0.0, im = 0.0;
        std::size_t idx = 0;
        for (std::size_t j = 0; j < M; ++j) {
            re += p.q[j] * twiddle[idx].real();
            im += p.q[j] * twiddle[idx].imag();
            idx += k;
            if (idx >= M) idx -= M;
        }
        p.q_hat[k] = complex(re, im) / static_cast<double>(M);
    }
    p.q_hat[0] = complex(p.q_hat[0].real(), 0.0);
    if (M % 2 == 0) p.q_hat[M / 2] = complex(p.q_hat[M / 2].real(), 0.0);
    for (std::size_t k = 1; k < (M + 1) / 2; ++k) p.q_hat[M - k] = std::conj(p.q_hat[k]);
    return p;
}

/// The squared-curvature potential κ²(s) of a sampled curve.
inline Potential curvature_potential(const CurveGeometry& g) {
    std::vector<double> q(g.kappa.size());
    for (std::size_t i = 0; i < q.size(); ++i) q[i] = g.kappa[i] * g.kappa[i];
    return make_potential(g.L, std::move(q));
}

/// Evaluates the trigonometric interpolant of the samples at s.
inline double interpolate_potential(const Potential& p, double s) {
    const std::size_t M = p.size();
    const double w = 2.0 * std::numbers::pi * s / p.L;
    double v = p.q_hat[0].real();
    for (std::size_t k = 1; k < (M + 1) / 2; ++k) {
        const complex e(std::cos(w * static_cast<double>(k)), std::sin(w * static_cast<double>(k)));
        v += 2.0 * (p.q_hat[k] * e).real();
    }
    if (M % 2 == 0) v += p.q_hat[M / 2].real() * std::cos(w * static_cast<double>(M / 2));
    return v;
}

/// Fourier–Galerkin matrix of −4 d²/ds² + q over e^{2πi n s/L}, |n| ≤ N:
/// H(n, n') = 4(2πn/L)² δ(n,n') + q_hat(n − n').
inline HermitianMatrix assemble_hill(const Potential& p, int N) {
    if (N < 0) throw DomainError("mode cutoff must be nonnegative");
    if (2 * static_cast<std::size_t>(N) + 1 > p.size() / 2) {
        throw DomainError("mode cutoff N = " + std::to_string(N) + " exceeds the aliasing bound 2N+1 <= M/2 (M = " +
                          std::to_string(p.size()) + ")");
    }
    const std::size_t n = 2 * static_cast<std::size_t>(N) + 1;
    HermitianMatrix H(n);
    const double w = 2.0 * std::numbers::pi / p.L;
    for (std::size_t i = 0; i < n; ++i) {
        const long ni = static_cast<long>(i) - N;
        for (std::size_t j = 0; j < n; ++j) {
            const long nj = static_cast<long>(j) - N;
            H(i, j) = p.coeff(ni - nj);
        }
        const double k = w * static_cast<double>(ni);
        H(i, i) += 4.0 * k * k;
    }
    return H;
}

struct HillOptions {
    int initial_cutoff = 32;
    int max_cutoff = 512;
    double tolerance = 1e-9;  // absolute change of μ₁ between doublings
};

/// First `k_max` eigenvalues of the periodic problem. The cutoff is doubled
/// from `initial_cutoff` until μ₁ moves by less than `tolerance`.
inline Spectrum eigenvalues_1d(const Potential& p, std::size_t k_max, const HillOptions& opt = {}) {
    if (k_max < 1) throw DomainError("k_max must be at least 1");
    if (opt.initial_cutoff < 1 || opt.initial_cutoff > opt.max_cutoff) {
        throw DomainError("invalid cutoff range");
    }
    Spectrum prev;
    bool have_prev = false;
    double change = 0.0;
    for (int N = opt.initial_cutoff; N <= opt.max_cutoff; N *= 2) {
        Spectrum cur = sym_eigenvalues(assemble_hill(p, N));
        if (have_prev) {
            change = std::abs(cur.front() - prev.front());
            if (change < opt.tolerance) {
                if (k_max > cur.count()) throw DomainError("k_max exceeds the number of computed modes");
                cur.eigenvalues.resize(k_max);
                cur.convergence_estimate = change;
                cur.cutoff = N;
                cur.method = "hill-fourier-galerkin";
                return cur;
            }
        }
        prev = std::move(cur);
        have_prev = true;
    }
    throw ConvergenceError("Hill eigenvalues did not converge by N = " + std::to_string(opt.max_cutoff), change);
}

/// Eigenvalues at one fixed cutoff, without the convergence loop.
inline Spectrum eigenvalues_1d_fixed(const Potential& p, int N) {
    Spectrum s = sym_eigenvalues(assemble_hill(p, N));
    s.cutoff = N;
    s.method = "hill-fourier-galerkin";
    return s;
}

/// The same spectrum in the normalization −d²/ds² + q/4.
inline Spectrum quarter_normalized(Spectrum s) {
    for (double& v : s.eigenvalues) v *= 0.25;
    s.convergence_estimate *= 0.25;
    return s;
}

/// Second-order central differences on J periodic nodes: circulant
/// −4·(u_{j+1} − 2u_j + u_{j−1})/h² plus the diagonal potential.
inline Spectrum fd_oracle(const Potential& p, std::size_t J) {
    if (J < 32) throw DomainError("finite-difference grid needs J >= 32");
    const double h = p.L / static_cast<double>(J);
    const double off = -4.0 / (h * h);
    HermitianMatrix A(J);
    for (std::size_t j = 0; j < J; ++j) {
        double qj;
        if (p.size() % J == 0) {
            qj = p.q[j * (p.size() / J)];
        } else {
            qj = interpolate_potential(p, h * static_cast<double>(j));
        }
        A(j, j) = 8.0 / (h * h) + qj;
        A(j, (j + 1) % J) += off;
        A((j + 1) % J, j) += off;
    }
    Spectrum s = sym_eigenvalues(A);
    s.method = "finite-difference";
    return s;
}

/// Richardson extrapolation (4·λ(2J) − λ(J))/3 of the first `count` eigenvalues.
inline std::vector<double> fd_richardson(const Potential& p, std::size_t J, std::size_t count) {
    const Spectrum coarse = fd_oracle(p, J);
    const Spectrum fine = fd_oracle(p, 2 * J);
    if (count > coarse.count()) throw DomainError("requested more eigenvalues than grid points");
    std::vector<double> out(count);
    for (std::size_t k = 0; k < count; ++k) {
        out[k] = (4.0 * fine.eigenvalues[k] - coarse.eigenvalues[k]) / 3.0;
    }
    return out;
}

} // namespace curvspec
