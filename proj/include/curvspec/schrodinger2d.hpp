#pragma once

// First eigenvalue of the periodic operator on [0, 2π] × [0, L]
//
//   P = −(1 + A²/L²) ∂²_t − 4 ∂²_s − (4A/L) ∂_t ∂_s + q(s).
//
// The potential depends on s only, so each Fourier mode e^{imt} decouples and
// leaves a 1D Hill problem on [0, L].

#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>

#include "curvspec/eigensolve.hpp"
#include "curvspec/error.hpp"
#include "curvspec/sturm1d.hpp"

namespace curvspec {

struct Operator2DSpec {
    double L = 0.0;
    double A = 0.0;
    Potential potential;

    /// 4πA − A² ≤ L², up to rounding (circles attain equality).
    bool isoperimetric_admissible() const {
        return 4.0 * std::numbers::pi * A - A * A <= L * L * (1.0 + 1e-9);
    }
};

inline void validate(const Operator2DSpec& spec) {
    if (!(spec.L > 0.0)) throw DomainError("operator length L must be positive");
    if (!(spec.A >= 0.0 && spec.A < 4.0 * std::numbers::pi)) {
        throw DomainError("enclosed area A must lie in [0, 4pi)");
    }
    if (std::abs(spec.potential.L - spec.L) > 1e-12 * spec.L) {
        throw DomainError("potential period does not match L");
    }
}

/// Sign of the mixed term after mode reduction. Symbol calculus on
/// e^{i(mt + ωs)} turns −(4A/L)∂_t∂_s into +(4A/L)·m·ω; the opposite sign is
/// kept selectable so both can be checked against the circle equality case,
/// where they coincide by the m ↦ −m symmetry.
enum class CrossTermSign { Plus, Minus };

/// Hill matrix of mode m: δ(n,n')[(1+A²/L²)m² + 4ω² ± (4A/L)mω] + q_hat(n−n'), ω = 2πn/L.
inline HermitianMatrix mode_reduce(const Operator2DSpec& spec, int m, int N,
                                   CrossTermSign sign = CrossTermSign::Plus) {
    validate(spec);
    HermitianMatrix H = assemble_hill(spec.potential, N);
    const double a = spec.A / spec.L;
    const double w = 2.0 * std::numbers::pi / spec.L;
    const double cross = (sign == CrossTermSign::Plus ? 4.0 : -4.0) * a * static_cast<double>(m);
    const double mm = static_cast<double>(m) * static_cast<double>(m);
    for (std::size_t i = 0; i < H.size(); ++i) {
        const double omega = w * (static_cast<double>(i) - N);
        H(i, i) += (1.0 + a * a) * mm + cross * omega;
    }
    return H;
}

struct Mu2DResult {
    double mu1 = 0.0;
    int mode = 0;            // minimizing t-mode
    int modes_scanned = 0;   // largest |m| examined
    int cutoff = 0;          // accepted Fourier cutoff in s
    double convergence_estimate = 0.0;
};

/// Smallest eigenvalue over all t-modes at a fixed s-cutoff N. The scan visits
/// m = 0, 1, −1, 2, −2, … and stops once m² + λ_min(Q) exceeds the best value,
/// where Q is the potential-only Toeplitz block: the mode-m kinetic symbol is
/// m² + (Am/L + 2ω)² ≥ m².
inline Mu2DResult mu1_2d_fixed(const Operator2DSpec& spec, int N, CrossTermSign sign = CrossTermSign::Plus) {
    validate(spec);
    HermitianMatrix Q = assemble_hill(spec.potential, N);
    for (std::size_t i = 0; i < Q.size(); ++i) Q(i, i) = spec.potential.q_hat[0];
    const double q_floor = sym_eigenvalues(Q).front();

    Mu2DResult r;
    r.cutoff = N;
    r.mu1 = sym_eigenvalues(mode_reduce(spec, 0, N, sign)).front();
    for (int k = 1;; ++k) {
        const double bound = static_cast<double>(k) * k + q_floor;
        if (bound > r.mu1 + 1e-9 * (1.0 + std::abs(r.mu1))) break;
        r.modes_scanned = k;
        for (int m : {k, -k}) {
            const double v = sym_eigenvalues(mode_reduce(spec, m, N, sign)).front();
            if (v < r.mu1) {
                r.mu1 = v;
                r.mode = m;
            }
        }
    }
    return r;
}

/// μ₁ of the 2D operator with the same cutoff-doubling convergence loop as the 1D solver.
inline Mu2DResult mu1_2d(const Operator2DSpec& spec, const HillOptions& opt = {},
                         CrossTermSign sign = CrossTermSign::Plus) {
    validate(spec);
    std::optional<Mu2DResult> prev;
    double change = 0.0;
    for (int N = opt.initial_cutoff; N <= opt.max_cutoff; N *= 2) {
        Mu2DResult cur = mu1_2d_fixed(spec, N, sign);
        if (prev) {
            change = std::abs(cur.mu1 - prev->mu1);
            if (change < opt.tolerance) {
                cur.convergence_estimate = change;
                return cur;
            }
        }
        prev = cur;
    }
    throw ConvergenceError("2D eigenvalue did not converge by N = " + std::to_string(opt.max_cutoff), change);
}

} // namespace curvspec
