#pragma once

// Flat-torus lattices of Hopf tori over spherical curves and the Dirac
// eigenvalues of the induced spin structure (ε1, ε2) = (0, 1).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <numbers>
#include <tuple>
#include <utility>
#include <vector>

#include "curvspec/error.hpp"

namespace curvspec {

struct Vec2 {
    double x = 0.0, y = 0.0;
};

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }

struct SpinStructure {
    int eps1 = 0;
    int eps2 = 1;
};

struct TorusLattice {
    Vec2 v1, v2;
    double theta = 0.0;  // holonomy angle Θ
    Vec2 dual1, dual2;
    SpinStructure spin;
};

/// The basis (w1, w2) with ⟨v_i, w_j⟩ = δ_ij.
inline std::pair<Vec2, Vec2> dual_lattice(Vec2 v1, Vec2 v2) {
    const double det = v1.x * v2.y - v1.y * v2.x;
    if (!(std::abs(det) > 1e-12)) throw DomainError("lattice basis is singular");
    return {Vec2{v2.y / det, -v2.x / det}, Vec2{-v1.y / det, v1.x / det}};
}

/// Torus of a circle bundle with fibre length 2π/m over a curve of length L
/// with holonomy Θ: basis (2π/m, 0), (Θ, L).
inline TorusLattice bundle_lattice(double L, double theta, int m = 1) {
    if (!(L > 0.0)) throw DomainError("curve length L must be positive");
    if (m < 1) throw DomainError("Chern class m must be at least 1");
    TorusLattice lat;
    lat.v1 = {2.0 * std::numbers::pi / m, 0.0};
    lat.v2 = {theta, L};
    lat.theta = theta;
    std::tie(lat.dual1, lat.dual2) = dual_lattice(lat.v1, lat.v2);
    return lat;
}

/// Hopf torus over a spherical curve of length L bounding area A: basis
/// (2π/m, 0), (A/2, L/2) and Θ = A/2 (m = 1 is the Hopf fibration of S³).
inline TorusLattice hopf_lattice(double L, double A, int m = 1) {
    if (!(L > 0.0)) throw DomainError("curve length L must be positive");
    if (!(A >= 0.0 && A <= 4.0 * std::numbers::pi)) throw DomainError("area A must lie in [0, 4pi]");
    if (m < 1) throw DomainError("Chern class m must be at least 1");
    TorusLattice lat;
    lat.v1 = {2.0 * std::numbers::pi / m, 0.0};
    lat.v2 = {0.5 * A, 0.5 * L};
    lat.theta = 0.5 * A;
    std::tie(lat.dual1, lat.dual2) = dual_lattice(lat.v1, lat.v2);
    return lat;
}

/// λ²(k, l) = k²m² + (4π²/L²)((2l+1) − k·mA/(2π))².
inline double dirac_eigenvalue(double L, double A, int m, long k, long l) {
    if (!(L > 0.0)) throw DomainError("curve length L must be positive");
    const double km = static_cast<double>(k) * m;
    const double r = static_cast<double>(2 * l + 1) - km * A / (2.0 * std::numbers::pi);
    return km * km + 4.0 * std::numbers::pi * std::numbers::pi / (L * L) * r * r;
}

/// 4π²‖(k + ε1/2)·w1 + (l + ε2/2)·w2‖² for a lattice with dual basis (w1, w2).
inline double dirac_eigenvalue_from_dual(const TorusLattice& lat, long k, long l) {
    const double a = static_cast<double>(k) + 0.5 * lat.spin.eps1;
    const double b = static_cast<double>(l) + 0.5 * lat.spin.eps2;
    const Vec2 p{a * lat.dual1.x + b * lat.dual2.x, a * lat.dual1.y + b * lat.dual2.y};
    return 4.0 * std::numbers::pi * std::numbers::pi * dot(p, p);
}

struct DiracMinimum {
    double value = 0.0;
    long k = 0;
    long l = 0;
};

namespace detail {

// Values within rounding of each other tie. Tie-break: smaller |k|, then
// smaller |2l+1|, then k ≥ 0, then 2l+1 > 0.
inline bool preferred(const DiracMinimum& a, const DiracMinimum& b) {
    if (std::abs(a.value - b.value) > 1e-12 * std::max(std::abs(a.value), std::abs(b.value))) {
        return a.value < b.value;
    }
    if (std::labs(a.k) != std::labs(b.k)) return std::labs(a.k) < std::labs(b.k);
    const long oa = 2 * a.l + 1, ob = 2 * b.l + 1;
    if (std::labs(oa) != std::labs(ob)) return std::labs(oa) < std::labs(ob);
    if ((a.k >= 0) != (b.k >= 0)) return a.k >= 0;
    return oa > ob;
}

} // namespace detail

/// Exact minimum of λ²(k, l) over ℤ². For each k the affine term is minimized
/// by the odd integer nearest k·mA/(2π); the k-scan stops once k²m² alone
/// reaches the best value found.
inline DiracMinimum dirac_minimum(double L, double A, int m = 1) {
    if (!(L > 0.0)) throw DomainError("curve length L must be positive");
    if (!(A >= 0.0 && A <= 4.0 * std::numbers::pi)) throw DomainError("area A must lie in [0, 4pi]");
    if (m < 1) throw DomainError("Chern class m must be at least 1");

    DiracMinimum best{dirac_eigenvalue(L, A, m, 0, 0), 0, 0};
    auto consider = [&](long k) {
        const double c = static_cast<double>(k) * m * A / (2.0 * std::numbers::pi);
        const long l0 = static_cast<long>(std::floor((c - 1.0) / 2.0));
        for (long l = l0 - 1; l <= l0 + 2; ++l) {
            const DiracMinimum cand{dirac_eigenvalue(L, A, m, k, l), k, l};
            if (detail::preferred(cand, best)) best = cand;
        }
    };
    consider(0);
    for (long k = 1;; ++k) {
        const double kinetic = static_cast<double>(k) * k * m * m;
        if (kinetic > best.value) break;
        consider(k);
        consider(-k);
    }
    return best;
}

/// Squared Dirac eigenvalues of a circle of length L with the non-trivial spin
/// structure: (4π²/L²)(k + 1/2)², k = 0, …, count−1.
inline std::vector<double> circle_dirac_spectrum(double L, std::size_t count) {
    if (!(L > 0.0)) throw DomainError("curve length L must be positive");
    if (count < 1) throw DomainError("count must be at least 1");
    std::vector<double> out(count);
    const double base = 4.0 * std::numbers::pi * std::numbers::pi / (L * L);
    for (std::size_t k = 0; k < count; ++k) {
        const double h = static_cast<double>(k) + 0.5;
        out[k] = base * h * h;
    }
    return out;
}

} // namespace curvspec
