#pragma once

// Arc length, curvature, arc-length resampling and curvature integrals of
// closed curves in the plane, on the unit sphere or in space.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "curvspec/curve_def.hpp"
#include "curvspec/error.hpp"
#include "curvspec/expr.hpp"

namespace curvspec {

struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;

    friend Vec3 operator+(Vec3 a, Vec3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
    friend Vec3 operator-(Vec3 a, Vec3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
    friend Vec3 operator*(double s, Vec3 a) { return {s * a.x, s * a.y, s * a.z}; }
};

inline double dot(Vec3 a, Vec3 b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline Vec3 cross(Vec3 a, Vec3 b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm(Vec3 a) { return std::sqrt(dot(a, a)); }

enum class Ambient { Plane, UnitSphere, Space };

inline const char* to_string(Ambient a) {
    switch (a) {
    case Ambient::Plane: return "plane";
    case Ambient::UnitSphere: return "unit-sphere";
    case Ambient::Space: return "space";
    }
    return "?";
}

struct AmbientClass {
    Ambient kind = Ambient::Space;
    double radius = 0.0;           // UnitSphere only
    double sphere_deviation = 0.0; // max | |γ|² − 1 | over the samples
};

/// Orientation convention for signed geodesic curvature, recorded in reports.
inline constexpr const char* kGeodesicSignConvention =
    "kappa_g = det(gamma, gamma', gamma'')/|gamma'|^3 on the unit sphere (left normal = outward normal x "
    "tangent); kappa_g = (x'y'' - y'x'')/|gamma'|^3 in the plane";

inline constexpr double kSphereTolerance = 1e-9;
inline constexpr double kPlaneTolerance = 1e-12;
inline constexpr double kArcLengthTolerance = 1e-10;

/// Compiled coordinate functions and their first two derivatives.
class CurveEvaluator {
public:
    explicit CurveEvaluator(const CurveDef& c) : dim_(c.dimension()) {
        for (std::size_t i = 0; i < dim_; ++i) {
            const Expr d1 = differentiate(c.coords[i]);
            f_[i] = CompiledExpr(c.coords[i]);
            d1_[i] = CompiledExpr(d1);
            d2_[i] = CompiledExpr(differentiate(d1));
        }
    }

    std::size_t dimension() const noexcept { return dim_; }
    Vec3 point(double t) const { return eval(f_, t); }
    Vec3 d1(double t) const { return eval(d1_, t); }
    Vec3 d2(double t) const { return eval(d2_, t); }
    double speed(double t) const { return norm(d1(t)); }

private:
    Vec3 eval(const std::array<CompiledExpr, 3>& fs, double t) const {
        Vec3 v;
        v.x = fs[0](t);
        v.y = fs[1](t);
        if (dim_ == 3) v.z = fs[2](t);
        return v;
    }

    std::size_t dim_;
    std::array<CompiledExpr, 3> f_, d1_, d2_;
};

struct CurveGeometry {
    std::string name;
    double L = 0.0;
    std::size_t M = 0;
    std::vector<double> s_grid;    // i·L/M
    std::vector<double> t_nodes;   // parameter values with σ(t_i) = s_i
    std::vector<Vec3> points;      // γ(t_i)
    std::vector<double> kappa;     // space curvature at s_i
    std::vector<double> kappa_g;   // signed; Plane and UnitSphere only
    AmbientClass ambient;
    std::optional<int> rotation_number;  // Plane only
    double rotation_residual = 0.0;
    std::optional<bool> simple;          // UnitSphere only
    std::optional<double> area;          // simple UnitSphere curves only
};

namespace detail {

inline void check_regular(double speed, double t) {
    if (!(speed >= kRegularityThreshold)) {
        std::ostringstream msg;
        msg << "curve is not regular: |gamma'| = " << speed << " at t = " << t;
        throw GeometryError(msg.str());
    }
}

inline double simpson_step(const CurveEvaluator& ev, double a, double fa, double b, double fb, double m,
                           double fm, double whole, double tol, int depth) {
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = ev.speed(lm), frm = ev.speed(rm);
    check_regular(flm, lm);
    check_regular(frm, rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    return simpson_step(ev, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
           simpson_step(ev, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

// 5-point Gauss–Legendre on [a, b].
inline double gauss5(const CurveEvaluator& ev, double a, double b) {
    static constexpr std::array<double, 5> x = {0.0, 0.5384693101056831, -0.5384693101056831,
                                                0.9061798459386640, -0.9061798459386640};
    static constexpr std::array<double, 5> w = {0.5688888888888889, 0.4786286704993665,
                                                0.4786286704993665, 0.2369268850561891,
                                                0.2369268850561891};
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    double s = 0.0;
    for (std::size_t k = 0; k < 5; ++k) s += w[k] * ev.speed(c + h * x[k]);
    return h * s;
}

inline bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

// Squared distance between segments p0p1 and q0q1.
inline double segment_distance2(Vec3 p0, Vec3 p1, Vec3 q0, Vec3 q1) {
    const Vec3 d1 = p1 - p0, d2 = q1 - q0, r = p0 - q0;
    const double a = dot(d1, d1), e = dot(d2, d2), f = dot(d2, r);
    double s = 0.0, t = 0.0;
    const double c = dot(d1, r);
    const double b = dot(d1, d2);
    const double denom = a * e - b * b;
    if (denom > 0.0) s = std::clamp((b * f - c * e) / denom, 0.0, 1.0);
    t = e > 0.0 ? (b * s + f) / e : 0.0;
    if (t < 0.0) {
        t = 0.0;
        s = a > 0.0 ? std::clamp(-c / a, 0.0, 1.0) : 0.0;
    } else if (t > 1.0) {
        t = 1.0;
        s = a > 0.0 ? std::clamp((b - c) / a, 0.0, 1.0) : 0.0;
    }
    const Vec3 diff = (p0 + s * d1) - (q0 + t * d2);
    return dot(diff, diff);
}

} // namespace detail

/// Length of the curve by adaptive Simpson quadrature (absolute tolerance 1e-10).
inline double arc_length(const CurveDef& curve, double tol = kArcLengthTolerance) {
    const CurveEvaluator ev(curve);
    constexpr int panels = 64;
    const double h = curve.period() / panels;
    double total = 0.0;
    for (int k = 0; k < panels; ++k) {
        const double a = curve.t0 + h * k;
        const double b = k + 1 == panels ? curve.t1 : curve.t0 + h * (k + 1);
        const double m = 0.5 * (a + b);
        const double fa = ev.speed(a), fb = ev.speed(b), fm = ev.speed(m);
        detail::check_regular(fa, a);
        detail::check_regular(fb, b);
        detail::check_regular(fm, m);
        const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
        total += detail::simpson_step(ev, a, fa, b, fb, m, fm, whole, tol / panels, 40);
    }
    return total;
}

/// Space curvature |γ'×γ''|/|γ'|³ at parameter t (plane curves embedded at z = 0).
inline double curvature_at(const CurveDef& curve, double t) {
    const CurveEvaluator ev(curve);
    const Vec3 d1 = ev.d1(t), d2 = ev.d2(t);
    const double sp = norm(d1);
    detail::check_regular(sp, t);
    return norm(cross(d1, d2)) / (sp * sp * sp);
}

/// Classifies where the curve lives, from point samples.
inline AmbientClass classify_ambient(std::size_t dimension, const std::vector<Vec3>& samples) {
    AmbientClass out;
    if (dimension == 2) {
        out.kind = Ambient::Plane;
        return out;
    }
    double dev = 0.0;
    double zmin = samples.front().z, zmax = samples.front().z;
    for (const Vec3& p : samples) {
        dev = std::max(dev, std::abs(dot(p, p) - 1.0));
        zmin = std::min(zmin, p.z);
        zmax = std::max(zmax, p.z);
    }
    out.sphere_deviation = dev;
    if (dev <= kSphereTolerance) {
        out.kind = Ambient::UnitSphere;
        out.radius = 1.0;
    } else if (zmax - zmin <= kPlaneTolerance) {
        out.kind = Ambient::Plane;
    } else {
        out.kind = Ambient::Space;
    }
    return out;
}

/// True when no two non-adjacent chords of the closed polygon come closer
/// than `threshold`.
inline bool is_simple_polygon(const std::vector<Vec3>& pts, double threshold) {
    const std::size_t n = pts.size();
    if (n < 4) return true;
    std::vector<Vec3> mid(n);
    std::vector<double> half(n);
    for (std::size_t i = 0; i < n; ++i) {
        const Vec3 a = pts[i], b = pts[(i + 1) % n];
        mid[i] = 0.5 * (a + b);
        half[i] = 0.5 * norm(b - a);
    }
    const double thr2 = threshold * threshold;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 2; j < n; ++j) {
            if (i == 0 && j == n - 1) continue;  // cyclic neighbours
            const double reach = half[i] + half[j] + threshold;
            const Vec3 dm = mid[i] - mid[j];
            if (dot(dm, dm) > reach * reach) continue;
            if (detail::segment_distance2(pts[i], pts[(i + 1) % n], pts[j], pts[(j + 1) % n]) < thr2) {
                return false;
            }
        }
    }
    return true;
}

struct AreaOptions {
    bool require_simple = true;
    double threshold_factor = 0.25;  // simplicity threshold = factor · L / M
};

/// Enclosed area on the unit sphere by Gauss–Bonnet, A = 2π − ∮κ_g ds, reduced
/// into (0, 4π). The region is the one to the left of the traversal; its
/// complement has area 4π − A. Without `require_simple` a self-intersecting
/// curve yields its winding-weighted area modulo 4π.
inline double spherical_area(const CurveGeometry& g, const AreaOptions& opt = {}) {
    if (g.ambient.kind != Ambient::UnitSphere) {
        throw GeometryError("spherical_area: curve '" + g.name + "' does not lie on the unit sphere");
    }
    if (opt.require_simple) {
        const bool simple =
            g.simple.has_value() && opt.threshold_factor == AreaOptions{}.threshold_factor
                ? *g.simple
                : is_simple_polygon(g.points, opt.threshold_factor * g.L / static_cast<double>(g.M));
        if (!simple) throw GeometryError("spherical_area: curve '" + g.name + "' intersects itself");
    }
    double integral = 0.0;
    for (double k : g.kappa_g) integral += k;
    integral *= g.L / static_cast<double>(g.M);
    constexpr double four_pi = 4.0 * std::numbers::pi;
    double a = 2.0 * std::numbers::pi - integral;
    a -= four_pi * std::floor(a / four_pi);
    if (a <= 1e-12 || a >= four_pi - 1e-12) {
        throw GeometryError("spherical_area: degenerate enclosed area for '" + g.name + "'");
    }
    return a;
}

struct ReparamOptions {
    double newton_tolerance = 1e-12;  // relative to L
    std::size_t panels_per_sample = 16;
    double simplicity_factor = 0.25;
};

/// Samples the curve at M equally spaced arc-length nodes s_i = i·L/M and fills
/// curvature, ambient class, rotation number (plane) and area (simple spherical).
inline CurveGeometry reparametrize(const CurveDef& curve, std::size_t M, const ReparamOptions& opt = {}) {
    if (!detail::is_power_of_two(M) || M < 64) {
        throw DomainError("sample count M must be a power of two and at least 64");
    }
    validate_curve(curve);
    const CurveEvaluator ev(curve);

    CurveGeometry g;
    g.name = curve.name;
    g.M = M;
    g.L = arc_length(curve);

    // Monotone cumulative arc-length table.
    const std::size_t P = opt.panels_per_sample * M;
    const double h = curve.period() / static_cast<double>(P);
    std::vector<double> cum(P + 1, 0.0);
    for (std::size_t j = 0; j < P; ++j) {
        const double a = curve.t0 + h * static_cast<double>(j);
        cum[j + 1] = cum[j] + detail::gauss5(ev, a, a + h);
    }
    const double total = cum[P];
    const double tol = opt.newton_tolerance * total;

    g.s_grid.resize(M);
    g.t_nodes.resize(M);
    for (std::size_t i = 0; i < M; ++i) {
        g.s_grid[i] = g.L * static_cast<double>(i) / static_cast<double>(M);
        const double target = total * static_cast<double>(i) / static_cast<double>(M);
        std::size_t j = static_cast<std::size_t>(std::upper_bound(cum.begin(), cum.end(), target) - cum.begin());
        j = j == 0 ? 0 : std::min(j - 1, P - 1);
        if (cum[j + 1] < cum[j]) throw Error("internal error: arc-length table is not monotone");
        const double a = curve.t0 + h * static_cast<double>(j);
        double lo = a, hi = a + h;
        double x = a;
        const double sa = ev.speed(a);
        detail::check_regular(sa, a);
        x = std::clamp(a + (target - cum[j]) / sa, lo, hi);
        bool converged = false;
        for (int it = 0; it < 60; ++it) {
            const double F = cum[j] + (x > a ? detail::gauss5(ev, a, x) : 0.0) - target;
            if (F > 0.0) hi = x; else lo = x;
            if (std::abs(F) <= tol) {
                converged = true;
                // One polishing step; the residual is already below tolerance.
                const double sp = ev.speed(x);
                const double next = x - F / sp;
                if (next >= lo && next <= hi) x = next;
                break;
            }
            const double sp = ev.speed(x);
            detail::check_regular(sp, x);
            double next = x - F / sp;
            if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
            x = next;
        }
        if (!converged) throw Error("internal error: arc-length inversion failed to converge");
        g.t_nodes[i] = x;
    }

    g.points.resize(M);
    g.kappa.resize(M);
    std::vector<Vec3> d1s(M), d2s(M);
    for (std::size_t i = 0; i < M; ++i) {
        const double t = g.t_nodes[i];
        g.points[i] = ev.point(t);
        d1s[i] = ev.d1(t);
        d2s[i] = ev.d2(t);
        const double sp = norm(d1s[i]);
        detail::check_regular(sp, t);
        g.kappa[i] = norm(cross(d1s[i], d2s[i])) / (sp * sp * sp);
    }

    // Classify on the arc-length grid plus a dense parameter sample.
    std::vector<Vec3> samples = g.points;
    for (std::size_t k = 0; k < kRegularitySamples; ++k) {
        samples.push_back(ev.point(curve.t0 + curve.period() * static_cast<double>(k) /
                                                  static_cast<double>(kRegularitySamples)));
    }
    g.ambient = classify_ambient(curve.dimension(), samples);

    if (g.ambient.kind == Ambient::Plane) {
        g.kappa_g.resize(M);
        double sum = 0.0;
        for (std::size_t i = 0; i < M; ++i) {
            const double sp = norm(d1s[i]);
            g.kappa_g[i] = (d1s[i].x * d2s[i].y - d1s[i].y * d2s[i].x) / (sp * sp * sp);
            sum += g.kappa_g[i];
        }
        const double turns = sum * g.L / static_cast<double>(M) / (2.0 * std::numbers::pi);
        g.rotation_number = static_cast<int>(std::lround(turns));
        g.rotation_residual = std::abs(turns - *g.rotation_number);
    } else if (g.ambient.kind == Ambient::UnitSphere) {
        g.kappa_g.resize(M);
        for (std::size_t i = 0; i < M; ++i) {
            const double sp = norm(d1s[i]);
            g.kappa_g[i] = dot(g.points[i], cross(d1s[i], d2s[i])) / (sp * sp * sp);
        }
        g.simple = is_simple_polygon(g.points, opt.simplicity_factor * g.L / static_cast<double>(M));
        if (*g.simple) g.area = spherical_area(g, AreaOptions{false, opt.simplicity_factor});
    }
    return g;
}

/// ∮κ ds by the trapezoid rule on the uniform arc-length grid.
inline double total_curvature(const CurveGeometry& g) {
    double s = 0.0;
    for (double k : g.kappa) s += k;
    return s * g.L / static_cast<double>(g.M);
}

/// (1/L)∮κ² ds.
inline double mean_square_curvature(const CurveGeometry& g) {
    double s = 0.0;
    for (double k : g.kappa) s += k * k;
    return s / static_cast<double>(g.M);
}

/// Winding number of the unit tangent of a plane curve.
inline int rotation_number(const CurveGeometry& g) {
    if (g.ambient.kind != Ambient::Plane || !g.rotation_number) {
        throw GeometryError("rotation_number: curve '" + g.name + "' is not a plane curve");
    }
    return *g.rotation_number;
}

} // namespace curvspec
