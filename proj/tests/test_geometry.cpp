#include <gtest/gtest.h>

#include <charconv>
#include <cmath>
#include <numbers>
#include <string>

#include "curvspec/analysis.hpp"
#include "curvspec/geometry.hpp"
#include "oracles.hpp"

using namespace curvspec;
using std::numbers::pi;

namespace {

std::string num(double v) {
    char buf[64];
    auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

CurveDef sphere_circle(double r) {
    return make_curve("cap", {num(r) + "*cos(t)", num(r) + "*sin(t)", num(std::sqrt(1 - r * r))}, 0, 2 * pi);
}

// Circle of Euclidean radius r about the north pole, then tilted about the x axis.
CurveDef tilted_sphere_circle(double r, double alpha) {
    const double h = std::sqrt(1 - r * r), c = std::cos(alpha), s = std::sin(alpha);
    return make_curve("tilted",
                      {num(r) + "*cos(t)", num(r * c) + "*sin(t)-" + num(h * s), num(r * s) + "*sin(t)+" + num(h * c)},
                      0, 2 * pi);
}

// Polar graph φ(θ) = a + b·sin(kθ) around the north pole.
CurveDef polar_graph(double a, double b, int k) {
    const std::string phi = "(" + num(a) + "+" + num(b) + "*sin(" + std::to_string(k) + "*t))";
    return make_curve("polar", {"sin" + phi + "*cos(t)", "sin" + phi + "*sin(t)", "cos" + phi}, 0, 2 * pi);
}

} // namespace

TEST(Geometry, EllipseCurvatureAtZero) {
    const CurveDef e = make_curve("ellipse", {"2*cos(t)", "sin(t)"}, 0, 2 * pi);
    EXPECT_NEAR(curvature_at(e, 0.0), 2.0, 1e-14);
    EXPECT_NEAR(curvature_at(e, pi / 2), 0.25, 1e-14);
}

TEST(Geometry, ArcLengthMatchesPeriodicTrapezoid) {
    const CurveDef e = make_curve("ellipse", {"2*cos(t)", "sin(t)"}, 0, 2 * pi);
    const double oracle = oracle::periodic_trapezoid(
        [](double t) { return std::sqrt(4 * std::sin(t) * std::sin(t) + std::cos(t) * std::cos(t)); }, 0, 2 * pi, 4096);
    EXPECT_NEAR(arc_length(e), oracle, 1e-10 * oracle);
    EXPECT_NEAR(arc_length(make_curve("c", {"3*cos(t)", "3*sin(t)"}, 0, 2 * pi)), 6 * pi, 1e-12);
}

TEST(Geometry, ReparametrizationIsUniformInArcLength) {
    const CurveDef e = make_curve("ellipse", {"2*cos(t)", "sin(t)"}, 0, 2 * pi);
    const CurveGeometry g = reparametrize(e, 256);
    ASSERT_EQ(g.t_nodes.size(), 256u);
    auto speed = [](double t) { return std::sqrt(4 * std::sin(t) * std::sin(t) + std::cos(t) * std::cos(t)); };
    // Arc length from 0 to each node by composite Simpson in the test.
    for (std::size_t i = 1; i < g.M; i += 37) {
        const double T = g.t_nodes[i];
        const int n = 2000;
        double s = speed(0) + speed(T);
        for (int k = 1; k < n; ++k) s += (k % 2 ? 4.0 : 2.0) * speed(T * k / n);
        s *= T / (3.0 * n);
        EXPECT_NEAR(s, g.s_grid[i], 1e-10 * g.L);
    }
    // Circle: the arc-length nodes are equally spaced in t.
    const CurveGeometry c = reparametrize(make_curve("c", {"cos(t)", "sin(t)"}, 0, 2 * pi), 128);
    for (std::size_t i = 0; i < c.M; ++i) EXPECT_NEAR(c.t_nodes[i], 2 * pi * i / 128.0, 1e-11);
}

TEST(Geometry, ReparametrizeRejectsBadSampleCounts) {
    const CurveDef c = make_curve("c", {"cos(t)", "sin(t)"}, 0, 2 * pi);
    EXPECT_THROW(reparametrize(c, 100), DomainError);
    EXPECT_THROW(reparametrize(c, 32), DomainError);
}

TEST(Geometry, RotationNumbers) {
    EXPECT_EQ(rotation_number(reparametrize(make_curve("c", {"cos(t)", "sin(t)"}, 0, 2 * pi), 256)), 1);
    EXPECT_EQ(rotation_number(reparametrize(make_curve("cw", {"cos(t)", "-sin(t)"}, 0, 2 * pi), 256)), -1);
    EXPECT_EQ(rotation_number(reparametrize(make_curve("eight", {"sin(t)", "cos(t)*sin(t)"}, 0, 2 * pi), 512)), 0);
    EXPECT_EQ(rotation_number(
                  reparametrize(make_curve("limacon", {"(1+2*cos(t))*cos(t)", "(1+2*cos(t))*sin(t)"}, 0, 2 * pi), 512)),
              2);
    EXPECT_THROW(rotation_number(reparametrize(sphere_circle(0.5), 256)), GeometryError);
}

TEST(Geometry, TotalCurvatureMatchesTrapezoidOracle) {
    // Lemniscate of Gerono (sin t, sin t cos t): κ|γ'| = |x'y'' − y'x''| / |γ'|².
    auto integrand = [](double t) {
        const double x1 = std::cos(t), x2 = -std::sin(t);
        const double y1 = std::cos(2 * t), y2 = -2 * std::sin(2 * t);
        return std::abs(x1 * y2 - y1 * x2) / (x1 * x1 + y1 * y1);
    };
    const double oracle = oracle::periodic_trapezoid(integrand, 0.1, 2 * pi, 1 << 16);
    const CurveGeometry g = reparametrize(load_catalog_curve("lemniscate"), 4096);
    EXPECT_NEAR(total_curvature(g), oracle, 1e-5);
    EXPECT_GE(total_curvature(g), 2 * pi);
}

TEST(Geometry, AmbientClassification) {
    EXPECT_EQ(reparametrize(make_curve("c", {"cos(t)", "sin(t)"}, 0, 2 * pi), 128).ambient.kind, Ambient::Plane);
    EXPECT_EQ(reparametrize(make_curve("c3", {"cos(t)", "sin(t)", "2"}, 0, 2 * pi), 128).ambient.kind, Ambient::Plane);
    EXPECT_EQ(reparametrize(sphere_circle(0.4), 128).ambient.kind, Ambient::UnitSphere);
    EXPECT_EQ(reparametrize(load_catalog_curve("torus-knot"), 1024).ambient.kind, Ambient::Space);
    EXPECT_EQ(reparametrize(load_catalog_curve("viviani"), 512).ambient.kind, Ambient::Space);
    EXPECT_EQ(reparametrize(load_catalog_curve("spherical-spiral"), 512).ambient.kind, Ambient::UnitSphere);
}

TEST(Geometry, SphereCircleAreasMatchClosedForm) {
    for (int i = 1; i <= 9; ++i) {
        const double r = 0.1 * i;
        const CurveGeometry g = reparametrize(sphere_circle(r), 1024);
        ASSERT_TRUE(g.simple.value_or(false)) << r;
        const double exact = 2 * pi * (1 - std::sqrt(1 - r * r));
        EXPECT_NEAR(spherical_area(g), exact, 1e-9) << "r = " << r;
        ASSERT_TRUE(g.area.has_value());
        EXPECT_NEAR(*g.area, exact, 1e-9);
        EXPECT_NEAR(g.L, 2 * pi * r, 1e-12);
    }
}

TEST(Geometry, TiltedCircleAreaIsRotationInvariant) {
    const double r = 0.7;
    const double exact = 2 * pi * (1 - std::sqrt(1 - r * r));
    for (double alpha : {0.3, 1.1, 2.5}) {
        const CurveGeometry g = reparametrize(tilted_sphere_circle(r, alpha), 1024);
        ASSERT_EQ(g.ambient.kind, Ambient::UnitSphere);
        EXPECT_NEAR(spherical_area(g), exact, 1e-9) << alpha;
    }
}

TEST(Geometry, AreaMatchesSolidAngleOracle) {
    // Enclosed area of φ = φ(θ) about the pole is ∮(1 − cos φ) dθ.
    const double a = 0.6, b = 0.2;
    const int k = 3;
    const double oracle = oracle::periodic_trapezoid([&](double t) { return 1 - std::cos(a + b * std::sin(k * t)); }, 0,
                                                     2 * pi, 4096);
    const CurveGeometry g = reparametrize(polar_graph(a, b, k), 2048);
    ASSERT_EQ(g.ambient.kind, Ambient::UnitSphere);
    EXPECT_TRUE(g.simple.value_or(false));
    EXPECT_NEAR(spherical_area(g), oracle, 1e-8);
}

TEST(Geometry, NonSimpleSphericalCurve) {
    const CurveGeometry g = reparametrize(load_catalog_curve("spherical-spiral"), 4096);
    EXPECT_FALSE(g.simple.value_or(true));
    EXPECT_FALSE(g.area.has_value());
    EXPECT_THROW(spherical_area(g), GeometryError);
    // Winding-weighted area: the spiral is symmetric under the antipodal map, so it splits the sphere evenly.
    EXPECT_NEAR(spherical_area(g, AreaOptions{false}), 2 * pi, 1e-8);
}

TEST(Geometry, SphericalCurvatureIdentity) {
    // κ² = 1 + κ_g² for every curve on the unit sphere.
    for (const CurveDef& c : {sphere_circle(0.35), polar_graph(0.9, 0.3, 2), load_catalog_curve("spherical-spiral")}) {
        const CurveGeometry g = reparametrize(c, 512);
        ASSERT_EQ(g.kappa_g.size(), g.M);
        for (std::size_t i = 0; i < g.M; ++i) {
            const double lhs = g.kappa[i] * g.kappa[i];
            const double rhs = 1 + g.kappa_g[i] * g.kappa_g[i];
            ASSERT_NEAR(lhs, rhs, 1e-9 * rhs) << c.name << " i = " << i;
        }
    }
}

TEST(Geometry, InvariantUnderParameterShift) {
    for (const char* name : {"lemniscate", "torus-knot", "spherical-spiral"}) {
        const CurveDef c = load_catalog_curve(name);
        CurveDef shifted = c;
        for (auto& x : shifted.coords) x = substitute(x, parse_expr("t+0.37"));
        const CurveGeometry a = reparametrize(c, 2048), b = reparametrize(shifted, 2048);
        EXPECT_NEAR(a.L, b.L, 1e-10 * a.L) << name;
        EXPECT_NEAR(mean_square_curvature(a), mean_square_curvature(b), 1e-8 * mean_square_curvature(a)) << name;
        // |κ| has kinks at inflection points, so the trapezoid rule is only second order there.
        EXPECT_NEAR(total_curvature(a), total_curvature(b), 1e-5) << name;
    }
}

TEST(Geometry, ScalingLaws) {
    const CurveGeometry a = reparametrize(make_curve("e", {"2*cos(t)", "sin(t)"}, 0, 2 * pi), 1024);
    const CurveGeometry b = reparametrize(make_curve("e3", {"6*cos(t)", "3*sin(t)"}, 0, 2 * pi), 1024);
    EXPECT_NEAR(b.L, 3 * a.L, 1e-10 * b.L);
    EXPECT_NEAR(mean_square_curvature(b), mean_square_curvature(a) / 9, 1e-10);
    EXPECT_NEAR(total_curvature(b), total_curvature(a), 1e-10);
}

TEST(Geometry, CauchySchwarzOnEllipses) {
    for (double a : {1.0, 1.5, 3.0}) {
        const CurveGeometry g = reparametrize(make_curve("e", {num(a) + "*cos(t)", "sin(t)"}, 0, 2 * pi), 1024);
        EXPECT_GE(mean_square_curvature(g), four_pi2_over(g.L) - 1e-12);
        EXPECT_GE(total_curvature(g), 2 * pi - 1e-9);
    }
}

TEST(Geometry, SimplePolygonCheck) {
    std::vector<Vec3> square = {{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0}};
    EXPECT_TRUE(is_simple_polygon(square, 0.01));
    std::vector<Vec3> bowtie = {{0, 0, 0}, {1, 1, 0}, {1, 0, 0}, {0, 1, 0}};
    EXPECT_FALSE(is_simple_polygon(bowtie, 0.01));
}
