#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>

#include "curvspec/analysis.hpp"
#include "curvspec/sturm1d.hpp"

using namespace curvspec;
using std::numbers::pi;

namespace {

Potential sampled(double L, std::size_t M, auto f) {
    std::vector<double> q(M);
    for (std::size_t j = 0; j < M; ++j) q[j] = f(L * static_cast<double>(j) / static_cast<double>(M));
    return make_potential(L, std::move(q));
}

Potential smooth_potential(double L = 3.0, std::size_t M = 1024) {
    return sampled(L, M, [L](double s) {
        const double w = 2 * pi * s / L;
        return 2.0 + std::cos(w) + 0.5 * std::sin(2 * w) + 1.0 / (2.0 + std::cos(3 * w));
    });
}

} // namespace

TEST(Potential, DftMatchesDirectSum) {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-1, 1);
    std::vector<double> q(64);
    for (double& v : q) v = u(rng);
    const Potential p = make_potential(2.0, q);
    for (long k = -40; k <= 40; ++k) {
        complex s = 0.0;
        for (std::size_t j = 0; j < q.size(); ++j) s += q[j] * std::polar(1.0, -2 * pi * k * static_cast<double>(j) / 64.0);
        s /= 64.0;
        EXPECT_NEAR(std::abs(p.coeff(k) - s), 0.0, 1e-14);
        EXPECT_EQ(p.coeff(-k), std::conj(p.coeff(k)));
    }
    for (std::size_t j = 0; j < q.size(); j += 5) EXPECT_NEAR(interpolate_potential(p, 2.0 * j / 64.0), q[j], 1e-13);
}

TEST(Hill, ConstantPotentialSpectrumIsExact) {
    const double L = 5.0, c = 0.7;
    const Potential p = sampled(L, 256, [c](double) { return c; });
    const Spectrum s = eigenvalues_1d(p, 7, HillOptions{8, 32, 1e-12});
    const double w = 4.0 * std::pow(2 * pi / L, 2);
    const std::vector<double> expect = {c, c + w, c + w, c + 4 * w, c + 4 * w, c + 9 * w, c + 9 * w};
    for (std::size_t k = 0; k < expect.size(); ++k) EXPECT_NEAR(s.eigenvalues[k], expect[k], 1e-12);
    EXPECT_EQ(s.count(), 7u);
}

TEST(Hill, ShiftCovariance) {
    const Potential p = smooth_potential();
    std::vector<double> q = p.q;
    for (double& v : q) v += 1.25;
    const Potential shifted = make_potential(p.L, q);
    const auto a = eigenvalues_1d_fixed(p, 64).eigenvalues;
    const auto b = eigenvalues_1d_fixed(shifted, 64).eigenvalues;
    // Backward-stable solvers are accurate relative to the matrix norm.
    const double tol = 100 * std::numeric_limits<double>::epsilon() * assemble_hill(p, 64).max_abs();
    for (std::size_t k = 0; k < 10; ++k) EXPECT_NEAR(b[k], a[k] + 1.25, tol);
}

TEST(Hill, TranslationInvariance) {
    const Potential p = smooth_potential();
    std::vector<double> q = p.q;
    std::rotate(q.begin(), q.begin() + 137, q.end());
    const Potential rotated = make_potential(p.L, q);
    const auto a = eigenvalues_1d_fixed(p, 64).eigenvalues;
    const auto b = eigenvalues_1d_fixed(rotated, 64).eigenvalues;
    const double tol = 100 * std::numeric_limits<double>::epsilon() * assemble_hill(p, 64).max_abs();
    for (std::size_t k = 0; k < 10; ++k) EXPECT_NEAR(b[k], a[k], tol);
}

TEST(Hill, RayleighBounds) {
    // min q ≤ μ₁ ≤ mean q (constant test function).
    const Potential p = smooth_potential();
    const double mu1 = eigenvalues_1d(p, 1).front();
    const double mean = std::accumulate(p.q.begin(), p.q.end(), 0.0) / static_cast<double>(p.size());
    EXPECT_GE(mu1, *std::min_element(p.q.begin(), p.q.end()));
    EXPECT_LE(mu1, mean);
}

TEST(Hill, AgreesWithRichardsonFiniteDifferences) {
    const Potential p = smooth_potential();
    const Spectrum hill = eigenvalues_1d(p, 5);
    const auto fd = fd_richardson(p, 512, 5);
    for (std::size_t k = 0; k < 5; ++k) {
        EXPECT_NEAR(hill.eigenvalues[k], fd[k], 1e-6 * std::max(1.0, std::abs(hill.eigenvalues[k]))) << k;
    }
}

TEST(Hill, FiniteDifferenceInterpolatesOffGrid) {
    // 768 does not divide 1024, so the oracle evaluates the trigonometric interpolant.
    const Potential p = smooth_potential();
    const auto fd = fd_richardson(p, 384, 1);
    EXPECT_NEAR(eigenvalues_1d(p, 1).front(), fd[0], 1e-6);
}

TEST(Hill, ConvergenceLoopReportsCutoff) {
    const Spectrum s = eigenvalues_1d(smooth_potential(), 3);
    ASSERT_TRUE(s.cutoff.has_value());
    EXPECT_GE(*s.cutoff, 64);
    EXPECT_LT(s.convergence_estimate, 1e-9);
}

TEST(Hill, Errors) {
    const Potential p = smooth_potential(3.0, 256);
    // 2N+1 must not exceed M/2 = 128.
    EXPECT_NO_THROW(assemble_hill(p, 63));
    EXPECT_THROW(assemble_hill(p, 64), DomainError);
    EXPECT_THROW(eigenvalues_1d(p, 0), DomainError);
    EXPECT_THROW(eigenvalues_1d(p, 1, HillOptions{64, 32, 1e-9}), DomainError);
    // A potential with a slowly decaying spectrum cannot converge to 1e-15 by N = 16.
    try {
        eigenvalues_1d(sampled(1.0, 1024, [](double s) { return std::abs(std::sin(pi * s)) * 40; }), 1,
                       HillOptions{4, 16, 1e-15});
        FAIL();
    } catch (const ConvergenceError& e) {
        EXPECT_GT(e.residual(), 1e-15);
    }
}

TEST(Hill, QuarterNormalization) {
    const Spectrum s = eigenvalues_1d(smooth_potential(), 3);
    const Spectrum q = quarter_normalized(s);
    for (std::size_t k = 0; k < 3; ++k) EXPECT_DOUBLE_EQ(q.eigenvalues[k], s.eigenvalues[k] / 4);
}

TEST(Hill, CircleIsTheEqualityCase) {
    for (double r : {0.5, 1.0, 2.0}) {
        const CurveDef c = make_curve("circle", {std::to_string(r) + "*cos(t)", std::to_string(r) + "*sin(t)"}, 0, 2 * pi);
        const CurveGeometry g = reparametrize(c, 1024);
        const double mu1 = eigenvalues_1d(curvature_potential(g), 1).front();
        EXPECT_NEAR(mu1, four_pi2_over(g.L), 1e-10 / (r * r));
        EXPECT_NEAR(mu1, 1.0 / (r * r), 1e-10 / (r * r));
    }
}

TEST(Hill, ScalingLaw) {
    // Scaling the curve by c scales L by c and the spectrum by 1/c².
    const CurveGeometry a = reparametrize(make_curve("e", {"2*cos(t)", "sin(t)"}, 0, 2 * pi), 2048);
    const CurveGeometry b = reparametrize(make_curve("e", {"5*cos(t)", "2.5*sin(t)"}, 0, 2 * pi), 2048);
    const auto sa = eigenvalues_1d(curvature_potential(a), 4).eigenvalues;
    const auto sb = eigenvalues_1d(curvature_potential(b), 4).eigenvalues;
    for (std::size_t k = 0; k < 4; ++k) EXPECT_NEAR(sb[k], sa[k] / 6.25, 1e-10 * sa[k]);
}
