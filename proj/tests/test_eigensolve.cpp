#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "curvspec/eigensolve.hpp"
#include "oracles.hpp"

using namespace curvspec;

namespace {

HermitianMatrix random_hermitian(std::size_t n, std::mt19937_64& rng, bool real) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    HermitianMatrix H(n);
    for (std::size_t i = 0; i < n; ++i) {
        H(i, i) = u(rng);
        for (std::size_t j = i + 1; j < n; ++j) {
            const complex z(u(rng), real ? 0.0 : u(rng));
            H(i, j) = z;
            H(j, i) = std::conj(z);
        }
    }
    return H;
}

// Q·H·Qᴴ for a random unitary Q built from Givens rotations with phases.
HermitianMatrix random_unitary_conjugate(const HermitianMatrix& H, std::mt19937_64& rng) {
    const std::size_t n = H.size();
    std::vector<complex> a(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) a[i * n + j] = H(i, j);
    std::uniform_real_distribution<double> ang(0.0, 2.0 * std::numbers::pi);
    for (int rep = 0; rep < 4 * static_cast<int>(n); ++rep) {
        const std::size_t p = rng() % n, q = (p + 1 + rng() % (n - 1)) % n;
        const double th = ang(rng);
        const complex ph = std::polar(1.0, ang(rng));
        const double c = std::cos(th), s = std::sin(th);
        // rows
        for (std::size_t j = 0; j < n; ++j) {
            const complex x = a[p * n + j], y = a[q * n + j];
            a[p * n + j] = c * x - s * ph * y;
            a[q * n + j] = s * std::conj(ph) * x + c * y;
        }
        // columns (conjugate transpose of the same rotation)
        for (std::size_t i = 0; i < n; ++i) {
            const complex x = a[i * n + p], y = a[i * n + q];
            a[i * n + p] = c * x - s * std::conj(ph) * y;
            a[i * n + q] = s * ph * x + c * y;
        }
    }
    HermitianMatrix out(n);
    for (std::size_t i = 0; i < n; ++i) {
        out(i, i) = a[i * n + i].real();
        for (std::size_t j = i + 1; j < n; ++j) {
            const complex z = 0.5 * (a[i * n + j] + std::conj(a[j * n + i]));
            out(i, j) = z;
            out(j, i) = std::conj(z);
        }
    }
    return out;
}

} // namespace

TEST(Eigensolve, DiagonalMatrix) {
    HermitianMatrix H(4);
    H(0, 0) = 3;
    H(1, 1) = -1;
    H(2, 2) = 2;
    H(3, 3) = 0.5;
    const Spectrum s = sym_eigenvalues(H);
    EXPECT_EQ(s.eigenvalues, (std::vector<double>{-1, 0.5, 2, 3}));
}

TEST(Eigensolve, ThreeByThreeAgainstCubicFormula) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int rep = 0; rep < 200; ++rep) {
        double a[3][3];
        HermitianMatrix H(3);
        for (int i = 0; i < 3; ++i)
            for (int j = i; j < 3; ++j) {
                a[i][j] = a[j][i] = u(rng);
                H(i, j) = H(j, i) = a[i][j];
            }
        const auto expect = oracle::symmetric3_eigenvalues(a);
        const auto got = sym_eigenvalues(H).eigenvalues;
        for (int k = 0; k < 3; ++k) EXPECT_NEAR(got[k], expect[k], 1e-12);
    }
}

TEST(Eigensolve, TraceAndOrdering) {
    std::mt19937_64 rng(11);
    for (std::size_t n : {1u, 2u, 5u, 16u, 40u}) {
        for (bool real : {true, false}) {
            const HermitianMatrix H = random_hermitian(n, rng, real);
            const Spectrum s = sym_eigenvalues(H);
            ASSERT_EQ(s.count(), n);
            EXPECT_TRUE(std::is_sorted(s.eigenvalues.begin(), s.eigenvalues.end()));
            const double sum = std::accumulate(s.eigenvalues.begin(), s.eigenvalues.end(), 0.0);
            EXPECT_NEAR(sum, H.trace().real(), 1e-12 * n * (1.0 + H.max_abs()));
        }
    }
}

TEST(Eigensolve, ComplexHermitianAgainstBisection) {
    std::mt19937_64 rng(2024);
    for (std::size_t n = 1; n <= 16; ++n) {
        for (int rep = 0; rep < 5; ++rep) {
            const HermitianMatrix H = random_hermitian(n, rng, false);
            const auto expect = oracle::bisection_eigenvalues(H);
            const Spectrum s = sym_eigenvalues(H);
            ASSERT_EQ(s.count(), n);
            for (std::size_t k = 0; k < n; ++k) {
                EXPECT_NEAR(s.eigenvalues[k], expect[k], 1e-9 * std::max(1.0, H.max_abs())) << "n = " << n;
            }
        }
    }
}

TEST(Eigensolve, RealSymmetricAgainstBisection) {
    std::mt19937_64 rng(77);
    for (std::size_t n = 2; n <= 16; n += 2) {
        const HermitianMatrix H = random_hermitian(n, rng, true);
        const auto expect = oracle::bisection_eigenvalues(H);
        const auto got = sym_eigenvalues(H).eigenvalues;
        for (std::size_t k = 0; k < n; ++k) EXPECT_NEAR(got[k], expect[k], 1e-9);
    }
}

TEST(Eigensolve, UnitaryInvariance) {
    std::mt19937_64 rng(31);
    for (std::size_t n : {3u, 8u, 16u}) {
        const HermitianMatrix H = random_hermitian(n, rng, false);
        const HermitianMatrix G = random_unitary_conjugate(H, rng);
        const auto a = sym_eigenvalues(H).eigenvalues, b = sym_eigenvalues(G).eigenvalues;
        for (std::size_t k = 0; k < n; ++k) EXPECT_NEAR(a[k], b[k], 1e-11);
    }
}

TEST(Eigensolve, ShiftAndScaleCovariance) {
    std::mt19937_64 rng(8);
    const HermitianMatrix H = random_hermitian(12, rng, false);
    HermitianMatrix G = H;
    for (std::size_t i = 0; i < 12; ++i) {
        for (std::size_t j = 0; j < 12; ++j) G(i, j) *= -2.0;
        G(i, i) += 5.0;
    }
    const auto a = sym_eigenvalues(H).eigenvalues, b = sym_eigenvalues(G).eigenvalues;
    for (std::size_t k = 0; k < 12; ++k) EXPECT_NEAR(b[11 - k], 5.0 - 2.0 * a[k], 1e-12);
}

TEST(Eigensolve, EmbeddingPairsAreTight) {
    std::mt19937_64 rng(4);
    const HermitianMatrix H = random_hermitian(10, rng, false);
    const Spectrum s = sym_eigenvalues(H);
    EXPECT_LT(s.pairing_gap, 1e-12);
}

TEST(Eigensolve, RejectsNonHermitian) {
    HermitianMatrix H(2);
    H(0, 1) = complex(1, 1);
    H(1, 0) = complex(1, 1);
    EXPECT_FALSE(H.is_hermitian());
    EXPECT_THROW(sym_eigenvalues(H), DomainError);
}
