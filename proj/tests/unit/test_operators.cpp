#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "linbill/errors.hpp"
#include "linbill/operators.hpp"

using namespace linbill;
using namespace linbill::testing;

namespace {

constexpr int kD = 9;

Scalar unit() { return Scalar(1.0, 0.0, kPrec); }

BiSeries mono(int j, int k) { return BiSeries::monomial(j, k, unit(), kD); }

// Zeroes the coefficients with k - j == offset.
BiSeries drop_band(BiSeries s, int offset)
{
    for (int d = 0; d <= s.max_degree(); ++d) {
        for (int k = 0; k <= d; ++k) {
            if (k - (d - k) == offset) {
                s(d - k, k) = Scalar(kPrec);
            }
        }
    }
    return s;
}

} // namespace

TEST(Operators, NablaFactors)
{
    const Rotation rot = golden(kD);
    std::mt19937_64 rng(21);
    const BiSeries s = random_bi(rng, kD);
    const BiSeries n = nabla(s, rot);
    const BiSeries np = nabla_plus(s, rot);
    const std::complex<double> l = to_complex(rot.lambda());
    for (int d = 0; d <= kD; ++d) {
        for (int k = 0; k <= d; ++k) {
            const int j = d - k;
            const std::complex<double> c = to_complex(s(j, k));
            EXPECT_NEAR(std::abs(to_complex(n(j, k)) - c * (std::pow(l, k - j) - 1.0 / l)), 0.0, 1e-13);
            EXPECT_NEAR(std::abs(to_complex(np(j, k)) - c * (1.0 - std::pow(l, j - k + 1))), 0.0, 1e-13);
        }
    }
    // Same operators from their definitions f^- - lambda^{-1} f and f - lambda f^+.
    EXPECT_LE(max_gap(n, shift_minus(s, rot) - s * rot.power(-1)), tol());
    EXPECT_LE(max_gap(np, s - shift_plus(s, rot) * rot.power(1)), tol());
}

TEST(Operators, Kernels)
{
    const Rotation rot = golden(kD);
    for (int j = 0; 2 * j + 1 <= kD; ++j) {
        EXPECT_LE(max_abs(nabla_plus(mono(j, j + 1), rot)), tol());
        EXPECT_LE(max_abs(nabla(mono(j + 1, j), rot)), tol());
    }
}

TEST(Operators, ProjectionsKillImages)
{
    const Rotation rot = golden(kD);
    std::mt19937_64 rng(22);
    for (int i = 0; i < 10; ++i) {
        const BiSeries s = random_bi(rng, kD);
        EXPECT_LE(max_abs(Pi_plus(nabla_plus(s, rot))), tol());
        EXPECT_LE(max_abs(Pi(nabla(s, rot))), tol());
    }
}

TEST(Operators, EplusOfZ)
{
    const Rotation rot = golden(kD);
    const BiSeries e = E_plus(mono(1, 0), rot);
    const Scalar expect = unit() / (unit() - rot.power(2));
    EXPECT_LE((e(1, 0) - expect).abs_double(), tol());
}

TEST(Operators, InversesOnComplements)
{
    const Rotation rot = golden(kD);
    std::mt19937_64 rng(23);
    for (int i = 0; i < 10; ++i) {
        const BiSeries s = random_bi(rng, kD);
        EXPECT_LE(max_gap(E_plus(nabla_plus(s, rot), rot), s - Pi_plus(s)), 1e-60);
        EXPECT_LE(max_gap(E(nabla(s, rot), rot), s - Pi(s)), 1e-60);
        EXPECT_LE(max_gap(nabla_plus(E_plus(s - Pi_plus(s), rot), rot), s - Pi_plus(s)), 1e-60);
        EXPECT_LE(max_gap(E_tilde(s - shift_plus(s, rot), rot), s - diag_average(s)), 1e-60);
    }
}

TEST(Operators, ResonantInputRaises)
{
    const Rotation rot = golden(kD);
    EXPECT_THROW(E_plus(mono(1, 2), rot), ResonantInput);
    EXPECT_THROW(E(mono(2, 1), rot), ResonantInput);
    EXPECT_THROW(E_tilde(mono(2, 2), rot), ResonantInput);
    // Below zero_tolerance the resonant coefficient is dropped.
    const BiSeries tiny = BiSeries::monomial(1, 2, Scalar(1e-50, 0.0, kPrec), kD);
    EXPECT_TRUE(E_plus(tiny, rot).is_zero());
}

TEST(Operators, DiagonalAverage)
{
    const BiSeries f = mono(1, 0) + mono(1, 1);
    EXPECT_LE(max_gap(diag_average(f), mono(1, 1)), 0.0);

    const Rotation rot = golden(kD);
    std::mt19937_64 rng(24);
    const BiSeries s = random_bi(rng, kD);
    EXPECT_LE(max_gap(diag_average(shift_plus(s, rot)), diag_average(s)), tol());
    EXPECT_LE(max_gap(diag_average(shift_minus(s, rot)), diag_average(s)), tol());
    const BiSeries kappa = diag_average(random_bi(rng, kD));
    EXPECT_LE(max_gap(diag_average(kappa * s), kappa * diag_average(s)), 1e-70);
}

TEST(Operators, ProjectionExamples)
{
    const BiSeries f = mono(1, 0) + mono(0, 1) + mono(1, 2);
    EXPECT_LE(max_gap(Pi_plus(f), mono(0, 1) + mono(1, 2)), 0.0);
    EXPECT_TRUE(Pi(mono(0, 1)).is_zero());
    EXPECT_LE(max_gap(Pi(mono(1, 0)), mono(1, 0)), 0.0);

    std::mt19937_64 rng(25);
    const BiSeries s = random_bi(rng, kD);
    // Pi(f) = [zbar f] / zbar.
    EXPECT_LE(max_gap(Pi(s), resized(mul_monomial(diag_average(mul_monomial(resized(s, kD + 1), 0, 1)), 0, -1), kD)),
              0.0);
    const double rho = 0.7;
    EXPECT_NEAR(weighted_norm(Pi(s), rho).to_double() + weighted_norm(s - Pi(s), rho).to_double(),
                weighted_norm(s, rho).to_double(), 1e-13);
    EXPECT_LE(max_gap(Pi(Pi(s)), Pi(s)), 0.0);
    EXPECT_LE(max_gap(drop_band(s, -1), s - Pi(s)), 0.0);
}

TEST(Operators, RadialOperators)
{
    const BiSeries f = mono(2, 2);
    EXPECT_LE(max_gap(radial_D(f, Radial::D), f * Scalar(2.0, 0.0, kPrec)), 0.0);
    std::mt19937_64 rng(26);
    const BiSeries diag = diag_average(random_bi(rng, kD));
    const BiSeries f0 = BiSeries::constant(diag(0, 0), kD);
    EXPECT_LE(max_gap(radial_D(radial_D(diag, Radial::D), Radial::Dbar), diag - f0), 1e-70);
    EXPECT_THROW(radial_D(mono(1, 0), Radial::D), NonDiagonalInput);
}

TEST(Operators, SymmetryIntertwining)
{
    const Rotation rot = golden(kD);
    std::mt19937_64 rng(27);
    for (int i = 0; i < 10; ++i) {
        const BiSeries s = random_bi(rng, kD);
        const BiSeries sI = involution(s);
        EXPECT_LE(max_gap(involution(nabla(s, rot)), nabla_plus(sI, rot) * -rot.power(-1)), tol());
        EXPECT_LE(max_gap(involution(nabla_plus(s, rot)), nabla(sI, rot) * -rot.power(1)), tol());
        const BiSeries t = s - Pi_plus(s);
        EXPECT_LE(max_gap(involution(E_plus(t, rot)), E(involution(t), rot) * -rot.power(-1)), 1e-60);
        const BiSeries u = s - Pi(s);
        EXPECT_LE(max_gap(involution(E(u, rot)), E_plus(involution(u), rot) * -rot.power(1)), 1e-60);
    }
}

TEST(Operators, NormBounds)
{
    const Rotation rot = golden(kD);
    std::mt19937_64 rng(28);
    for (int i = 0; i < 10; ++i) {
        const BiSeries s = random_bi(rng, kD);
        for (double rho : {0.1, 0.5, 1.0}) {
            const double n = weighted_norm(s, rho).to_double();
            EXPECT_LE(weighted_norm(nabla(s, rot), rho).to_double(), 2 * n * (1 + 1e-14));
            EXPECT_LE(weighted_norm(nabla_plus(s, rot), rho).to_double(), 2 * n * (1 + 1e-14));
            EXPECT_LE(weighted_norm(Pi(s), rho).to_double(), n);
            EXPECT_LE(weighted_norm(diag_average(s), rho).to_double(), n);
        }
    }
}
