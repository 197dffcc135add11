#include <gtest/gtest.h>

#include <random>

#include "fixtures.hpp"
#include "linbill/errors.hpp"

using namespace linbill;
using namespace linbill::testing;

namespace {

// Schoolbook product over all coefficient pairs.
BiSeries naive_product(const BiSeries& a, const BiSeries& b)
{
    const int D = a.max_degree();
    BiSeries out(D, a.precision());
    for (int d1 = 0; d1 <= D; ++d1) {
        for (int k1 = 0; k1 <= d1; ++k1) {
            for (int d2 = 0; d1 + d2 <= D; ++d2) {
                for (int k2 = 0; k2 <= d2; ++k2) {
                    out(d1 - k1 + d2 - k2, k1 + k2) += a(d1 - k1, k1) * b(d2 - k2, k2);
                }
            }
        }
    }
    return out;
}

BiSeries one(int D) { return BiSeries::constant(Scalar(1.0, 0.0, kPrec), D); }

BiSeries z_plus_zbar(int D)
{
    BiSeries s(D, kPrec);
    s(1, 0) = Scalar(1.0, 0.0, kPrec);
    s(0, 1) = Scalar(1.0, 0.0, kPrec);
    return s;
}

} // namespace

TEST(BiSeries, IndexLayoutIsDegreeMajor)
{
    EXPECT_EQ(BiSeries::index(0, 0), 0u);
    EXPECT_EQ(BiSeries::index(1, 0), 1u);
    EXPECT_EQ(BiSeries::index(0, 1), 2u);
    EXPECT_EQ(BiSeries::index(2, 0), 3u);
    EXPECT_EQ(BiSeries(5, kPrec).size(), 21u);
    EXPECT_THROW(BiSeries(3, kPrec).at(3, 1), std::out_of_range);
    EXPECT_TRUE(BiSeries(3, kPrec).get(3, 1).abs_double() == 0.0);
}

TEST(BiSeries, BinomialSquare)
{
    const BiSeries s = z_plus_zbar(4);
    const BiSeries sq = s * s;
    EXPECT_EQ(sq(2, 0).abs_double(), 1.0);
    EXPECT_EQ(sq(1, 1).abs_double(), 2.0);
    EXPECT_EQ(sq(0, 2).abs_double(), 1.0);
    EXPECT_TRUE((sq - sq(1, 1) * BiSeries::monomial(1, 1, Scalar(1.0, 0.0, kPrec), 4) -
                 BiSeries::monomial(2, 0, Scalar(1.0, 0.0, kPrec), 4) -
                 BiSeries::monomial(0, 2, Scalar(1.0, 0.0, kPrec), 4))
                    .is_zero());
    EXPECT_TRUE((s * BiSeries(4, kPrec)).is_zero());
}

TEST(BiSeries, ProductMatchesSchoolbook)
{
    std::mt19937_64 rng(1);
    for (int D : {0, 1, 5, 12}) {
        const BiSeries a = random_bi(rng, D);
        const BiSeries b = random_bi(rng, D);
        EXPECT_LE(max_gap(a * b, naive_product(a, b)), 1e-70) << "D = " << D;
    }
}

TEST(BiSeries, ProductSkipsZeroBlocksCorrectly)
{
    std::mt19937_64 rng(2);
    BiSeries a = random_phi(rng, 11);
    BiSeries b = random_phi(rng, 11);
    EXPECT_LE(max_gap(a * b, naive_product(a, b)), 1e-70);
}

TEST(BiSeries, DegreeMismatchIsRejected)
{
    EXPECT_THROW(BiSeries(3, kPrec) * BiSeries(4, kPrec), DegreeMismatch);
    EXPECT_THROW(BiSeries(3, kPrec) + BiSeries(4, kPrec), DegreeMismatch);
}

TEST(BiSeries, InverseOfOneIsOne) { EXPECT_LE(max_gap(invert_unit(one(6)), one(6)), 0.0); }

TEST(BiSeries, InverseOfOnePlusRadial)
{
    const int D = 10;
    const BiSeries a = one(D) + BiSeries::monomial(1, 1, Scalar(1.0, 0.0, kPrec), D);
    const BiSeries inv = invert_unit(a);
    for (int n = 0; 2 * n <= D; ++n) {
        EXPECT_EQ(inv(n, n).re().to_double(), n % 2 == 0 ? 1.0 : -1.0);
    }
    for (int d = 0; d <= D; ++d) {
        for (int k = 0; k <= d; ++k) {
            if (2 * k != d) {
                EXPECT_EQ(inv(d - k, k).abs_double(), 0.0);
            }
        }
    }
}

TEST(BiSeries, InverseMatchesGeometricSum)
{
    std::mt19937_64 rng(5);
    const int D = 8;
    BiSeries a = random_bi(rng, D, 0.3);
    a(0, 0) = Scalar(1.5, -0.5, kPrec);
    // 1/a = (1/a00) sum_n x^n with x = 1 - a / a00.
    const Scalar inv00 = Scalar(1.0, 0.0, kPrec) / a(0, 0);
    const BiSeries x = one(D) - a * inv00;
    BiSeries term = one(D);
    BiSeries sum = one(D);
    for (int n = 1; n <= D; ++n) {
        term = naive_product(term, x);
        sum += term;
    }
    EXPECT_LE(max_gap(invert_unit(a), sum * inv00), 1e-70);
    EXPECT_LE(max_gap(a * invert_unit(a), one(D)), tol());
}

TEST(BiSeries, InverseRejectsNonUnit)
{
    EXPECT_THROW(invert_unit(z_plus_zbar(4)), NonUnit);
}

TEST(BiSeries, MonomialShiftAndTruncate)
{
    std::mt19937_64 rng(4);
    const BiSeries g = truncate(random_bi(rng, 6), 5);
    const BiSeries f = mul_monomial(g, 1, 0);
    EXPECT_EQ(f(3, 2).re().to_double(), g(2, 2).re().to_double());
    EXPECT_LE(max_gap(mul_monomial(f, -1, 0), g), 0.0);
    EXPECT_THROW(mul_monomial(random_bi(rng, 4), -1, 0), std::domain_error);

    BiSeries zz3(3, kPrec);
    zz3(1, 0) = Scalar(1.0, 0.0, kPrec);
    zz3(3, 0) = Scalar(1.0, 0.0, kPrec);
    const BiSeries t = truncate(zz3, 2);
    EXPECT_EQ(t(3, 0).abs_double(), 0.0);
    EXPECT_EQ(t(1, 0).abs_double(), 1.0);
    EXPECT_LE(max_gap(truncate(zz3, 3), zz3), 0.0);
}

TEST(BiSeries, OrderOfMonomialAndZero)
{
    EXPECT_EQ(order(BiSeries(7, kPrec)), 8);
    EXPECT_EQ(order(BiSeries::monomial(2, 1, Scalar(1.0, 0.0, kPrec), 7)), 3);
}

TEST(BiSeries, ShiftActsByLambdaPowers)
{
    const int D = 6;
    const Rotation rot = golden(D);
    std::mt19937_64 rng(8);
    const BiSeries s = random_bi(rng, D);
    const BiSeries p = shift_plus(s, rot);
    const BiSeries m = shift_minus(s, rot);
    const std::complex<double> lambda = to_complex(rot.lambda());
    for (int d = 0; d <= D; ++d) {
        for (int k = 0; k <= d; ++k) {
            const int j = d - k;
            const std::complex<double> c = to_complex(s(j, k));
            EXPECT_NEAR(std::abs(to_complex(p(j, k)) - c * std::pow(lambda, j - k)), 0.0, 1e-14);
            EXPECT_NEAR(std::abs(to_complex(m(j, k)) - c * std::pow(lambda, k - j)), 0.0, 1e-14);
        }
    }
    EXPECT_LE(max_gap(shift_minus(p, rot), s), tol());
    const BiSeries zz = BiSeries::monomial(1, 1, Scalar(1.0, 0.0, kPrec), D);
    EXPECT_LE(max_gap(shift_plus(zz, rot), zz), tol());
    EXPECT_NEAR(weighted_norm(p, 0.7).to_double(), weighted_norm(s, 0.7).to_double(), 1e-12);
}

TEST(BiSeries, InvolutionSwapsIndices)
{
    std::mt19937_64 rng(9);
    const BiSeries s = random_bi(rng, 5);
    const BiSeries i = involution(s);
    EXPECT_TRUE(i(2, 3) == s(3, 2));
    EXPECT_TRUE(involution(BiSeries::monomial(1, 0, Scalar(1.0, 0.0, kPrec), 3))(0, 1) == Scalar(1.0, 0.0, kPrec));
    EXPECT_FALSE(is_symmetric(s, tol()));
    EXPECT_TRUE(is_symmetric(s + i, tol()));
    EXPECT_LE(max_gap(involution(s + i), s + i), 0.0);
}

TEST(BiSeries, PartialDerivatives)
{
    const BiSeries dz = partial(z_plus_zbar(4), Variable::z);
    EXPECT_EQ(dz.max_degree(), 3);
    EXPECT_LE(max_gap(dz, one(3)), 0.0);

    std::mt19937_64 rng(10);
    const int D = 7;
    const Rotation rot = golden(D);
    const BiSeries s = random_bi(rng, D);
    const BiSeries ds = partial(s, Variable::z);
    for (int d = 0; d < D; ++d) {
        for (int k = 0; k <= d; ++k) {
            const int j = d - k;
            EXPECT_LE((ds(j, k) - s(j + 1, k) * Real(static_cast<long>(j + 1), kPrec)).abs_double(), 1e-70);
        }
    }
    // (f^-)_z = lambda^{-1} (f_z)^- and f_z o I = (f o I)_zbar.
    EXPECT_LE(max_gap(partial(shift_minus(s, rot), Variable::z), shift_minus(ds, rot) * rot.power(-1)), tol());
    EXPECT_LE(max_gap(involution(ds), partial(involution(s), Variable::zbar)), tol());
    EXPECT_EQ(partial_padded(s, Variable::z).max_degree(), D);
}

TEST(UniSeries, HornerCompositionMatchesPowerSum)
{
    std::mt19937_64 rng(12);
    const int D = 9;
    BiSeries s = random_bi(rng, D, 0.5);
    s(0, 0) = Scalar(kPrec);
    UniSeries f(D, kPrec);
    for (int n = 0; n <= D; ++n) {
        f[n] = uniform_scalar(rng, 1.0);
    }
    BiSeries sum = one(D) * f[0];
    BiSeries power = one(D);
    for (int n = 1; n <= D; ++n) {
        power = naive_product(power, s);
        sum += power * f[n];
    }
    EXPECT_LE(max_gap(compose_uni(f, s), sum), 1e-68);
    EXPECT_LE(max_gap(PowerTable(s).compose(f), sum), 1e-68);
}

TEST(UniSeries, CompositionExamples)
{
    const int D = 8;
    const UniSeries c = cos_series(D, kPrec);
    EXPECT_LE(max_gap(compose_uni(c, BiSeries(D, kPrec)), one(D)), 0.0);

    UniSeries t2(D, kPrec);
    t2[2] = Scalar(1.0, 0.0, kPrec);
    const BiSeries sq = compose_uni(t2, z_plus_zbar(D));
    EXPECT_EQ(sq(1, 1).re().to_double(), 2.0);
    EXPECT_EQ(sq(2, 0).re().to_double(), 1.0);

    BiSeries diff(D, kPrec);
    diff(1, 0) = Scalar(1.0, 0.0, kPrec);
    diff(0, 1) = Scalar(-1.0, 0.0, kPrec);
    // -(z - zbar)^2 / 2 contributes +zzbar.
    EXPECT_NEAR(compose_uni(c, diff)(1, 1).re().to_double(), 1.0, 1e-70);

    EXPECT_THROW(compose_uni(c, one(D)), NonzeroConstantTerm);
}

TEST(UniSeries, TrigSeriesCoefficients)
{
    const UniSeries c = cos_series(6, kPrec);
    const UniSeries s = sin_series(7, kPrec);
    EXPECT_NEAR(c[4].re().to_double(), 1.0 / 24.0, 1e-16);
    EXPECT_NEAR(s[7].re().to_double(), -1.0 / 5040.0, 1e-16);
    EXPECT_TRUE(is_even(c, tol()));
    EXPECT_FALSE(is_even(s, tol()));
}

TEST(Norms, Examples)
{
    EXPECT_NEAR(weighted_norm(z_plus_zbar(5), 0.3).to_double(), 0.6, 1e-15);
    std::mt19937_64 rng(13);
    const BiSeries g = truncate(random_bi(rng, 8), 7);
    const BiSeries zg = mul_monomial(g, 1, 0);
    EXPECT_NEAR(weighted_norm(zg, 0.4).to_double(), 0.4 * weighted_norm(g, 0.4).to_double(), 1e-14);
    const double rho = 0.6;
    const double n = weighted_norm(g, rho).to_double();
    for (int d = 0; d <= 7; ++d) {
        for (int k = 0; k <= d; ++k) {
            EXPECT_LE(g(d - k, k).abs_double(), std::pow(rho, -d) * n);
        }
    }
}

TEST(Norms, DerivativeNormIsMaxOverPartials)
{
    std::mt19937_64 rng(14);
    const BiSeries f = random_bi(rng, 6);
    const double rho = 0.8;
    const BiSeries fz = partial(f, Variable::z);
    const BiSeries fzb = partial(f, Variable::zbar);
    const double expect = std::max({weighted_norm(f, rho).to_double(), weighted_norm(fz, rho).to_double(),
                                    weighted_norm(fzb, rho).to_double()});
    EXPECT_NEAR(weighted_norm(f, rho, 1).to_double(), expect, 1e-13 * expect);
}

TEST(Norms, Submultiplicative)
{
    std::mt19937_64 rng(15);
    for (int i = 0; i < 20; ++i) {
        const BiSeries a = random_bi(rng, 7), b = random_bi(rng, 7);
        for (double rho : {0.1, 0.5, 1.0}) {
            EXPECT_LE(weighted_norm(a * b, rho).to_double(),
                      weighted_norm(a, rho).to_double() * weighted_norm(b, rho).to_double() * (1 + 1e-14));
        }
    }
}
