#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "linbill/errors.hpp"
#include "linbill/operators.hpp"
#include "linbill/outer.hpp"

using namespace linbill;
using namespace linbill::testing;

TEST(Outer, DiagonalOfProductMatchesFullProduct)
{
    std::mt19937_64 rng(41);
    for (int i = 0; i < 5; ++i) {
        const BiSeries a = random_bi(rng, 10);
        const BiSeries b = random_bi(rng, 10);
        const BiSeries full = a * b;
        const std::vector<Scalar> diag = diagonal_of_product(a, b, 5);
        ASSERT_EQ(diag.size(), 6u);
        for (int n = 0; n <= 5; ++n) {
            EXPECT_LE((diag[n] - full(n, n)).abs_double(), 1e-70);
        }
    }
}

TEST(Outer, PivotsMatchClosedForm)
{
    const int M = 8;
    const Rotation rot = golden(2 * M);
    std::mt19937_64 rng(42);
    const BiSeries phi = random_phi(rng, 2 * M);
    const TriangularSystem sys = build_P(phi, rot, M);
    for (int j = 2; j <= M; ++j) {
        EXPECT_LE((sys.p(j, j) - appendix_diagonal(rot, j)).abs_double(), 1e-65);
    }
}

TEST(Outer, PivotLowerBound)
{
    const Rotation rot = golden(80);
    const double mu = rot.mu().to_double();
    for (int j = 1; j <= 40; ++j) {
        const double p = appendix_diagonal(rot, j).abs_double();
        const double bound = diagonal_lower_bound(rot, j);
        EXPECT_NEAR(bound, std::pow(mu, 2 * j) / std::sqrt(2 * M_PI * j), 1e-12 * bound);
        EXPECT_GT(p, bound);
        // binom(2j, j) / 4^j ~ 1 / sqrt(pi j), so p / bound tends to sqrt 2.
        if (j >= 20) {
            EXPECT_NEAR(p / bound, std::sqrt(2.0), 0.02);
        }
    }
}

TEST(Outer, ForwardSubstitutionSolvesSystem)
{
    std::mt19937_64 rng(43);
    TriangularSystem sys;
    sys.M = 7;
    for (int j = 2; j <= sys.M; ++j) {
        std::vector<Scalar> row;
        for (int k = 2; k <= j; ++k) {
            row.push_back(k == j ? Scalar(2.0 + j, 0.5, kPrec) : uniform_scalar(rng, 1.0));
        }
        sys.P.push_back(row);
        sys.rhs.push_back(uniform_scalar(rng, 1.0));
    }
    forward_substitute(sys);
    for (int j = 2; j <= sys.M; ++j) {
        Scalar acc(kPrec);
        for (int k = 2; k <= j; ++k) {
            acc += sys.p(j, k) * sys.eta[k - 2];
        }
        EXPECT_LE((acc - sys.rhs[j - 2]).abs_double(), 1e-70);
    }
}

TEST(Outer, ConditioningOfIdentity)
{
    TriangularSystem sys;
    sys.M = 4;
    for (int j = 2; j <= sys.M; ++j) {
        std::vector<Scalar> row;
        for (int k = 2; k <= j; ++k) {
            row.push_back(Scalar(k == j ? 1.0 : 0.0, 0.0, kPrec));
        }
        sys.P.push_back(row);
    }
    EXPECT_NEAR(conditioning_report(sys, 0.5, 0.6), std::pow(1.2, 8), 1e-12);
    EXPECT_NEAR(conditioning_report(sys, 0.5, 0.4), std::pow(0.8, 4), 1e-12);
}

TEST(Outer, CorrectionFlattensAverage)
{
    const int M = 6;
    const int D = 2 * M + 1;
    const Rotation rot = golden(D);
    std::mt19937_64 rng(44);
    for (int i = 0; i < 3; ++i) {
        const BiSeries phi = random_real_phi(rng, D);
        UniSeries q = seed_q(rot, D + 1);
        for (int k = 4; k <= D + 1; k += 2) {
            q[k] = Scalar(0.3 * std::uniform_real_distribution<double>(-1, 1)(rng), 0.0, kPrec);
        }
        const PhiGeometry geom(phi, rot);
        const DeltaQ dq = solve_delta_q(q, geom, rot, M);
        EXPECT_LE(dq.defect, 10 * tol());
        EXPECT_EQ(order(dq.dq, tol()), 4);
        for (int k = 0; k <= dq.dq.max_degree(); ++k) {
            EXPECT_EQ(dq.dq.get(k).im().to_double(), 0.0);
            if (k % 2 == 1 || k < 4 || k > 2 * M) {
                EXPECT_TRUE(dq.dq.get(k).is_zero()) << k;
            }
        }
        const UniSeries q_star = q + resized(dq.dq, q.max_degree());
        const BiSeries avg = average_S(q_star, phi, rot);
        EXPECT_LE((avg(0, 0) - Scalar(1.0, 0.0, kPrec)).abs_double(), 10 * tol());
        for (int j = 1; j <= M; ++j) {
            EXPECT_LE(avg(j, j).abs_double(), 10 * tol()) << j;
        }
        // Off-diagonal terms are dropped by the bracket.
        EXPECT_LE(max_gap(avg, diag_average(avg)), 0.0);
    }
}

TEST(Outer, AverageUsesOnlyDiagonal)
{
    const int D = 9;
    const Rotation rot = golden(D);
    std::mt19937_64 rng(45);
    const BiSeries phi = random_phi(rng, D);
    const UniSeries q = random_q(rng, D + 1);
    const PhiGeometry geom(phi, rot);
    EXPECT_LE(max_gap(average_S(q, geom), diag_average(S_minus(q, geom))), 1e-70);
}
