#include <gtest/gtest.h>

#include <random>

#include "fixtures.hpp"
#include "linbill/analysis.hpp"
#include "linbill/driver.hpp"
#include "linbill/errors.hpp"
#include "linbill/oracle.hpp"

using namespace linbill;
using namespace linbill::testing;

TEST(Dense, KnownSolution)
{
    std::mt19937_64 rng(61);
    const int n = 5;
    std::vector<std::vector<Scalar>> A(n, std::vector<Scalar>(n, Scalar(kPrec)));
    std::vector<Scalar> x(n, Scalar(kPrec));
    for (int i = 0; i < n; ++i) {
        x[i] = uniform_scalar(rng, 1.0);
        for (int j = 0; j < n; ++j) {
            A[i][j] = uniform_scalar(rng, 1.0);
        }
    }
    // Zero leading pivot forces a row swap.
    A[0][0] = Scalar(kPrec);
    std::vector<Scalar> b(n, Scalar(kPrec));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            b[i] += A[i][j] * x[j];
        }
    }
    const std::vector<Scalar> got = solve_dense(A, b, tol());
    for (int i = 0; i < n; ++i) {
        EXPECT_LE((got[i] - x[i]).abs_double(), 1e-65);
    }
}

TEST(Dense, SingularRaises)
{
    std::vector<std::vector<Scalar>> A = {{Scalar(1.0, 0.0, kPrec), Scalar(2.0, 0.0, kPrec)},
                                          {Scalar(2.0, 0.0, kPrec), Scalar(4.0, 0.0, kPrec)}};
    std::vector<Scalar> b = {Scalar(1.0, 0.0, kPrec), Scalar(1.0, 0.0, kPrec)};
    EXPECT_THROW(solve_dense(A, b, tol()), SingularDegree);
}

TEST(Oracle, SolutionIsValid)
{
    const int d = 9;
    const Rotation rot = golden(d + 2);
    const DirectSolution sol = solve_direct(rot, d);
    EXPECT_EQ(sol.solved_through, d);
    EXPECT_EQ(sol.phi.max_degree(), d);
    EXPECT_EQ(sol.q.max_degree(), d + 1);
    EXPECT_TRUE(is_symmetric(sol.phi, 10 * tol()));
    EXPECT_TRUE(has_odd_degrees_only(sol.phi, 10 * tol()));
    EXPECT_TRUE(is_even(sol.q, 10 * tol()));
    for (int n = 1; 2 * n + 1 <= d; ++n) {
        EXPECT_EQ(sol.phi(n + 1, n).abs_double(), 0.0);
    }
    const BiSeries e = residual(sol.q, sol.phi, rot);
    EXPECT_GT(order(e, 1e3 * tol()), d);
    EXPECT_TRUE(verify_suite(sol, rot).pass()) << verify_suite(sol, rot).json();
}

TEST(Oracle, MatchesFirstKamStep)
{
    const int D = 11;
    const Rotation rot = golden(D);
    const IterationState s = iterate_once(seed_state(rot, D), 2, rot);
    const DirectSolution sol = solve_direct(rot, 3, s.phi);
    EXPECT_LE((sol.phi(2, 1) - s.phi(2, 1)).abs_double(), 0.0);
    const Check c = compare_solutions(s.q, s.phi, sol.q, sol.phi, 3, 1e-20);
    EXPECT_TRUE(c.pass) << c.defect;
    EXPECT_EQ(c.name, "oracle_vs_kam_through_3");
}

TEST(Oracle, GaugeLeavesQUnchanged)
{
    const int d = 9;
    const Rotation rot = golden(d + 2);
    BiSeries gauge(d, kPrec);
    for (int n = 1; 2 * n + 1 <= d; ++n) {
        gauge(n + 1, n) = Scalar(0.1 / n, 0.05, kPrec);
        gauge(n, n + 1) = gauge(n + 1, n);
    }
    const DirectSolution zero = solve_direct(rot, d);
    const DirectSolution moved = solve_direct(rot, d, gauge);
    for (int n = 1; 2 * n + 1 <= d; ++n) {
        EXPECT_EQ(moved.phi(n + 1, n), gauge(n + 1, n));
    }
    EXPECT_GT(order(residual(moved.q, moved.phi, rot), 1e3 * tol()), d);
    for (int k = 0; k <= d + 1; ++k) {
        EXPECT_LE((zero.q[k] - moved.q[k]).abs_double(), 1e-50) << k;
    }
}
