#include <gtest/gtest.h>

#include <cmath>

#include "fixtures.hpp"
#include "linbill/analysis.hpp"
#include "linbill/driver.hpp"
#include "linbill/errors.hpp"
#include "linbill/oracle.hpp"

using namespace linbill;
using namespace linbill::testing;

namespace {

CoefficientSequence synthetic(double logC, double alpha, int first, int last)
{
    CoefficientSequence out;
    for (int k = first; k <= last; ++k) {
        out.emplace_back(k, std::exp(logC * k + alpha * k * std::log(static_cast<double>(k))));
    }
    return out;
}

} // namespace

TEST(Gevrey, GeometricHasAlphaZero)
{
    const GevreyFit fit = gevrey_fit(synthetic(std::log(2.0), 0.0, 1, 30), default_alpha_grid());
    EXPECT_NEAR(fit.alpha, 0.0, 1e-9);
    EXPECT_NEAR(fit.logC, std::log(2.0), 1e-9);
    ASSERT_TRUE(fit.satisfied_alpha.has_value());
    EXPECT_NEAR(*fit.satisfied_alpha, 0.0, 1e-12);
}

TEST(Gevrey, FactorialHasAlphaOne)
{
    CoefficientSequence f;
    for (int k = 1; k <= 40; ++k) {
        f.emplace_back(k, std::exp(std::lgamma(k + 1.0)));
    }
    const GevreyFit fit = gevrey_fit(f, default_alpha_grid());
    EXPECT_NEAR(fit.alpha, 1.0, 0.1);
    ASSERT_TRUE(fit.satisfied_alpha.has_value());
    // k! <= k^{0.75 k} still holds for every k <= 40, so the window accepts 0.75.
    EXPECT_NEAR(*fit.satisfied_alpha, 0.75, 1e-12);
    for (const auto& [k, mag] : f) {
        EXPECT_LE(std::log(mag), 0.75 * k * std::log(k) + 1e-9);
    }
}

TEST(Gevrey, RecoversSyntheticParameters)
{
    for (double alpha : {0.3, 0.7, 1.3}) {
        for (double logC : {-1.0, 0.5}) {
            const GevreyFit fit = gevrey_fit(synthetic(logC, alpha, 2, 40), default_alpha_grid());
            EXPECT_NEAR(fit.alpha, alpha, 0.05);
            EXPECT_NEAR(fit.logC, logC, 0.05);
            EXPECT_EQ(fit.points.size(), 39u);
            EXPECT_EQ(fit.residuals.size(), 39u);
            for (double r : fit.residuals) {
                EXPECT_NEAR(r, 0.0, 1e-8);
            }
        }
    }
}

TEST(Gevrey, DropsZerosAndNeedsSixPoints)
{
    CoefficientSequence s = synthetic(0.0, 0.5, 1, 5);
    EXPECT_THROW(gevrey_fit(s, default_alpha_grid()), InsufficientData);
    s.emplace_back(6.0, 0.0);
    EXPECT_THROW(gevrey_fit(s, default_alpha_grid()), InsufficientData);
    s.emplace_back(7.0, 3.0);
    EXPECT_NO_THROW(gevrey_fit(s, default_alpha_grid()));
    EXPECT_EQ(default_alpha_grid().size(), 41u);
}

TEST(Gevrey, BoundEnvelopesTheData)
{
    const CoefficientSequence s = synthetic(0.2, 0.8, 2, 40);
    const GevreyBound loose = gevrey_bound(s, 1.3);
    EXPECT_TRUE(std::isfinite(loose.logC));
    EXPECT_LE(loose.max_residual, 0.0);
    EXPECT_TRUE(loose.bounded);
    const GevreyBound exact = gevrey_bound(s, 0.8);
    EXPECT_NEAR(exact.logC, 0.2, 1e-9);
    EXPECT_NEAR(exact.max_residual, 0.0, 1e-9);
    for (const auto& [k, mag] : s) {
        EXPECT_LE(std::log(mag), loose.logC * k + 1.3 * k * std::log(k) + 1e-9);
    }
    const GevreyBound tight = gevrey_bound(s, 0.3);
    EXPECT_FALSE(tight.bounded);
}

TEST(Gevrey, CsvHasOneRowPerPoint)
{
    const GevreyFit fit = gevrey_fit(synthetic(0.0, 1.0, 1, 10), default_alpha_grid());
    const std::string csv = gevrey_csv(fit);
    EXPECT_EQ(csv.rfind("k,log_mag,fit\n", 0), 0u);
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 11);
}

TEST(Sequences, PickExpectedDegrees)
{
    const Rotation rot = golden(9);
    const IterationState s = run_schedule(seed_state(rot, 9), 2, rot);
    const CoefficientSequence q = q_sequence(s.q, 8);
    ASSERT_EQ(q.size(), 4u);
    EXPECT_EQ(q.front().first, 2.0);
    EXPECT_EQ(q.back().first, 8.0);
    const CoefficientSequence p = phi_sequence(s.phi, 7);
    ASSERT_EQ(p.size(), 4u);
    EXPECT_EQ(p.front().first, 1.0);
    EXPECT_DOUBLE_EQ(p.front().second, 1.0);
    EXPECT_EQ(p.back().first, 7.0);
}

TEST(Verify, SolvedThrough)
{
    EXPECT_EQ(solved_through(5), 3);
    EXPECT_EQ(solved_through(9), 7);
    EXPECT_EQ(solved_through(17), 15);
    EXPECT_EQ(solved_through(6), 3);
    EXPECT_EQ(solved_through(3), 1);
}

TEST(Verify, FreshStatePasses)
{
    const Rotation rot = golden(11);
    const IterationState seed = seed_state(rot, 11);
    EXPECT_TRUE(verify_suite(seed, rot).pass()) << verify_suite(seed, rot).json();
    const IterationState s = run_schedule(seed, 2, rot);
    const VerifyReport r = verify_suite(s, rot);
    EXPECT_TRUE(r.pass()) << r.json();
    for (const char* name : {"phi_symmetric", "q_real", "ledger_recursions", "outer_average_defect",
                             "inner_decomposition_defect", "step_order_shortfall"}) {
        EXPECT_TRUE(std::any_of(r.checks.begin(), r.checks.end(), [&](const Check& c) { return c.name == name; }))
            << name;
    }
}

TEST(Verify, CorruptionIsCaught)
{
    const Rotation rot = golden(11);
    IterationState s = run_schedule(seed_state(rot, 11), 2, rot);
    s.phi(3, 0) += Scalar(1e-10, 0.0, kPrec);
    s.geometry.reset();
    const VerifyReport r = verify_suite(s, rot);
    EXPECT_FALSE(r.pass());
    for (const Check& c : r.checks) {
        if (c.name == "phi_symmetric") {
            EXPECT_FALSE(c.pass);
            EXPECT_NEAR(c.defect, 1e-10, 1e-15);
        }
    }
}

TEST(Verify, ComparisonEntry)
{
    const Rotation rot = golden(11);
    const IterationState s = run_schedule(seed_state(rot, 11), 2, rot);
    const DirectSolution d = solve_direct(rot, 7, s.phi);
    const VerifyReport r = verify_suite(s, rot, &d);
    EXPECT_TRUE(r.pass()) << r.json();
    EXPECT_EQ(r.checks.back().name, "oracle_vs_kam_through_7");
    const VerifyReport back = verify_suite(d, rot, &s);
    EXPECT_TRUE(back.pass()) << back.json();

    const Check same = compare_solutions(s.q, s.phi, s.q, s.phi, 7, 1e-20);
    EXPECT_TRUE(same.pass);
    EXPECT_EQ(same.defect, 0.0);
    const DirectSolution other = solve_direct(rot, 7);
    BiSeries shifted = d.phi;
    shifted(5, 2) += Scalar(1e-3, 0.0, kPrec);
    EXPECT_FALSE(compare_solutions(d.q, shifted, d.q, d.phi, 7, 1e-20).pass);
    EXPECT_TRUE(compare_solutions(d.q, d.phi, other.q, other.phi, 1, 1e-20).pass);
}
