#pragma once

// Gevrey growth fits of coefficient sequences and the invariant suite.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "linbill/driver.hpp"
#include "linbill/oracle.hpp"

namespace linbill {

/// (degree, magnitude) pairs.
using CoefficientSequence = std::vector<std::pair<double, double>>;

/// (2k, |q_2k|) for 2k = 2..through with nonzero magnitude.
CoefficientSequence q_sequence(const UniSeries& q, int through);
/// (n, sup_{j+k=n} |phi_jk|) for odd n = 1..through with nonzero magnitude.
CoefficientSequence phi_sequence(const BiSeries& phi, int through);

struct AlphaScan {
    double alpha = 0.0;
    double logC = 0.0;   // max over the window of (log|c_k| - alpha k log k) / k
    bool bounded = false; // partial sups have levelled off on the last third
};

struct GevreyPoint {
    double k = 0.0;
    double log_mag = 0.0;
    double fitted = 0.0;
};

struct GevreyFit {
    double alpha = 0.0;
    double logC = 0.0;
    std::pair<double, double> window{0.0, 0.0};
    std::vector<double> residuals;       // log|c_k| - fitted, per point
    std::optional<double> satisfied_alpha;
    std::vector<AlphaScan> scan;
    std::vector<GevreyPoint> points;
};

/// Least squares of log|c_k| on (k, k log k) without intercept, plus the alpha
/// scan.  Zero magnitudes are dropped; InsufficientData below 6 points.
GevreyFit gevrey_fit(const CoefficientSequence& coeffs, const std::vector<double>& alpha_grid);

/// 0.0, 0.05, ..., 2.0.
std::vector<double> default_alpha_grid();

/// Smallest logC with log|c_k| <= logC k + alpha k log k on the window, and the
/// largest residual against that bound (<= 0 by construction when finite).
struct GevreyBound {
    double alpha = 0.0;
    double logC = 0.0;
    double max_residual = 0.0;
    bool bounded = false;
};
GevreyBound gevrey_bound(const CoefficientSequence& coeffs, double alpha);

/// CSV (k, log_mag, fit).
std::string gevrey_csv(const GevreyFit& fit);

struct Check {
    std::string name;
    double defect = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

struct VerifyReport {
    std::vector<Check> checks;
    bool pass() const;
    std::string json() const;
};

/// Largest odd degree through which phi (and q one degree higher) is final,
/// given the residual order.
int solved_through(int residual_order);

/// Relative coefficient agreement of two solutions through `through` (q through through + 1).
Check compare_solutions(const UniSeries& q1, const BiSeries& phi1, const UniSeries& q2, const BiSeries& phi2,
                        int through, double tolerance);

VerifyReport verify_suite(const IterationState& state, const Rotation& rot, const DirectSolution* other = nullptr);
VerifyReport verify_suite(const DirectSolution& sol, const Rotation& rot, const IterationState* other = nullptr);

} // namespace linbill
