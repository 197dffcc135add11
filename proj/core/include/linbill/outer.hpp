#pragma once

// Outer problem: the correction dq = sum_{k=2}^{M} eta_{2k} t^{2k} making the
// diagonal average of S_{q+dq}(phi^-, phi) equal to 1 through degree 2M.

#include <vector>

#include "linbill/billiard.hpp"

namespace linbill {

/// Lower-triangular system sum_{k=2}^{j} P_{jk} eta_{2k} = -[S_q]_{2j}, j = 2..M.
struct TriangularSystem {
    int M = 0;
    std::vector<std::vector<Scalar>> P; // P[j - 2][k - 2], k <= j
    std::vector<Scalar> rhs;            // rhs[j - 2]
    std::vector<Scalar> eta;            // eta[k - 2]

    const Scalar& p(int j, int k) const { return P[static_cast<std::size_t>(j - 2)][static_cast<std::size_t>(k - 2)]; }
};

/// [S_q(phi^-, phi)].
BiSeries average_S(const UniSeries& q, const BiSeries& phi, const Rotation& rot);
BiSeries average_S(const UniSeries& q, const PhiGeometry& geom);

/// Coefficients (n, n), n = 0..n_max, of the product a * b without forming it.
std::vector<Scalar> diagonal_of_product(const BiSeries& a, const BiSeries& b, int n_max);

/// P_{jk} = (zzbar)^j coefficient of [xi^{2k} cos zeta].  Throws
/// DegeneratePivot when |P_jj| falls below half of mu^{2j} / sqrt(2 pi j).
TriangularSystem build_P(const BiSeries& phi, const Rotation& rot, int M);
TriangularSystem build_P(const PhiGeometry& geom, const Rotation& rot, int M);

/// 2^{-2j} binom(2j, j) (lambda^{-1} + 1)^j (lambda + 1)^j.
Scalar appendix_diagonal(const Rotation& rot, int j);
/// mu^{2j} / (sqrt(2 pi) sqrt(j)).
double diagonal_lower_bound(const Rotation& rot, int j);

/// Forward substitution; fills sys.eta.
void forward_substitute(TriangularSystem& sys);

struct DeltaQ {
    UniSeries dq;
    TriangularSystem system;
    /// max |Lambda_{2M}([S_{q+dq}] - 1)| from a fresh evaluation.
    double defect = 0.0;
};

/// Solves the outer problem and re-verifies the average.  Throws
/// VerificationFailed if the defect exceeds 10 zero_tolerance or if dq has a
/// non-negligible imaginary part.
DeltaQ solve_delta_q(const UniSeries& q, const PhiGeometry& geom, const Rotation& rot, int M);
UniSeries solve_delta_q(const UniSeries& q, const BiSeries& phi, const Rotation& rot, int M);

/// || Gamma_{rho2} T^{-1} Gamma_{rho1}^{-1} ||_1 with Gamma_r = diag(r^{2j}).
double conditioning_report(const TriangularSystem& sys, double rho1, double rho2);

} // namespace linbill
