#pragma once

#include <cmath>
#include <complex>
#include <random>

#include "linbill/numerics.hpp"
#include "linbill/series.hpp"

namespace linbill::testing {

inline constexpr int kPrec = 256;
inline constexpr double kC = 0.5;
inline constexpr double kTau = 1.2;

inline double tol() { return zero_tolerance(kPrec); }

inline Rotation golden(int max_degree, int prec = kPrec)
{
    return make_rotation(golden_angle(prec), kC, kTau, power_cap_for_degree(max_degree + 2));
}

inline std::complex<double> to_complex(const Scalar& s) { return {s.re().to_double(), s.im().to_double()}; }

inline Scalar uniform_scalar(std::mt19937_64& rng, double scale, int prec = kPrec)
{
    std::uniform_real_distribution<double> u(-scale, scale);
    return Scalar(u(rng), u(rng), prec);
}

inline BiSeries random_bi(std::mt19937_64& rng, int D, double scale = 1.0, int prec = kPrec)
{
    BiSeries s(D, prec);
    for (int d = 0; d <= D; ++d) {
        for (int k = 0; k <= d; ++k) {
            s(d - k, k) = uniform_scalar(rng, scale, prec);
        }
    }
    return s;
}

/// z + zbar plus symmetric odd terms of degree >= 3 with coefficients of size <= scale.
inline BiSeries random_phi(std::mt19937_64& rng, int D, double scale = 0.2, int prec = kPrec)
{
    BiSeries s(D, prec);
    s(1, 0) = Scalar(1.0, 0.0, prec);
    s(0, 1) = Scalar(1.0, 0.0, prec);
    for (int d = 3; d <= D; d += 2) {
        for (int k = 0; 2 * k < d; ++k) {
            const Scalar c = uniform_scalar(rng, scale, prec);
            s(d - k, k) = c;
            s(k, d - k) = c;
        }
    }
    return s;
}

/// random_phi with real coefficients, so phi is real on zbar = conj(z).
inline BiSeries random_real_phi(std::mt19937_64& rng, int D, double scale = 0.2, int prec = kPrec)
{
    BiSeries s = random_phi(rng, D, scale, prec);
    for (Scalar& c : s.data()) {
        c.im() = Real(prec);
    }
    return s;
}

/// 1 + real even coefficients.
inline UniSeries random_q(std::mt19937_64& rng, int D, double scale = 0.5, int prec = kPrec)
{
    std::uniform_real_distribution<double> u(-scale, scale);
    UniSeries q(D, prec);
    q[0] = Scalar(1.0, 0.0, prec);
    for (int k = 2; k <= D; k += 2) {
        q[k] = Scalar(u(rng), 0.0, prec);
    }
    return q;
}

inline double max_gap(const BiSeries& a, const BiSeries& b) { return max_abs(a - b); }

inline double max_gap(const UniSeries& a, const UniSeries& b)
{
    double worst = 0.0;
    for (int k = 0; k <= std::max(a.max_degree(), b.max_degree()); ++k) {
        worst = std::max(worst, (a.get(k) - b.get(k)).abs_double());
    }
    return worst;
}

} // namespace linbill::testing
