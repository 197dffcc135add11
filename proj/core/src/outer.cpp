#include "linbill/outer.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "linbill/operators.hpp"

namespace linbill {

BiSeries average_S(const UniSeries& q, const BiSeries& phi, const Rotation& rot)
{
    return average_S(q, PhiGeometry(phi, rot));
}

BiSeries average_S(const UniSeries& q, const PhiGeometry& geom)
{
    const BiSeries& C = geom.cos_zeta();
    const BiSeries Q0 = geom.xi_powers().compose(resized(q, geom.phi().max_degree()));
    const auto diag = diagonal_of_product(Q0, C, geom.phi().max_degree() / 2);
    BiSeries out(geom.phi().max_degree(), geom.phi().precision());
    for (std::size_t n = 0; n < diag.size(); ++n) {
        out(static_cast<int>(n), static_cast<int>(n)) = diag[n];
    }
    return out;
}

std::vector<Scalar> diagonal_of_product(const BiSeries& a, const BiSeries& b, int n_max)
{
    if (a.max_degree() != b.max_degree()) {
        throw DegreeMismatch("diagonal_of_product: truncation mismatch");
    }
    const int prec = std::max(a.precision(), b.precision());
    n_max = std::min(n_max, a.max_degree() / 2);
    std::vector<Scalar> out(static_cast<std::size_t>(n_max) + 1, Scalar(prec));
    for (int n = 0; n <= n_max; ++n) {
        Scalar& acc = out[static_cast<std::size_t>(n)];
        for (int da = 0; da <= 2 * n; ++da) {
            const int db = 2 * n - da;
            if (a.block_is_zero(da) || b.block_is_zero(db)) {
                continue;
            }
            // a(ja, ka) b(n - ja, n - ka) with ja + ka = da.
            for (int ka = std::max(0, da - n); ka <= std::min(da, n); ++ka) {
                const Scalar& x = a(da - ka, ka);
                if (x.is_zero()) {
                    continue;
                }
                acc += x * b(n - (da - ka), n - ka);
            }
        }
    }
    return out;
}

Scalar appendix_diagonal(const Rotation& rot, int j)
{
    const int prec = rot.precision();
    const Scalar one(Real(1L, prec), Real(prec));
    const Scalar base = (rot.power(-1) + one) * (rot.power(1) + one);
    // binom(2j, j) / 4^j built incrementally to stay exact in the mantissa.
    Real c(1L, prec);
    for (int i = 1; i <= j; ++i) {
        c *= Real(static_cast<long>(2 * i - 1), prec) / Real(static_cast<long>(2 * i), prec);
    }
    return pow(base, j) * c;
}

double diagonal_lower_bound(const Rotation& rot, int j)
{
    const double mu = rot.mu().to_double();
    return std::pow(mu, 2.0 * j) / (std::sqrt(2.0 * std::numbers::pi) * std::sqrt(static_cast<double>(j)));
}

TriangularSystem build_P(const BiSeries& phi, const Rotation& rot, int M)
{
    return build_P(PhiGeometry(phi, rot), rot, M);
}

TriangularSystem build_P(const PhiGeometry& geom, const Rotation& rot, int M)
{
    if (M < 2) {
        throw std::invalid_argument("build_P: M must be at least 2");
    }
    if (geom.phi().max_degree() < 2 * M) {
        throw std::invalid_argument("build_P: truncation degree below 2M");
    }
    const int prec = geom.phi().precision();
    TriangularSystem sys;
    sys.M = M;
    sys.P.assign(static_cast<std::size_t>(M - 1), std::vector<Scalar>(static_cast<std::size_t>(M - 1), Scalar(prec)));
    for (int k = 2; k <= M; ++k) {
        const auto diag = diagonal_of_product(geom.xi_powers().even_power(k), geom.cos_zeta(), M);
        for (int j = k; j <= M; ++j) {
            sys.P[static_cast<std::size_t>(j - 2)][static_cast<std::size_t>(k - 2)] = diag[static_cast<std::size_t>(j)];
        }
    }
    for (int j = 2; j <= M; ++j) {
        const double pjj = sys.p(j, j).abs_double();
        if (pjj < 0.5 * diagonal_lower_bound(rot, j)) {
            throw DegeneratePivot("build_P: |P_" + std::to_string(j) + "," + std::to_string(j) + "| = " +
                                  std::to_string(pjj) + " below the diagonal lower bound");
        }
    }
    return sys;
}

void forward_substitute(TriangularSystem& sys)
{
    const int M = sys.M;
    sys.eta.assign(static_cast<std::size_t>(M - 1), Scalar(sys.P.empty() ? kDefaultPrecisionBits : sys.p(2, 2).precision()));
    for (int j = 2; j <= M; ++j) {
        Scalar acc = sys.rhs[static_cast<std::size_t>(j - 2)];
        for (int k = 2; k < j; ++k) {
            acc -= sys.p(j, k) * sys.eta[static_cast<std::size_t>(k - 2)];
        }
        sys.eta[static_cast<std::size_t>(j - 2)] = acc / sys.p(j, j);
    }
}

DeltaQ solve_delta_q(const UniSeries& q, const PhiGeometry& geom, const Rotation& rot, int M)
{
    const int D = geom.phi().max_degree();
    const int prec = geom.phi().precision();
    const double tol = zero_tolerance(prec);
    DeltaQ out{UniSeries(D, prec), build_P(geom, rot, M), 0.0};
    const BiSeries avg = average_S(q, geom);
    out.system.rhs.clear();
    for (int j = 2; j <= M; ++j) {
        out.system.rhs.push_back(-avg(j, j));
    }
    forward_substitute(out.system);

    for (int k = 2; k <= M; ++k) {
        Scalar eta = out.system.eta[static_cast<std::size_t>(k - 2)];
        const double im = std::fabs(eta.im().to_double());
        if (im > tol * std::max(1.0, std::fabs(eta.re().to_double()))) {
            throw VerificationFailed("solve_delta_q: eta_" + std::to_string(2 * k) + " has imaginary part " +
                                     std::to_string(im));
        }
        eta.im() = Real(prec);
        out.dq[2 * k] = eta;
    }

    const BiSeries check = average_S(q + resized(out.dq, q.max_degree()), geom);
    const Scalar one(Real(1L, prec), Real(prec));
    double defect = (check(0, 0) - one).abs_double();
    for (int n = 1; n <= M; ++n) {
        defect = std::max(defect, check(n, n).abs_double());
    }
    out.defect = defect;
    if (defect > 10.0 * tol) {
        throw VerificationFailed("solve_delta_q: average defect " + std::to_string(defect) + " after correction");
    }
    return out;
}

UniSeries solve_delta_q(const UniSeries& q, const BiSeries& phi, const Rotation& rot, int M)
{
    return solve_delta_q(q, PhiGeometry(phi, rot), rot, M).dq;
}

double conditioning_report(const TriangularSystem& sys, double rho1, double rho2)
{
    const int M = sys.M;
    const int prec = sys.p(2, 2).precision();
    const std::size_t n = static_cast<std::size_t>(M - 1);
    const Real r1(rho1, prec);
    const Real r2(rho2, prec);
    double best = 0.0;
    // Column c of T^{-1}: solve T x = e_c by forward substitution.
    for (int c = 2; c <= M; ++c) {
        std::vector<Scalar> x(n, Scalar(prec));
        for (int j = c; j <= M; ++j) {
            Scalar acc(prec);
            if (j == c) {
                acc = Scalar(Real(1L, prec), Real(prec));
            }
            for (int k = c; k < j; ++k) {
                acc -= sys.p(j, k) * x[static_cast<std::size_t>(k - 2)];
            }
            x[static_cast<std::size_t>(j - 2)] = acc / sys.p(j, j);
        }
        Real col(prec);
        const Real inv_r1 = pow(r1, Real(static_cast<long>(-2 * c), prec));
        for (int j = c; j <= M; ++j) {
            col += x[static_cast<std::size_t>(j - 2)].abs() * pow(r2, Real(static_cast<long>(2 * j), prec)) * inv_r1;
        }
        best = std::max(best, col.to_double());
    }
    return best;
}

} // namespace linbill
