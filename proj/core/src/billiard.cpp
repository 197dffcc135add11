#include "linbill/billiard.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace linbill {

namespace {

Real half(int prec) { return Real(0.5, prec); }
Real quarter(int prec) { return Real(0.25, prec); }

BiSeries average_pair(const BiSeries& a, const BiSeries& b, bool difference)
{
    BiSeries out = difference ? a - b : a + b;
    out *= half(a.precision());
    return out;
}

} // namespace

void check_phi(const BiSeries& phi)
{
    const int prec = phi.precision();
    const double tol = zero_tolerance(prec);
    if (phi.max_degree() < 1) {
        throw BadSeed("phi must be retained through degree 1");
    }
    const Scalar one(Real(1L, prec), Real(prec));
    if ((phi(1, 0) - one).abs_double() > tol || (phi(0, 1) - one).abs_double() > tol) {
        throw BadSeed("degree-1 part of phi differs from z + zbar");
    }
    if (!is_symmetric(phi, tol)) {
        throw BadSeed("phi is not symmetric");
    }
    if (!has_odd_degrees_only(phi, tol)) {
        throw BadSeed("phi has even-degree terms");
    }
}

PhiGeometry::PhiGeometry(const BiSeries& phi, const Rotation& rot)
    : PhiGeometry((check_phi(phi), phi), rot, NoCheck{})
{
}

PhiGeometry PhiGeometry::unchecked(const BiSeries& phi, const Rotation& rot) { return PhiGeometry(phi, rot, NoCheck{}); }

PhiGeometry::PhiGeometry(const BiSeries& phi, const Rotation& rot, NoCheck)
    : phi_(phi),
      xi_table_(average_pair(shift_minus(phi, rot), phi, false)),
      zeta_table_(average_pair(shift_minus(phi, rot), phi, true)),
      cos_zeta_(zeta_table_.compose(cos_series(phi.max_degree(), phi.precision()))),
      sin_zeta_(zeta_table_.compose(sin_series(phi.max_degree(), phi.precision())))
{
}

namespace {

// q o xi needs q through degree D, but its derivatives need q through D + 1
// and D + 2; take whatever q carries before re-truncating.
struct QSeries {
    UniSeries q0;
    UniSeries q1;
    UniSeries q2;
};

QSeries q_series(const UniSeries& q, int D)
{
    const UniSeries wide = resized(q, D + 2);
    const UniSeries d1 = derivative(wide);
    return {resized(wide, D), resized(d1, D), resized(derivative(d1), D)};
}

struct QValues {
    BiSeries Q0;
    BiSeries Q1;
};

QValues q_values(const UniSeries& q, const PhiGeometry& geom)
{
    const QSeries qs = q_series(q, geom.phi().max_degree());
    return {geom.xi_powers().compose(qs.q0), geom.xi_powers().compose(qs.q1)};
}

} // namespace

SPack assemble_S(const UniSeries& q, const BiSeries& phi, const Rotation& rot)
{
    return assemble_S(q, PhiGeometry(phi, rot), rot);
}

SPack assemble_S(const UniSeries& q, const PhiGeometry& geom, const Rotation& rot)
{
    const int prec = geom.phi().precision();
    const QSeries qs = q_series(q, geom.phi().max_degree());
    const BiSeries Q0 = geom.xi_powers().compose(qs.q0);
    const BiSeries Q1 = geom.xi_powers().compose(qs.q1);
    const BiSeries Q2 = geom.xi_powers().compose(qs.q2);
    const BiSeries& C = geom.cos_zeta();
    const BiSeries& Sn = geom.sin_zeta();

    const BiSeries Q0C = Q0 * C;
    const BiSeries Q1C = Q1 * C;
    const BiSeries Q2C = Q2 * C;
    const BiSeries Q0Sn = Q0 * Sn;
    const BiSeries Q1Sn = Q1 * Sn;
    const Real two(2L, prec);

    SPack p;
    p.S_minus = Q0C;
    p.d1_S_minus = (Q1C - Q0Sn) * half(prec);
    p.d2_S_minus = (Q1C + Q0Sn) * half(prec);
    p.d12_S_minus = (Q2C + Q0C) * quarter(prec);
    p.d11_S_minus = (Q2C - Q1Sn * two - Q0C) * quarter(prec);
    p.d22_S_minus = (Q2C + Q1Sn * two - Q0C) * quarter(prec);

    // S(phi, phi^+) is the plus-shift of S(phi^-, phi).
    p.S_plus = shift_plus(p.S_minus, rot);
    p.d1_S_plus = shift_plus(p.d1_S_minus, rot);
    p.d2_S_plus = shift_plus(p.d2_S_minus, rot);
    p.d12_S_plus = shift_plus(p.d12_S_minus, rot);
    p.d11_S_plus = shift_plus(p.d11_S_minus, rot);
    p.d22_S_plus = shift_plus(p.d22_S_minus, rot);
    p.xi = geom.xi();
    p.zeta = geom.zeta();
    return p;
}

BiSeries S_minus(const UniSeries& q, const PhiGeometry& geom)
{
    return geom.xi_powers().compose(resized(q, geom.phi().max_degree())) * geom.cos_zeta();
}

BiSeries residual(const UniSeries& q, const BiSeries& phi, const Rotation& rot)
{
    return residual(q, PhiGeometry(phi, rot), rot);
}

BiSeries residual(const UniSeries& q, const PhiGeometry& geom, const Rotation& rot)
{
    const int prec = geom.phi().precision();
    const auto [Q0, Q1] = q_values(q, geom);
    const BiSeries Q1C = Q1 * geom.cos_zeta();
    const BiSeries Q0Sn = Q0 * geom.sin_zeta();
    BiSeries d1 = (Q1C - Q0Sn) * half(prec);
    BiSeries d2 = (Q1C + Q0Sn) * half(prec);
    BiSeries e = d2 + shift_plus(d1, rot);
#ifndef NDEBUG
    if (is_symmetric(geom.phi(), zero_tolerance(prec))) {
        const double scale = std::max(1.0, max_abs(e));
        if (!is_symmetric(e, 1e3 * zero_tolerance(prec) * scale)) {
            throw VerificationFailed("residual: E o I != E for symmetric phi");
        }
    }
#endif
    return e;
}

Scalar seed_q2(const Rotation& rot)
{
    const int prec = rot.precision();
    const Scalar one(Real(1L, prec), Real(prec));
    const Scalar ratio = (rot.lambda() - one) / (rot.lambda() + one);
    Scalar q2 = ratio * ratio * Real(-0.5, prec);
    if (std::fabs(q2.im().to_double()) > zero_tolerance(prec) * std::max(1.0, q2.abs_double())) {
        throw VerificationFailed("seed_q2: q2 is not real");
    }
    q2.im() = Real(prec);
    return q2;
}

Scalar chi(const Scalar& q2, const Scalar& x)
{
    const int prec = q2.precision();
    const Scalar p2(Real(-0.5, prec), Real(prec));
    const Scalar a = q2 - p2;
    return a / x + (q2 + p2) * Real(2L, prec) + a * x;
}

UniSeries seed_q(const Rotation& rot, int max_degree)
{
    UniSeries q(max_degree, rot.precision());
    q[0] = Scalar(Real(1L, rot.precision()), Real(rot.precision()));
    if (max_degree >= 2) {
        q[2] = seed_q2(rot);
    }
    return q;
}

BiSeries seed_phi(int max_degree, int precision_bits)
{
    BiSeries phi(max_degree, precision_bits);
    const Scalar one(Real(1L, precision_bits), Real(precision_bits));
    phi(1, 0) = one;
    phi(0, 1) = one;
    return phi;
}

AuxFields aux_fields(const UniSeries& q, const BiSeries& phi, const Rotation& rot)
{
    return aux_fields(assemble_S(q, phi, rot), phi, rot);
}

AuxFields aux_fields(const SPack& pack, const BiSeries& phi, const Rotation& rot)
{
    const BiSeries phi_z = partial_padded(phi, Variable::z);
    const BiSeries phi_zb = partial_padded(phi, Variable::zbar);
    const BiSeries phi_z_m = shift_minus(phi_z, rot);
    const BiSeries phi_zb_m = shift_minus(phi_zb, rot);
    AuxFields out;
    out.h = pack.d12_S_minus * (phi_z * phi_z_m);
    out.g = phi_zb * invert_unit(phi_z);
    BiSeries bracket = (phi_z_m * phi_zb) * rot.power(-1) - (phi_zb_m * phi_z) * rot.power(1);
    out.kappa = pack.d12_S_minus * bracket;
    return out;
}

BiSeries dphi_E(const SPack& pack, const BiSeries& w, const Rotation& rot)
{
    BiSeries out = pack.d12_S_minus * shift_minus(w, rot);
    out += pack.d22_S_minus * w;
    out += pack.d11_S_plus * w;
    out += pack.d12_S_plus * shift_plus(w, rot);
    return out;
}

UniValue evaluate(const UniSeries& q, const Real& t)
{
    const int prec = std::max(q.precision(), t.precision());
    UniValue v{Real(prec), Real(prec), Real(prec)};
    for (int k = q.max_degree(); k >= 0; --k) {
        v.d2f = v.d2f * t + v.df * Real(2L, prec);
        v.df = v.df * t + v.f;
        v.f = v.f * t + q[k].re();
    }
    return v;
}

Scalar evaluate(const BiSeries& f, const Scalar& z)
{
    const int prec = f.precision();
    const Scalar zb = z.conj();
    const int D = f.max_degree();
    std::vector<Scalar> zp(static_cast<std::size_t>(D) + 1, Scalar(prec));
    std::vector<Scalar> zbp(static_cast<std::size_t>(D) + 1, Scalar(prec));
    zp[0] = Scalar(Real(1L, prec), Real(prec));
    zbp[0] = zp[0];
    for (int i = 1; i <= D; ++i) {
        zp[static_cast<std::size_t>(i)] = zp[static_cast<std::size_t>(i - 1)] * z;
        zbp[static_cast<std::size_t>(i)] = zbp[static_cast<std::size_t>(i - 1)] * zb;
    }
    Scalar sum(prec);
    for (int d = 0; d <= D; ++d) {
        for (int k = 0; k <= d; ++k) {
            const Scalar& c = f(d - k, k);
            if (!c.is_zero()) {
                sum += c * zp[static_cast<std::size_t>(d - k)] * zbp[static_cast<std::size_t>(k)];
            }
        }
    }
    return sum;
}

namespace {

// d1 S(a, b) and d2 S(a, b) at real points.
struct Partials {
    Real d1;
    Real d2;
    Real d12;
};

Partials s_partials(const UniSeries& q, const Real& a, const Real& b)
{
    const int prec = a.precision();
    const Real x = (a + b) * half(prec);
    const Real y = (a - b) * half(prec);
    const UniValue v = evaluate(q, x);
    const Real c = cos(y);
    const Real s = sin(y);
    const Real u = v.df * c * half(prec);
    const Real w = v.f * s * half(prec);
    return {u - w, u + w, (v.d2f + v.f) * c * quarter(prec)};
}

Real require_real(const Scalar& t, const char* what)
{
    if (std::fabs(t.im().to_double()) > zero_tolerance(t.precision())) {
        throw std::invalid_argument(std::string("billiard_step: ") + what + " must be real");
    }
    return t.re();
}

} // namespace

Scalar billiard_step(const UniSeries& q, const Scalar& t1_in, const Scalar& t2_in)
{
    const int prec = q.precision();
    const Real t1 = require_real(t1_in, "t1");
    const Real t2 = require_real(t2_in, "t2");
    const double tol = zero_tolerance(prec);
    const Real target = s_partials(q, t1, t2).d2;

    // Linearised map: t3 = 2 cos(theta) t2 - t1 with cos(theta) = (1 - 2 q2) / (1 + 2 q2).
    const Real q2 = q.get(2).re();
    const Real one(1L, prec);
    const Real two(2L, prec);
    Real t3 = two * t2 * (one - two * q2) / (one + two * q2) - t1;

    auto F = [&](const Real& t) {
        const Partials p = s_partials(q, t2, t);
        return std::pair<Real, Real>(target + p.d1, p.d12);
    };

    // Bracket for the bisection fallback, grown lazily around the seed.
    bool bracketed = false;
    Real lo(prec);
    Real hi(prec);
    Real f_lo(prec);

    int extra = 1;
    for (int it = 0; it < 64; ++it) {
        auto [f, df] = F(t3);
        const double fabs_val = std::fabs(f.to_double());
        if (fabs_val <= 10.0 * tol) {
            if (extra-- <= 0) {
                return Scalar(t3);
            }
        }
        Real next(prec);
        const bool newton_ok = !df.is_zero() && std::isfinite(df.to_double());
        if (newton_ok) {
            next = t3 - f / df;
        }
        if (bracketed) {
            const bool inside = newton_ok && next > lo && next < hi;
            if (!inside) {
                next = (lo + hi) * half(prec);
            }
        } else if (!newton_ok) {
            // Search outward for a sign change.
            const Real step(std::max(1e-3, std::fabs(t3.to_double()) + 1e-3), prec);
            for (int grow = 0; grow < 32 && !bracketed; ++grow) {
                const Real width = step * ldexp(one, grow);
                const Real a = t3 - width;
                const Real b = t3 + width;
                const Real fa = F(a).first;
                const Real fb = F(b).first;
                if (fa.sign() * fb.sign() <= 0) {
                    lo = a;
                    hi = b;
                    f_lo = fa;
                    bracketed = true;
                }
            }
            if (!bracketed) {
                throw NoRoot("billiard_step: derivative vanished and no sign change found");
            }
            next = (lo + hi) * half(prec);
        }
        t3 = std::move(next);
        if (bracketed) {
            const Real fn = F(t3).first;
            if (fn.sign() * f_lo.sign() > 0) {
                lo = t3;
                f_lo = fn;
            } else {
                hi = t3;
            }
        }
    }
    const auto [f, df] = F(t3);
    if (std::fabs(f.to_double()) <= 10.0 * tol) {
        return Scalar(t3);
    }
    throw NoRoot("billiard_step: no convergence in 64 iterations");
}

double conjugacy_defect(const UniSeries& q, const BiSeries& phi, const Rotation& rot, double r, int points)
{
    const int prec = phi.precision();
    const BiSeries phi_m = shift_minus(phi, rot);
    const BiSeries phi_p = shift_plus(phi, rot);
    const Real two_pi = ldexp(Real::pi(prec), 1);
    double worst = 0.0;
    for (int i = 0; i < points; ++i) {
        const Real angle = two_pi * Real(static_cast<long>(i), prec) / Real(static_cast<long>(points), prec);
        const Scalar z = Scalar::polar_unit(angle) * Real(r, prec);
        const Scalar t1 = evaluate(phi_m, z);
        const Scalar t2 = evaluate(phi, z);
        const Scalar expected = evaluate(phi_p, z);
        const Scalar t3 = billiard_step(q, Scalar(t1.re()), Scalar(t2.re()));
        worst = std::max(worst, (t3 - Scalar(expected.re())).abs_double());
    }
    return worst;
}

std::vector<BoundaryPoint> boundary_points(const UniSeries& q, int count)
{
    if (count < 3) {
        throw std::invalid_argument("boundary_points: count must be at least 3");
    }
    const int prec = q.precision();
    std::vector<BoundaryPoint> out;
    out.reserve(static_cast<std::size_t>(count));
    const double pi = std::numbers::pi;
    for (int i = 0; i < count; ++i) {
        const double psi = 2.0 * pi * i / count;
        // q has period pi (even, and q(pi - psi) = q(psi)); reduce to [-pi/2, pi/2].
        const double t = psi - pi * std::round(psi / pi);
        const UniValue v = evaluate(q, Real(t, prec));
        const double f = v.f.to_double();
        const double df = v.df.to_double();
        out.push_back({psi, f * std::cos(psi) - df * std::sin(psi), f * std::sin(psi) + df * std::cos(psi)});
    }
    return out;
}

double radius_of_curvature(const UniSeries& q, double psi)
{
    const UniValue v = evaluate(q, Real(psi, q.precision()));
    return (v.f + v.d2f).to_double();
}

} // namespace linbill
