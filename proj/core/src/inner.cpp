#include "linbill/inner.hpp"

#include "linbill/operators.hpp"

namespace linbill {

namespace {

Real half(int prec) { return Real(0.5, prec); }

struct Derived {
    SPack pack;
    BiSeries residual;
    BiSeries phi_z;
    BiSeries phi_zb;
};

Derived derive(const UniSeries& q_star, const PhiGeometry& geom, const Rotation& rot)
{
    Derived d{assemble_S(q_star, geom, rot), BiSeries(), partial_padded(geom.phi(), Variable::z),
              partial_padded(geom.phi(), Variable::zbar)};
    d.residual = d.pack.d2_S_minus + d.pack.d1_S_plus;
    return d;
}

ErrorFields fields(const Derived& d, const PhiGeometry& geom, const BiSeries& psi, const BiSeries& w_over_phiz,
                   const BiSeries& Pi_psi_h, const AuxFields& aux, const BiSeries& residual_after, const Rotation& rot)
{
    const int prec = geom.phi().precision();
    const BiSeries& S = d.pack.S_minus;
    const BiSeries dzS = partial_padded(S, Variable::z);
    const BiSeries dzbS = partial_padded(S, Variable::zbar);
    const BiSeries kappa_avg = diag_average(aux.kappa);
    const BiSeries inv_kappa_avg = invert_unit(kappa_avg);
    const BiSeries Pplus_dzS = Pi_plus(dzS);

    ErrorFields R;
    R.R1 = Pi(aux.g * Pplus_dzS - dzbS) * inv_kappa_avg * rot.power(-1);

    const BiSeries g_minus = shift_minus(aux.g, rot);
    const BiSeries mix = aux.g * rot.power(-1) - g_minus * rot.power(1);
    const BiSeries ratio = (kappa_avg - aux.kappa) * invert_unit(aux.kappa) * inv_kappa_avg;
    R.R2 = Pi(psi * mix * ratio);

    R.R3 = Pplus_dzS - nabla_plus(aux.h * Pi_psi_h, rot);

    const BiSeries dzE = partial_padded(d.residual, Variable::z);
    R.R4 = dzE * w_over_phiz + R.R3 * invert_unit(d.phi_z);

    R.R5 = residual_after - (R.R4 + involution(R.R4)) * half(prec);
    return R;
}

} // namespace

BiSeries solve_psi(const BiSeries& residual, const BiSeries& phi_z, const Rotation& rot)
{
    const BiSeries f = residual * phi_z;
    return -E_plus(f - Pi_plus(f), rot);
}

BiSeries solve_psi(const UniSeries& q_star, const BiSeries& phi, const Rotation& rot)
{
    return solve_psi(residual(q_star, phi, rot), partial_padded(phi, Variable::z), rot);
}

namespace {

BiSeries w_over_phi_z(const BiSeries& psi, const BiSeries& h, const Rotation& rot, BiSeries* Pi_psi_h)
{
    const BiSeries ph = psi * invert_unit(h);
    BiSeries p = Pi(ph);
    BiSeries out = E(ph - p, rot);
    if (Pi_psi_h != nullptr) {
        *Pi_psi_h = std::move(p);
    }
    return out;
}

} // namespace

BiSeries solve_w(const BiSeries& psi, const BiSeries& h, const BiSeries& phi, const Rotation& rot)
{
    return partial_padded(phi, Variable::z) * w_over_phi_z(psi, h, rot, nullptr);
}

BiSeries symmetrize(const BiSeries& w) { return (w + involution(w)) * half(w.precision()); }

ErrorFields error_fields(const UniSeries& q_star, const BiSeries& phi, const BiSeries& psi, const BiSeries& w,
                         const BiSeries& h, const BiSeries& g, const BiSeries& kappa, const Rotation& rot)
{
    const PhiGeometry geom(phi, rot);
    const Derived d = derive(q_star, geom, rot);
    BiSeries Pi_psi_h;
    const BiSeries w_phiz = w_over_phi_z(psi, h, rot, &Pi_psi_h);
    const BiSeries after = residual(q_star, phi + symmetrize(w), rot);
    return fields(d, geom, psi, w_phiz, Pi_psi_h, AuxFields{h, g, kappa}, after, rot);
}

BiSeries L_z(const BiSeries& dz_residual, const BiSeries& w, const BiSeries& h, const BiSeries& phi_z,
             const Rotation& rot)
{
    return dz_residual * w + nabla_plus(h * nabla(w * invert_unit(phi_z), rot), rot);
}

InnerSolution solve_inner(const UniSeries& q_star, const PhiGeometry& geom, const Rotation& rot)
{
    const Derived d = derive(q_star, geom, rot);
    InnerSolution s;
    s.residual = d.residual;
    const AuxFields aux = aux_fields(d.pack, geom.phi(), rot);
    s.h = aux.h;
    s.g = aux.g;
    s.kappa = aux.kappa;
    s.psi = solve_psi(d.residual, d.phi_z, rot);
    const BiSeries w_phiz = w_over_phi_z(s.psi, s.h, rot, &s.Pi_psi_over_h);
    s.w = d.phi_z * w_phiz;
    s.delta_phi = symmetrize(s.w);
    auto next = std::make_shared<const PhiGeometry>(geom.phi() + s.delta_phi, rot);
    s.residual_after = residual(q_star, *next, rot);
    s.next_geometry = std::move(next);
    s.R = fields(d, geom, s.psi, w_phiz, s.Pi_psi_over_h, aux, s.residual_after, rot);
    return s;
}

} // namespace linbill
