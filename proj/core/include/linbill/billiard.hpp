#pragma once

// Generating function S(t1, t2) = q((t1 + t2) / 2) cos((t1 - t2) / 2) evaluated
// on (phi^-, phi), the residual E(q, phi) = d2 S(phi^-, phi) + d1 S(phi, phi^+),
// and the numeric billiard map.

#include <vector>

#include "linbill/series.hpp"

namespace linbill {

/// Everything about S that depends on phi alone: xi = (phi^- + phi) / 2,
/// zeta = (phi^- - phi) / 2, their power tables, cos zeta and sin zeta.
/// One geometry serves any number of q.
class PhiGeometry {
public:
    /// Validates phi (BadSeed unless phi = z + zbar + O_3, symmetric, odd).
    PhiGeometry(const BiSeries& phi, const Rotation& rot);

    /// Skips validation; used for deliberately generic phi.
    static PhiGeometry unchecked(const BiSeries& phi, const Rotation& rot);

    const BiSeries& phi() const { return phi_; }
    const BiSeries& xi() const { return xi_table_.base(); }
    const BiSeries& zeta() const { return zeta_table_.base(); }
    const PowerTable& xi_powers() const { return xi_table_; }
    const PowerTable& zeta_powers() const { return zeta_table_; }
    const BiSeries& cos_zeta() const { return cos_zeta_; }
    const BiSeries& sin_zeta() const { return sin_zeta_; }

private:
    struct NoCheck {};
    PhiGeometry(const BiSeries& phi, const Rotation& rot, NoCheck);

    BiSeries phi_;
    PowerTable xi_table_;
    PowerTable zeta_table_;
    BiSeries cos_zeta_;
    BiSeries sin_zeta_;
};

/// Throws BadSeed unless phi is symmetric, odd, and phi = z + zbar + O_3.
void check_phi(const BiSeries& phi);

struct SPack {
    BiSeries S_minus;
    BiSeries S_plus;
    BiSeries d1_S_minus;
    BiSeries d2_S_minus;
    BiSeries d1_S_plus;
    BiSeries d2_S_plus;
    BiSeries d12_S_minus;
    BiSeries d12_S_plus;
    BiSeries d11_S_minus;
    BiSeries d22_S_minus;
    BiSeries d11_S_plus;
    BiSeries d22_S_plus;
    BiSeries xi;
    BiSeries zeta;
};

SPack assemble_S(const UniSeries& q, const BiSeries& phi, const Rotation& rot);
SPack assemble_S(const UniSeries& q, const PhiGeometry& geom, const Rotation& rot);

/// S(phi^-, phi) only.
BiSeries S_minus(const UniSeries& q, const PhiGeometry& geom);

/// E(q, phi).  Linear in q; q_0 = 0 is allowed.
BiSeries residual(const UniSeries& q, const BiSeries& phi, const Rotation& rot);
BiSeries residual(const UniSeries& q, const PhiGeometry& geom, const Rotation& rot);

/// q2 = p2 (lambda - 1)^2 / (lambda + 1)^2 with p2 = -1/2, returned real.
Scalar seed_q2(const Rotation& rot);

/// chi(x) = (q2 - p2) / x + 2 (q2 + p2) + (q2 - p2) x with p2 = -1/2.
Scalar chi(const Scalar& q2, const Scalar& x);

/// (1 + q2 t^2, z + zbar) at the given truncation.
UniSeries seed_q(const Rotation& rot, int max_degree);
BiSeries seed_phi(int max_degree, int precision_bits);

struct AuxFields {
    BiSeries h;
    BiSeries g;
    BiSeries kappa;
};

/// h = d12 S (phi_z)(phi_z)^-, g = phi_zbar / phi_z,
/// kappa = d12 S (lambda^{-1} phi_z^- phi_zbar - lambda phi_zbar^- phi_z).
AuxFields aux_fields(const UniSeries& q, const BiSeries& phi, const Rotation& rot);
AuxFields aux_fields(const SPack& pack, const BiSeries& phi, const Rotation& rot);

/// d_phi E (w) = d12 S^- w^- + d22 S^- w + d11 S^+ w + d12 S^+ w^+.
BiSeries dphi_E(const SPack& pack, const BiSeries& w, const Rotation& rot);

/// Polynomial evaluation of q, q', q'' at a real point.
struct UniValue {
    Real f;
    Real df;
    Real d2f;
};
UniValue evaluate(const UniSeries& q, const Real& t);

/// Evaluates f(z, zbar) at the complex point z.
Scalar evaluate(const BiSeries& f, const Scalar& z);

/// Solves d2 S(t1, t2) + d1 S(t2, t3) = 0 for real t3 (safeguarded Newton).
/// Throws NoRoot after 64 iterations without convergence.
Scalar billiard_step(const UniSeries& q, const Scalar& t1, const Scalar& t2);

/// max over `points` equally spaced z on |z| = r of
/// |T(phi^-(z), phi(z))_2 - phi^+(z)|.
double conjugacy_defect(const UniSeries& q, const BiSeries& phi, const Rotation& rot, double r, int points);

struct BoundaryPoint {
    double psi;
    double x;
    double y;
};

/// Boundary of the table with support function q, sampled at `count`
/// uniformly spaced psi in [0, 2 pi).  Uses q(-psi) = q(psi) = q(pi - psi).
std::vector<BoundaryPoint> boundary_points(const UniSeries& q, int count);

/// Radius of curvature q + q'' at psi.
double radius_of_curvature(const UniSeries& q, double psi);

} // namespace linbill
