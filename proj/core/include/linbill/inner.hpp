#pragma once

// Inner problem: psi through E+, w through E, the symmetrised correction
// dphi = (w + w o I) / 2, and the error fields R1..R5.

#include <memory>

#include "linbill/billiard.hpp"

namespace linbill {

/// psi = -E+(f - Pi+(f)) with f = E(q*, phi) phi_z.
BiSeries solve_psi(const BiSeries& residual, const BiSeries& phi_z, const Rotation& rot);
BiSeries solve_psi(const UniSeries& q_star, const BiSeries& phi, const Rotation& rot);

/// w = phi_z E(psi / h - Pi(psi / h)).  NonUnit if h has no constant term.
BiSeries solve_w(const BiSeries& psi, const BiSeries& h, const BiSeries& phi, const Rotation& rot);

/// (w + w o I) / 2.
BiSeries symmetrize(const BiSeries& w);

struct ErrorFields {
    BiSeries R1;
    BiSeries R2;
    BiSeries R3;
    BiSeries R4;
    BiSeries R5;
};

/// R1 = Pi(-d_zbar S + g Pi+(d_z S)) / (lambda [kappa])
/// R2 = Pi(psi (lambda^{-1} g - lambda g^-) ([kappa] - kappa) / (kappa [kappa]))
/// R3 = Pi+(d_z S) - nabla_plus(h Pi(psi / h))
/// R4 = d_z E (w / phi_z) + R3 / phi_z
/// R5 = E(q*, phi + dphi) - (R4 + R4 o I) / 2
/// with S = S_{q*}(phi^-, phi) and E = E(q*, phi).
ErrorFields error_fields(const UniSeries& q_star, const BiSeries& phi, const BiSeries& psi, const BiSeries& w,
                         const BiSeries& h, const BiSeries& g, const BiSeries& kappa, const Rotation& rot);

/// L_z(w) = d_z E w + nabla_plus(h nabla(w / phi_z)).
BiSeries L_z(const BiSeries& dz_residual, const BiSeries& w, const BiSeries& h, const BiSeries& phi_z,
             const Rotation& rot);

struct InnerSolution {
    BiSeries residual;      // E(q*, phi)
    BiSeries psi;
    BiSeries h;
    BiSeries g;
    BiSeries kappa;
    BiSeries w;
    BiSeries delta_phi;
    BiSeries Pi_psi_over_h; // Pi(psi / h)
    ErrorFields R;
    BiSeries residual_after; // E(q*, phi + dphi)
    std::shared_ptr<const PhiGeometry> next_geometry;
};

/// Full inner solve at fixed q*, reusing the geometry of phi.
InnerSolution solve_inner(const UniSeries& q_star, const PhiGeometry& geom, const Rotation& rot);

} // namespace linbill
