#pragma once

// Difference operators of the cohomological equation, their inverses on the
// non-resonant complement, and the projections onto their kernels.
//
//   nabla f      = f^- - lambda^{-1} f        kernel K  = span z^{j+1} zbar^j
//   nabla_plus f = f   - lambda f^+           kernel K+ = span z^j zbar^{j+1}

#include "linbill/series.hpp"

namespace linbill {

BiSeries nabla(const BiSeries& s, const Rotation& rot);
BiSeries nabla_plus(const BiSeries& s, const Rotation& rot);

enum class Inverse { E, Eplus, Etilde };

/// E inverts nabla off K, E+ inverts nabla_plus off K+, and Etilde inverts
/// f -> f - f^+ off the diagonal.  Resonant coefficients at or below
/// zero_tolerance are dropped; larger ones raise ResonantInput.
BiSeries inv_nabla(const BiSeries& s, const Rotation& rot, Inverse which);
BiSeries E(const BiSeries& s, const Rotation& rot);
BiSeries E_plus(const BiSeries& s, const Rotation& rot);
BiSeries E_tilde(const BiSeries& s, const Rotation& rot);

/// [f]: keeps the j == k coefficients (constant term included).
BiSeries diag_average(const BiSeries& s);

enum class Projection { Pi, Pi_plus };

/// Pi(f) = [zbar f] / zbar keeps j == k + 1; Pi_plus(f) = [z f] / z keeps k == j + 1.
BiSeries project(const BiSeries& s, Projection which);
BiSeries Pi(const BiSeries& s);
BiSeries Pi_plus(const BiSeries& s);

enum class Radial { D, Dbar };

/// D: (zzbar)^n coefficient times n.  Dbar: divided by n, constant dropped.
/// Off-diagonal input above zero_tolerance raises NonDiagonalInput.
BiSeries radial_D(const BiSeries& s, Radial which);

} // namespace linbill
