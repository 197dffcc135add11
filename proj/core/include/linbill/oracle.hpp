#pragma once

// Degree-by-degree direct solver of E(q, phi) = 0, independent of the KAM
// machinery: each odd degree is a small dense linear system assembled by probing.

#include <optional>

#include "linbill/billiard.hpp"

namespace linbill {

struct DirectSolution {
    UniSeries q;     // degree solved_through + 1
    BiSeries phi;    // degree solved_through
    int solved_through = 1;
};

/// Solves E(q, phi) = O_{max_odd_degree + 1} starting from (1 + q2 t^2, z + zbar).
/// At degree d = 2n + 1 the resonant pair phi_{n+1,n} = phi_{n,n+1} is the gauge
/// knob: zero, or copied from `gauge` when given.  Throws SingularDegree if a
/// degree system has no usable pivot.
DirectSolution solve_direct(const Rotation& rot, int max_odd_degree, const std::optional<BiSeries>& gauge = {});

/// Dense complex solve by Gaussian elimination with partial pivoting.
/// Throws SingularDegree when a pivot falls below tol times the largest entry.
std::vector<Scalar> solve_dense(std::vector<std::vector<Scalar>> A, std::vector<Scalar> b, double tol);

} // namespace linbill
