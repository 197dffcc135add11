#include "linbill/operators.hpp"

#include <string>

namespace linbill {

namespace {

Scalar one(int prec) { return Scalar(Real(1L, prec), Real(prec)); }

// Multiplier for coefficient (j, k) of each forward operator.
Scalar nabla_factor(const Rotation& rot, int j, int k) { return rot.power(k - j) - rot.power(-1); }
Scalar nabla_plus_factor(const Rotation& rot, int j, int k) { return one(rot.precision()) - rot.power(j - k + 1); }

template <class Factor>
BiSeries scale_coefficients(const BiSeries& s, Factor factor)
{
    BiSeries out(s);
    for (int d = 0; d <= s.max_degree(); ++d) {
        for (int k = 0; k <= d; ++k) {
            Scalar& c = out(d - k, k);
            if (!c.is_zero()) {
                c *= factor(d - k, k);
            }
        }
    }
    return out;
}

bool resonant(Inverse which, int j, int k)
{
    switch (which) {
    case Inverse::E:
        return j == k + 1;
    case Inverse::Eplus:
        return k == j + 1;
    case Inverse::Etilde:
        return j == k;
    }
    return false;
}

Scalar divisor(const Rotation& rot, Inverse which, int j, int k)
{
    switch (which) {
    case Inverse::E:
        return nabla_factor(rot, j, k);
    case Inverse::Eplus:
        return nabla_plus_factor(rot, j, k);
    case Inverse::Etilde:
        return one(rot.precision()) - rot.power(j - k);
    }
    return one(rot.precision());
}

const char* name(Inverse which)
{
    switch (which) {
    case Inverse::E:
        return "E";
    case Inverse::Eplus:
        return "E+";
    case Inverse::Etilde:
        return "E~";
    }
    return "?";
}

} // namespace

BiSeries nabla(const BiSeries& s, const Rotation& rot)
{
    return scale_coefficients(s, [&](int j, int k) { return nabla_factor(rot, j, k); });
}

BiSeries nabla_plus(const BiSeries& s, const Rotation& rot)
{
    return scale_coefficients(s, [&](int j, int k) { return nabla_plus_factor(rot, j, k); });
}

BiSeries inv_nabla(const BiSeries& s, const Rotation& rot, Inverse which)
{
    const double tol = zero_tolerance(s.precision());
    BiSeries out(s);
    for (int d = 0; d <= s.max_degree(); ++d) {
        for (int k = 0; k <= d; ++k) {
            const int j = d - k;
            Scalar& c = out(j, k);
            if (c.is_zero()) {
                continue;
            }
            if (resonant(which, j, k)) {
                if (c.abs_double() > tol) {
                    throw ResonantInput(std::string(name(which)) + ": resonant coefficient (" + std::to_string(j) +
                                        ", " + std::to_string(k) + ") = " + std::to_string(c.abs_double()));
                }
                c = Scalar(s.precision());
                continue;
            }
            c /= divisor(rot, which, j, k);
        }
    }
    return out;
}

BiSeries E(const BiSeries& s, const Rotation& rot) { return inv_nabla(s, rot, Inverse::E); }
BiSeries E_plus(const BiSeries& s, const Rotation& rot) { return inv_nabla(s, rot, Inverse::Eplus); }
BiSeries E_tilde(const BiSeries& s, const Rotation& rot) { return inv_nabla(s, rot, Inverse::Etilde); }

BiSeries diag_average(const BiSeries& s)
{
    BiSeries out(s.max_degree(), s.precision());
    for (int n = 0; 2 * n <= s.max_degree(); ++n) {
        out(n, n) = s(n, n);
    }
    return out;
}

BiSeries project(const BiSeries& s, Projection which)
{
    BiSeries out(s.max_degree(), s.precision());
    for (int n = 0; 2 * n + 1 <= s.max_degree(); ++n) {
        if (which == Projection::Pi) {
            out(n + 1, n) = s(n + 1, n);
        } else {
            out(n, n + 1) = s(n, n + 1);
        }
    }
    return out;
}

BiSeries Pi(const BiSeries& s) { return project(s, Projection::Pi); }
BiSeries Pi_plus(const BiSeries& s) { return project(s, Projection::Pi_plus); }

BiSeries radial_D(const BiSeries& s, Radial which)
{
    const int prec = s.precision();
    const double tol = zero_tolerance(prec);
    for (int d = 0; d <= s.max_degree(); ++d) {
        for (int k = 0; k <= d; ++k) {
            if (d - k != k && s(d - k, k).abs_double() > tol) {
                throw NonDiagonalInput("radial_D: coefficient (" + std::to_string(d - k) + ", " + std::to_string(k) +
                                       ") is off the diagonal");
            }
        }
    }
    BiSeries out(s.max_degree(), prec);
    for (int n = 1; 2 * n <= s.max_degree(); ++n) {
        const Real factor(static_cast<long>(n), prec);
        out(n, n) = s(n, n);
        if (which == Radial::D) {
            out(n, n) *= factor;
        } else {
            out(n, n) /= Scalar(factor);
        }
    }
    return out;
}

} // namespace linbill
