#include "linbill/oracle.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "linbill/errors.hpp"

namespace linbill {

std::vector<Scalar> solve_dense(std::vector<std::vector<Scalar>> A, std::vector<Scalar> b, double tol)
{
    const std::size_t n = b.size();
    double scale = 0.0;
    for (const auto& row : A) {
        for (const auto& a : row) {
            scale = std::max(scale, a.abs_double());
        }
    }
    if (scale == 0.0) {
        throw SingularDegree("solve_dense: zero matrix");
    }
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        for (std::size_t r = c + 1; r < n; ++r) {
            if (A[r][c].abs_double() > A[piv][c].abs_double()) {
                piv = r;
            }
        }
        if (A[piv][c].abs_double() < tol * scale) {
            throw SingularDegree("solve_dense: pivot " + std::to_string(A[piv][c].abs_double()) + " in column " +
                                 std::to_string(c));
        }
        std::swap(A[piv], A[c]);
        std::swap(b[piv], b[c]);
        for (std::size_t r = c + 1; r < n; ++r) {
            const Scalar f = A[r][c] / A[c][c];
            for (std::size_t k = c; k < n; ++k) {
                A[r][k] -= f * A[c][k];
            }
            b[r] -= f * b[c];
        }
    }
    std::vector<Scalar> x(n, Scalar(b.empty() ? 64 : b[0].precision()));
    for (std::size_t i = n; i-- > 0;) {
        Scalar acc = b[i];
        for (std::size_t k = i + 1; k < n; ++k) {
            acc -= A[i][k] * x[k];
        }
        x[i] = acc / A[i][i];
    }
    return x;
}

namespace {

struct Unknown {
    int j = 0; // phi_{j,k} = phi_{k,j} with j > k, or j = -1 for q_{d+1}
    int k = 0;
};

void set_unknown(UniSeries& q, BiSeries& phi, const Unknown& u, const Scalar& v)
{
    if (u.j < 0) {
        q[u.k] = v;
    } else {
        phi(u.j, u.k) = v;
        phi(u.k, u.j) = v;
    }
}

std::vector<Scalar> top_rows(const BiSeries& e, int d)
{
    std::vector<Scalar> rows;
    for (int j = d; 2 * j > d; --j) {
        rows.push_back(e(j, d - j));
    }
    return rows;
}

} // namespace

DirectSolution solve_direct(const Rotation& rot, int max_odd_degree, const std::optional<BiSeries>& gauge)
{
    if (max_odd_degree < 3 || max_odd_degree % 2 == 0) {
        throw std::invalid_argument("solve_direct: max_odd_degree must be odd and at least 3");
    }
    const int prec = rot.precision();
    const double tol = zero_tolerance(prec);
    const int D = max_odd_degree;

    DirectSolution out{seed_q(rot, D + 1), seed_phi(D, prec), 1};

    for (int d = 3; d <= D; d += 2) {
        const int n = (d - 1) / 2;
        UniSeries q = resized(out.q, d + 1);
        BiSeries phi = resized(out.phi, d);

        Scalar gauge_value(prec);
        if (gauge && gauge->max_degree() >= d) {
            gauge_value = gauge->get(n + 1, n);
        }
        set_unknown(q, phi, {n + 1, n}, gauge_value);

        std::vector<Unknown> unknowns;
        for (int j = d; j > n + 1; --j) {
            unknowns.push_back({j, d - j});
        }
        unknowns.push_back({-1, d + 1});

        const std::vector<Scalar> base = top_rows(residual(q, PhiGeometry(phi, rot), rot), d);
        const Scalar one(1.0, 0.0, prec);
        const Scalar zero(prec);
        std::vector<std::vector<Scalar>> A(base.size(), std::vector<Scalar>(unknowns.size(), zero));
        for (std::size_t c = 0; c < unknowns.size(); ++c) {
            set_unknown(q, phi, unknowns[c], one);
            const std::vector<Scalar> probe = top_rows(residual(q, PhiGeometry(phi, rot), rot), d);
            set_unknown(q, phi, unknowns[c], zero);
            for (std::size_t r = 0; r < base.size(); ++r) {
                A[r][c] = probe[r] - base[r];
            }
        }
        std::vector<Scalar> rhs;
        rhs.reserve(base.size());
        for (const Scalar& b : base) {
            rhs.push_back(-b);
        }
        std::vector<Scalar> x;
        try {
            x = solve_dense(std::move(A), std::move(rhs), tol);
        } catch (const SingularDegree& e) {
            throw SingularDegree("solve_direct: degree " + std::to_string(d) + ": " + e.what());
        }

        for (std::size_t c = 0; c < unknowns.size(); ++c) {
            set_unknown(q, phi, unknowns[c], x[c]);
        }
        // q is real; the imaginary part of q_{d+1} is round-off.
        q[d + 1] = Scalar(q[d + 1].re());

        out.q = resized(q, D + 1);
        out.phi = resized(phi, D);
        out.solved_through = d;
    }
    return out;
}

} // namespace linbill
