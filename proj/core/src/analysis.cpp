#include "linbill/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "linbill/errors.hpp"

namespace linbill {

CoefficientSequence q_sequence(const UniSeries& q, int through)
{
    CoefficientSequence out;
    for (int k = 2; k <= std::min(through, q.max_degree()); k += 2) {
        const double m = q.get(k).abs_double();
        if (m > 0.0) {
            out.emplace_back(k, m);
        }
    }
    return out;
}

CoefficientSequence phi_sequence(const BiSeries& phi, int through)
{
    CoefficientSequence out;
    for (int n = 1; n <= std::min(through, phi.max_degree()); n += 2) {
        const double m = degree_sup(phi, n);
        if (m > 0.0) {
            out.emplace_back(n, m);
        }
    }
    return out;
}

std::vector<double> default_alpha_grid()
{
    std::vector<double> grid;
    for (int i = 0; i <= 40; ++i) {
        grid.push_back(0.05 * i);
    }
    return grid;
}

namespace {

struct Point {
    double k;
    double y;
};

std::vector<Point> usable_points(const CoefficientSequence& coeffs)
{
    std::vector<Point> pts;
    for (const auto& [k, m] : coeffs) {
        if (m > 0.0 && k >= 1.0 && std::isfinite(m)) {
            pts.push_back({k, std::log(m)});
        }
    }
    std::sort(pts.begin(), pts.end(), [](const Point& a, const Point& b) { return a.k < b.k; });
    if (pts.size() < 6) {
        throw InsufficientData("gevrey_fit: need at least 6 nonzero magnitudes, have " + std::to_string(pts.size()));
    }
    return pts;
}

double klogk(double k) { return k * std::log(k); }

AlphaScan scan_alpha(const std::vector<Point>& pts, double alpha)
{
    const std::size_t head_end = pts.size() - pts.size() / 3;
    double head = -std::numeric_limits<double>::infinity();
    double tail = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const double g = (pts[i].y - alpha * klogk(pts[i].k)) / pts[i].k;
        (i < head_end ? head : tail) = std::max(i < head_end ? head : tail, g);
    }
    return {alpha, std::max(head, tail), tail <= head};
}

} // namespace

GevreyFit gevrey_fit(const CoefficientSequence& coeffs, const std::vector<double>& alpha_grid)
{
    const std::vector<Point> pts = usable_points(coeffs);

    // Normal equations for y = a k + b k log k.
    double s11 = 0.0, s12 = 0.0, s22 = 0.0, t1 = 0.0, t2 = 0.0;
    for (const Point& p : pts) {
        const double x1 = p.k;
        const double x2 = klogk(p.k);
        s11 += x1 * x1;
        s12 += x1 * x2;
        s22 += x2 * x2;
        t1 += x1 * p.y;
        t2 += x2 * p.y;
    }
    const double det = s11 * s22 - s12 * s12;
    if (!(std::fabs(det) > 0.0)) {
        throw InsufficientData("gevrey_fit: degenerate design (window too narrow)");
    }

    GevreyFit fit;
    fit.logC = (t1 * s22 - t2 * s12) / det;
    fit.alpha = (s11 * t2 - s12 * t1) / det;
    fit.window = {pts.front().k, pts.back().k};
    for (const Point& p : pts) {
        const double f = fit.logC * p.k + fit.alpha * klogk(p.k);
        fit.points.push_back({p.k, p.y, f});
        fit.residuals.push_back(p.y - f);
    }
    std::vector<double> grid = alpha_grid;
    std::sort(grid.begin(), grid.end());
    for (double a : grid) {
        fit.scan.push_back(scan_alpha(pts, a));
        if (!fit.satisfied_alpha && fit.scan.back().bounded) {
            fit.satisfied_alpha = a;
        }
    }
    return fit;
}

GevreyBound gevrey_bound(const CoefficientSequence& coeffs, double alpha)
{
    const std::vector<Point> pts = usable_points(coeffs);
    const AlphaScan s = scan_alpha(pts, alpha);
    GevreyBound b{alpha, s.logC, -std::numeric_limits<double>::infinity(), s.bounded};
    for (const Point& p : pts) {
        b.max_residual = std::max(b.max_residual, p.y - (s.logC * p.k + alpha * klogk(p.k)));
    }
    return b;
}

std::string gevrey_csv(const GevreyFit& fit)
{
    std::ostringstream out;
    out.precision(17);
    out << "k,log_mag,fit\n";
    for (const GevreyPoint& p : fit.points) {
        out << p.k << ',' << p.log_mag << ',' << p.fitted << '\n';
    }
    return out.str();
}

bool VerifyReport::pass() const
{
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

std::string VerifyReport::json() const
{
    nlohmann::json j;
    j["pass"] = pass();
    j["checks"] = nlohmann::json::array();
    for (const Check& c : checks) {
        j["checks"].push_back({{"name", c.name},
                               {"defect", std::isfinite(c.defect) ? nlohmann::json(c.defect) : nlohmann::json(nullptr)},
                               {"tolerance", c.tolerance},
                               {"pass", c.pass}});
    }
    return j.dump(2);
}

int solved_through(int residual_order)
{
    const int d = residual_order - 2;
    return d % 2 == 0 ? d - 1 : d;
}

namespace {

Check make_check(std::string name, double defect, double tolerance)
{
    return {std::move(name), defect, tolerance, std::isfinite(defect) && defect <= tolerance};
}

double relative_gap(const Scalar& a, const Scalar& b, double floor)
{
    const double scale = std::max(a.abs_double(), b.abs_double());
    const double gap = (a - b).abs_double();
    return scale > floor ? gap / scale : gap;
}

void shape_checks(std::vector<Check>& out, const UniSeries& q, const BiSeries& phi, double tol)
{
    double asym = 0.0;
    double even = 0.0;
    for (int d = 0; d <= phi.max_degree(); ++d) {
        for (int k = 0; k <= d; ++k) {
            const Scalar& c = phi(d - k, k);
            asym = std::max(asym, (c - phi(k, d - k)).abs_double());
            if (d % 2 == 0) {
                even = std::max(even, c.abs_double());
            }
        }
    }
    const Scalar one(1.0, 0.0, phi.precision());
    const double linear = std::max((phi.get(1, 0) - one).abs_double(), (phi.get(0, 1) - one).abs_double());
    double q_odd = 0.0;
    double q_imag = 0.0;
    for (int k = 0; k <= q.max_degree(); ++k) {
        if (k % 2 == 1) {
            q_odd = std::max(q_odd, q.get(k).abs_double());
        }
        q_imag = std::max(q_imag, std::fabs(q.get(k).im().to_double()));
    }
    out.push_back(make_check("phi_symmetric", asym, 10 * tol));
    out.push_back(make_check("phi_odd_degrees", even, 10 * tol));
    out.push_back(make_check("phi_linear_part", linear, 10 * tol));
    out.push_back(make_check("q_even", q_odd, 10 * tol));
    out.push_back(make_check("q_real", q_imag, 10 * tol));
    out.push_back(make_check("q_constant_term", (q.get(0) - one).abs_double(), 10 * tol));
}

// Largest |E| coefficient below `order` (degrees the claim says vanish).
double residual_leak(const UniSeries& q, const BiSeries& phi, const Rotation& rot, int order)
{
    const BiSeries e = residual(q, PhiGeometry::unchecked(phi, rot), rot);
    double worst = 0.0;
    for (int d = 0; d < std::min(order, e.max_degree() + 1); ++d) {
        worst = std::max(worst, degree_sup(e, d));
    }
    return worst;
}

} // namespace

Check compare_solutions(const UniSeries& q1, const BiSeries& phi1, const UniSeries& q2, const BiSeries& phi2,
                        int through, double tolerance)
{
    const double floor = zero_tolerance(phi1.precision());
    double worst = 0.0;
    for (int k = 0; k <= through + 1; ++k) {
        worst = std::max(worst, relative_gap(q1.get(k), q2.get(k), floor));
    }
    for (int d = 0; d <= through; ++d) {
        for (int k = 0; k <= d; ++k) {
            worst = std::max(worst, relative_gap(phi1.get(d - k, k), phi2.get(d - k, k), floor));
        }
    }
    return make_check("oracle_vs_kam_through_" + std::to_string(through), worst, tolerance);
}

VerifyReport verify_suite(const IterationState& state, const Rotation& rot, const DirectSolution* other)
{
    const double tol = zero_tolerance(rot.precision());
    VerifyReport r;
    shape_checks(r.checks, state.q, state.phi, tol);
    const int claimed = std::min(2 * state.N + 1, state.max_degree() + 1);
    r.checks.push_back(make_check("residual_order_" + std::to_string(claimed),
                                  residual_leak(state.q, state.phi, rot, claimed), 1e3 * tol));

    const double gamma_bar = std::pow(state.params.gamma0, 5.0);
    double ledger_gap = 0.0;
    for (std::size_t i = 1; i < state.history.size(); ++i) {
        const StepReport& prev = state.history[i - 1];
        const StepReport& cur = state.history[i];
        if (state.params.kind == ScheduleKind::kam) {
            ledger_gap = std::max(ledger_gap, std::fabs(cur.rho - gamma_bar * prev.rho) / prev.rho);
            if (std::isfinite(prev.log_eps)) {
                ledger_gap = std::max(ledger_gap, std::fabs(cur.log_eps - 1.5 * prev.log_eps) / std::fabs(prev.log_eps));
            }
        } else {
            ledger_gap = std::max(ledger_gap, std::fabs(cur.rho - prev.rho) / prev.rho);
        }
    }
    r.checks.push_back(make_check("ledger_recursions", ledger_gap, 1e-12));

    double avg = 0.0;
    double decomposition = 0.0;
    int order_shortfall = 0;
    for (const StepReport& s : state.history) {
        avg = std::max(avg, s.avg_S_defect);
        decomposition = std::max(decomposition, s.decomposition_defect);
        const int expected = 2 * std::min(s.M_used, 2 * s.N) + 1;
        order_shortfall = std::max(order_shortfall, expected - s.order_residual);
    }
    r.checks.push_back(make_check("outer_average_defect", avg, 10 * tol));
    r.checks.push_back(make_check("inner_decomposition_defect", decomposition, 10 * tol));
    r.checks.push_back(make_check("step_order_shortfall", order_shortfall, 0.0));

    if (other) {
        const int through = std::min(other->solved_through, solved_through(claimed));
        r.checks.push_back(compare_solutions(state.q, state.phi, other->q, other->phi, through, 1e-20));
    }
    return r;
}

VerifyReport verify_suite(const DirectSolution& sol, const Rotation& rot, const IterationState* other)
{
    const double tol = zero_tolerance(rot.precision());
    VerifyReport r;
    shape_checks(r.checks, sol.q, sol.phi, tol);
    const int claimed = sol.solved_through + 1;
    r.checks.push_back(make_check("residual_order_" + std::to_string(claimed),
                                  residual_leak(sol.q, sol.phi, rot, claimed), 1e3 * tol));
    if (other) {
        const int through = std::min(sol.solved_through, solved_through(std::min(2 * other->N + 1, other->max_degree() + 1)));
        r.checks.push_back(compare_solutions(other->q, other->phi, sol.q, sol.phi, through, 1e-20));
    }
    return r;
}

} // namespace linbill
