#include "linbill/driver.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "linbill/operators.hpp"

namespace linbill {

std::string to_string(ScheduleKind kind) { return kind == ScheduleKind::doubling ? "doubling" : "kam"; }

ScheduleKind parse_schedule(const std::string& name)
{
    if (name == "doubling") {
        return ScheduleKind::doubling;
    }
    if (name == "kam") {
        return ScheduleKind::kam;
    }
    throw std::invalid_argument("unknown schedule '" + name + "' (expected doubling or kam)");
}

bool admissible_gamma(double gamma0)
{
    return gamma0 > 0.0 && gamma0 < 1.0 && std::pow(gamma0, 5.0) < std::pow(2.0 / 3.0, 1.25);
}

int kam_initial_M(double rho0, double gamma1)
{
    if (!(rho0 > 0.0 && rho0 < 1.0) || !(gamma1 > 0.0 && gamma1 < 1.0)) {
        throw std::invalid_argument("kam_initial_M: rho0 and gamma1 must lie in (0, 1)");
    }
    return static_cast<int>(std::floor(std::log(1.0 / rho0) / std::log(1.0 / gamma1))) + 1;
}

int effective_M(int M, int max_degree) { return std::min(M, max_degree / 2); }

namespace {

double safe_log(double x) { return x > 0.0 ? std::log(x) : -std::numeric_limits<double>::infinity(); }

double norm(const BiSeries& s, double rho, int derivatives = 0) { return weighted_norm(s, rho, derivatives).to_double(); }

// Largest coefficient of s below total degree `below`.
double low_degree_sup(const BiSeries& s, int below)
{
    double worst = 0.0;
    for (int d = 0; d < std::min(below, s.max_degree() + 1); ++d) {
        worst = std::max(worst, degree_sup(s, d));
    }
    return worst;
}

std::array<bool, 5> evaluate_conditions(double C4, int M, double rho, double log_eps, double gamma, double C1,
                                        double mu, double s0)
{
    const double rho2 = rho * rho;
    std::array<bool, 5> c{};
    c[0] = C4 * std::pow(static_cast<double>(M), 2.5) * rho2 < 1.0;
    c[1] = 2.0 * M * std::log(gamma) < log_eps;
    c[2] = -M * std::log1p(C1 * rho2) > std::log(gamma);
    c[3] = C4 * mu * rho < gamma * std::fabs(s0) && 1.0 + C1 * rho2 < 1.0 / gamma;
    c[4] = log_eps < 3.0 * std::log((1.0 - gamma) * gamma * gamma * rho);
    return c;
}

} // namespace

IterationState seed_state(const Rotation& rot, int max_degree, const ScheduleParams& params)
{
    IterationState s;
    s.q = seed_q(rot, max_degree);
    s.phi = seed_phi(max_degree, rot.precision());
    s.n = 0;
    s.N = 1;
    s.M = 2;
    s.rho = params.rho0;
    s.params = params;
    s.geometry = std::make_shared<const PhiGeometry>(s.phi, rot);
    s.log_eps = safe_log(norm(residual(s.q, *s.geometry, rot), params.rho0));
    return s;
}

IterationState iterate_once(const IterationState& state, int M, const Rotation& rot)
{
    const auto start = std::chrono::steady_clock::now();
    const int D = state.max_degree();
    const int prec = state.precision();
    const double tol = zero_tolerance(prec);
    const int M_used = effective_M(M, D);
    if (M < 2 || M_used < 2) {
        throw std::invalid_argument("iterate_once: M must be at least 2 and fit the truncation (M = " +
                                    std::to_string(M) + ", max_degree = " + std::to_string(D) + ")");
    }

    std::shared_ptr<const PhiGeometry> geom = state.geometry;
    if (!geom) {
        geom = std::make_shared<const PhiGeometry>(state.phi, rot);
    }

    StepReport rep;
    rep.n = state.n;
    rep.M = M;
    rep.M_used = M_used;
    rep.N = state.N;
    rep.rho = state.rho;
    rep.log_eps = state.log_eps;

    const DeltaQ dq = solve_delta_q(state.q, *geom, rot, M_used);
    const UniSeries q_star = state.q + resized(dq.dq, state.q.max_degree());
    const InnerSolution inner = solve_inner(q_star, *geom, rot);

    const int K = std::min(M_used, 2 * state.N);
    const int expected = 2 * K + 1;
    const double leak = low_degree_sup(inner.residual_after, expected);
    if (leak > 1e3 * tol) {
        throw ToleranceCollapse("iterate_once: residual coefficient " + std::to_string(leak) + " below degree " +
                                std::to_string(expected) + " exceeds 1e3 zero_tolerance");
    }

    IterationState next;
    next.q = q_star;
    next.phi = state.phi + inner.delta_phi;
    next.n = state.n + 1;
    next.M = state.M;
    next.N = K;
    next.rho = state.rho;
    next.log_eps = state.log_eps;
    next.params = state.params;
    next.history = state.history;
    next.geometry = inner.next_geometry;

    const double rho = state.rho;
    rep.residual_norm = norm(residual(state.q, *geom, rot), rho);
    rep.residual_after_norm = norm(inner.residual_after, rho);
    rep.avg_S_defect = dq.defect;
    rep.decomposition_defect = max_abs(truncate(inner.Pi_psi_over_h - inner.R.R1 - inner.R.R2, D - 1));
    rep.order_dq = order(dq.dq, tol);
    rep.order_dphi = order(inner.delta_phi, tol);
    rep.order_residual = order(inner.residual_after, tol);
    rep.order_R1 = order(inner.R.R1, tol);
    rep.order_R2 = order(inner.R.R2, tol);
    rep.order_R5 = order(inner.R.R5, tol);

    // Measured stand-ins for the constants of the iterative-step estimates.
    const BiSeries phi_z = partial_padded(state.phi, Variable::z);
    const BiSeries one = BiSeries::constant(Scalar(Real(1L, prec)), D);
    const double rho2 = rho * rho;
    rep.norms.C1 = std::max({norm(phi_z - one, rho) / rho2, norm(phi_z, rho), norm(invert_unit(phi_z), rho)});
    const double mu = rot.mu().to_double();
    rep.norms.q = weighted_norm(q_star, mu * rho * (1.0 + rep.norms.C1 * rho2), 3).to_double();
    rep.norms.phi = norm(state.phi, rho, 3);
    rep.norms.h = norm(inner.h, rho);
    rep.norms.inv_h = norm(invert_unit(inner.h), rho);
    rep.norms.kappa_osc = norm(inner.kappa - diag_average(inner.kappa), rho);

    const double gamma = state.params.gamma0;
    const double s0 = 0.25 * (1.0 + 2.0 * state.q.get(2).re().to_double());
    rep.conditions = evaluate_conditions(state.params.C4, M_used, rho, state.log_eps, gamma, rep.norms.C1, mu, s0);
    if (state.params.measure_conditioning) {
        const double rho1 = rho / std::pow(1.0 + rep.norms.C1 * rho2, M_used);
        rep.conditioning = conditioning_report(dq.system, rho1, mu * rho1);
        const double C4_measured = rep.conditioning / std::sqrt(static_cast<double>(M_used));
        rep.conditions_measured =
            evaluate_conditions(C4_measured, M_used, rho, state.log_eps, gamma, rep.norms.C1, mu, s0);
    } else {
        rep.conditions_measured = rep.conditions;
    }

    rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    next.history.push_back(rep);
    return next;
}

IterationState run_schedule(const IterationState& seed, int steps, const Rotation& rot)
{
    const ScheduleParams& params = seed.params;
    if (params.kind == ScheduleKind::kam && !admissible_gamma(params.gamma0)) {
        throw std::invalid_argument("run_schedule: gamma0^5 must be below (2/3)^(5/4)");
    }
    const double gamma_bar = std::pow(params.gamma0, 5.0);
    IterationState state = seed;
    for (int s = 0; s < steps; ++s) {
        state = iterate_once(state, state.M, rot);
        if (params.kind == ScheduleKind::doubling) {
            state.M *= 2;
            state.log_eps = safe_log(state.history.back().residual_after_norm);
        } else {
            state.M = 3 * state.M / 2 + 1;
            state.rho *= gamma_bar;
            state.log_eps *= 1.5;
        }
    }
    return state;
}

IterationState kam_seed(const Rotation& rot, int target_order, int max_degree, const ScheduleParams& params)
{
    if (target_order < 3 || target_order % 2 == 0) {
        throw std::invalid_argument("kam_seed: target order must be odd and at least 3");
    }
    if (max_degree < target_order) {
        throw std::invalid_argument("kam_seed: max_degree below the target order");
    }
    ScheduleParams doubling = params;
    doubling.kind = ScheduleKind::doubling;
    doubling.measure_conditioning = false;
    IterationState state = seed_state(rot, max_degree, doubling);
    while (2 * state.N + 1 < target_order) {
        if (effective_M(state.M, max_degree) <= state.N) {
            throw std::invalid_argument("kam_seed: truncation too small to reach the target order");
        }
        state = run_schedule(state, 1, rot);
    }

    IterationState out;
    out.q = resized(truncate(state.q, target_order - 1), max_degree);
    out.phi = truncate(state.phi, target_order - 1);
    const double tol = zero_tolerance(rot.precision());
    const PhiGeometry geom(out.phi, rot);
    const BiSeries e = residual(out.q, geom, rot);
    if (order(e, tol) < target_order) {
        throw VerificationFailed("kam_seed: truncated seed has residual order " + std::to_string(order(e, tol)));
    }
    out.n = 0;
    out.N = (target_order - 1) / 2;
    out.params = params;
    out.params.kind = ScheduleKind::kam;
    out.M = kam_initial_M(params.rho0, params.gamma0);
    out.rho = params.rho0;
    out.log_eps = safe_log(weighted_norm(e, params.rho0).to_double());
    out.geometry = std::make_shared<const PhiGeometry>(geom);
    return out;
}

int schedule_max_degree(const ScheduleParams& params, int N0, int M0, int steps)
{
    int N = N0;
    int M = M0;
    for (int s = 0; s < steps; ++s) {
        N = std::min(2 * N, M);
        M = params.kind == ScheduleKind::doubling ? 2 * M : 3 * M / 2 + 1;
    }
    return 2 * N + 3;
}

} // namespace linbill
