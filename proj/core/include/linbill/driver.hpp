#pragma once

// KAM orchestration: one iterative step, the doubling and 3/2 schedules, and
// the radius / epsilon ledger with the (a)-(e) diagnostics.

#include <array>
#include <memory>
#include <string>
#include <vector>

#include "linbill/inner.hpp"
#include "linbill/outer.hpp"

namespace linbill {

enum class ScheduleKind { doubling, kam };

std::string to_string(ScheduleKind kind);
ScheduleKind parse_schedule(const std::string& name);

struct ScheduleParams {
    ScheduleKind kind = ScheduleKind::doubling;
    double rho0 = 0.05;
    /// gamma0 = gamma1 = gamma2; the 3/2 schedule uses gamma_bar = gamma0^5.
    double gamma0 = 0.9;
    /// Constant C4 of condition (a) in its nominal form.
    double C4 = 1.0;
    /// Evaluate the conditioning variant of condition (a) (one extra matrix inverse per step).
    bool measure_conditioning = true;
};

/// gamma0^5 < (2/3)^{5/4}.
bool admissible_gamma(double gamma0);

/// floor(log(1/rho0) / log(1/gamma1)) + 1.
int kam_initial_M(double rho0, double gamma1);

struct StepNorms {
    double q = 0.0;         // ||q*||_{mu rho (1 + C1 rho^2), 3}
    double phi = 0.0;       // ||phi||_{rho, 3}
    double h = 0.0;         // ||h||_rho
    double inv_h = 0.0;     // ||1/h||_rho
    double kappa_osc = 0.0; // ||kappa - [kappa]||_rho
    double C1 = 0.0;        // max(||phi_z - 1||_rho / rho^2, ||phi_z||_rho, ||1/phi_z||_rho)
};

struct StepReport {
    int n = 0;
    int M = 0;              // requested M_n
    int M_used = 0;         // after the truncation cap
    int N = 0;              // residual order before the step is >= 2N + 1
    double rho = 0.0;
    double log_eps = 0.0;   // scheduled log(eps_n)
    double residual_norm = 0.0;       // ||E(q^n, phi^n)||_{rho_n}
    double residual_after_norm = 0.0; // ||E(q^{n+1}, phi^{n+1})||_{rho_n}
    double avg_S_defect = 0.0;        // max |Lambda_{2M}([S_{q*}] - 1)|
    double decomposition_defect = 0.0; // max |Pi(psi/h) - R1 - R2| through max_degree - 1
    int order_dq = 0;
    int order_dphi = 0;
    int order_residual = 0;
    int order_R1 = 0;
    int order_R2 = 0;
    int order_R5 = 0;
    double conditioning = 0.0;        // ||Gamma T^{-1} Gamma^{-1}||_1, 0 if not measured
    std::array<bool, 5> conditions{};          // (a)-(e) with C4
    std::array<bool, 5> conditions_measured{}; // (a) with the measured conditioning constant
    StepNorms norms;
    double seconds = 0.0;
};

struct IterationState {
    UniSeries q;
    BiSeries phi;
    int n = 0;
    int M = 2;
    int N = 1;
    double rho = 0.05;
    double log_eps = 0.0;
    ScheduleParams params;
    std::vector<StepReport> history;
    /// Geometry of phi, reused by the next step when present.
    std::shared_ptr<const PhiGeometry> geometry;

    int max_degree() const { return phi.max_degree(); }
    int precision() const { return phi.precision(); }
};

/// Seed (1 + q2 t^2, z + zbar) with N = 1, M = 2 and eps measured at rho0.
IterationState seed_state(const Rotation& rot, int max_degree, const ScheduleParams& params = {});

/// Largest M usable at this truncation: floor(max_degree / 2).
int effective_M(int M, int max_degree);

/// One iterative step with the given M.  Throws ToleranceCollapse if a
/// coefficient of E below the expected order exceeds 1e3 zero_tolerance.
IterationState iterate_once(const IterationState& state, int M, const Rotation& rot);

/// Runs `steps` steps of the schedule stored in seed.params.
IterationState run_schedule(const IterationState& seed, int steps, const Rotation& rot);

/// Residual order >= target_order (odd, >= 3) by doubling, then q and phi
/// truncated to degree target_order - 1; N = (target_order - 1) / 2 and
/// the 3/2-schedule M_0 from params.
IterationState kam_seed(const Rotation& rot, int target_order, int max_degree, const ScheduleParams& params = {});

/// max_degree 2 N_final + 3 for the given schedule and step count.
int schedule_max_degree(const ScheduleParams& params, int N0, int M0, int steps);

} // namespace linbill
