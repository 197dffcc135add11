// linbill: compute, cross-check and analyse locally linearizable billiard series.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "linbill/analysis.hpp"
#include "linbill/errors.hpp"
#include "linbill/io.hpp"

namespace fs = std::filesystem;
using namespace linbill;

namespace {

enum Exit { ok = 0, verification_failure = 1, solver_failure = 2, precision_collapse = 3 };

struct Options {
    std::string theta = "golden";
    int precision_bits = 256;
    int max_degree = 0; // 0: derived from the schedule
    std::string schedule = "doubling";
    double rho0 = 0.05;
    double gamma = 0.9;
    double c = 0.5;
    double tau = 1.2;
    std::string out_dir = "linbill-out";
    std::string seed_state;
    std::string config;

    int steps = 4;
    int target_order = 15;
    int max_odd_degree = 21;
    std::string gauge_state;
    std::string compare;
    double alpha = 1.3;
    int count = 256;
    long k_max = 1000;
};

// Values from a JSON config; command-line flags parsed afterwards override them.
void apply_config(const std::string& path, Options& o)
{
    std::ifstream in(path);
    if (!in) {
        throw FormatError("cannot read config " + path);
    }
    const nlohmann::json j = nlohmann::json::parse(in);
    auto take = [&](const char* key, auto& field) {
        if (j.contains(key)) {
            field = j.at(key).get<std::decay_t<decltype(field)>>();
        }
    };
    take("theta", o.theta);
    take("precision_bits", o.precision_bits);
    take("max_degree", o.max_degree);
    take("schedule", o.schedule);
    take("rho0", o.rho0);
    take("gamma", o.gamma);
    take("c", o.c);
    take("tau", o.tau);
    take("out_dir", o.out_dir);
    take("seed_state", o.seed_state);
    take("steps", o.steps);
    take("target_order", o.target_order);
    take("max_odd_degree", o.max_odd_degree);
    take("gauge_state", o.gauge_state);
    take("compare", o.compare);
    take("alpha", o.alpha);
    take("count", o.count);
    take("k_max", o.k_max);
}

std::optional<std::string> find_config(int argc, char** argv)
{
    for (int i = 1; i < argc; ++i) {
        const std::string a = argv[i];
        if (a == "--config" && i + 1 < argc) {
            return std::string(argv[i + 1]);
        }
        if (a.rfind("--config=", 0) == 0) {
            return a.substr(9);
        }
    }
    return std::nullopt;
}

Real parse_theta(const Options& o)
{
    if (o.theta == "golden") {
        return golden_angle(o.precision_bits);
    }
    return Real::parse(o.theta, o.precision_bits);
}

Rotation rotation_for(const Real& theta, const Options& o, int max_degree)
{
    return make_rotation(theta, o.c, o.tau, power_cap_for_degree(max_degree + 2));
}

ScheduleParams params_from(const Options& o)
{
    ScheduleParams p;
    p.kind = parse_schedule(o.schedule);
    p.rho0 = o.rho0;
    p.gamma0 = o.gamma;
    return p;
}

RunInfo info_from(const Real& theta, const Options& o) { return {theta, o.precision_bits, o.c, o.tau}; }

std::string condition_string(const std::array<bool, 5>& c)
{
    std::string s;
    for (int i = 0; i < 5; ++i) {
        s += static_cast<char>('a' + i);
        s += c[static_cast<std::size_t>(i)] ? '+' : '-';
    }
    return s;
}

void print_step(const StepReport& r)
{
    std::printf("step %2d  M %3d (used %3d)  N %3d  order %3d  |E| %.3e -> %.3e  rho %.3e  cond %s / %s  %.2fs\n",
                r.n, r.M, r.M_used, r.N, r.order_residual, r.residual_norm, r.residual_after_norm, r.rho,
                condition_string(r.conditions).c_str(), condition_string(r.conditions_measured).c_str(), r.seconds);
    std::fflush(stdout);
}

int cmd_compute(Options& o)
{
    IterationState state;
    Real theta(o.precision_bits);
    std::optional<Rotation> rot;
    if (!o.seed_state.empty()) {
        LoadedState loaded = load_state(o.seed_state);
        state = std::move(loaded.state);
        theta = loaded.info.theta;
        o.precision_bits = loaded.info.precision_bits;
        o.c = loaded.info.c > 0.0 ? loaded.info.c : o.c;
        o.tau = loaded.info.tau > 0.0 ? loaded.info.tau : o.tau;
        rot = rotation_for(theta, o, state.max_degree());
    } else {
        theta = parse_theta(o);
        const ScheduleParams params = params_from(o);
        int D = o.max_degree;
        if (params.kind == ScheduleKind::kam) {
            if (!admissible_gamma(params.gamma0)) {
                throw std::invalid_argument("gamma^5 must be below (2/3)^(5/4)");
            }
            if (D == 0) {
                D = std::max(o.target_order, schedule_max_degree(params, (o.target_order - 1) / 2,
                                                                 kam_initial_M(params.rho0, params.gamma0), o.steps));
            }
            rot = rotation_for(theta, o, D);
            state = kam_seed(*rot, o.target_order, D, params);
        } else {
            if (D == 0) {
                D = schedule_max_degree(params, 1, 2, o.steps);
            }
            rot = rotation_for(theta, o, D);
            state = seed_state(*rot, D, params);
        }
    }
    std::printf("theta %s  precision %d  max_degree %d  schedule %s\n", theta.to_string().c_str(),
                o.precision_bits, state.max_degree(), to_string(state.params.kind).c_str());
    const RunInfo info{theta, o.precision_bits, o.c, o.tau};
    for (int s = 0; s < o.steps; ++s) {
        state = run_schedule(state, 1, *rot);
        print_step(state.history.back());
        save_state(o.out_dir, state, info);
    }
    save_state(o.out_dir, state, info);
    std::printf("state written to %s\n", o.out_dir.c_str());
    return ok;
}

int cmd_oracle(Options& o)
{
    const Real theta = parse_theta(o);
    const Rotation rot = rotation_for(theta, o, o.max_odd_degree + 1);
    std::optional<BiSeries> gauge;
    if (!o.gauge_state.empty()) {
        gauge = load_state(o.gauge_state).state.phi;
    }
    const DirectSolution sol = solve_direct(rot, o.max_odd_degree, gauge);
    save_direct(o.out_dir, sol, info_from(theta, o));
    std::printf("solved through degree %d; written to %s\n", sol.solved_through, o.out_dir.c_str());
    return ok;
}

bool is_direct_dump(const fs::path& dir)
{
    std::ifstream in(dir / "ledger.json");
    if (!in) {
        throw FormatError("no ledger.json in " + dir.string());
    }
    return nlohmann::json::parse(in).value("schedule", "") == "direct";
}

int cmd_verify(Options& o)
{
    if (o.seed_state.empty()) {
        throw std::invalid_argument("verify needs --seed-state");
    }
    VerifyReport report;
    if (is_direct_dump(o.seed_state)) {
        const DirectSolution sol = load_direct(o.seed_state);
        const std::string ledger_theta = nlohmann::json::parse(std::ifstream(fs::path(o.seed_state) / "ledger.json"))
                                             .at("theta")
                                             .get<std::string>();
        o.theta = ledger_theta;
        const Rotation rot = rotation_for(parse_theta(o), o, sol.phi.max_degree() + 1);
        std::optional<LoadedState> other;
        if (!o.compare.empty()) {
            other = load_state(o.compare);
        }
        report = verify_suite(sol, rot, other ? &other->state : nullptr);
    } else {
        const LoadedState loaded = load_state(o.seed_state);
        o.precision_bits = loaded.info.precision_bits;
        const Rotation rot = rotation_for(loaded.info.theta, o, loaded.state.max_degree());
        std::optional<DirectSolution> other;
        if (!o.compare.empty()) {
            other = load_direct(o.compare);
        }
        report = verify_suite(loaded.state, rot, other ? &*other : nullptr);
    }
    std::cout << report.json() << '\n';
    return report.pass() ? ok : verification_failure;
}

nlohmann::json fit_json(const GevreyFit& fit, const GevreyBound& bound)
{
    return {{"alpha", fit.alpha},
            {"logC", fit.logC},
            {"window", {fit.window.first, fit.window.second}},
            {"satisfied_alpha", fit.satisfied_alpha ? nlohmann::json(*fit.satisfied_alpha) : nlohmann::json(nullptr)},
            {"bound", {{"alpha", bound.alpha}, {"logC", bound.logC}, {"max_residual", bound.max_residual},
                       {"bounded", bound.bounded}}}};
}

int cmd_gevrey(Options& o)
{
    if (o.seed_state.empty()) {
        throw std::invalid_argument("gevrey needs --seed-state");
    }
    UniSeries q;
    BiSeries phi;
    int through = 0;
    nlohmann::json narrative = nlohmann::json::array();
    if (is_direct_dump(o.seed_state)) {
        DirectSolution sol = load_direct(o.seed_state);
        through = sol.solved_through;
        q = std::move(sol.q);
        phi = std::move(sol.phi);
    } else {
        LoadedState loaded = load_state(o.seed_state);
        through = solved_through(std::min(2 * loaded.state.N + 1, loaded.state.max_degree() + 1));
        for (const StepReport& r : loaded.state.history) {
            narrative.push_back({{"n", r.n},
                                 {"conditions", condition_string(r.conditions)},
                                 {"conditions_measured", condition_string(r.conditions_measured)}});
        }
        q = std::move(loaded.state.q);
        phi = std::move(loaded.state.phi);
    }
    const CoefficientSequence qs = q_sequence(q, through + 1);
    const CoefficientSequence ps = phi_sequence(phi, through);
    const GevreyFit qfit = gevrey_fit(qs, default_alpha_grid());
    const GevreyFit pfit = gevrey_fit(ps, default_alpha_grid());
    fs::create_directories(o.out_dir);
    std::ofstream(fs::path(o.out_dir) / "gevrey_q.csv") << gevrey_csv(qfit);
    std::ofstream(fs::path(o.out_dir) / "gevrey_phi.csv") << gevrey_csv(pfit);
    const nlohmann::json out = {
        {"q", fit_json(qfit, gevrey_bound(qs, o.alpha))},
        {"phi", fit_json(pfit, gevrey_bound(ps, o.alpha))},
        {"conditions", narrative},
        {"note", "finite windows cannot confirm the asymptotic exponent 5/4; alpha is an empirical fit"}};
    std::cout << out.dump(2) << '\n';
    return ok;
}

int cmd_boundary(Options& o)
{
    if (o.seed_state.empty()) {
        throw std::invalid_argument("boundary needs --seed-state");
    }
    const UniSeries q = is_direct_dump(o.seed_state) ? load_direct(o.seed_state).q : load_state(o.seed_state).state.q;
    fs::create_directories(o.out_dir);
    const fs::path path = fs::path(o.out_dir) / "boundary.csv";
    write_boundary_csv(path, boundary_points(q, o.count));
    double min_radius = radius_of_curvature(q, 0.0);
    for (int i = 1; i < o.count; ++i) {
        min_radius = std::min(min_radius, radius_of_curvature(q, 2.0 * M_PI * i / o.count));
    }
    std::printf("%d points written to %s; min radius of curvature %.6g\n", o.count, path.c_str(), min_radius);
    return ok;
}

int cmd_margin(Options& o)
{
    const Real theta = parse_theta(o);
    const Rotation rot = make_rotation(theta, o.c, o.tau, 4);
    const double m = diophantine_margin(rot, o.k_max);
    std::printf("min_{1<=k<=%ld} |lambda^k - 1| k^tau = %.6g (c = %g, tau = %g): %s\n", o.k_max, m, o.c, o.tau,
                m >= o.c ? "holds" : "violated");
    return m >= o.c ? ok : verification_failure;
}

} // namespace

int main(int argc, char** argv)
{
    Options o;
    try {
        if (const auto cfg = find_config(argc, argv)) {
            apply_config(*cfg, o);
        }
    } catch (const std::exception& e) {
        std::cerr << "linbill: " << e.what() << '\n';
        return solver_failure;
    }

    CLI::App app{"Locally linearizable billiard series"};
    app.require_subcommand(1);
    app.fallthrough();
    app.add_option("--config", o.config, "JSON file with default values for any flag");
    app.add_option("--theta", o.theta, "Rotation angle in radians, or 'golden'");
    app.add_option("--precision-bits", o.precision_bits, "Working precision")->check(CLI::Range(64, 1 << 16));
    app.add_option("--max-degree", o.max_degree, "Truncation degree (0: derived from the schedule)");
    app.add_option("--schedule", o.schedule, "doubling or kam")->check(CLI::IsMember({"doubling", "kam"}));
    app.add_option("--rho0", o.rho0, "Initial radius");
    app.add_option("--gamma", o.gamma, "gamma0 = gamma1 = gamma2");
    app.add_option("--c", o.c, "Diophantine constant c");
    app.add_option("--tau", o.tau, "Diophantine exponent tau");
    app.add_option("--out-dir", o.out_dir, "Output directory");
    app.add_option("--seed-state", o.seed_state, "State directory to continue from or analyse");

    CLI::App* compute = app.add_subcommand("compute", "Run a schedule from the seed or a dumped state");
    compute->add_option("--steps", o.steps, "Number of steps")->check(CLI::NonNegativeNumber);
    compute->add_option("--target-order", o.target_order, "Residual order of the kam seed (odd)");

    CLI::App* oracle = app.add_subcommand("oracle", "Direct degree-by-degree solve");
    oracle->add_option("--max-odd-degree", o.max_odd_degree, "Highest odd degree to solve");
    oracle->add_option("--gauge-state", o.gauge_state, "State whose resonant coefficients fix the gauge");

    CLI::App* verify = app.add_subcommand("verify", "Run the invariant suite on --seed-state");
    verify->add_option("--compare", o.compare, "Second dump for the oracle/KAM comparison");

    CLI::App* gevrey = app.add_subcommand("gevrey", "Fit Gevrey growth of the coefficients in --seed-state");
    gevrey->add_option("--alpha", o.alpha, "Exponent of the bound check");

    CLI::App* boundary = app.add_subcommand("boundary", "Dump boundary points of the table in --seed-state");
    boundary->add_option("--count", o.count, "Number of points")->check(CLI::Range(3, 1 << 24));

    CLI::App* margin = app.add_subcommand("margin", "Scan |lambda^k - 1| k^tau against c");
    margin->add_option("--k-max", o.k_max, "Largest k")->check(CLI::PositiveNumber);

    CLI11_PARSE(app, argc, argv);

    try {
        if (compute->parsed()) {
            return cmd_compute(o);
        }
        if (oracle->parsed()) {
            return cmd_oracle(o);
        }
        if (verify->parsed()) {
            return cmd_verify(o);
        }
        if (gevrey->parsed()) {
            return cmd_gevrey(o);
        }
        if (boundary->parsed()) {
            return cmd_boundary(o);
        }
        return cmd_margin(o);
    } catch (const ToleranceCollapse& e) {
        std::cerr << "linbill: precision exhausted: " << e.what() << '\n';
        return precision_collapse;
    } catch (const VerificationError& e) {
        std::cerr << "linbill: verification failed: " << e.what() << '\n';
        return verification_failure;
    } catch (const std::exception& e) {
        std::cerr << "linbill: " << e.what() << '\n';
        return solver_failure;
    }
}
