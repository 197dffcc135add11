#include "linbill/io.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <sstream>
#include <utility>

#include <json.hpp>

#include "linbill/errors.hpp"

namespace linbill {

using nlohmann::json;

namespace {

std::ofstream open_out(const std::filesystem::path& path)
{
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
    return out;
}

std::ifstream open_in(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw FormatError("cannot read " + path.string());
    }
    return in;
}

std::vector<std::string> split(const std::string& line)
{
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string f;
    while (std::getline(ss, f, ',')) {
        fields.push_back(f);
    }
    return fields;
}

int parse_int(const std::string& s, const std::filesystem::path& path)
{
    try {
        std::size_t used = 0;
        const int v = std::stoi(s, &used);
        if (used != s.size() || v < 0) {
            throw std::invalid_argument(s);
        }
        return v;
    } catch (const std::exception&) {
        throw FormatError(path.string() + ": bad index '" + s + "'");
    }
}

// Rows of a CSV after checking the header.
std::vector<std::vector<std::string>> read_rows(const std::filesystem::path& path, const std::string& header,
                                                std::size_t columns)
{
    std::ifstream in = open_in(path);
    std::string line;
    if (!std::getline(in, line) || line != header) {
        throw FormatError(path.string() + ": expected header '" + header + "'");
    }
    std::vector<std::vector<std::string>> rows;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        auto fields = split(line);
        if (fields.size() != columns) {
            throw FormatError(path.string() + ": expected " + std::to_string(columns) + " fields in '" + line + "'");
        }
        rows.push_back(std::move(fields));
    }
    return rows;
}

json number_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

double number_or(const json& j, double fallback) { return j.is_number() ? j.get<double>() : fallback; }

json conditions_json(const std::array<bool, 5>& c)
{
    return {{"a", c[0]}, {"b", c[1]}, {"c", c[2]}, {"d", c[3]}, {"e", c[4]}};
}

std::array<bool, 5> conditions_from(const json& j)
{
    return {j.at("a").get<bool>(), j.at("b").get<bool>(), j.at("c").get<bool>(), j.at("d").get<bool>(),
            j.at("e").get<bool>()};
}

json step_json(const StepReport& r)
{
    return {
        {"n", r.n},
        {"M", r.M},
        {"M_used", r.M_used},
        {"N", r.N},
        {"rho", r.rho},
        {"eps", number_or_null(std::exp(r.log_eps))},
        {"log_eps", number_or_null(r.log_eps)},
        {"residual_norm", r.residual_norm},
        {"residual_after_norm", r.residual_after_norm},
        {"avg_S_defect", r.avg_S_defect},
        {"decomposition_defect", r.decomposition_defect},
        {"conditioning", r.conditioning},
        {"orders",
         {{"dq", r.order_dq},
          {"dphi", r.order_dphi},
          {"residual", r.order_residual},
          {"R1", r.order_R1},
          {"R2", r.order_R2},
          {"R5", r.order_R5}}},
        {"conditions", conditions_json(r.conditions)},
        {"conditions_measured", conditions_json(r.conditions_measured)},
        {"norms",
         {{"q", r.norms.q},
          {"phi", r.norms.phi},
          {"h", r.norms.h},
          {"inv_h", r.norms.inv_h},
          {"kappa_osc", r.norms.kappa_osc},
          {"C1", r.norms.C1}}},
        {"seconds", r.seconds},
    };
}

StepReport step_from(const json& j)
{
    StepReport r;
    r.n = j.at("n").get<int>();
    r.M = j.at("M").get<int>();
    r.M_used = j.value("M_used", r.M);
    r.N = j.at("N").get<int>();
    r.rho = j.at("rho").get<double>();
    r.log_eps = number_or(j.at("log_eps"), -std::numeric_limits<double>::infinity());
    r.residual_norm = j.at("residual_norm").get<double>();
    r.residual_after_norm = j.value("residual_after_norm", 0.0);
    r.avg_S_defect = j.value("avg_S_defect", 0.0);
    r.decomposition_defect = j.value("decomposition_defect", 0.0);
    r.conditioning = j.value("conditioning", 0.0);
    const json& o = j.at("orders");
    r.order_dq = o.at("dq").get<int>();
    r.order_dphi = o.at("dphi").get<int>();
    r.order_residual = o.at("residual").get<int>();
    r.order_R1 = o.value("R1", 0);
    r.order_R2 = o.value("R2", 0);
    r.order_R5 = o.value("R5", 0);
    r.conditions = conditions_from(j.at("conditions"));
    r.conditions_measured = j.contains("conditions_measured") ? conditions_from(j.at("conditions_measured"))
                                                               : r.conditions;
    if (j.contains("norms")) {
        const json& nm = j.at("norms");
        r.norms.q = nm.value("q", 0.0);
        r.norms.phi = nm.value("phi", 0.0);
        r.norms.h = nm.value("h", 0.0);
        r.norms.inv_h = nm.value("inv_h", 0.0);
        r.norms.kappa_osc = nm.value("kappa_osc", 0.0);
        r.norms.C1 = nm.value("C1", 0.0);
    }
    r.seconds = j.value("seconds", 0.0);
    return r;
}

json info_json(const RunInfo& info)
{
    return {{"theta", info.theta.to_string()}, {"precision_bits", info.precision_bits}, {"c", info.c},
            {"tau", info.tau}};
}

json read_json(const std::filesystem::path& path)
{
    std::ifstream in = open_in(path);
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw FormatError(path.string() + ": " + e.what());
    }
}

RunInfo info_from(const json& j)
{
    RunInfo info;
    info.precision_bits = j.at("precision_bits").get<int>();
    info.theta = Real::parse(j.at("theta").get<std::string>(), info.precision_bits);
    info.c = j.value("c", 0.0);
    info.tau = j.value("tau", 0.0);
    return info;
}

} // namespace

void write_csv(const std::filesystem::path& path, const UniSeries& q)
{
    std::ofstream out = open_out(path);
    out << "k,re\n";
    for (int k = 0; k <= q.max_degree(); ++k) {
        out << k << ',' << q.get(k).re().to_string() << '\n';
    }
}

void write_csv(const std::filesystem::path& path, const BiSeries& phi)
{
    std::ofstream out = open_out(path);
    out << "j,k,re,im\n";
    for (int d = 0; d <= phi.max_degree(); ++d) {
        for (int k = 0; k <= d; ++k) {
            const Scalar& c = phi(d - k, k);
            out << d - k << ',' << k << ',' << c.re().to_string() << ',' << c.im().to_string() << '\n';
        }
    }
}

UniSeries read_uni_csv(const std::filesystem::path& path, int precision_bits)
{
    const auto rows = read_rows(path, "k,re", 2);
    int D = 0;
    for (const auto& r : rows) {
        D = std::max(D, parse_int(r[0], path));
    }
    UniSeries q(D, precision_bits);
    for (const auto& r : rows) {
        q[parse_int(r[0], path)] = Scalar(Real::parse(r[1], precision_bits));
    }
    return q;
}

BiSeries read_bi_csv(const std::filesystem::path& path, int precision_bits)
{
    const auto rows = read_rows(path, "j,k,re,im", 4);
    int D = 0;
    for (const auto& r : rows) {
        D = std::max(D, parse_int(r[0], path) + parse_int(r[1], path));
    }
    BiSeries phi(D, precision_bits);
    for (const auto& r : rows) {
        phi(parse_int(r[0], path), parse_int(r[1], path)) =
            Scalar(Real::parse(r[2], precision_bits), Real::parse(r[3], precision_bits));
    }
    return phi;
}

std::string ledger_json(const IterationState& state, const RunInfo& info)
{
    json j = info_json(info);
    j["schedule"] = to_string(state.params.kind);
    j["params"] = {{"rho0", state.params.rho0},
                   {"gamma0", state.params.gamma0},
                   {"C4", state.params.C4},
                   {"measure_conditioning", state.params.measure_conditioning}};
    j["state"] = {{"n", state.n},         {"M", state.M},
                  {"N", state.N},         {"rho", state.rho},
                  {"log_eps", number_or_null(state.log_eps)},
                  {"max_degree", state.max_degree()}};
    json steps = json::array();
    for (const StepReport& r : state.history) {
        steps.push_back(step_json(r));
    }
    j["steps"] = std::move(steps);
    return j.dump(2);
}

void save_state(const std::filesystem::path& dir, const IterationState& state, const RunInfo& info)
{
    std::filesystem::create_directories(dir);
    write_csv(dir / "q.csv", state.q);
    write_csv(dir / "phi.csv", state.phi);
    open_out(dir / "ledger.json") << ledger_json(state, info) << '\n';
}

LoadedState load_state(const std::filesystem::path& dir)
{
    const json j = read_json(dir / "ledger.json");
    LoadedState out;
    try {
        out.info = info_from(j);
        IterationState& s = out.state;
        s.params.kind = parse_schedule(j.at("schedule").get<std::string>());
        if (j.contains("params")) {
            const json& p = j.at("params");
            s.params.rho0 = p.value("rho0", s.params.rho0);
            s.params.gamma0 = p.value("gamma0", s.params.gamma0);
            s.params.C4 = p.value("C4", s.params.C4);
            s.params.measure_conditioning = p.value("measure_conditioning", true);
        }
        const json& st = j.at("state");
        s.n = st.at("n").get<int>();
        s.M = st.at("M").get<int>();
        s.N = st.at("N").get<int>();
        s.rho = st.at("rho").get<double>();
        s.log_eps = number_or(st.at("log_eps"), -std::numeric_limits<double>::infinity());
        for (const json& r : j.at("steps")) {
            s.history.push_back(step_from(r));
        }
        s.q = read_uni_csv(dir / "q.csv", out.info.precision_bits);
        s.phi = read_bi_csv(dir / "phi.csv", out.info.precision_bits);
        const int D = st.value("max_degree", s.phi.max_degree());
        s.phi = resized(s.phi, D);
        s.q = resized(s.q, D);
    } catch (const json::exception& e) {
        throw FormatError((dir / "ledger.json").string() + ": " + e.what());
    } catch (const std::invalid_argument& e) {
        throw FormatError((dir / "ledger.json").string() + ": " + e.what());
    }
    return out;
}

void save_direct(const std::filesystem::path& dir, const DirectSolution& sol, const RunInfo& info)
{
    std::filesystem::create_directories(dir);
    write_csv(dir / "q.csv", sol.q);
    write_csv(dir / "phi.csv", sol.phi);
    json j = info_json(info);
    j["schedule"] = "direct";
    j["solved_through"] = sol.solved_through;
    j["steps"] = json::array();
    open_out(dir / "ledger.json") << j.dump(2) << '\n';
}

DirectSolution load_direct(const std::filesystem::path& dir)
{
    const json j = read_json(dir / "ledger.json");
    try {
        const RunInfo info = info_from(j);
        if (j.at("schedule").get<std::string>() != "direct") {
            throw FormatError((dir / "ledger.json").string() + ": not a direct solution");
        }
        return {read_uni_csv(dir / "q.csv", info.precision_bits), read_bi_csv(dir / "phi.csv", info.precision_bits),
                j.at("solved_through").get<int>()};
    } catch (const json::exception& e) {
        throw FormatError((dir / "ledger.json").string() + ": " + e.what());
    }
}

void write_boundary_csv(const std::filesystem::path& path, const std::vector<BoundaryPoint>& points)
{
    std::ofstream out = open_out(path);
    out << "psi,x,y\n" << std::setprecision(17);
    for (const BoundaryPoint& p : points) {
        out << p.psi << ',' << p.x << ',' << p.y << '\n';
    }
}

} // namespace linbill
