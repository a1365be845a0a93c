#include "dsm/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "dsm/csv.hpp"
#include "dsm/flow.hpp"
#include "dsm/path.hpp"
#include "dsm/problem.hpp"
#include "dsm/random.hpp"
#include "dsm/riccati.hpp"
#include "dsm/schedule.hpp"
#include "dsm/stopping.hpp"
#include "dsm/version.hpp"

namespace dsm::harness {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

constexpr int kSchemaVersion = 1;

Vector vector_from_json(const json& j, const char* what) {
    if (!j.is_array())
        throw ConfigError(std::string(what) + " must be an array of reals");
    std::vector<double> entries;
    entries.reserve(j.size());
    for (const auto& e : j) {
        if (!e.is_number())
            throw ConfigError(std::string(what) + " must contain only reals");
        entries.push_back(e.get<double>());
    }
    return Vector(std::move(entries));
}

/// Smooth bump exp(-(s-1/2)^2 / (2 * 0.15^2)) on the uniform grid.
Vector bump_profile(std::size_t n) {
    Vector y(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double s =
            n > 1 ? static_cast<double>(i) / static_cast<double>(n - 1) : 0.5;
        const double d = (s - 0.5) / 0.15;
        y[i] = std::exp(-0.5 * d * d);
    }
    return y;
}

struct BuiltProblem {
    OperatorProblem op;
    std::optional<LinearProblem> lin;
};

Vector resolve_profile(const json& spec, std::size_t n) {
    if (spec.contains("y")) return vector_from_json(spec.at("y"), "problem.y");
    const std::string profile = spec.value("profile", "bump");
    if (profile == "bump") return bump_profile(n);
    if (profile == "constant") return Vector(n, 1.0);
    throw ConfigError("unknown profile '" + profile + "'");
}

BuiltProblem build_problem(const json& spec) {
    if (!spec.contains("name"))
        throw ConfigError("problem.name is required");
    const std::string name = spec.at("name").get<std::string>();
    if (name == "diagonal") {
        if (!spec.contains("singular_values"))
            throw ConfigError("diagonal problem needs singular_values");
        const Vector sv =
            vector_from_json(spec.at("singular_values"), "singular_values");
        const Vector y = resolve_profile(spec, sv.dim());
        LinearProblem lin = make_diagonal_problem(sv.entries(), y);
        return BuiltProblem{lin.as_operator(), std::move(lin)};
    }
    if (name == "integral") {
        const std::size_t n = spec.value("n", 32);
        const double width = spec.value("kernel_width", 0.1);
        const Vector y = resolve_profile(spec, n);
        LinearProblem lin = make_integral_problem(n, width, y);
        return BuiltProblem{lin.as_operator(), std::move(lin)};
    }
    if (name == "cubic") {
        const std::size_t n = spec.value("n", 10);
        const double alpha = spec.value("alpha", 1.0);
        if (spec.contains("f")) {
            return BuiltProblem{
                make_cubic_monotone_problem(
                    n, alpha, vector_from_json(spec.at("f"), "problem.f")),
                std::nullopt};
        }
        const Vector y = resolve_profile(spec, n);
        return BuiltProblem{make_cubic_problem_with_solution(n, alpha, y),
                            std::nullopt};
    }
    throw ConfigError("unknown problem '" + name + "'");
}

struct ResolvedSchedule {
    EpsilonSchedule schedule;
    bool derived = false;
    double m = 0.0;  // M2 bound actually used for conditions/envelope
    double r = 0.0;
    double u0_norm = 0.0;
    double y_norm_bound = 0.0;
    ConditionReport conditions;
};

ResolvedSchedule resolve_schedule(const json& cfg, const BuiltProblem& built,
                                  const Vector& u0) {
    if (!cfg.contains("schedule"))
        throw ConfigError("config needs a schedule section");
    const json& sj = cfg.at("schedule");
    const std::string type = sj.value("type", "derived");

    const double u0_norm = norm(u0);
    double y_norm_bound;
    if (sj.contains("y_norm_bound")) {
        y_norm_bound = sj.at("y_norm_bound").get<double>();
    } else if (built.op.known_solution()) {
        y_norm_bound = norm(*built.op.known_solution());
    } else {
        throw ConfigError(
            "schedule.y_norm_bound is required when the problem has no "
            "known solution");
    }
    const double r = y_norm_bound + u0_norm;
    const double reach = u0_norm + 3.0 * r;
    const double m2 = built.op.bounds(reach).m2;

    ResolvedSchedule out{EpsilonSchedule(1.0, 1.0, 0.5), false, 0.0,
                         0.0,                            0.0,   0.0,
                         ConditionReport{}};
    out.u0_norm = u0_norm;
    out.y_norm_bound = y_norm_bound;
    out.r = r;
    out.m = m2;

    if (type == "explicit") {
        out.schedule = EpsilonSchedule(sj.at("c1").get<double>(),
                                       sj.at("c0").get<double>(),
                                       sj.at("b").get<double>());
        out.derived = false;
    } else if (type == "derived") {
        const double b = sj.value("b", 0.5);
        // Linear problems have M2 = 0; the schedule then borrows a
        // configured floor so eps(0) = 4 * m_floor * r stays meaningful.
        const double m_for_schedule =
            m2 > 0.0 ? m2 : sj.value("m_floor", 1.0);
        out.schedule =
            derive_schedule(m_for_schedule, r, b, u0_norm, y_norm_bound);
        out.derived = true;
    } else {
        throw ConfigError("schedule.type must be 'explicit' or 'derived'");
    }
    out.conditions = validate_conditions(out.schedule, m2, r, y_norm_bound);
    return out;
}

FlowConfig resolve_flow(const json& cfg, const ResolvedSchedule& rs) {
    FlowConfig fc;
    if (cfg.contains("flow")) {
        const json& fj = cfg.at("flow");
        fc.t_end = fj.value("t_end", 0.0);
        fc.target_eps_factor = fj.value("target_eps_factor", 1e-6);
        fc.rel_tol = fj.value("rel_tol", 1e-8);
        fc.abs_tol = fj.value("abs_tol", 1e-10);
        fc.max_steps = fj.value("max_steps", static_cast<long>(50'000'000));
        fc.record_stride = fj.value("record_stride", static_cast<long>(10));
        fc.path_diagnostics = fj.value("path_diagnostics", true);
    }
    fc.confinement_radius = 3.0 * rs.r;
    fc.envelope_m = rs.m;
    return fc;
}

json condition_json(const ConditionReport& report) {
    auto entry = [](const ConditionEntry& e) {
        return json{{"name", e.name},
                    {"value", e.value},
                    {"bound", e.bound},
                    {"pass", e.pass}};
    };
    return json{{"decay", entry(report.decay)},
                {"damping", entry(report.damping)},
                {"initial_gap", entry(report.initial_gap)},
                {"vacuous", report.vacuous},
                {"pass", report.pass}};
}

std::string timestamp_utc() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t tt = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::tm tm_utc{};
    gmtime_r(&tt, &tm_utc);
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
    return buf;
}

void print_header(std::ostream& os, const json& cfg,
                  const ResolvedSchedule& rs) {
    os << "problem: " << cfg.at("problem").value("name", "?") << "\n";
    os << "schedule: eps(t) = " << rs.schedule.c1() << " * ("
       << rs.schedule.c0() << " + t)^-" << rs.schedule.b()
       << ", eps(0) = " << rs.schedule.eps(0.0)
       << (rs.derived ? " (derived)" : " (explicit)") << "\n";
    auto line = [&os](const ConditionEntry& e, const char* rel) {
        os << "  " << e.name << ": " << e.value << ' ' << rel << ' '
           << e.bound << (e.pass ? "  PASS" : "  FAIL") << "\n";
    };
    os << "conditions" << (rs.conditions.vacuous ? " (vacuous, M2 = 0):" : ":")
       << "\n";
    line(rs.conditions.decay, "<=");
    line(rs.conditions.damping, "<=");
    line(rs.conditions.initial_gap, "<");
}

void write_trajectory_csv(const std::string& file, const Trajectory& traj,
                          const ResolvedSchedule& rs, bool linear,
                          bool write_states) {
    std::vector<std::string> header = {"t",        "eps", "residual",
                                       "g",        "v",   "envelope",
                                       "dist_from_u0"};
    const std::size_t dim =
        traj.states.empty() ? 0 : traj.states.front().dim();
    if (write_states)
        for (std::size_t i = 0; i < dim; ++i)
            header.push_back("u" + std::to_string(i));
    CsvWriter csv(file, header);

    // For linear problems the quadratic term vanishes and the bound
    // becomes the explicit decay-plus-driving envelope seeded at g(0).
    std::optional<double> g0;
    if (linear && !traj.points.empty() && traj.points.front().g)
        g0 = *traj.points.front().g;

    for (std::size_t i = 0; i < traj.points.size(); ++i) {
        const TrajectoryPoint& p = traj.points[i];
        std::vector<std::optional<double>> row = {
            p.t, p.eps, p.residual_norm, p.g, p.v, p.envelope,
            p.dist_from_u0};
        if (linear && g0)
            row[5] = linear_envelope(rs.schedule, rs.y_norm_bound, *g0, p.t);
        if (write_states)
            for (std::size_t k = 0; k < dim; ++k)
                row.emplace_back(traj.states[i][k]);
        csv.write_row(row);
    }
}

struct RiccatiVerifySummary {
    int count = 0;
    double worst_rel_err = 0.0;
    bool pass = true;
};

RiccatiVerifySummary run_riccati_verify(const json& cfg, std::uint64_t seed,
                                        const std::string& out_dir) {
    int count = 20, samples = 50;
    double horizon = 10.0, tol = 1e-9;
    if (cfg.contains("riccati")) {
        const json& rj = cfg.at("riccati");
        count = rj.value("count", count);
        samples = rj.value("samples", samples);
        horizon = rj.value("horizon", horizon);
        tol = rj.value("tol", tol);
    }
    CsvWriter csv(out_dir + "/riccati.csv",
                  {"spec", "t", "g_numeric", "g_closed_form", "rel_err",
                   "envelope", "one_over_mu"});
    RiccatiVerifySummary summary;
    summary.count = count;
    std::mt19937_64 rng = make_rng(seed);
    for (int s = 0; s < count; ++s) {
        const RiccatiSpec spec = random_majorant_spec(rng);
        const double t_end = spec.t0 + horizon;
        const auto numeric = integrate_majorant(spec, t_end, tol);
        for (int k = 0; k < samples; ++k) {
            const std::size_t idx =
                numeric.size() <= 1
                    ? 0
                    : static_cast<std::size_t>(k) * (numeric.size() - 1) /
                          static_cast<std::size_t>(samples - 1);
            const MajorantSample& ms = numeric[idx];
            const double gamma_integral = spec.gamma(0.0) * (ms.t - spec.t0);
            const double closed =
                riccati_closed_form(spec, ms.t, 1e-12) *
                std::exp(-gamma_integral);
            const double rel =
                std::fabs(ms.g - closed) / std::fmax(std::fabs(closed), 1e-30);
            summary.worst_rel_err = std::fmax(summary.worst_rel_err, rel);
            if (rel > 10.0 * tol) summary.pass = false;
            csv.write_row(std::vector<std::optional<double>>{
                static_cast<double>(s), ms.t, ms.g, closed, rel,
                envelope(spec, ms.t, 1e-12), 1.0 / spec.mu(ms.t)});
        }
    }
    return summary;
}

std::string resolve_output_dir(const RunOptions& options, const json& cfg) {
    if (!options.output_dir.empty()) return options.output_dir;
    if (cfg.contains("output_dir"))
        return cfg.at("output_dir").get<std::string>();
    if (const char* env = std::getenv("DSM_OUTPUT_DIR"); env && *env)
        return env;
    return ".";
}

std::vector<double> path_times(const json& cfg, const EpsilonSchedule& s) {
    int num_points = 40;
    double eps_min_factor = 1e-5;
    std::vector<double> eps_targets;
    if (cfg.contains("path")) {
        const json& pj = cfg.at("path");
        num_points = pj.value("num_points", num_points);
        eps_min_factor = pj.value("eps_min_factor", eps_min_factor);
        if (pj.contains("eps_targets"))
            for (const auto& e : pj.at("eps_targets"))
                eps_targets.push_back(e.get<double>());
    }
    if (num_points < 2)
        throw ConfigError("path.num_points must be >= 2");
    std::vector<double> times;
    if (!eps_targets.empty()) {
        for (double eps : eps_targets)
            times.push_back(s.time_for_eps_factor(eps / s.eps(0.0)));
    } else {
        // log-spaced eps from eps(0) down to eps_min_factor * eps(0)
        for (int i = 0; i < num_points; ++i) {
            const double x =
                static_cast<double>(i) / static_cast<double>(num_points - 1);
            times.push_back(s.time_for_eps_factor(
                std::pow(eps_min_factor, x)));
        }
    }
    std::sort(times.begin(), times.end());
    return times;
}

}  // namespace

int run(const RunOptions& options) {
    json cfg;
    {
        std::ifstream in(options.config_path);
        if (!in)
            throw ConfigError("cannot open config file '" +
                              options.config_path + "'");
        try {
            in >> cfg;
        } catch (const json::exception& e) {
            throw ConfigError("config parse error: " + std::string(e.what()));
        }
    }
    try {
        if (cfg.value("schema_version", kSchemaVersion) != kSchemaVersion)
            throw ConfigError("unsupported schema_version");
        if (!cfg.contains("experiment"))
            throw ConfigError("config needs an 'experiment' field");
        const std::string experiment = cfg.at("experiment").get<std::string>();
        const std::uint64_t seed =
            options.seed ? *options.seed : cfg.value("seed", 0ULL);

        const std::string out_dir = resolve_output_dir(options, cfg);
        std::error_code ec;
        fs::create_directories(out_dir, ec);
        if (ec) throw IoError("cannot create output dir '" + out_dir + "'");

        json manifest;
        manifest["schema_version"] = kSchemaVersion;
        manifest["library_version"] = kVersion;
        manifest["generated_at"] = timestamp_utc();
        manifest["experiment"] = experiment;
        manifest["seed"] = seed;
        manifest["config"] = cfg;
        json outputs = json::array();

        if (experiment == "riccati-verify") {
            const RiccatiVerifySummary summary =
                run_riccati_verify(cfg, seed, out_dir);
            outputs.push_back("riccati.csv");
            manifest["summary"] = {{"specs", summary.count},
                                   {"worst_rel_err", summary.worst_rel_err},
                                   {"pass", summary.pass}};
            if (!options.quiet)
                std::cout << "riccati-verify: " << summary.count
                          << " specs, worst rel err "
                          << format_full(summary.worst_rel_err)
                          << (summary.pass ? "  PASS" : "  FAIL") << "\n";
            manifest["outputs"] = outputs;
            std::ofstream mf(out_dir + "/manifest.json");
            mf << manifest.dump(2) << "\n";
            if (!summary.pass)
                throw Error("verify-failed",
                            "riccati-verify: numeric/closed-form mismatch");
            return 0;
        }

        if (!cfg.contains("problem"))
            throw ConfigError("config needs a problem section");
        BuiltProblem built = build_problem(cfg.at("problem"));
        Vector u0(built.op.dim());
        if (cfg.contains("u0"))
            u0 = vector_from_json(cfg.at("u0"), "u0");
        if (u0.dim() != built.op.dim())
            throw ConfigError("u0 dimension does not match the problem");

        ResolvedSchedule rs = resolve_schedule(cfg, built, u0);
        if (!options.quiet) print_header(std::cout, cfg, rs);
        manifest["conditions"] = condition_json(rs.conditions);
        manifest["schedule"] = {{"c1", rs.schedule.c1()},
                                {"c0", rs.schedule.c0()},
                                {"b", rs.schedule.b()},
                                {"derived", rs.derived},
                                {"m", rs.m},
                                {"r", rs.r},
                                {"y_norm_bound", rs.y_norm_bound}};

        const bool needs_conditions = experiment == "solve" ||
                                      experiment == "solve-noisy" ||
                                      experiment == "delta-sweep";
        if (needs_conditions && !rs.conditions.pass) {
            if (options.strict)
                throw ConditionViolation(
                    "schedule conditions failed; rerun with --no-strict to "
                    "override");
            std::cerr << "WARNING: schedule conditions failed; the "
                         "convergence theory does not cover this run\n";
        }

        const bool write_states =
            cfg.contains("flow") && cfg.at("flow").value("write_states", false);
        FlowConfig fc = resolve_flow(cfg, rs);

        if (experiment == "solve" || experiment == "solve-noisy") {
            Trajectory traj;
            if (experiment == "solve") {
                traj = integrate(built.op, rs.schedule, u0, fc);
            } else {
                const double delta =
                    cfg.contains("noise")
                        ? cfg.at("noise").value("delta", 0.0)
                        : throw ConfigError(
                              "solve-noisy needs a noise section");
                std::mt19937_64 rng = make_rng(seed);
                const Vector noise = unit_sphere_vector(built.op.dim(), rng);
                traj = integrate_noisy(built.op, rs.schedule, u0, delta,
                                       noise, fc);
            }
            const std::string file = out_dir + "/trajectory.csv";
            write_trajectory_csv(file, traj, rs, rs.m == 0.0, write_states);
            outputs.push_back("trajectory.csv");
            const TrajectoryPoint& last = traj.points.back();
            manifest["summary"] = {
                {"t_end", traj.final_time()},
                {"eps_end", last.eps},
                {"residual_end", last.residual_norm},
                {"accepted_steps", traj.stats.accepted},
                {"rejected_steps", traj.stats.rejected},
                {"rhs_evals", traj.stats.rhs_evals}};
            if (last.v) manifest["summary"]["v_end"] = *last.v;
            if (last.g) manifest["summary"]["g_end"] = *last.g;
            if (!options.quiet)
                std::cout << "solve: t_end " << traj.final_time()
                          << ", residual " << format_full(last.residual_norm)
                          << ", " << traj.stats.accepted
                          << " accepted steps -> " << file << "\n";
        } else if (experiment == "path") {
            const std::vector<double> times = path_times(cfg, rs.schedule);
            const std::vector<PathPoint> points =
                path(built.op, rs.schedule, times);
            CsvWriter csv(out_dir + "/path.csv",
                          {"t", "eps", "v_norm", "v", "residual",
                           "newton_iters"});
            for (const PathPoint& p : points) {
                std::optional<double> dist;
                if (built.op.known_solution())
                    dist = norm(p.v - *built.op.known_solution());
                csv.write_row(std::vector<std::optional<double>>{
                    p.t, p.eps, norm(p.v), dist, p.residual,
                    static_cast<double>(p.newton_iters)});
            }
            outputs.push_back("path.csv");
            if (built.op.known_solution()) {
                const PathBoundsReport bounds = check_path_bounds(
                    points, rs.schedule, norm(*built.op.known_solution()));
                manifest["summary"] = {
                    {"points", points.size()},
                    {"norm_bound_ok", bounds.norm_ok},
                    {"derivative_bound_ok", bounds.derivative_ok},
                    {"worst_norm_ratio", bounds.worst_norm_ratio}};
            } else {
                manifest["summary"] = {{"points", points.size()}};
            }
            if (!options.quiet)
                std::cout << "path: " << points.size() << " points -> "
                          << out_dir << "/path.csv\n";
        } else if (experiment == "delta-sweep") {
            if (!cfg.contains("sweep"))
                throw ConfigError("delta-sweep needs a sweep section");
            const json& sj = cfg.at("sweep");
            std::vector<double> deltas;
            for (const auto& d : sj.at("deltas"))
                deltas.push_back(d.get<double>());
            const double m_rule =
                rs.m > 0.0 ? rs.m : sj.value("m_floor", 1.0);
            const SweepReport report = delta_sweep(
                built.op, rs.schedule, u0, deltas, seed, fc, m_rule);
            CsvWriter csv(out_dir + "/sweep.csv",
                          {"delta", "t_delta", "error_at_stop",
                           "g_delta_at_stop", "v_at_stop"});
            for (const SweepRow& row : report.rows)
                csv.write_row(std::vector<double>{
                    row.delta, row.t_delta, row.error_at_stop,
                    row.g_delta_at_stop, row.v_at_stop});
            outputs.push_back("sweep.csv");
            manifest["summary"] = {
                {"runs", report.rows.size()},
                {"m_rule", m_rule},
                {"monotone_within_slack",
                 report.monotone_within_slack(0.2)}};
            if (!options.quiet) {
                std::cout << "delta-sweep:\n";
                for (const SweepRow& row : report.rows)
                    std::cout << "  delta " << format_full(row.delta)
                              << "  t_delta " << format_full(row.t_delta)
                              << "  error " << format_full(row.error_at_stop)
                              << "\n";
            }
        } else {
            throw ConfigError("unknown experiment '" + experiment + "'");
        }

        manifest["outputs"] = outputs;
        std::ofstream mf(out_dir + "/manifest.json");
        if (!mf) throw IoError("cannot write manifest.json");
        mf << manifest.dump(2) << "\n";
        return 0;
    } catch (const json::exception& e) {
        throw ConfigError("config error: " + std::string(e.what()));
    }
}

void list_problems(std::ostream& out, bool machine_readable) {
    if (machine_readable) {
        json listing = json::array();
        listing.push_back(
            {{"name", "diagonal"},
             {"params",
              {{"singular_values", "array of reals > 0"},
               {"y", "array of reals (optional; default profile)"},
               {"profile", "bump | constant"}}},
             {"description", "A = diag(s), f = A y; closed-form oracle"}});
        listing.push_back(
            {{"name", "integral"},
             {"params",
              {{"n", "int >= 8"},
               {"kernel_width", "real > 0"},
               {"y", "array (optional)"},
               {"profile", "bump | constant"}}},
             {"description",
              "Gaussian-kernel quadrature operator on [0,1]; ill-posed"}});
        listing.push_back(
            {{"name", "cubic"},
             {"params",
              {{"n", "int >= 1"},
               {"alpha", "real >= 0"},
               {"y", "array (optional; manufactures f = B(y))"},
               {"f", "array (optional)"},
               {"profile", "bump | constant"}}},
             {"description",
              "B(u) = L u + alpha u^3, Neumann Laplacian L; monotone"}});
        out << listing.dump(2) << "\n";
        return;
    }
    out << "built-in problems:\n"
        << "  diagonal   singular_values: [reals > 0], y|profile\n"
        << "             A = diag(s), f = A y; every quantity has a "
           "closed form\n"
        << "  integral   n >= 8, kernel_width > 0, y|profile\n"
        << "             trapezoid discretization of a Gaussian "
           "convolution on [0,1]\n"
        << "  cubic      n, alpha >= 0, y|f|profile\n"
        << "             B(u) = L u + alpha u^3 with the Neumann-end "
           "Laplacian L\n";
}

int exit_code_for(const Error& error) {
    const std::string& cat = error.category();
    if (cat == "config") return 2;
    if (cat == "conditions") return 3;
    if (cat == "io") return 5;
    return 4;  // numeric/runtime failures
}

}  // namespace dsm::harness
