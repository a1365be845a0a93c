#include "dsm/stopping.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <string>

#include "dsm/path.hpp"
#include "dsm/random.hpp"

namespace dsm {

double stopping_time(const StoppingRule& rule, double delta) {
    if (!(delta > 0.0))
        throw ConfigError("stopping_time: delta must be > 0");
    if (!(rule.m > 0.0))
        throw ConfigError("stopping_time: rule M must be > 0");
    const double eps0 = rule.schedule.eps(0.0);
    const double target = 16.0 * rule.m * delta;
    if (target > eps0 * eps0)
        throw NoFiniteStop("stopping_time: 16 M delta = " +
                           std::to_string(target) + " exceeds eps(0)^2 = " +
                           std::to_string(eps0 * eps0) +
                           "; the rule stops at t = 0");
    const double c1 = rule.schedule.c1();
    return std::pow(c1 * c1 / target, 0.5 / rule.schedule.b()) -
           rule.schedule.c0();
}

bool SweepReport::monotone_within_slack(double slack) const {
    for (std::size_t i = 0; i + 1 < rows.size(); ++i)
        if (rows[i + 1].error_at_stop >
            rows[i].error_at_stop * (1.0 + slack))
            return false;
    return true;
}

SweepReport delta_sweep(const OperatorProblem& problem,
                        const EpsilonSchedule& schedule, const Vector& u0,
                        const std::vector<double>& deltas, std::uint64_t seed,
                        const FlowConfig& cfg, double m_for_rule) {
    if (!problem.known_solution())
        throw ConfigError("delta_sweep: problem needs a known solution");
    for (std::size_t i = 0; i + 1 < deltas.size(); ++i)
        if (!(deltas[i] > deltas[i + 1]))
            throw ConfigError("delta_sweep: deltas must be decreasing");
    for (double d : deltas)
        if (!(d > 0.0))
            throw ConfigError("delta_sweep: deltas must be positive");

    const Vector& y = *problem.known_solution();
    const StoppingRule rule{m_for_rule, schedule};

    SweepReport report;
    report.seed = seed;
    report.rows.resize(deltas.size());
    std::exception_ptr failure;

    const std::int64_t count = static_cast<std::int64_t>(deltas.size());
#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t i = 0; i < count; ++i) {
        try {
            const double delta = deltas[static_cast<std::size_t>(i)];
            std::mt19937_64 rng =
                make_rng(mix_seed(seed, static_cast<std::uint64_t>(i)));
            const Vector noise = unit_sphere_vector(problem.dim(), rng);

            FlowConfig run_cfg = cfg;
            run_cfg.t_end = stopping_time(rule, delta);
            run_cfg.path_diagnostics = false;

            Trajectory traj =
                integrate_noisy(problem, schedule, u0, delta, noise, run_cfg);
            const Vector& u_stop = traj.final_state();
            PathPoint vp =
                solve_V(problem, schedule.eps(run_cfg.t_end), u_stop);

            SweepRow row;
            row.delta = delta;
            row.t_delta = run_cfg.t_end;
            row.error_at_stop = norm(u_stop - y);
            row.g_delta_at_stop = norm(u_stop - vp.v);
            row.v_at_stop = norm(vp.v - y);
            report.rows[static_cast<std::size_t>(i)] = row;
        } catch (...) {
#pragma omp critical
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);

    std::sort(report.rows.begin(), report.rows.end(),
              [](const SweepRow& a, const SweepRow& b) {
                  return a.delta > b.delta;
              });
    return report;
}

NoisyEnvelopeReport noisy_envelope_check(const Trajectory& traj,
                                         const StoppingRule& rule,
                                         double delta, double slack) {
    const double t_delta = stopping_time(rule, delta);
    NoisyEnvelopeReport report;
    report.pass = true;
    for (const TrajectoryPoint& p : traj.points) {
        if (p.t > t_delta) continue;  // outside the rule's validity window
        if (!p.g)
            throw ConfigError(
                "noisy_envelope_check: trajectory lacks path diagnostics");
        const double bound = p.eps / (2.0 * rule.m);
        const double ratio = *p.g / bound;
        report.worst_ratio = std::fmax(report.worst_ratio, ratio);
        ++report.checked;
        if (ratio >= 1.0 + slack) report.pass = false;
    }
    return report;
}

}  // namespace dsm
