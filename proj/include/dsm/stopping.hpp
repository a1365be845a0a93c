#ifndef DSM_STOPPING_HPP
#define DSM_STOPPING_HPP

#include <cstdint>
#include <vector>

#include "dsm/flow.hpp"

// Noisy-data machinery: the stopping time t_delta solving
// eps(t)^2 = 16 M delta, sweeps over noise levels, and the noisy
// envelope check g_delta < eps / (2M) for t <= t_delta.

namespace dsm {

struct StoppingRule {
    double m = 1.0;  // M2 bound; for linear problems a configured floor
    EpsilonSchedule schedule;
};

/// Closed-form root of eps(t)^2 = 16 M delta:
///   t_delta = (c1^2 / (16 M delta))^{1/(2b)} - c0.
/// Strictly decreasing in delta and unbounded as delta -> 0. Throws
/// NoFiniteStop when 16 M delta > eps(0)^2 (the rule says stop at once).
double stopping_time(const StoppingRule& rule, double delta);

struct SweepRow {
    double delta = 0.0;
    double t_delta = 0.0;
    double error_at_stop = 0.0;    // ||u_delta(t_delta) - y||
    double g_delta_at_stop = 0.0;  // ||u_delta(t_delta) - V(t_delta)||
    double v_at_stop = 0.0;        // ||V(t_delta) - y||
};

struct SweepReport {
    std::vector<SweepRow> rows;  // sorted by delta, descending
    std::uint64_t seed = 0;

    /// error_at_stop nonincreasing along decreasing delta, within slack.
    bool monotone_within_slack(double slack = 0.2) const;
};

/// For each delta: draw a unit noise direction from a per-delta stream
/// derived from `seed`, integrate the noisy flow to t_delta, and record
/// the error against the known solution. Runs are independent and execute
/// in parallel; the report ordering and all values are deterministic in
/// (seed, config).
SweepReport delta_sweep(const OperatorProblem& problem,
                        const EpsilonSchedule& schedule, const Vector& u0,
                        const std::vector<double>& deltas, std::uint64_t seed,
                        const FlowConfig& cfg, double m_for_rule);

/// Assert g_delta(t) < eps(t)/(2M) (1 + slack) at recorded times up to
/// t_delta. Requires a trajectory from integrate_noisy with path
/// diagnostics on.
struct NoisyEnvelopeReport {
    bool pass = false;
    double worst_ratio = 0.0;
    std::size_t checked = 0;
};

NoisyEnvelopeReport noisy_envelope_check(const Trajectory& traj,
                                         const StoppingRule& rule,
                                         double delta, double slack = 0.05);

}  // namespace dsm

#endif  // DSM_STOPPING_HPP
