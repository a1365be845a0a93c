#ifndef DSM_FLOW_HPP
#define DSM_FLOW_HPP

#include <optional>
#include <vector>

#include "dsm/ode.hpp"
#include "dsm/path.hpp"
#include "dsm/problem.hpp"
#include "dsm/schedule.hpp"

// Integration of the regularized Newton flow
//     du/dt = -(F'(u) + eps(t) I)^{-1} (F(u) + eps(t) u),   u(0) = u0,
// with per-step ball tracking and optional path diagnostics recorded
// along the way. The Jacobian is rebuilt and refactored at every
// right-hand-side evaluation; there is no freezing.

namespace dsm {

struct FlowConfig {
    /// End time; 0 means "derive from target_eps_factor".
    double t_end = 0.0;
    /// When t_end == 0: integrate until eps(t) = factor * eps(0).
    double target_eps_factor = 1e-6;
    double rel_tol = 1e-8;
    double abs_tol = 1e-10;
    long max_steps = 50'000'000;
    /// Record diagnostics every this many accepted steps (plus t_end).
    long record_stride = 10;
    /// Solve for V(t) at recorded times and attach g = ||u - V||.
    bool path_diagnostics = false;
    /// When > 0: enforce ||u(t) - u0|| <= radius * 1.1 at every accepted
    /// step (throws TrajectoryEscape). Callers set this to 3r.
    double confinement_radius = 0.0;
    /// When > 0: attach the envelope diagnostic eps(t) / (2 M).
    double envelope_m = 0.0;
};

struct TrajectoryPoint {
    double t = 0.0;
    double eps = 0.0;
    double residual_norm = 0.0;  // ||F(u)|| for the integrated system
    double dist_from_u0 = 0.0;
    std::optional<double> g;         // ||u - V||, exact-data path
    std::optional<double> v;         // ||V - y|| when y is known
    std::optional<double> envelope;  // eps / (2 M) when envelope_m > 0
};

struct Trajectory {
    std::vector<double> times;
    std::vector<Vector> states;
    std::vector<TrajectoryPoint> points;
    double delta = 0.0;  // noise level; 0 for exact data
    ode::Stats stats;

    const Vector& final_state() const { return states.back(); }
    double final_time() const { return times.back(); }
};

/// Resolved end time for a config (t_end or the eps-target time).
double flow_t_end(const EpsilonSchedule& schedule, const FlowConfig& cfg);

/// One right-hand-side evaluation of the flow.
Vector rhs(const OperatorProblem& problem, const EpsilonSchedule& schedule,
           double t, const Vector& u);

/// The linear specialization -u + (B + eps(t) I)^{-1} q; agrees with
/// `rhs` on the operator form of the same problem up to solver tolerance.
Vector rhs_linear(const LinearProblem& problem,
                  const EpsilonSchedule& schedule, double t, const Vector& u);

/// Integrate the flow from u0. Callers are expected to have validated
/// the schedule conditions (or to be on a linear problem, where they are
/// vacuous); this function does not re-check them.
Trajectory integrate(const OperatorProblem& problem,
                     const EpsilonSchedule& schedule, const Vector& u0,
                     const FlowConfig& cfg);

/// Replace f by f + delta * noise and integrate. ||noise|| must be <= 1.
/// Path diagnostics (g, v) are computed against the exact-data problem,
/// matching the quantity the stopping-rule analysis bounds; the residual
/// tracks the perturbed system actually integrated.
Trajectory integrate_noisy(const OperatorProblem& problem,
                           const EpsilonSchedule& schedule, const Vector& u0,
                           double delta, const Vector& noise,
                           const FlowConfig& cfg);

}  // namespace dsm

#endif  // DSM_FLOW_HPP
