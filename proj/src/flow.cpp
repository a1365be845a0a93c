#include "dsm/flow.hpp"

#include <cmath>
#include <string>
#include <utility>

namespace dsm {

double flow_t_end(const EpsilonSchedule& schedule, const FlowConfig& cfg) {
    if (cfg.t_end > 0.0) return cfg.t_end;
    return schedule.time_for_eps_factor(cfg.target_eps_factor);
}

Vector rhs(const OperatorProblem& problem, const EpsilonSchedule& schedule,
           double t, const Vector& u) {
    const double eps = schedule.eps(t);
    DenseMatrix a_eps = problem.derivative(u);
    a_eps.add_scaled_identity(eps);
    Vector x = problem.apply(u);
    for (std::size_t i = 0; i < u.dim(); ++i) x[i] += eps * u[i];
    std::vector<std::size_t> piv(u.dim());
    solve_in_place(a_eps, x, piv);
    x *= -1.0;
    return x;
}

Vector rhs_linear(const LinearProblem& problem,
                  const EpsilonSchedule& schedule, double t, const Vector& u) {
    const double eps = schedule.eps(t);
    DenseMatrix b_eps = problem.b;
    b_eps.add_scaled_identity(eps);
    Vector x = problem.q;
    std::vector<std::size_t> piv(u.dim());
    solve_in_place(b_eps, x, piv);
    x -= u;
    return x;
}

namespace {

// Workspace-backed right-hand side; reuses buffers across the millions of
// evaluations a stability-limited run makes.
class FlowRhs {
public:
    FlowRhs(const OperatorProblem& problem, const EpsilonSchedule& schedule)
        : problem_(problem),
          schedule_(schedule),
          u_(problem.dim()),
          work_(problem.dim()),
          piv_(problem.dim()) {}

    void operator()(double t, const double* u, double* dudt) {
        const std::size_t n = problem_.dim();
        for (std::size_t i = 0; i < n; ++i) u_[i] = u[i];
        const double eps = schedule_.eps(t);
        a_eps_ = problem_.derivative(u_);
        a_eps_.add_scaled_identity(eps);
        work_ = problem_.apply(u_);
        for (std::size_t i = 0; i < n; ++i) work_[i] += eps * u_[i];
        solve_in_place(a_eps_, work_, piv_);
        for (std::size_t i = 0; i < n; ++i) dudt[i] = -work_[i];
    }

private:
    const OperatorProblem& problem_;
    const EpsilonSchedule& schedule_;
    Vector u_;
    Vector work_;
    DenseMatrix a_eps_;
    std::vector<std::size_t> piv_;
};

Trajectory integrate_impl(const OperatorProblem& flow_problem,
                          const OperatorProblem& diag_problem,
                          const EpsilonSchedule& schedule, const Vector& u0,
                          const FlowConfig& cfg, double delta) {
    if (u0.dim() != flow_problem.dim())
        throw DimensionMismatch("integrate: u0 dim mismatch");
    if (cfg.record_stride < 1)
        throw ConfigError("integrate: record_stride must be >= 1");
    if (!(cfg.rel_tol > 0.0) || !(cfg.abs_tol > 0.0))
        throw ConfigError("integrate: tolerances must be positive");
    if (cfg.max_steps < 1)
        throw ConfigError("integrate: max_steps must be >= 1");

    const double t_end = flow_t_end(schedule, cfg);
    const double escape_radius = cfg.confinement_radius * 1.1;

    Trajectory traj;
    traj.delta = delta;

    FlowRhs rhs_fn(flow_problem, schedule);

    Vector state(u0.dim());
    Vector v_guess = u0;  // continuation seed for path diagnostics
    long accepted = -1;   // observer fires once at t0 before any step

    auto record = [&](double t, const Vector& u) {
        TrajectoryPoint p;
        p.t = t;
        p.eps = schedule.eps(t);
        p.residual_norm = norm(flow_problem.apply(u));
        p.dist_from_u0 = norm(u - u0);
        if (cfg.path_diagnostics) {
            PathPoint vp = solve_V(diag_problem, p.eps, v_guess);
            v_guess = vp.v;
            p.g = norm(u - vp.v);
            if (diag_problem.known_solution())
                p.v = norm(vp.v - *diag_problem.known_solution());
        }
        if (cfg.envelope_m > 0.0) p.envelope = p.eps / (2.0 * cfg.envelope_m);
        if (!std::isfinite(p.residual_norm) || !std::isfinite(p.dist_from_u0))
            throw Error("non-finite", "integrate: non-finite diagnostics at t=" +
                                          std::to_string(t));
        traj.times.push_back(t);
        traj.states.push_back(u);
        traj.points.push_back(p);
    };

    auto observer = [&](double t, const double* u) {
        ++accepted;
        for (std::size_t i = 0; i < state.dim(); ++i) state[i] = u[i];
        if (escape_radius > 0.0) {
            const double dist = norm(state - u0);
            if (dist > escape_radius)
                throw TrajectoryEscape(
                    "trajectory left tracking ball: ||u-u0|| = " +
                    std::to_string(dist) + " > " +
                    std::to_string(escape_radius) + " at t=" +
                    std::to_string(t));
        }
        const bool at_end = t >= t_end;
        if (accepted % cfg.record_stride == 0 || at_end) record(t, state);
    };

    ode::Options opt;
    opt.rel_tol = cfg.rel_tol;
    opt.abs_tol = cfg.abs_tol;
    opt.max_steps = cfg.max_steps;

    Vector u = u0;
    traj.stats =
        ode::integrate_dopri5(u.dim(), rhs_fn, 0.0, t_end, u.data(), opt,
                              observer);
    return traj;
}

}  // namespace

Trajectory integrate(const OperatorProblem& problem,
                     const EpsilonSchedule& schedule, const Vector& u0,
                     const FlowConfig& cfg) {
    return integrate_impl(problem, problem, schedule, u0, cfg, 0.0);
}

Trajectory integrate_noisy(const OperatorProblem& problem,
                           const EpsilonSchedule& schedule, const Vector& u0,
                           double delta, const Vector& noise,
                           const FlowConfig& cfg) {
    if (delta < 0.0)
        throw ConfigError("integrate_noisy: delta must be >= 0");
    if (noise.dim() != problem.dim())
        throw DimensionMismatch("integrate_noisy: noise dim mismatch");
    if (norm(noise) > 1.0 + 1e-12)
        throw ConfigError("integrate_noisy: noise must lie in the unit ball");
    Vector f_delta = problem.rhs();
    for (std::size_t i = 0; i < f_delta.dim(); ++i)
        f_delta[i] += delta * noise[i];
    const OperatorProblem noisy = problem.with_rhs(f_delta);
    return integrate_impl(noisy, problem, schedule, u0, cfg, delta);
}

}  // namespace dsm
