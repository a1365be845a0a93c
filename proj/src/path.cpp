#include "dsm/path.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace dsm {

namespace {

double residual_norm(const OperatorProblem& p, double eps, const Vector& v,
                     Vector& g_out) {
    g_out = p.apply(v);
    for (std::size_t i = 0; i < v.dim(); ++i) g_out[i] += eps * v[i];
    return norm(g_out);
}

}  // namespace

PathPoint solve_V(const OperatorProblem& problem, double eps,
                  const Vector& guess, const NewtonOptions& opts) {
    if (!(eps > 0.0))
        throw ConfigError("solve_V: eps must be positive");
    Vector v = guess;
    Vector g(problem.dim());
    double res = residual_norm(problem, eps, v, g);
    std::vector<std::size_t> piv(problem.dim());

    int iters = 0;
    while (res > opts.tol * (1.0 + norm(v))) {
        if (iters >= opts.max_iters)
            throw NoConvergence("solve_V: no convergence after " +
                                std::to_string(opts.max_iters) +
                                " iterations (residual " +
                                std::to_string(res) + ")");
        DenseMatrix jac = problem.derivative(v);
        jac.add_scaled_identity(eps);
        Vector step = g;
        step *= -1.0;
        solve_in_place(jac, step, piv);

        // Armijo backtracking on ||G||^2.
        double lambda = 1.0;
        Vector trial(v.dim());
        Vector g_trial(v.dim());
        double res_trial;
        while (true) {
            trial = v;
            for (std::size_t i = 0; i < v.dim(); ++i)
                trial[i] += lambda * step[i];
            res_trial = residual_norm(problem, eps, trial, g_trial);
            if (res_trial * res_trial <=
                res * res * (1.0 - 1e-4 * lambda))
                break;
            lambda *= 0.5;
            if (lambda < opts.min_step)
                throw NoConvergence(
                    "solve_V: line search stalled (residual " +
                    std::to_string(res) + ")");
        }
        v = trial;
        g = g_trial;
        res = res_trial;
        ++iters;
    }

    PathPoint point;
    point.t = std::numeric_limits<double>::quiet_NaN();
    point.eps = eps;
    point.v = v;
    point.newton_iters = iters;
    point.residual = res;
    return point;
}

std::vector<PathPoint> path(const OperatorProblem& problem,
                            const EpsilonSchedule& schedule,
                            const std::vector<double>& times,
                            const NewtonOptions& opts) {
    for (std::size_t i = 0; i + 1 < times.size(); ++i)
        if (!(times[i] < times[i + 1]))
            throw ConfigError("path: times must be strictly increasing");
    if (!times.empty() && times.front() < 0.0)
        throw ConfigError("path: times must be >= 0");

    std::vector<PathPoint> points;
    points.reserve(times.size());
    Vector guess(problem.dim());  // zero start; continuation afterwards
    for (double t : times) {
        PathPoint p = solve_V(problem, schedule.eps(t), guess, opts);
        p.t = t;
        guess = p.v;
        points.push_back(std::move(p));
    }
    return points;
}

PathBoundsReport check_path_bounds(const std::vector<PathPoint>& points,
                                   const EpsilonSchedule& schedule,
                                   double y_norm, double fd_slack) {
    PathBoundsReport report;
    report.norm_ok = true;
    report.derivative_ok = true;

    for (const PathPoint& p : points) {
        const double ratio = y_norm > 0.0 ? norm(p.v) / y_norm : norm(p.v);
        report.worst_norm_ratio = std::fmax(report.worst_norm_ratio, ratio);
        if (y_norm > 0.0) {
            if (ratio > 1.0 + 1e-8) report.norm_ok = false;
        } else if (norm(p.v) > 1e-9) {
            report.norm_ok = false;
        }
    }

    for (std::size_t i = 0; i + 1 < points.size(); ++i) {
        const double dt = points[i + 1].t - points[i].t;
        if (!(dt > 0.0)) continue;
        const double fd = norm(points[i + 1].v - points[i].v) / dt;
        // |eps_dot|/eps decreases in t, so its maximum over the interval
        // sits at the left end.
        const double bound =
            y_norm * schedule.decay_ratio(points[i].t) * (1.0 + fd_slack);
        if (y_norm > 0.0) {
            report.worst_derivative_ratio = std::fmax(
                report.worst_derivative_ratio, fd / (bound > 0 ? bound : 1.0));
            if (fd > bound) report.derivative_ok = false;
        } else if (fd > 1e-9) {
            report.derivative_ok = false;
        }
    }

    report.pass = report.norm_ok && report.derivative_ok;
    return report;
}

}  // namespace dsm
