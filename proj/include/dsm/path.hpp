#ifndef DSM_PATH_HPP
#define DSM_PATH_HPP

#include <vector>

#include "dsm/problem.hpp"
#include "dsm/schedule.hpp"

// The regularized path V(t): the unique solution of F(V) + eps(t) V = 0.
// Solved pointwise by damped Newton; along a time grid by continuation.

namespace dsm {

struct PathPoint {
    double t = 0.0;  // NaN for standalone solves without a time stamp
    double eps = 0.0;
    Vector v;
    int newton_iters = 0;
    double residual = 0.0;  // ||F(V) + eps V||
};

struct NewtonOptions {
    double tol = 1e-11;  // residual <= tol * (1 + ||V||)
    int max_iters = 100;
    double min_step = 9.5367431640625e-7;  // 2^-20 line-search floor
};

/// Solve F(V) + eps V = 0 by Newton with Armijo backtracking on ||G||^2
/// (halving, floor NewtonOptions::min_step). The Jacobian A + eps I of G
/// is strongly positive for monotone F, which is what makes the damped
/// iteration globally reliable here. Throws NoConvergence.
PathPoint solve_V(const OperatorProblem& problem, double eps,
                  const Vector& guess, const NewtonOptions& opts = {});

/// Solve along increasing times, warm-starting each point from the
/// previous solution.
std::vector<PathPoint> path(const OperatorProblem& problem,
                            const EpsilonSchedule& schedule,
                            const std::vector<double>& times,
                            const NewtonOptions& opts = {});

/// Checks the two path bounds against a known ||y||:
///   (a) ||V(t_i)|| <= y_norm (1 + 1e-8) at every point,
///   (b) finite-difference ||dV/dt|| <= y_norm * max |eps_dot|/eps over
///       the step interval, within fd_slack.
struct PathBoundsReport {
    bool norm_ok = false;
    bool derivative_ok = false;
    double worst_norm_ratio = 0.0;        // max ||V|| / y_norm
    double worst_derivative_ratio = 0.0;  // max fd / bound
    bool pass = false;
};

PathBoundsReport check_path_bounds(const std::vector<PathPoint>& points,
                                   const EpsilonSchedule& schedule,
                                   double y_norm, double fd_slack = 0.1);

}  // namespace dsm

#endif  // DSM_PATH_HPP
