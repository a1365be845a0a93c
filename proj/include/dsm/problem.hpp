#ifndef DSM_PROBLEM_HPP
#define DSM_PROBLEM_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <string>

#include "dsm/linalg.hpp"

// The operator-problem abstraction F(u) = B(u) - f and the built-in
// instances used by tests and the CLI: a diagonal linear problem with
// closed-form everything, a discretized first-kind integral equation, and
// a cubic monotone nonlinearity.

namespace dsm {

/// Bounds on the operator and its first two derivatives over a ball.
struct LocalBounds {
    double m0 = 0.0;  // sup ||F(u)||
    double m1 = 0.0;  // sup ||F'(u)||
    double m2 = 0.0;  // sup ||F''(u)||
};

/// A monotone operator equation F(u) = B(u) - f = 0 on R^n.
///
/// Immutable after construction; `apply` and `derivative` are pure, so
/// instances can be shared freely across threads.
class OperatorProblem {
public:
    using ForwardFn = std::function<Vector(const Vector&)>;
    using JacobianFn = std::function<DenseMatrix(const Vector&)>;
    // Derivative bounds of the forward map over { u : ||u|| <= reach };
    // the data term is added separately so it tracks rhs replacement.
    using BoundsFn = std::function<LocalBounds(double reach)>;
    // Maps observed data f to the constant term subtracted in F.
    using DataMapFn = std::function<Vector(const Vector&)>;

    OperatorProblem(std::string name, std::size_t dim, ForwardFn forward,
                    JacobianFn jacobian, BoundsFn bounds, Vector rhs,
                    DataMapFn data_map, std::optional<Vector> known_solution,
                    bool linear);

    const std::string& name() const { return name_; }
    std::size_t dim() const { return dim_; }

    /// F(u) = B(u) - (data term).
    Vector apply(const Vector& u) const;

    /// A = F'(u).
    DenseMatrix derivative(const Vector& u) const;

    /// (M0, M1, M2) over the ball ||u|| <= reach.
    LocalBounds bounds(double reach) const;

    /// The observed data f of the original equation.
    const Vector& rhs() const { return data_; }

    /// Same operator with the data replaced; the constant term and the M0
    /// bound are recomputed.
    OperatorProblem with_rhs(const Vector& f_new) const;

    const std::optional<Vector>& known_solution() const {
        return known_solution_;
    }
    bool linear() const { return linear_; }

private:
    std::string name_;
    std::size_t dim_;
    ForwardFn forward_;
    JacobianFn jacobian_;
    BoundsFn forward_bounds_;
    DataMapFn data_map_;
    Vector data_;           // f
    Vector effective_rhs_;  // data_map_(f), cached
    std::optional<Vector> known_solution_;
    bool linear_;
};

/// Linear problem A u = f, carried together with its normal-equation form
/// B u = q, B = A^T A, q = A^T f, which is what the flow integrates.
struct LinearProblem {
    DenseMatrix a;
    Vector f;
    DenseMatrix b;  // A^T A
    Vector q;       // A^T f
    std::optional<Vector> known_solution;
    std::string name = "linear";

    /// Operator form F(u) = B u - q with exact constant Jacobian B.
    OperatorProblem as_operator() const;
};

/// A = diag(singular_values), f = A y, known solution y.
/// All singular values must be positive.
LinearProblem make_diagonal_problem(const std::vector<double>& singular_values,
                                    const Vector& y);

/// Trapezoid discretization on the uniform grid over [0,1] of the Gaussian
/// convolution kernel k(s,t) = exp(-(s-t)^2 / (2 w^2)); f = A y_profile.
/// Singular values decay fast, so this is the ill-posed workhorse.
LinearProblem make_integral_problem(std::size_t n, double kernel_width,
                                    const Vector& y_profile);

/// B(u) = L u + alpha u^3 (componentwise) with L the Neumann-end discrete
/// Laplacian; F(u) = B(u) - f.
OperatorProblem make_cubic_monotone_problem(std::size_t n, double alpha,
                                            const Vector& f);

/// Cubic problem manufactured so that the given y is the solution:
/// f = B(y).
OperatorProblem make_cubic_problem_with_solution(std::size_t n, double alpha,
                                                 const Vector& y);

/// Monotonicity spot check: sampled pair certificates
/// <F(u)-F(v), u-v> and the smallest eigenvalue of the symmetrized
/// Jacobian over sampled points. Passes iff both stay above -1e-10.
struct MonotoneReport {
    double min_pair_certificate = 0.0;
    double min_sym_eigenvalue = 0.0;
    bool pass = false;
};

MonotoneReport check_monotone(const OperatorProblem& p, int samples,
                              double radius, std::uint64_t seed);

inline constexpr double kMonotoneTol = 1e-10;

}  // namespace dsm

#endif  // DSM_PROBLEM_HPP
