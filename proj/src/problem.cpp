#include "dsm/problem.hpp"

#include <cmath>
#include <limits>
#include <utility>

#include "dsm/random.hpp"

namespace dsm {

OperatorProblem::OperatorProblem(std::string name, std::size_t dim,
                                 ForwardFn forward, JacobianFn jacobian,
                                 BoundsFn bounds, Vector rhs,
                                 DataMapFn data_map,
                                 std::optional<Vector> known_solution,
                                 bool linear)
    : name_(std::move(name)),
      dim_(dim),
      forward_(std::move(forward)),
      jacobian_(std::move(jacobian)),
      forward_bounds_(std::move(bounds)),
      data_map_(std::move(data_map)),
      data_(std::move(rhs)),
      known_solution_(std::move(known_solution)),
      linear_(linear) {
    effective_rhs_ = data_map_(data_);
    if (effective_rhs_.dim() != dim_)
        throw DimensionMismatch("OperatorProblem: data term dim mismatch");
}

Vector OperatorProblem::apply(const Vector& u) const {
    if (u.dim() != dim_)
        throw DimensionMismatch("apply: dim " + std::to_string(u.dim()) +
                                " vs problem " + std::to_string(dim_));
    Vector out = forward_(u);
    out -= effective_rhs_;
    return out;
}

DenseMatrix OperatorProblem::derivative(const Vector& u) const {
    if (u.dim() != dim_)
        throw DimensionMismatch("derivative: dim mismatch");
    return jacobian_(u);
}

LocalBounds OperatorProblem::bounds(double reach) const {
    LocalBounds b = forward_bounds_(reach);
    b.m0 += norm(effective_rhs_);
    return b;
}

OperatorProblem OperatorProblem::with_rhs(const Vector& f_new) const {
    if (f_new.dim() != data_.dim())
        throw DimensionMismatch("with_rhs: data dim mismatch");
    OperatorProblem copy = *this;
    copy.data_ = f_new;
    copy.effective_rhs_ = copy.data_map_(f_new);
    return copy;
}

OperatorProblem LinearProblem::as_operator() const {
    const DenseMatrix bmat = b;
    const DenseMatrix amat = a;
    const double b_norm = symmetric_max_eigenvalue(bmat);
    auto forward = [bmat](const Vector& u) { return bmat.matvec(u); };
    auto jacobian = [bmat](const Vector&) { return bmat; };
    auto fbounds = [b_norm](double reach) {
        return LocalBounds{b_norm * reach, b_norm, 0.0};
    };
    auto data_map = [amat](const Vector& f) {
        return amat.transpose().matvec(f);
    };
    return OperatorProblem(name, a.rows(), forward, jacobian, fbounds, f,
                           data_map, known_solution, /*linear=*/true);
}

LinearProblem make_diagonal_problem(const std::vector<double>& singular_values,
                                    const Vector& y) {
    if (singular_values.size() != y.dim())
        throw DimensionMismatch("make_diagonal_problem: dim mismatch");
    for (double s : singular_values)
        if (!(s > 0.0))
            throw Error("config",
                        "make_diagonal_problem: singular values must be > 0");
    LinearProblem p;
    p.a = DenseMatrix::diagonal(singular_values);
    p.f = p.a.matvec(y);
    p.b = p.a.gram();
    p.q = p.a.transpose().matvec(p.f);
    p.known_solution = y;
    p.name = "diagonal";
    return p;
}

LinearProblem make_integral_problem(std::size_t n, double kernel_width,
                                    const Vector& y_profile) {
    if (n < 8)
        throw Error("config", "make_integral_problem: n must be >= 8");
    if (!(kernel_width > 0.0))
        throw Error("config", "make_integral_problem: width must be > 0");
    if (y_profile.dim() != n)
        throw DimensionMismatch("make_integral_problem: profile dim mismatch");

    const double h = 1.0 / static_cast<double>(n - 1);
    DenseMatrix a(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        const double s = static_cast<double>(i) * h;
        for (std::size_t j = 0; j < n; ++j) {
            const double t = static_cast<double>(j) * h;
            double w = h;
            if (j == 0 || j == n - 1) w *= 0.5;  // trapezoid ends
            const double d = (s - t) / kernel_width;
            a(i, j) = w * std::exp(-0.5 * d * d);
        }
    }
    LinearProblem p;
    p.a = a;
    p.f = a.matvec(y_profile);
    p.b = a.gram();
    p.q = a.transpose().matvec(p.f);
    p.known_solution = y_profile;
    p.name = "integral";
    return p;
}

namespace {

// Discrete Laplacian with Neumann ends: tridiag(-1, 2, -1) with the
// boundary diagonal entries reduced to 1. Positive semidefinite.
DenseMatrix neumann_laplacian(std::size_t n) {
    DenseMatrix l(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        double diag = 0.0;
        if (i > 0) { l(i, i - 1) = -1.0; diag += 1.0; }
        if (i + 1 < n) { l(i, i + 1) = -1.0; diag += 1.0; }
        l(i, i) = diag;
    }
    return l;
}

OperatorProblem build_cubic(std::size_t n, double alpha, Vector f,
                            std::optional<Vector> y) {
    if (!(alpha >= 0.0))
        throw Error("config", "cubic problem: alpha must be >= 0");
    if (f.dim() != n)
        throw DimensionMismatch("cubic problem: f dim mismatch");

    const DenseMatrix l = neumann_laplacian(n);
    const double l_norm = n > 0 ? symmetric_max_eigenvalue(l) : 0.0;
    const double root_n = std::sqrt(static_cast<double>(n));

    auto forward = [l, alpha](const Vector& u) {
        Vector out = l.matvec(u);
        for (std::size_t i = 0; i < u.dim(); ++i)
            out[i] += alpha * u[i] * u[i] * u[i];
        return out;
    };
    auto jacobian = [l, alpha](const Vector& u) {
        DenseMatrix j = l;
        for (std::size_t i = 0; i < u.dim(); ++i)
            j(i, i) += 3.0 * alpha * u[i] * u[i];
        return j;
    };
    // ||diag(u^2)|| = max u_i^2 <= reach^2 and ||F''|| <= 6 alpha max|u_i|;
    // the cubic term's value needs the sqrt(n) inflation from the max norm.
    auto fbounds = [l_norm, alpha, root_n](double reach) {
        LocalBounds b;
        b.m0 = l_norm * reach + alpha * root_n * reach * reach * reach;
        b.m1 = l_norm + 3.0 * alpha * reach * reach;
        b.m2 = 6.0 * alpha * reach;
        return b;
    };
    auto data_map = [](const Vector& fv) { return fv; };
    return OperatorProblem("cubic", n, forward, jacobian, fbounds,
                           std::move(f), data_map, std::move(y),
                           /*linear=*/alpha == 0.0);
}

}  // namespace

OperatorProblem make_cubic_monotone_problem(std::size_t n, double alpha,
                                            const Vector& f) {
    return build_cubic(n, alpha, f, std::nullopt);
}

OperatorProblem make_cubic_problem_with_solution(std::size_t n, double alpha,
                                                 const Vector& y) {
    OperatorProblem base = make_cubic_monotone_problem(n, alpha, Vector(n));
    Vector f = base.apply(y);  // B(y) - 0
    return build_cubic(n, alpha, std::move(f), y);
}

MonotoneReport check_monotone(const OperatorProblem& p, int samples,
                              double radius, std::uint64_t seed) {
    if (samples < 1)
        throw Error("config", "check_monotone: samples must be >= 1");
    std::mt19937_64 rng = make_rng(seed);
    MonotoneReport report;
    report.min_pair_certificate = std::numeric_limits<double>::infinity();
    report.min_sym_eigenvalue = std::numeric_limits<double>::infinity();
    for (int s = 0; s < samples; ++s) {
        const Vector u = ball_vector(p.dim(), radius, rng);
        const Vector v = ball_vector(p.dim(), radius, rng);
        const Vector du = u - v;
        const double cert = inner(p.apply(u) - p.apply(v), du);
        report.min_pair_certificate =
            std::fmin(report.min_pair_certificate, cert);
        const double lmin = symmetric_min_eigenvalue(p.derivative(u));
        report.min_sym_eigenvalue =
            std::fmin(report.min_sym_eigenvalue, lmin);
    }
    report.pass = report.min_pair_certificate >= -kMonotoneTol &&
                  report.min_sym_eigenvalue >= -kMonotoneTol;
    return report;
}

}  // namespace dsm
