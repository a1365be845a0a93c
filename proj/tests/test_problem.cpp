#include <doctest.h>

#include <cmath>
#include <random>

#include "dsm/problem.hpp"
#include "dsm/random.hpp"

using namespace dsm;

namespace {

// Finite-difference Jacobian column check at a point.
void check_jacobian_at(const OperatorProblem& p, const Vector& u) {
    const DenseMatrix jac = p.derivative(u);
    const double h = 1e-6;
    for (std::size_t j = 0; j < p.dim(); ++j) {
        Vector up = u, um = u;
        up[j] += h;
        um[j] -= h;
        const Vector dp = p.apply(up);
        const Vector dm = p.apply(um);
        for (std::size_t i = 0; i < p.dim(); ++i) {
            const double fd = (dp[i] - dm[i]) / (2.0 * h);
            const double scale = std::fmax(std::fabs(jac(i, j)), 1.0);
            CHECK(std::fabs(fd - jac(i, j)) <= 1e-5 * scale);
        }
    }
}

OperatorProblem negated_identity_fixture(std::size_t n) {
    // F(u) = -u: the canonical non-monotone operator
    auto forward = [](const Vector& u) { return -1.0 * u; };
    auto jacobian = [n](const Vector&) {
        DenseMatrix j = DenseMatrix::identity(n);
        for (std::size_t i = 0; i < n; ++i) j(i, i) = -1.0;
        return j;
    };
    auto bounds = [](double reach) { return LocalBounds{reach, 1.0, 0.0}; };
    auto data_map = [](const Vector& f) { return f; };
    return OperatorProblem("negated-identity", n, forward, jacobian, bounds,
                           Vector(n), data_map, std::nullopt, true);
}

}  // namespace

TEST_CASE("diagonal problem: closed-form pieces") {
    const LinearProblem p =
        make_diagonal_problem({1.0, 0.1, 0.01}, Vector{1, 1, 1});
    CHECK(norm(p.f - Vector{1.0, 0.1, 0.01}) == 0.0);
    CHECK(p.b(0, 0) == 1.0);
    CHECK(p.b(1, 1) == doctest::Approx(0.01).epsilon(1e-15));
    CHECK(p.b(2, 2) == doctest::Approx(0.0001).epsilon(1e-15));
    CHECK(p.q[0] == 1.0);
    CHECK(p.q[1] == doctest::Approx(0.01).epsilon(1e-15));
    CHECK(p.q[2] == doctest::Approx(0.0001).epsilon(1e-15));

    CHECK(norm(make_diagonal_problem({1.0}, Vector{0}).f) == 0.0);
    CHECK(norm(make_diagonal_problem({2, 2}, Vector{1, -1}).f -
               Vector{2, -2}) == 0.0);
    CHECK_THROWS_AS(make_diagonal_problem({1.0, -1.0}, Vector{1, 1}),
                    Error);
}

TEST_CASE("diagonal regularized solution identity") {
    const std::vector<double> lambda = {1.0, 0.1, 0.01};
    const Vector y{1, 1, 1};
    const LinearProblem p = make_diagonal_problem(lambda, y);
    for (double eps : {1.0, 1e-2, 1e-4, 1e-6}) {
        DenseMatrix m = p.b;
        m.add_scaled_identity(eps);
        const Vector v = solve(m, p.q);
        for (std::size_t i = 0; i < 3; ++i) {
            const double l2 = lambda[i] * lambda[i];
            CHECK(v[i] == doctest::Approx(l2 * y[i] / (l2 + eps))
                              .epsilon(1e-12));
        }
    }
}

TEST_CASE("integral problem: ill-posedness and data consistency") {
    const std::size_t n = 32;
    Vector bump(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double s = static_cast<double>(i) / static_cast<double>(n - 1);
        bump[i] = std::exp(-0.5 * std::pow((s - 0.5) / 0.15, 2));
    }
    const LinearProblem p = make_integral_problem(n, 0.1, bump);
    CHECK(condition_number(p.a) > 1e6);

    // wide kernel, constant profile: f equals the quadrature row sums
    const LinearProblem wide = make_integral_problem(8, 10.0, Vector(8, 1.0));
    for (std::size_t i = 0; i < 8; ++i) {
        double row_sum = 0.0;
        for (std::size_t j = 0; j < 8; ++j) row_sum += wide.a(i, j);
        CHECK(wide.f[i] == doctest::Approx(row_sum).epsilon(1e-15));
        CHECK(wide.f[i] == doctest::Approx(1.0).epsilon(0.01));
    }

    CHECK(norm(make_integral_problem(8, 0.1, Vector(8)).f) == 0.0);
    CHECK_THROWS_AS(make_integral_problem(4, 0.1, Vector(4)), Error);
}

TEST_CASE("cubic problem basics") {
    // alpha = 0 reduces to the linear Laplacian problem
    const OperatorProblem lin = make_cubic_monotone_problem(4, 0.0, Vector(4));
    CHECK(norm(lin.apply(Vector(4))) == 0.0);
    CHECK(lin.linear());
    CHECK(lin.bounds(5.0).m2 == 0.0);

    // n = 2, f = B([1,1]): L [1,1] = 0, so f = [1,1]
    const OperatorProblem p =
        make_cubic_problem_with_solution(2, 1.0, Vector{1, 1});
    CHECK(norm(p.rhs() - Vector{1, 1}) == 0.0);
    CHECK(norm(p.apply(Vector{1, 1})) == 0.0);
    REQUIRE(p.known_solution());
    CHECK(norm(*p.known_solution() - Vector{1, 1}) == 0.0);

    // monotonicity sample from the operator definition
    const OperatorProblem q = make_cubic_monotone_problem(2, 1.0, Vector(2));
    const Vector u{1, 0}, v{0, 0};
    CHECK(inner(q.apply(u) - q.apply(v), u - v) >= 0.0);
}

TEST_CASE("cubic bounds formulas") {
    const double alpha = 1.5;
    const OperatorProblem p = make_cubic_monotone_problem(4, alpha, Vector(4));
    const LocalBounds b3 = p.bounds(3.0);
    CHECK(b3.m2 == doctest::Approx(6.0 * alpha * 3.0).epsilon(1e-15));
    const double l_norm = p.bounds(0.0).m1;  // alpha term vanishes at 0
    CHECK(b3.m1 ==
          doctest::Approx(l_norm + 3.0 * alpha * 9.0).epsilon(1e-12));
    // nondecreasing in reach
    const LocalBounds b5 = p.bounds(5.0);
    CHECK(b5.m0 >= b3.m0);
    CHECK(b5.m1 >= b3.m1);
    CHECK(b5.m2 >= b3.m2);
}

TEST_CASE("jacobians agree with finite differences") {
    std::mt19937_64 rng(99);
    const LinearProblem diag =
        make_diagonal_problem({1.0, 0.1, 0.01}, Vector{1, 1, 1});
    const OperatorProblem diag_op = diag.as_operator();
    Vector bump(12);
    for (std::size_t i = 0; i < 12; ++i)
        bump[i] = std::exp(-0.5 * std::pow((i / 11.0 - 0.5) / 0.15, 2));
    const OperatorProblem integ =
        make_integral_problem(12, 0.2, bump).as_operator();
    const OperatorProblem cubic =
        make_cubic_problem_with_solution(5, 1.0, Vector(5, 0.4));

    for (int rep = 0; rep < 20; ++rep) {
        check_jacobian_at(diag_op, ball_vector(3, 2.0, rng));
        check_jacobian_at(cubic, ball_vector(5, 2.0, rng));
    }
    for (int rep = 0; rep < 5; ++rep)
        check_jacobian_at(integ, ball_vector(12, 2.0, rng));

    // linear problems have a constant Jacobian, exactly
    const DenseMatrix j1 = diag_op.derivative(ball_vector(3, 1.0, rng));
    const DenseMatrix j2 = diag_op.derivative(ball_vector(3, 1.0, rng));
    CHECK(norm(Vector{j1(0, 0) - j2(0, 0), j1(1, 1) - j2(1, 1)}) == 0.0);
    CHECK(j1(0, 0) == diag.b(0, 0));
}

TEST_CASE("check_monotone certifies the built-ins and flags the fixture") {
    const OperatorProblem diag =
        make_diagonal_problem({1.0, 0.1, 0.01}, Vector{1, 1, 1})
            .as_operator();
    const MonotoneReport rd = check_monotone(diag, 50, 2.0, 123);
    CHECK(rd.pass);
    // symmetric part of B = diag(lambda_i^2): smallest eigenvalue 1e-4
    CHECK(rd.min_sym_eigenvalue == doctest::Approx(1e-4).epsilon(1e-10));

    const OperatorProblem cubic =
        make_cubic_problem_with_solution(5, 1.0, Vector(5, 0.4));
    CHECK(check_monotone(cubic, 50, 2.0, 123).pass);

    const MonotoneReport bad =
        check_monotone(negated_identity_fixture(3), 20, 1.0, 7);
    CHECK(!bad.pass);
    CHECK(bad.min_pair_certificate < 0.0);
    CHECK(bad.min_sym_eigenvalue == doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("with_rhs replaces the data term") {
    const OperatorProblem p =
        make_cubic_problem_with_solution(3, 1.0, Vector{1, 0, -1});
    const Vector u{0.3, -0.2, 0.5};
    Vector f2 = p.rhs();
    f2[0] += 0.25;
    const OperatorProblem p2 = p.with_rhs(f2);
    const Vector d = p.apply(u) - p2.apply(u);
    CHECK(d[0] == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(d[1] == 0.0);
    CHECK(d[2] == 0.0);

    // linear problems map data through A^T
    const LinearProblem diag = make_diagonal_problem({2.0, 0.5}, Vector{1, 1});
    const OperatorProblem op = diag.as_operator();
    Vector fd = diag.f;
    fd[0] += 1.0;
    const OperatorProblem noisy = op.with_rhs(fd);
    const Vector shift = noisy.apply(Vector(2)) - op.apply(Vector(2));
    CHECK(shift[0] == doctest::Approx(-2.0).epsilon(1e-15));  // -A^T e0
    CHECK(shift[1] == 0.0);
}
