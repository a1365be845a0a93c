#include <doctest.h>

#include <cmath>
#include <random>

#include "dsm/path.hpp"
#include "dsm/random.hpp"

using namespace dsm;

namespace {

// 1-D bisection oracle for V^3 + V = 1, independent of the Newton path.
double cubic_root_by_bisection() {
    double lo = 0.0, hi = 1.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (mid * mid * mid + mid - 1.0 > 0.0)
            hi = mid;
        else
            lo = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("solve_V reproduces the diagonal closed form") {
    const OperatorProblem p =
        make_diagonal_problem({1.0, 0.1, 0.01}, Vector{1, 1, 1})
            .as_operator();
    const PathPoint point = solve_V(p, 0.01, Vector(3));
    CHECK(point.v[0] == doctest::Approx(1.0 / 1.01).epsilon(1e-11));
    CHECK(point.v[1] == doctest::Approx(0.5).epsilon(1e-11));
    CHECK(point.v[2] == doctest::Approx(0.0001 / 0.0101).epsilon(1e-11));
    CHECK(point.residual <= 1e-11 * (1.0 + norm(point.v)));
}

TEST_CASE("newton solves linear problems in one step") {
    const OperatorProblem p =
        make_diagonal_problem({1.0, 0.5}, Vector{2, -1}).as_operator();
    std::mt19937_64 rng(17);
    for (int rep = 0; rep < 5; ++rep) {
        const PathPoint point = solve_V(p, 0.3, ball_vector(2, 5.0, rng));
        CHECK(point.newton_iters == 1);
    }
}

TEST_CASE("scalar cubic equation against a bisection oracle") {
    // n = 1: the Laplacian degenerates to zero, so G(V) = V^3 + V - 1
    const OperatorProblem p =
        make_cubic_monotone_problem(1, 1.0, Vector{1.0});
    const PathPoint point = solve_V(p, 1.0, Vector(1));
    CHECK(point.v[0] ==
          doctest::Approx(cubic_root_by_bisection()).epsilon(1e-9));
}

TEST_CASE("path: v decreases along the diagonal family") {
    const LinearProblem lin =
        make_diagonal_problem({1.0, 0.1, 0.01}, Vector{1, 1, 1});
    const OperatorProblem p = lin.as_operator();
    const EpsilonSchedule s(1.0, 2.0, 0.5);
    // times hitting eps = 1e-1, 1e-3, 1e-5
    std::vector<double> times;
    for (double eps : {1e-1, 1e-3, 1e-5})
        times.push_back(s.time_for_eps_factor(eps / s.eps(0.0)));
    const auto points = path(p, s, times);
    REQUIRE(points.size() == 3);
    const Vector& y = *p.known_solution();
    double prev = norm(points[0].v - y);
    for (std::size_t i = 1; i < points.size(); ++i) {
        const double v = norm(points[i].v - y);
        CHECK(v <= prev + 1e-9);
        prev = v;
    }
    // closed-form check of v at the last point
    const double eps = points.back().eps;
    double v2 = 0.0;
    for (double l : {1.0, 0.1, 0.01}) {
        const double c = eps / (l * l + eps);
        v2 += c * c;
    }
    CHECK(norm(points.back().v - y) ==
          doctest::Approx(std::sqrt(v2)).epsilon(1e-8));
}

TEST_CASE("zero data gives the zero path") {
    const OperatorProblem p = make_cubic_monotone_problem(3, 1.0, Vector(3));
    const PathPoint point = solve_V(p, 100.0, Vector{0.5, -0.5, 0.5});
    CHECK(norm(point.v) <= 1e-10);
}

TEST_CASE("continuation warm starts beat cold starts on the cubic") {
    Vector y(6);
    for (std::size_t i = 0; i < 6; ++i)
        y[i] = std::sin(3.14159 * (i + 0.5) / 6.0);
    y *= 1.0 / norm(y);
    const OperatorProblem p = make_cubic_problem_with_solution(6, 1.0, y);
    const EpsilonSchedule s = derive_schedule(18.0, 1.0, 0.5);
    std::vector<double> times;
    for (int i = 0; i < 12; ++i)
        times.push_back(s.time_for_eps_factor(std::pow(10.0, -i / 4.0)));

    const auto warm = path(p, s, times);
    int warm_total = 0, cold_total = 0;
    for (const PathPoint& pt : warm) warm_total += pt.newton_iters;
    for (double t : times)
        cold_total += solve_V(p, s.eps(t), Vector(6)).newton_iters;
    CHECK(warm_total <= cold_total);
}

TEST_CASE("path bounds hold on the scalar diagonal problem") {
    const OperatorProblem p =
        make_diagonal_problem({1.0}, Vector{1.0}).as_operator();
    const EpsilonSchedule s(1.0, 2.0, 0.5);
    std::vector<double> times;
    for (int i = 0; i <= 20; ++i) times.push_back(static_cast<double>(i));
    const auto points = path(p, s, times);
    // scalar closed form: V = 1/(1+eps) <= 1
    for (const PathPoint& pt : points)
        CHECK(norm(pt.v) == doctest::Approx(1.0 / (1.0 + pt.eps))
                                .epsilon(1e-10));
    const PathBoundsReport report = check_path_bounds(points, s, 1.0);
    CHECK(report.norm_ok);
    CHECK(report.derivative_ok);
    CHECK(report.pass);
}

TEST_CASE("path bounds are vacuous for zero data") {
    const OperatorProblem p = make_cubic_monotone_problem(3, 1.0, Vector(3));
    const EpsilonSchedule s(1.0, 2.0, 0.5);
    const auto points = path(p, s, {0.0, 1.0, 2.0});
    const PathBoundsReport report = check_path_bounds(points, s, 0.0);
    CHECK(report.pass);
}

TEST_CASE("solve_V is insensitive to the starting guess") {
    const OperatorProblem p =
        make_cubic_problem_with_solution(4, 1.0, Vector{0.5, 0.2, -0.3, 0.4});
    std::mt19937_64 rng(23);
    const PathPoint a = solve_V(p, 0.05, ball_vector(4, 3.0, rng));
    const PathPoint b = solve_V(p, 0.05, ball_vector(4, 3.0, rng));
    CHECK(norm(a.v - b.v) <= 1e-8);
}

TEST_CASE("regularized jacobian stays uniformly positive at V") {
    const OperatorProblem p =
        make_cubic_problem_with_solution(4, 1.0, Vector{0.5, 0.2, -0.3, 0.4});
    const double eps = 0.05;
    const PathPoint point = solve_V(p, eps, Vector(4));
    DenseMatrix j = p.derivative(point.v);
    j.add_scaled_identity(eps);
    CHECK(symmetric_min_eigenvalue(j) >= eps - 1e-10);
}

TEST_CASE("v at the smallest eps is small when the spectrum allows") {
    // all lambda_i^2 >= 1e-4: v(eps = 1e-6 eps(0)) <= 0.01 ||y||
    const LinearProblem lin =
        make_diagonal_problem({1.0, 0.1, 0.01}, Vector{1, 1, 1});
    const OperatorProblem p = lin.as_operator();
    const EpsilonSchedule s(1.0, 2.0, 0.5);
    const double t = s.time_for_eps_factor(1e-6);
    const auto points = path(p, s, {0.0, t});
    const double v = norm(points.back().v - *p.known_solution());
    CHECK(v <= 0.01 * norm(*p.known_solution()));
}

TEST_CASE("newton failure paths") {
    const OperatorProblem p =
        make_cubic_problem_with_solution(3, 1.0, Vector{1, 1, 1});
    NewtonOptions opts;
    opts.max_iters = 1;
    CHECK_THROWS_AS(solve_V(p, 1e-3, Vector{5, -5, 5}, opts), NoConvergence);
    CHECK_THROWS_AS(solve_V(p, 0.0, Vector(3)), ConfigError);
    CHECK_THROWS_AS(path(p, EpsilonSchedule(1, 2, 0.5), {1.0, 0.5}),
                    ConfigError);
}
