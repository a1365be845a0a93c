#include <doctest.h>

#include <cmath>
#include <vector>

#include "dsm/ode.hpp"
#include "dsm/quadrature.hpp"

using dsm::ode::Options;
using dsm::ode::integrate_dopri5;

namespace {
auto no_observe = [](double, const double*) {};
}

TEST_CASE("exponential decay") {
    double u = 1.0;
    auto rhs = [](double, const double* y, double* dy) { dy[0] = -y[0]; };
    integrate_dopri5(1, rhs, 0.0, 2.0, &u, Options{}, no_observe);
    CHECK(u == doctest::Approx(std::exp(-2.0)).epsilon(1e-8));
}

TEST_CASE("driven scalar equation against sin") {
    double u = 0.0;
    auto rhs = [](double t, const double*, double* dy) { dy[0] = std::cos(t); };
    integrate_dopri5(1, rhs, 0.0, 3.0, &u, Options{}, no_observe);
    CHECK(u == doctest::Approx(std::sin(3.0)).epsilon(1e-6));
}

TEST_CASE("harmonic oscillator keeps energy at tolerance") {
    std::vector<double> u = {1.0, 0.0};
    auto rhs = [](double, const double* y, double* dy) {
        dy[0] = y[1];
        dy[1] = -y[0];
    };
    Options opt;
    opt.rel_tol = 1e-10;
    opt.abs_tol = 1e-12;
    integrate_dopri5(2, rhs, 0.0, 20.0, u.data(), opt, no_observe);
    CHECK(u[0] * u[0] + u[1] * u[1] == doctest::Approx(1.0).epsilon(1e-7));
    CHECK(u[0] == doctest::Approx(std::cos(20.0)).epsilon(1e-6));
}

TEST_CASE("halving the tolerance tightens the answer") {
    auto run = [](double rtol) {
        double u = 1.0;
        auto rhs = [](double t, const double* y, double* dy) {
            dy[0] = -y[0] + std::sin(0.3 * t);
        };
        Options opt;
        opt.rel_tol = rtol;
        opt.abs_tol = rtol * 1e-2;
        integrate_dopri5(1, rhs, 0.0, 10.0, &u, opt, no_observe);
        return u;
    };
    const double coarse = run(1e-6);
    const double fine = run(1e-12);
    CHECK(std::fabs(coarse - fine) <= 1e-5);
    CHECK(std::fabs(run(1e-10) - fine) <= 1e-8);
}

TEST_CASE("observer sees t0 and the exact end time") {
    std::vector<double> seen;
    double u = 1.0;
    auto rhs = [](double, const double* y, double* dy) { dy[0] = -y[0]; };
    integrate_dopri5(1, rhs, 0.0, 5.0, &u, Options{},
                     [&](double t, const double*) { seen.push_back(t); });
    REQUIRE(!seen.empty());
    CHECK(seen.front() == 0.0);
    CHECK(seen.back() == 5.0);
    for (std::size_t i = 0; i + 1 < seen.size(); ++i)
        CHECK(seen[i] < seen[i + 1]);
}

TEST_CASE("step size collapse near a pole") {
    double u = 0.0;
    auto rhs = [](double t, const double*, double* dy) {
        dy[0] = 1.0 / (1.0 - t);
    };
    CHECK_THROWS_AS(
        integrate_dopri5(1, rhs, 0.0, 2.0, &u, Options{}, no_observe),
        dsm::StepSizeCollapse);
}

TEST_CASE("step budget is enforced") {
    double u = 1.0;
    auto rhs = [](double, const double* y, double* dy) { dy[0] = -y[0]; };
    Options opt;
    opt.max_steps = 3;
    CHECK_THROWS_AS(
        integrate_dopri5(1, rhs, 0.0, 1000.0, &u, opt, no_observe),
        dsm::MaxStepsExceeded);
}

TEST_CASE("quadrature edge paths") {
    // smooth integrand to tight tolerance
    const double val = dsm::quadrature::adaptive_simpson(
        [](double s) { return std::exp(-s); }, 0.0, 3.0, 1e-12);
    CHECK(val == doctest::Approx(1.0 - std::exp(-3.0)).epsilon(1e-11));
    CHECK(dsm::quadrature::adaptive_simpson(
              [](double s) { return s; }, 2.0, 2.0, 1e-12) == 0.0);
    // non-integrable singularity exhausts the recursion depth
    CHECK_THROWS_AS(dsm::quadrature::adaptive_simpson(
                        [](double s) { return 1.0 / s; }, 0.0, 1.0, 1e-10),
                    dsm::QuadratureFailure);
}
