#ifndef DSM_ODE_HPP
#define DSM_ODE_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "dsm/errors.hpp"

// Adaptive embedded Runge-Kutta integration with the Dormand-Prince 5(4)
// pair. The layout follows the classic dopri5 codes: FSAL, error estimate
// from the embedded 4th-order weights, step controller with the usual
// safety factor plus mild PI stabilization so the step size settles
// smoothly when it is limited by stability rather than accuracy.

namespace dsm::ode {

struct Options {
    double rel_tol = 1e-8;
    double abs_tol = 1e-10;
    long max_steps = 50'000'000;
    double initial_step = 0.0;  // 0: choose automatically
};

struct Stats {
    long accepted = 0;
    long rejected = 0;
    long rhs_evals = 0;
};

namespace detail {

// Dormand-Prince coefficients.
inline constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5,
                        c5 = 8.0 / 9;
inline constexpr double a21 = 1.0 / 5;
inline constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
inline constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
inline constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                        a53 = 64448.0 / 6561, a54 = -212.0 / 729;
inline constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                        a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                        a65 = -5103.0 / 18656;
inline constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                        b5 = -2187.0 / 6784, b6 = 11.0 / 84;
// b - bhat, the embedded error weights (stage 7 = FSAL).
inline constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695,
                        e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                        e6 = 22.0 / 525, e7 = -1.0 / 40;

}  // namespace detail

/// Integrate du/dt = f(t, u) from t0 to t1 in place.
///
/// RHS signature: void(double t, const double* u, double* dudt).
/// Observer signature: void(double t, const double* u); called once at t0
/// and after every accepted step (including the final clamped one).
template <class Rhs, class Observer>
Stats integrate_dopri5(std::size_t dim, Rhs&& rhs, double t0, double t1,
                       double* u, const Options& opt, Observer&& observe) {
    if (!(t1 > t0)) throw Error("config", "integrate: t1 must exceed t0");
    const std::size_t n = dim;
    std::vector<double> k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n),
        utmp(n), unew(n);

    Stats stats;
    double t = t0;
    rhs(t, u, k1.data());
    ++stats.rhs_evals;
    observe(t, u);

    // Initial step: small fraction of the scale suggested by u'/u, with a
    // span-based fallback when the start state is degenerate (u0 = 0).
    const double span = t1 - t0;
    const double h_floor = 1e-14 * span;
    double h = opt.initial_step;
    if (h <= 0.0) {
        double d0 = 0.0, d1 = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double sc = opt.abs_tol + opt.rel_tol * std::fabs(u[i]);
            d0 = std::fmax(d0, std::fabs(u[i]) / sc);
            d1 = std::fmax(d1, std::fabs(k1[i]) / sc);
        }
        h = (d0 > 1e-10 && d1 > 1e-10) ? 0.01 * d0 / d1 : 1e-6 * span;
    }
    h = std::clamp(h, 16.0 * h_floor, 0.1 * span);
    double err_old = 1e-4;
    bool rejected_last = false;

    while (t < t1) {
        if (stats.accepted + stats.rejected >= opt.max_steps)
            throw MaxStepsExceeded("integrate: exceeded " +
                                   std::to_string(opt.max_steps) + " steps");
        if (h < h_floor)
            throw StepSizeCollapse("integrate: step " + std::to_string(h) +
                                   " below floor at t=" + std::to_string(t));
        bool last = false;
        if (t + h >= t1) { h = t1 - t; last = true; }

        for (std::size_t i = 0; i < n; ++i)
            utmp[i] = u[i] + h * detail::a21 * k1[i];
        rhs(t + detail::c2 * h, utmp.data(), k2.data());
        for (std::size_t i = 0; i < n; ++i)
            utmp[i] = u[i] + h * (detail::a31 * k1[i] + detail::a32 * k2[i]);
        rhs(t + detail::c3 * h, utmp.data(), k3.data());
        for (std::size_t i = 0; i < n; ++i)
            utmp[i] = u[i] + h * (detail::a41 * k1[i] + detail::a42 * k2[i] +
                                  detail::a43 * k3[i]);
        rhs(t + detail::c4 * h, utmp.data(), k4.data());
        for (std::size_t i = 0; i < n; ++i)
            utmp[i] = u[i] + h * (detail::a51 * k1[i] + detail::a52 * k2[i] +
                                  detail::a53 * k3[i] + detail::a54 * k4[i]);
        rhs(t + detail::c5 * h, utmp.data(), k5.data());
        for (std::size_t i = 0; i < n; ++i)
            utmp[i] = u[i] + h * (detail::a61 * k1[i] + detail::a62 * k2[i] +
                                  detail::a63 * k3[i] + detail::a64 * k4[i] +
                                  detail::a65 * k5[i]);
        rhs(t + h, utmp.data(), k6.data());
        for (std::size_t i = 0; i < n; ++i)
            unew[i] = u[i] + h * (detail::b1 * k1[i] + detail::b3 * k3[i] +
                                  detail::b4 * k4[i] + detail::b5 * k5[i] +
                                  detail::b6 * k6[i]);
        rhs(t + h, unew.data(), k7.data());
        stats.rhs_evals += 6;

        double err = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double e = h * (detail::e1 * k1[i] + detail::e3 * k3[i] +
                                  detail::e4 * k4[i] + detail::e5 * k5[i] +
                                  detail::e6 * k6[i] + detail::e7 * k7[i]);
            const double sc = opt.abs_tol +
                opt.rel_tol * std::fmax(std::fabs(u[i]), std::fabs(unew[i]));
            err += (e / sc) * (e / sc);
        }
        err = std::sqrt(err / static_cast<double>(n));
        if (!std::isfinite(err)) err = 1e10;

        if (err <= 1.0) {
            t = last ? t1 : t + h;
            std::copy(unew.begin(), unew.end(), u);
            std::swap(k1, k7);  // FSAL
            ++stats.accepted;
            observe(t, u);
            const double fac = std::pow(std::fmax(err, 1e-16), 0.17) /
                               std::pow(err_old, 0.04);
            double grow = 0.9 / std::fmax(fac, 1e-4);
            grow = std::clamp(grow, 0.2, rejected_last ? 1.0 : 10.0);
            h *= grow;
            err_old = std::fmax(err, 1e-16);
            rejected_last = false;
        } else {
            ++stats.rejected;
            const double shrink =
                std::clamp(0.9 * std::pow(err, -0.2), 0.1, 0.9);
            h *= shrink;
            rejected_last = true;
        }
    }
    return stats;
}

}  // namespace dsm::ode

#endif  // DSM_ODE_HPP
