#ifndef DSM_QUADRATURE_HPP
#define DSM_QUADRATURE_HPP

#include <cmath>
#include <string>

#include "dsm/errors.hpp"

namespace dsm::quadrature {

namespace detail {

inline double simpson(double a, double b, double fa, double fm, double fb) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

template <class F>
double adaptive(F&& f, double a, double fa, double b, double fb, double m,
                double fm, double whole, double tol, int depth) {
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = simpson(a, m, fa, flm, fm);
    const double right = simpson(m, b, fm, frm, fb);
    const double delta = left + right - whole;
    if (std::fabs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    if (depth <= 0)
        throw QuadratureFailure("adaptive Simpson: depth exhausted on [" +
                                std::to_string(a) + ", " + std::to_string(b) +
                                "]");
    return adaptive(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
           adaptive(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

/// Adaptive Simpson quadrature of f over [a, b] to absolute tolerance tol.
template <class F>
double adaptive_simpson(F&& f, double a, double b, double tol,
                        int max_depth = 60) {
    if (a == b) return 0.0;
    const double fa = f(a), fb = f(b);
    const double m = 0.5 * (a + b);
    const double fm = f(m);
    const double whole = detail::simpson(a, b, fa, fm, fb);
    return detail::adaptive(f, a, fa, b, fb, m, fm, whole, tol, max_depth);
}

}  // namespace dsm::quadrature

#endif  // DSM_QUADRATURE_HPP
