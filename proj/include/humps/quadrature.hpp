#pragma once

#include <cmath>
#include <functional>

#include "humps/errors.hpp"

namespace humps {

// Adaptive Simpson quadrature. Tolerance is relative to the accumulated
// integral magnitude with an absolute floor, so sign-definite integrands of
// any scale behave. Depth guard turns pathological integrands into
// QuadratureFailure instead of a silent wrong answer.
namespace detail {

inline double simpson(double a, double fa, double b, double fb, double fm) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

inline double adapt(const std::function<double(double)>& f, double a, double fa, double b,
                    double fb, double m, double fm, double whole, double tol, int depth) {
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = f(lm), frm = f(rm);
    double left = simpson(a, fa, m, fm, flm);
    double right = simpson(m, fm, b, fb, frm);
    double delta = left + right - whole;
    if (std::fabs(delta) <= 15.0 * tol || (b - a) < 1e-14 * (1.0 + std::fabs(a)))
        return left + right + delta / 15.0;
    if (depth <= 0)
        throw QuadratureFailure("adaptive quadrature: tolerance unreachable");
    return adapt(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
           adapt(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

} // namespace detail

inline double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                 double relTol = 1e-12, double absFloor = 1e-300,
                                 int maxDepth = 48) {
    if (a == b) return 0.0;
    double fa = f(a), fb = f(b);
    double m = 0.5 * (a + b), fm = f(m);
    double whole = detail::simpson(a, fa, b, fb, fm);
    double tol = relTol * (std::fabs(whole) + absFloor) + 1e-300;
    // Split once unconditionally so symmetric integrands do not fool the
    // first error estimate.
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = f(lm), frm = f(rm);
    double left = detail::simpson(a, fa, m, fm, flm);
    double right = detail::simpson(m, fm, b, fb, frm);
    double estimate = left + right;
    tol = relTol * (std::fabs(estimate) + absFloor) + 1e-300;
    return detail::adapt(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, maxDepth) +
           detail::adapt(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, maxDepth);
}

} // namespace humps
