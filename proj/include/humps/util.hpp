#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

#include "humps/qmath.hpp"

namespace humps {

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    double length() const { return hi - lo; }
    bool contains(double t) const { return t >= lo && t <= hi; }
};

// Dense LU with partial pivoting, templated so the multiple-shooting Newton
// can run at any precision rung. Systems here are tiny (<= 128x128).
template <class Real>
bool lu_solve(std::vector<Real>& a, std::vector<Real>& b, int n) {
    std::vector<int> piv(n);
    for (int i = 0; i < n; ++i) piv[i] = i;
    for (int col = 0; col < n; ++col) {
        int best = col;
        Real bestAbs = fabs(a[col * n + col]);
        for (int row = col + 1; row < n; ++row) {
            Real v = fabs(a[row * n + col]);
            if (v > bestAbs) { best = row; bestAbs = v; }
        }
        if (!(bestAbs > Real(0))) return false;
        if (best != col) {
            for (int k = 0; k < n; ++k) std::swap(a[col * n + k], a[best * n + k]);
            std::swap(b[col], b[best]);
        }
        Real invp = Real(1) / a[col * n + col];
        for (int row = col + 1; row < n; ++row) {
            Real f = a[row * n + col] * invp;
            if (f == Real(0)) continue;
            a[row * n + col] = f;
            for (int k = col + 1; k < n; ++k) a[row * n + k] -= f * a[col * n + k];
            b[row] -= f * b[col];
        }
    }
    for (int row = n - 1; row >= 0; --row) {
        Real s = b[row];
        for (int k = row + 1; k < n; ++k) s -= a[row * n + k] * b[k];
        b[row] = s / a[row * n + row];
    }
    return true;
}

// Scalar golden-section refinement of a bracketed extremum.
inline double golden_refine(const std::function<double(double)>& f, double a, double b,
                            bool maximize, double xtol) {
    const double phi = 0.6180339887498949;
    double x1 = b - phi * (b - a);
    double x2 = a + phi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    while (b - a > xtol) {
        bool pickLeft = maximize ? (f1 >= f2) : (f1 <= f2);
        if (pickLeft) {
            b = x2; x2 = x1; f2 = f1;
            x1 = b - phi * (b - a);
            f1 = f(x1);
        } else {
            a = x1; x1 = x2; f1 = f2;
            x2 = a + phi * (b - a);
            f2 = f(x2);
        }
    }
    return 0.5 * (a + b);
}

// Extremum over [a,b]: dense pre-scan followed by golden-section refinement
// of the best bracket.
inline double scan_extremize(const std::function<double(double)>& f, double a, double b,
                             bool maximize, int samples = 2048, double xtol = 1e-12) {
    if (!(b > a)) return f(a);
    int n = std::max(samples, 8);
    double bestX = a, bestF = f(a);
    double h = (b - a) / n;
    int bestI = 0;
    for (int i = 1; i <= n; ++i) {
        double x = (i == n) ? b : a + i * h;
        double v = f(x);
        if (maximize ? (v > bestF) : (v < bestF)) { bestF = v; bestX = x; bestI = i; }
    }
    double lo = std::max(a, a + (bestI - 1) * h);
    double hi = std::min(b, a + (bestI + 1) * h);
    double x = golden_refine(f, lo, hi, maximize, xtol);
    double v = f(x);
    if (maximize ? (v >= bestF) : (v <= bestF)) return v;
    (void)bestX;
    return bestF;
}

// Bisection on a bracketing interval; f(lo) and f(hi) must have opposite signs.
inline double bisect_root(const std::function<double(double)>& f, double lo, double hi,
                          double flo, double fhi, int maxIter = 200) {
    if (flo == 0) return lo;
    if (fhi == 0) return hi;
    if ((flo > 0) == (fhi > 0)) throw std::invalid_argument("bisect_root: no sign change");
    for (int it = 0; it < maxIter; ++it) {
        double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        double fm = f(mid);
        if (fm == 0) return mid;
        if ((fm > 0) == (flo > 0)) { lo = mid; flo = fm; }
        else { hi = mid; fhi = fm; }
    }
    return 0.5 * (lo + hi);
}

inline bool nearly_equal(double a, double b, double tol) { return std::fabs(a - b) <= tol; }

} // namespace humps
