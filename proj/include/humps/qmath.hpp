#pragma once

// Scalar abstraction so the integrator and shooting machinery can run at
// double, long double or (on GCC/Clang with libquadmath) __float128.
// Certified parameter regimes push the flow's condition number past what
// 53-bit arithmetic can represent; the quad rung exists for those runs.

#include <cmath>
#include <cstdio>
#include <limits>
#include <string>

#if defined(__SIZEOF_FLOAT128__) && !defined(HUMPS_NO_QUADMATH)
#include <quadmath.h>
#define HUMPS_HAVE_QUAD 1
#endif

namespace humps {

using std::cos;
using std::exp;
using std::fabs;
using std::isfinite;
using std::log;
using std::pow;
using std::sin;
using std::sqrt;
using std::atan;

template <class Real>
struct real_traits {
    static constexpr Real epsilon() { return std::numeric_limits<Real>::epsilon(); }
    static std::string name();
};

template <> inline std::string real_traits<double>::name() { return "double"; }
template <> inline std::string real_traits<long double>::name() { return "longdouble"; }

template <class Real>
inline std::string format_real(Real x, int digits = 17) {
    char buf[128];
    std::snprintf(buf, sizeof(buf), "%.*Lg", digits, static_cast<long double>(x));
    return buf;
}

#ifdef HUMPS_HAVE_QUAD

inline __float128 sin(__float128 x) { return ::sinq(x); }
inline __float128 cos(__float128 x) { return ::cosq(x); }
inline __float128 exp(__float128 x) { return ::expq(x); }
inline __float128 log(__float128 x) { return ::logq(x); }
inline __float128 sqrt(__float128 x) { return ::sqrtq(x); }
inline __float128 fabs(__float128 x) { return ::fabsq(x); }
inline __float128 pow(__float128 x, __float128 y) { return ::powq(x, y); }
inline __float128 atan(__float128 x) { return ::atanq(x); }
inline bool isfinite(__float128 x) { return ::finiteq(x) != 0; }

template <>
struct real_traits<__float128> {
    // 2^-112, spelled without the Q literal so strict -std=c++20 builds work
    static constexpr __float128 epsilon() {
        return __float128(1) / (__float128(1ull << 56) * __float128(1ull << 56));
    }
    static std::string name() { return "quad"; }
};

template <>
inline std::string format_real<__float128>(__float128 x, int digits) {
    char buf[160];
    ::quadmath_snprintf(buf, sizeof(buf), "%.*Qg", digits, x);
    return buf;
}

using quad = __float128;

#else

// Fallback when the extended type is unavailable: the "quad" rung degrades
// to long double and the affected checks report reduced headroom.
using quad = long double;

#endif

template <class Real>
inline Real real_max(Real a, Real b) { return a > b ? a : b; }

template <class Real>
inline Real real_min(Real a, Real b) { return a < b ? a : b; }

} // namespace humps
