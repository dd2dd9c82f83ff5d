#include "humps/integrate.hpp"

#include <algorithm>
#include <cmath>

namespace humps {

namespace {

// quintic Hermite basis on [0,1] for (p0, m0, a0, p1, m1, a1)
inline double quinticH(double s, double h, double p0, double m0, double a0, double p1,
                       double m1, double a1) {
    double s2 = s * s, s3 = s2 * s, s4 = s3 * s, s5 = s4 * s;
    double H0 = 1 - 10 * s3 + 15 * s4 - 6 * s5;
    double H1 = s - 6 * s3 + 8 * s4 - 3 * s5;
    double H2 = 0.5 * (s2 - 3 * s3 + 3 * s4 - s5);
    double H3 = 10 * s3 - 15 * s4 + 6 * s5;
    double H4 = -4 * s3 + 7 * s4 - 3 * s5;
    double H5 = 0.5 * (s3 - 2 * s4 + s5);
    return H0 * p0 + h * (H1 * m0 + H4 * m1) + h * h * (H2 * a0 + H5 * a1) + H3 * p1;
}

inline double quinticHdot(double s, double h, double p0, double m0, double a0, double p1,
                          double m1, double a1) {
    double s2 = s * s, s3 = s2 * s, s4 = s3 * s;
    double d0 = -30 * s2 + 60 * s3 - 30 * s4;
    double d1 = 1 - 18 * s2 + 32 * s3 - 15 * s4;
    double d2 = 0.5 * (2 * s - 9 * s2 + 12 * s3 - 5 * s4);
    double d3 = 30 * s2 - 60 * s3 + 30 * s4;
    double d4 = -12 * s2 + 28 * s3 - 15 * s4;
    double d5 = 0.5 * (3 * s2 - 8 * s3 + 5 * s4);
    return (d0 * p0 + h * (d1 * m0 + d4 * m1) + h * h * (d2 * a0 + d5 * a1) + d3 * p1) / h;
}

inline double cubicH(double s, double h, double p0, double m0, double p1, double m1) {
    double s2 = s * s, s3 = s2 * s;
    double h00 = 1 - 3 * s2 + 2 * s3;
    double h10 = s - 2 * s2 + s3;
    double h01 = 3 * s2 - 2 * s3;
    double h11 = -s2 + s3;
    return h00 * p0 + h * h10 * m0 + h01 * p1 + h * h11 * m1;
}

inline double cubicHdot(double s, double h, double p0, double m0, double p1, double m1) {
    double s2 = s * s;
    double d00 = -6 * s + 6 * s2;
    double d10 = 1 - 4 * s + 3 * s2;
    double d01 = 6 * s - 6 * s2;
    double d11 = -2 * s + 3 * s2;
    return (d00 * p0 + h * d10 * m0 + d01 * p1 + h * d11 * m1) / h;
}

} // namespace

std::pair<double, double> Trajectory::eval(double tt) const {
    if (t.size() < 2) return {u.empty() ? 0.0 : u.front(), y.empty() ? 0.0 : y.front()};
    if (tt <= t.front()) return {u.front(), y.front()};
    if (tt >= t.back()) return {u.back(), y.back()};
    size_t hi = static_cast<size_t>(std::upper_bound(t.begin(), t.end(), tt) - t.begin());
    size_t lo = hi - 1;
    double h = t[hi] - t[lo];
    double s = (tt - t[lo]) / h;
    double uu = quinticH(s, h, u[lo], y[lo], ypR[lo], u[hi], y[hi], ypL[hi]);
    double yy = cubicH(s, h, y[lo], ypR[lo], y[hi], ypL[hi]);
    return {uu, yy};
}

double Trajectory::evalYdot(double tt) const {
    if (t.size() < 2) return 0.0;
    if (tt <= t.front()) return ypR.front();
    if (tt >= t.back()) return ypL.back();
    size_t hi = static_cast<size_t>(std::upper_bound(t.begin(), t.end(), tt) - t.begin());
    size_t lo = hi - 1;
    double h = t[hi] - t[lo];
    double s = (tt - t[lo]) / h;
    return cubicHdot(s, h, y[lo], ypR[lo], y[hi], ypL[hi]);
}

namespace {

double extremizeU(const Trajectory& tr, double lo, double hi, bool maximize) {
    lo = std::max(lo, tr.t0());
    hi = std::min(hi, tr.t1());
    if (!(hi >= lo)) return maximize ? -1e300 : 1e300;
    double best = tr.eval(lo).first;
    auto consider = [&](double v) {
        if (maximize ? (v > best) : (v < best)) best = v;
    };
    consider(tr.eval(hi).first);
    size_t i0 = static_cast<size_t>(std::lower_bound(tr.t.begin(), tr.t.end(), lo) -
                                    tr.t.begin());
    if (i0 > 0) --i0;
    for (size_t i = i0; i + 1 < tr.t.size() && tr.t[i] < hi; ++i) {
        double a = std::max(lo, tr.t[i]);
        double b = std::min(hi, tr.t[i + 1]);
        if (!(b > a)) continue;
        // sample the quintic, refine the best bracket
        const int n = 8;
        double bt = a;
        for (int k = 0; k <= n; ++k) {
            double tt = a + (b - a) * k / n;
            double v = tr.eval(tt).first;
            if (maximize ? (v > best) : (v < best)) { best = v; bt = tt; }
        }
        double ra = std::max(a, bt - (b - a) / n);
        double rb = std::min(b, bt + (b - a) / n);
        for (int it = 0; it < 60 && rb - ra > 1e-14 * (1 + std::fabs(ra)); ++it) {
            double m1 = ra + 0.381966 * (rb - ra);
            double m2 = rb - 0.381966 * (rb - ra);
            double v1 = tr.eval(m1).first, v2 = tr.eval(m2).first;
            if (maximize ? (v1 >= v2) : (v1 <= v2)) rb = m2;
            else ra = m1;
        }
        consider(tr.eval(0.5 * (ra + rb)).first);
    }
    return best;
}

} // namespace

double Trajectory::maxU(double lo, double hi) const { return extremizeU(*this, lo, hi, true); }
double Trajectory::minU(double lo, double hi) const { return extremizeU(*this, lo, hi, false); }

double Trajectory::maxAbsY() const {
    double m = 0.0;
    for (double v : y) m = std::max(m, std::fabs(v));
    return m;
}

double trajectory_defect(const Trajectory& traj, const Weight& w, const Nonlinearity& g) {
    if (traj.t.size() < 2) return 0.0;
    double scale = 1.0;
    for (size_t i = 0; i < traj.t.size(); ++i)
        scale = std::max({scale, std::fabs(traj.u[i]), std::fabs(traj.y[i])});
    double worst = 0.0;
    for (size_t i = 0; i + 1 < traj.t.size(); ++i) {
        double h = traj.t[i + 1] - traj.t[i];
        for (int k = 1; k < 4; ++k) { // 4x refinement: 3 interior checkpoints
            double s = k / 4.0;
            double tt = traj.t[i] + s * h;
            double uu = quinticH(s, h, traj.u[i], traj.y[i], traj.ypR[i], traj.u[i + 1],
                                 traj.y[i + 1], traj.ypL[i + 1]);
            double yy = cubicH(s, h, traj.y[i], traj.ypR[i], traj.y[i + 1], traj.ypL[i + 1]);
            double du = quinticHdot(s, h, traj.u[i], traj.y[i], traj.ypR[i], traj.u[i + 1],
                                    traj.y[i + 1], traj.ypL[i + 1]);
            double dy = cubicHdot(s, h, traj.y[i], traj.ypR[i], traj.y[i + 1], traj.ypL[i + 1]);
            double q = w.evaluate(tt, traj.lambda, traj.mu);
            double fy = -q * g(uu) - traj.c * yy;
            double defect = std::max(std::fabs(du - yy), std::fabs(dy - fy));
            worst = std::max(worst, defect / scale);
        }
    }
    return worst;
}

double boundK(const Weight& w, const Nonlinearity& g, double lambda, double R) {
    if (!(R > 0.0)) throw NonPositiveInput("boundK: R must be > 0");
    const auto& d = w.decompose();
    WeightIntegrals wi = w.integrals();
    double gs = g.gStar(R);
    double K = 0.0;
    for (size_t i = 0; i < d.humps.size(); ++i)
        K = std::max(K, R / wi.lenPlus[i] + lambda * wi.normPlus[i] * gs);
    return K;
}

} // namespace humps
