#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

#include "humps/errors.hpp"
#include "humps/nonlinearity.hpp"
#include "humps/qmath.hpp"
#include "humps/weight.hpp"

namespace humps {

enum class BcTag { None, Periodic, Neumann, Dirichlet, MixedLR, MixedRL };

inline std::string bc_name(BcTag bc) {
    switch (bc) {
        case BcTag::None: return "none";
        case BcTag::Periodic: return "periodic";
        case BcTag::Neumann: return "neumann";
        case BcTag::Dirichlet: return "dirichlet";
        case BcTag::MixedLR: return "mixed_lr";
        case BcTag::MixedRL: return "mixed_rl";
    }
    return "?";
}

struct IvpOptions {
    double atol = 1e-10;
    double rtol = 1e-10;
    double maxStep = std::numeric_limits<double>::infinity();
    double fixedStep = 0.0; // > 0 disables adaptivity (order studies)
    long maxSteps = 50'000'000;
    bool denseOutput = true;
};

// Dense two-component trajectory on [t0, t1]. u is interpolated by a quintic
// Hermite (value, first and second derivative at the nodes), y by a cubic.
// Node derivatives keep separate left/right limits so weight breakpoints stay
// exact.
class Trajectory {
public:
    std::vector<double> t;   // nodes, strictly increasing
    std::vector<double> u, y;
    std::vector<double> ypR; // y'(t_i+) for the segment starting at node i
    std::vector<double> ypL; // y'(t_i-) for the segment ending at node i

    double lambda = 0.0, mu = 0.0, c = 0.0;
    BcTag bc = BcTag::None;
    double residual = 0.0;

    double t0() const { return t.front(); }
    double t1() const { return t.back(); }
    size_t segments() const { return t.size() - 1; }

    std::pair<double, double> eval(double tt) const; // (u, y), clamped to [t0, t1]
    double evalU(double tt) const { return eval(tt).first; }
    double evalYdot(double tt) const;                // derivative of the y-interpolant

    // max of u over [lo, hi] via per-segment quintic maximization
    double maxU(double lo, double hi) const;
    double minU(double lo, double hi) const;
    double maxAbsY() const;
};

// max collocation defect on a 4x refined check mesh, scaled dimensionless
double trajectory_defect(const Trajectory& traj, const Weight& w, const Nonlinearity& g);

// --- right-hand sides -------------------------------------------------------

template <class Real>
struct PlanarField {
    const Weight* w;
    const Nonlinearity* g;
    Real lambda, mu, c;

    static constexpr int dim = 2;

    void operator()(Real t, const std::array<Real, 2>& x, std::array<Real, 2>& dx,
                    bool leftLimit) const {
        Real q = leftLimit ? evalLeft(t) : w->evaluate(t, lambda, mu);
        dx[0] = x[1];
        dx[1] = -q * (*g)(x[0]) - c * x[1];
    }

    Real evalLeft(Real t) const {
        // left limit at a breakpoint: nudge into the previous piece by one ulp-ish
        double td = static_cast<double>(t);
        double prev = std::nextafter(td, -std::numeric_limits<double>::infinity());
        Real v = w->evalRaw(t - Real(td - prev));
        if (v >= Real(0)) return lambda * v;
        return mu * v;
    }
};

// planar state + variational 2x2 (columns of the fundamental matrix)
template <class Real>
struct VariationalField {
    PlanarField<Real> base;
    static constexpr int dim = 6;

    void operator()(Real t, const std::array<Real, 6>& x, std::array<Real, 6>& dx,
                    bool leftLimit) const {
        Real q = leftLimit ? base.evalLeft(t) : base.w->evaluate(t, base.lambda, base.mu);
        const Nonlinearity& g = *base.g;
        dx[0] = x[1];
        dx[1] = -q * g(x[0]) - base.c * x[1];
        Real j21 = -q * g.derivative(x[0]);
        // x[2..5] = (phi11, phi12, phi21, phi22)
        dx[2] = x[4];
        dx[3] = x[5];
        dx[4] = j21 * x[2] - base.c * x[4];
        dx[5] = j21 * x[3] - base.c * x[5];
    }
};

// --- segment observers ------------------------------------------------------

template <class Real, int N>
struct StepRecord {
    Real t0, t1;
    std::array<Real, N> x0, x1;
    std::array<Real, N> f0, f1; // derivatives at both ends (f1 = left limit)
};

// Tracks max of u over given windows without storing the trajectory.
template <class Real>
class WindowMaxTracker {
public:
    explicit WindowMaxTracker(std::vector<Interval> windows)
        : windows_(std::move(windows)), maxima_(windows_.size(), Real(0)) {}

    void observe(Real t0, Real u0, Real y0, Real yp0, Real t1, Real u1, Real y1, Real yp1) {
        for (size_t k = 0; k < windows_.size(); ++k) {
            Real lo = real_max(Real(windows_[k].lo), t0);
            Real hi = real_min(Real(windows_[k].hi), t1);
            if (!(hi > lo) && !(hi == lo)) continue;
            if (hi < lo) continue;
            Real h = t1 - t0;
            if (!(h > Real(0))) continue;
            Real cand = segmentMax(t0, u0, y0, yp0, t1, u1, y1, yp1, lo, hi);
            if (cand > maxima_[k]) maxima_[k] = cand;
        }
    }

    const std::vector<Real>& maxima() const { return maxima_; }

private:
    static Real quinticU(Real s, Real h, Real p0, Real m0, Real a0, Real p1, Real m1, Real a1) {
        Real s2 = s * s, s3 = s2 * s, s4 = s3 * s, s5 = s4 * s;
        Real H0 = Real(1) - Real(10) * s3 + Real(15) * s4 - Real(6) * s5;
        Real H1 = s - Real(6) * s3 + Real(8) * s4 - Real(3) * s5;
        Real H2 = (s2 - Real(3) * s3 + Real(3) * s4 - s5) / Real(2);
        Real H3 = Real(10) * s3 - Real(15) * s4 + Real(6) * s5;
        Real H4 = -Real(4) * s3 + Real(7) * s4 - Real(3) * s5;
        Real H5 = (s3 - Real(2) * s4 + s5) / Real(2);
        return H0 * p0 + h * (H1 * m0 + H4 * m1) + h * h * (H2 * a0 + H5 * a1) + H3 * p1;
    }

    Real segmentMax(Real t0, Real u0, Real y0, Real yp0, Real t1, Real u1, Real y1, Real yp1,
                    Real lo, Real hi) const {
        Real h = t1 - t0;
        auto at = [&](Real tt) {
            Real s = (tt - t0) / h;
            return quinticU(s, h, u0, y0, yp0, u1, y1, yp1);
        };
        Real best = at(lo);
        Real bhi = at(hi);
        if (bhi > best) best = bhi;
        const int n = 12;
        Real prev = lo;
        Real bestT = lo;
        for (int i = 1; i <= n; ++i) {
            Real tt = lo + (hi - lo) * Real(i) / Real(n);
            Real v = at(tt);
            if (v > best) { best = v; bestT = tt; }
            prev = tt;
        }
        (void)prev;
        // golden refine around bestT
        Real a = real_max(lo, bestT - (hi - lo) / Real(n));
        Real b = real_min(hi, bestT + (hi - lo) / Real(n));
        for (int it = 0; it < 80 && (b - a) > Real(1e-15) * (Real(1) + fabs(a)); ++it) {
            Real m1 = a + (b - a) * Real(0.381966);
            Real m2 = b - (b - a) * Real(0.381966);
            if (at(m1) >= at(m2)) b = m2;
            else a = m1;
        }
        Real v = at((a + b) / Real(2));
        return v > best ? v : best;
    }

    std::vector<Interval> windows_;
    std::vector<Real> maxima_;
};

// --- core stepper -----------------------------------------------------------

namespace detail {

template <class Real, int N, class Field, class OnStep>
std::array<Real, N> dopri5_run(const Field& field, Real t0, std::array<Real, N> x, Real t1,
                               const std::vector<double>& breaks, const IvpOptions& opt,
                               OnStep&& onStep, long* stepsOut = nullptr) {
    // Dormand-Prince 5(4) tableau, exact rationals.
    const Real c2 = Real(1) / 5, c3 = Real(3) / 10, c4 = Real(4) / 5, c5 = Real(8) / 9;
    const Real a21 = Real(1) / 5;
    const Real a31 = Real(3) / 40, a32 = Real(9) / 40;
    const Real a41 = Real(44) / 45, a42 = Real(-56) / 15, a43 = Real(32) / 9;
    const Real a51 = Real(19372) / 6561, a52 = Real(-25360) / 2187, a53 = Real(64448) / 6561,
               a54 = Real(-212) / 729;
    const Real a61 = Real(9017) / 3168, a62 = Real(-355) / 33, a63 = Real(46732) / 5247,
               a64 = Real(49) / 176, a65 = Real(-5103) / 18656;
    const Real b1 = Real(35) / 384, b3 = Real(500) / 1113, b4 = Real(125) / 192,
               b5 = Real(-2187) / 6784, b6 = Real(11) / 84;
    const Real e1 = b1 - Real(5179) / 57600, e3 = b3 - Real(7571) / 16695,
               e4 = b4 - Real(393) / 640, e5 = b5 - Real(-92097) / 339200,
               e6 = b6 - Real(187) / 2100, e7 = Real(0) - Real(1) / 40;

    const Real atol = Real(opt.atol), rtol = Real(opt.rtol);
    const bool fixed = opt.fixedStep > 0.0;
    Real t = t0;
    size_t nextBreak = 0;
    while (nextBreak < breaks.size() && Real(breaks[nextBreak]) <= t) ++nextBreak;

    std::array<Real, N> k1, k2, k3, k4, k5, k6, k7, xs, xnew, err;
    field(t, x, k1, false);

    Real h = fixed ? Real(opt.fixedStep) : (t1 - t0) / Real(512);
    if (Real(opt.maxStep) < h) h = Real(opt.maxStep);
    long steps = 0;
    const Real eps = real_traits<Real>::epsilon();

    while (t < t1) {
        if (++steps > opt.maxSteps)
            throw StepSizeUnderflow("integrateIVP: step budget exhausted");
        bool clipped = false;
        Real hEff = h;
        Real tStop = t1;
        if (nextBreak < breaks.size() && Real(breaks[nextBreak]) < t1)
            tStop = Real(breaks[nextBreak]);
        if (t + hEff >= tStop) {
            hEff = tStop - t;
            clipped = true;
        }
        if (!clipped && (!(hEff > Real(0)) || hEff < Real(64) * eps * (fabs(t) + Real(1))))
            throw StepSizeUnderflow("integrateIVP: step size underflow at t=" +
                                    format_real(t, 17));
        if (clipped && !(t + hEff > t)) {
            // no representable progress left before the stop point: snap to it
            t = tStop;
            if (nextBreak < breaks.size() && tStop == Real(breaks[nextBreak])) ++nextBreak;
            if (t < t1) field(t, x, k1, false);
            continue;
        }

        auto stage = [&](Real frac, const std::array<Real, N>& xi, std::array<Real, N>& ki) {
            bool atRightEnd = frac == Real(1);
            field(t + frac * hEff, xi, ki, atRightEnd);
        };
        for (int i = 0; i < N; ++i) xs[i] = x[i] + hEff * a21 * k1[i];
        stage(c2, xs, k2);
        for (int i = 0; i < N; ++i) xs[i] = x[i] + hEff * (a31 * k1[i] + a32 * k2[i]);
        stage(c3, xs, k3);
        for (int i = 0; i < N; ++i)
            xs[i] = x[i] + hEff * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        stage(c4, xs, k4);
        for (int i = 0; i < N; ++i)
            xs[i] = x[i] + hEff * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
        stage(c5, xs, k5);
        for (int i = 0; i < N; ++i)
            xs[i] = x[i] +
                    hEff * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
        stage(Real(1), xs, k6);
        for (int i = 0; i < N; ++i)
            xnew[i] = x[i] + hEff * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] +
                                     b6 * k6[i]);
        stage(Real(1), xnew, k7);

        Real errNorm = Real(0);
        for (int i = 0; i < N; ++i) {
            err[i] = hEff * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] +
                             e7 * k7[i]);
            Real sc = atol + rtol * real_max(fabs(x[i]), fabs(xnew[i]));
            Real q = err[i] / sc;
            errNorm += q * q;
        }
        errNorm = sqrt(errNorm / Real(N));

        if (fixed || errNorm <= Real(1)) {
            for (int i = 0; i < N; ++i)
                if (!isfinite(xnew[i]))
                    throw NonFiniteState("integrateIVP: non-finite state at t=" +
                                         format_real(t + hEff, 17));
            StepRecord<Real, N> rec;
            rec.t0 = t;
            rec.t1 = t + hEff;
            rec.x0 = x;
            rec.x1 = xnew;
            rec.f0 = k1;
            rec.f1 = k7;
            onStep(rec);
            t = rec.t1;
            x = xnew;
            if (clipped && nextBreak < breaks.size() && tStop == Real(breaks[nextBreak])) {
                t = Real(breaks[nextBreak]); // land exactly
                ++nextBreak;
            }
            // fresh derivative on the right side of a possible breakpoint
            if (t < t1) field(t, x, k1, false);
        }
        if (!fixed) {
            Real fac = errNorm > Real(0)
                           ? Real(0.9) * pow(errNorm, Real(-0.2))
                           : Real(5);
            if (fac < Real(0.2)) fac = Real(0.2);
            if (fac > Real(5)) fac = Real(5);
            h = hEff * fac;
            if (Real(opt.maxStep) < h) h = Real(opt.maxStep);
        }
    }
    if (stepsOut) *stepsOut = steps;
    return x;
}

} // namespace detail

// --- public entry points ----------------------------------------------------

template <class Real>
struct IvpRun {
    std::array<Real, 2> finalState;
    Trajectory traj; // dense output (empty when opt.denseOutput == false)
    long steps = 0;
};

template <class Real>
IvpRun<Real> integrate_ivp(const Weight& w, const Nonlinearity& g, Real lambda, Real mu, Real c,
                           Real t0, std::array<Real, 2> z0, Real t1,
                           const IvpOptions& opt = {}) {
    if (!(static_cast<double>(t1) > static_cast<double>(t0)))
        throw std::invalid_argument("integrateIVP: need t0 < t1");
    PlanarField<Real> field{&w, &g, lambda, mu, c};
    auto breaks = w.breakpointsIn(static_cast<double>(t0), static_cast<double>(t1));

    IvpRun<Real> run;
    Trajectory& traj = run.traj;
    traj.lambda = static_cast<double>(lambda);
    traj.mu = static_cast<double>(mu);
    traj.c = static_cast<double>(c);

    bool dense = opt.denseOutput;
    if (dense) {
        std::array<Real, 2> f0;
        field(t0, z0, f0, false);
        traj.t.push_back(static_cast<double>(t0));
        traj.u.push_back(static_cast<double>(z0[0]));
        traj.y.push_back(static_cast<double>(z0[1]));
        traj.ypR.push_back(static_cast<double>(f0[1]));
        traj.ypL.push_back(static_cast<double>(f0[1]));
    }
    auto onStep = [&](const StepRecord<Real, 2>& s) {
        if (!dense) return;
        traj.ypR.back() = static_cast<double>(s.f0[1]);
        traj.t.push_back(static_cast<double>(s.t1));
        traj.u.push_back(static_cast<double>(s.x1[0]));
        traj.y.push_back(static_cast<double>(s.x1[1]));
        traj.ypL.push_back(static_cast<double>(s.f1[1]));
        traj.ypR.push_back(static_cast<double>(s.f1[1]));
    };
    run.finalState =
        detail::dopri5_run<Real, 2>(field, t0, z0, t1, breaks, opt, onStep, &run.steps);
    if (dense) traj.residual = trajectory_defect(traj, w, g);
    return run;
}

template <class Real>
struct MonodromyRun {
    std::array<Real, 2> finalState;
    std::array<std::array<Real, 2>, 2> monodromy;
    Trajectory traj;
    long steps = 0;
};

// Flow map over [t0, t1] with the fundamental matrix of the variational
// equations. When g carries no analytic derivative a forward-difference
// fallback with step 1e-7 is used instead.
template <class Real>
MonodromyRun<Real> integrate_flow_jacobian(const Weight& w, const Nonlinearity& g, Real lambda,
                                           Real mu, Real c, Real t0, std::array<Real, 2> z0,
                                           Real t1, const IvpOptions& opt = {},
                                           bool denseTraj = false) {
    MonodromyRun<Real> out;
    IvpOptions o = opt;
    o.denseOutput = denseTraj;

    VariationalField<Real> field{{&w, &g, lambda, mu, c}};
    auto breaks = w.breakpointsIn(static_cast<double>(t0), static_cast<double>(t1));
    std::array<Real, 6> x{z0[0], z0[1], Real(1), Real(0), Real(0), Real(1)};

    Trajectory& traj = out.traj;
    traj.lambda = static_cast<double>(lambda);
    traj.mu = static_cast<double>(mu);
    traj.c = static_cast<double>(c);
    if (denseTraj) {
        std::array<Real, 6> f0;
        field(t0, x, f0, false);
        traj.t.push_back(static_cast<double>(t0));
        traj.u.push_back(static_cast<double>(x[0]));
        traj.y.push_back(static_cast<double>(x[1]));
        traj.ypR.push_back(static_cast<double>(f0[1]));
        traj.ypL.push_back(static_cast<double>(f0[1]));
    }
    auto onStep = [&](const StepRecord<Real, 6>& s) {
        if (!denseTraj) return;
        traj.ypR.back() = static_cast<double>(s.f0[1]);
        traj.t.push_back(static_cast<double>(s.t1));
        traj.u.push_back(static_cast<double>(s.x1[0]));
        traj.y.push_back(static_cast<double>(s.x1[1]));
        traj.ypL.push_back(static_cast<double>(s.f1[1]));
        traj.ypR.push_back(static_cast<double>(s.f1[1]));
    };
    auto xf = detail::dopri5_run<Real, 6>(field, t0, x, t1, breaks, o, onStep, &out.steps);
    out.finalState = {xf[0], xf[1]};
    out.monodromy = {{{xf[2], xf[3]}, {xf[4], xf[5]}}};
    if (denseTraj) traj.residual = trajectory_defect(traj, w, g);
    return out;
}

// Poincare map over one period starting at the weight's origin.
template <class Real>
MonodromyRun<Real> poincare_map(const Weight& w, const Nonlinearity& g, Real lambda, Real mu,
                                Real c, std::array<Real, 2> z0, const IvpOptions& opt = {}) {
    Real t0 = Real(w.start());
    Real t1 = Real(w.start() + w.period());
    if (g.hasDerivative())
        return integrate_flow_jacobian(w, g, lambda, mu, c, t0, z0, t1, opt);
    // forward differences
    MonodromyRun<Real> out;
    auto base = integrate_ivp(w, g, lambda, mu, c, t0, z0, t1, opt);
    out.finalState = base.finalState;
    out.traj = std::move(base.traj);
    const Real dstep = Real(1e-7);
    for (int j = 0; j < 2; ++j) {
        std::array<Real, 2> zp = z0;
        zp[j] += dstep;
        auto run = integrate_ivp(w, g, lambda, mu, c, t0, zp, t1, opt);
        out.monodromy[0][j] = (run.finalState[0] - out.finalState[0]) / dstep;
        out.monodromy[1][j] = (run.finalState[1] - out.finalState[1]) / dstep;
    }
    return out;
}

// K = max_i (R / |I+_i| + lambda ||a||+,i g*(R)): a-priori bound on |u'| for
// solutions confined to [0, R].
double boundK(const Weight& w, const Nonlinearity& g, double lambda, double R);

} // namespace humps
