#include "humps/bvp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <map>
#include <random>

#include "humps/quadrature.hpp"
#include "humps/util.hpp"

namespace humps {

namespace {

// integration tolerance per precision rung
template <class Real>
IvpOptions rungOptions(const SolveSettings& s) {
    IvpOptions o;
    o.atol = s.atol;
    o.rtol = s.rtol;
    o.denseOutput = false;
    if constexpr (std::is_same_v<Real, long double>) {
        double tol = static_cast<double>(real_traits<Real>::epsilon()) * 256.0;
        o.atol = std::min(o.atol, tol);
        o.rtol = std::min(o.rtol, tol);
    } else if constexpr (sizeof(Real) > sizeof(double)) {
        double tol = std::max(static_cast<double>(real_traits<Real>::epsilon()) * 1e4, 1e-30);
        o.atol = std::min(o.atol, tol);
        o.rtol = std::min(o.rtol, tol);
    }
    return o;
}

const char* precName(SolvePrecision p) {
    switch (p) {
        case SolvePrecision::Double: return "double";
        case SolvePrecision::LongDouble: return "longdouble";
        case SolvePrecision::Quad: return "quad";
    }
    return "?";
}

} // namespace

std::vector<Interval> humpsInWindow(const Weight& w, double from, double span) {
    const auto& d = w.decompose();
    std::vector<Interval> out;
    double P = w.period();
    long k0 = static_cast<long>(std::floor((from - w.start()) / P)) - 1;
    long k1 = static_cast<long>(std::ceil((from + span - w.start()) / P)) + 1;
    for (long k = k0; k <= k1; ++k) {
        for (const auto& h : d.humps) {
            double lo = h.lo + k * P, hi = h.hi + k * P;
            if (lo >= from - 1e-12 && hi <= from + span + 1e-12)
                out.push_back({lo, hi});
        }
    }
    std::sort(out.begin(), out.end(), [](const Interval& a, const Interval& b) {
        return a.lo < b.lo;
    });
    return out;
}

SymbolCode classify(const Trajectory& traj, const std::vector<Interval>& humps, double r,
                    double rho, double R, std::vector<double>* maximaOut) {
    if (traj.minU(traj.t0(), traj.t1()) < -1e-9)
        throw std::invalid_argument("classify: trajectory is not nonnegative");
    SymbolCode code;
    if (maximaOut) maximaOut->clear();
    for (const auto& h : humps) {
        double mx = traj.maxU(h.lo, h.hi);
        if (maximaOut) maximaOut->push_back(mx);
        for (double edge : {r, rho, R}) {
            if (std::fabs(mx - edge) <= 1e-9)
                throw OnBoundary("hump max " + std::to_string(mx) +
                                 " within 1e-9 of window edge " + std::to_string(edge));
        }
        if (mx >= R) throw AboveR("hump max " + std::to_string(mx) + " reaches R");
        code.digits.push_back(mx < r ? 0 : (mx < rho ? 1 : 2));
    }
    return code;
}

// ---------------------------------------------------------------------------
// multiple shooting
// ---------------------------------------------------------------------------

namespace {

template <class Real>
struct MsState {
    std::vector<double> times;              // node times; segment j = [t_j, t_{j+1}]
    double tEnd = 0.0;
    std::vector<std::array<Real, 2>> z;     // node states
};

int unknownCount(BcTag bc, int M) { return bc == BcTag::Periodic ? 2 * M : 2 * M - 1; }

template <class Real>
void packUnknowns(const MsState<Real>& st, BcTag bc, std::vector<Real>& u) {
    int M = static_cast<int>(st.z.size());
    u.resize(static_cast<size_t>(unknownCount(bc, M)));
    size_t k = 0;
    if (bc == BcTag::Periodic) {
        u[k++] = st.z[0][0];
        u[k++] = st.z[0][1];
    } else if (bc == BcTag::Dirichlet || bc == BcTag::MixedLR) {
        u[k++] = st.z[0][1]; // u(0) pinned to 0
    } else {
        u[k++] = st.z[0][0]; // y(0) pinned to 0
    }
    for (int j = 1; j < M; ++j) {
        u[k++] = st.z[static_cast<size_t>(j)][0];
        u[k++] = st.z[static_cast<size_t>(j)][1];
    }
}

template <class Real>
void unpackUnknowns(const std::vector<Real>& u, BcTag bc, MsState<Real>& st) {
    int M = static_cast<int>(st.z.size());
    size_t k = 0;
    if (bc == BcTag::Periodic) {
        st.z[0][0] = u[k++];
        st.z[0][1] = u[k++];
    } else if (bc == BcTag::Dirichlet || bc == BcTag::MixedLR) {
        st.z[0] = {Real(0), u[k++]};
    } else {
        st.z[0] = {u[k++], Real(0)};
    }
    for (int j = 1; j < M; ++j) {
        st.z[static_cast<size_t>(j)][0] = u[k++];
        st.z[static_cast<size_t>(j)][1] = u[k++];
    }
}

// F and (optionally) the dense Jacobian of the matching system; returns the
// max-norm of F. Segment fundamental-matrix norms go to segNorm when given.
template <class Real>
Real msResidual(const Problem& p, MsState<Real>& st, std::vector<Real>* F,
                std::vector<Real>* J, std::vector<double>* segNorm,
                const IvpOptions& opt) {
    const BcTag bc = p.bc;
    const int M = static_cast<int>(st.z.size());
    const int n = unknownCount(bc, M);
    const bool periodic = bc == BcTag::Periodic;
    if (F) F->assign(static_cast<size_t>(n), Real(0));
    if (J) J->assign(static_cast<size_t>(n) * static_cast<size_t>(n), Real(0));
    if (segNorm) segNorm->assign(static_cast<size_t>(M), 0.0);

    auto colBase = [&](int node) {
        if (periodic) return 2 * node;
        return node == 0 ? 0 : 1 + 2 * (node - 1);
    };
    // derivative of node-0 state w.r.t. its free scalar
    std::array<Real, 2> e0{Real(1), Real(0)};
    if (bc == BcTag::Dirichlet || bc == BcTag::MixedLR) e0 = {Real(0), Real(1)};

    Real worst = Real(0);
    for (int j = 0; j < M; ++j) {
        double ta = st.times[static_cast<size_t>(j)];
        double tb = (j + 1 < M) ? st.times[static_cast<size_t>(j + 1)] : st.tEnd;
        auto run = integrate_flow_jacobian(*p.w, *p.g, Real(p.lambda), Real(p.mu), Real(p.c),
                                           Real(ta), st.z[static_cast<size_t>(j)], Real(tb),
                                           opt);
        const auto& A = run.monodromy;
        if (segNorm) {
            double nrm = 0.0;
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b)
                    nrm = std::max(nrm, std::fabs(static_cast<double>(A[a][b])));
            (*segNorm)[static_cast<size_t>(j)] = nrm;
        }
        const bool last = j + 1 == M;
        int eqBase = 2 * j;
        auto setF = [&](int row, Real v) {
            if (F) (*F)[static_cast<size_t>(row)] = v;
            Real av = fabs(v);
            if (av > worst) worst = av;
        };
        auto setJ = [&](int row, int col, Real v) {
            if (J) (*J)[static_cast<size_t>(row) * static_cast<size_t>(n) +
                        static_cast<size_t>(col)] = v;
        };
        auto fillSourceJac = [&](int row, int comp) {
            // d Phi_j / d z_j columns
            if (periodic || j > 0) {
                int cb = colBase(j);
                setJ(row, cb + 0, A[comp][0]);
                setJ(row, cb + 1, A[comp][1]);
            } else {
                setJ(row, 0, A[comp][0] * e0[0] + A[comp][1] * e0[1]);
            }
        };
        if (!last) {
            const auto& znext = st.z[static_cast<size_t>(j + 1)];
            for (int comp = 0; comp < 2; ++comp) {
                setF(eqBase + comp, run.finalState[static_cast<size_t>(comp)] - znext[static_cast<size_t>(comp)]);
                fillSourceJac(eqBase + comp, comp);
                setJ(eqBase + comp, colBase(j + 1) + comp, Real(-1));
            }
        } else if (periodic) {
            for (int comp = 0; comp < 2; ++comp) {
                setF(eqBase + comp, run.finalState[static_cast<size_t>(comp)] - st.z[0][static_cast<size_t>(comp)]);
                fillSourceJac(eqBase + comp, comp);
                if (M > 1) setJ(eqBase + comp, comp, Real(-1));
                else {
                    // single segment: the -I merges with the source columns
                    if (J) {
                        (*J)[static_cast<size_t>(eqBase + comp) * static_cast<size_t>(n) +
                             static_cast<size_t>(comp)] += Real(-1);
                    }
                }
            }
        } else {
            int comp = (bc == BcTag::Dirichlet || bc == BcTag::MixedRL) ? 0 : 1;
            setF(eqBase, run.finalState[static_cast<size_t>(comp)]);
            fillSourceJac(eqBase, comp);
        }
    }
    return worst;
}

template <class Real>
struct MsOutcome {
    bool converged = false;
    Real residual = Real(0);
    int iters = 0;
};

// Solve J du = -F with row equilibration; J is untouched.
template <class Real>
bool newtonDirection(const std::vector<Real>& J, const std::vector<Real>& F, int n,
                     std::vector<Real>& du) {
    std::vector<Real> A = J;
    du = F;
    for (auto& v : du) v = -v;
    for (int row = 0; row < n; ++row) {
        Real m = Real(0);
        for (int col = 0; col < n; ++col)
            m = real_max(m, fabs(A[static_cast<size_t>(row) * n + col]));
        if (!(m > Real(0))) return false;
        Real inv = Real(1) / m;
        for (int col = 0; col < n; ++col) A[static_cast<size_t>(row) * n + col] *= inv;
        du[static_cast<size_t>(row)] *= inv;
    }
    return lu_solve(A, du, n);
}

// Damped Newton on the matching system with Deuflhard's affine-invariant
// monotonicity test: a trial point is accepted when the simplified Newton
// correction J^{-1} F(trial) shrinks, which keeps ill-scaled residual rows
// (hump matching ~ O(1), dive matching ~ O(u_min)) from fooling the search.
template <class Real>
MsOutcome<Real> msNewton(const Problem& p, MsState<Real>& st, const SolveSettings& s) {
    IvpOptions opt = rungOptions<Real>(s);
    const int M = static_cast<int>(st.z.size());
    const int n = unknownCount(p.bc, M);
    std::vector<Real> F, J, u, du, duTrial;
    MsOutcome<Real> out;

    auto normInf = [](const std::vector<Real>& v) {
        Real m = Real(0);
        for (const Real& x : v) m = real_max(m, fabs(x));
        return m;
    };
    auto projectNonneg = [](MsState<Real>& state) {
        for (auto& z : state.z)
            if (z[0] < Real(0)) z[0] = Real(1e-12);
    };

    Real best = msResidual<Real>(p, st, &F, &J, nullptr, opt);
    Real tol = Real(s.newtonTol);
    for (int it = 0; it < s.maxNewtonIters; ++it) {
        out.iters = it;
        if (best < tol) {
            out.converged = true;
            out.residual = best;
            return out;
        }
        if (!newtonDirection(J, F, n, du)) break;
        Real duNorm = normInf(du);
        packUnknowns(st, p.bc, u);

        MsState<Real> accepted = st;
        std::vector<Real> Facc, Jacc;
        Real bestAcc = Real(-1);
        Real lambda = Real(1);
        for (int half = 0; half < 11; ++half, lambda = lambda / Real(2)) {
            std::vector<Real> ut = u;
            for (size_t i = 0; i < ut.size(); ++i) ut[i] += lambda * du[i];
            MsState<Real> trial = st;
            unpackUnknowns(ut, p.bc, trial);
            projectNonneg(trial);
            Real resid;
            try {
                resid = msResidual<Real>(p, trial, &Facc, &Jacc, nullptr, opt);
            } catch (const std::exception&) {
                continue;
            }
            // affine-invariant test against the frozen Jacobian
            if (!newtonDirection(J, Facc, n, duTrial)) continue;
            bool aff = normInf(duTrial) <= (Real(1) - lambda / Real(2)) * duNorm;
            bool mono = resid < best;
            if (aff || mono) {
                accepted = std::move(trial);
                bestAcc = resid;
                break;
            }
        }
        if (bestAcc < Real(0)) break; // no acceptable step at any damping
        st = std::move(accepted);
        F = std::move(Facc);
        J = std::move(Jacc);
        best = bestAcc;
    }
    out.residual = best;
    out.converged = best < tol;
    return out;
}

// split segments whose fundamental matrix grows past the cap
template <class Real>
bool refineNodes(const Problem& p, MsState<Real>& st, const SolveSettings& s) {
    IvpOptions opt = rungOptions<Real>(s);
    std::vector<double> segNorm;
    msResidual<Real>(p, st, nullptr, nullptr, &segNorm, opt);
    bool changed = false;
    MsState<Real> next;
    next.tEnd = st.tEnd;
    for (size_t j = 0; j < st.z.size(); ++j) {
        double ta = st.times[j];
        double tb = (j + 1 < st.z.size()) ? st.times[j + 1] : st.tEnd;
        next.times.push_back(ta);
        next.z.push_back(st.z[j]);
        if (segNorm[j] > s.segmentGrowthCap && tb - ta > 1e-6) {
            double tm = 0.5 * (ta + tb);
            auto run = integrate_ivp(*p.w, *p.g, Real(p.lambda), Real(p.mu), Real(p.c),
                                     Real(ta), st.z[j], Real(tm), opt);
            next.times.push_back(tm);
            next.z.push_back(run.finalState);
            changed = true;
        }
    }
    if (changed) st = std::move(next);
    return changed;
}

// dense trajectory assembled segment-wise from the converged node states
template <class Real>
Trajectory assembleTrajectory(const Problem& p, const MsState<Real>& st,
                              const SolveSettings& s) {
    IvpOptions opt = rungOptions<Real>(s);
    // the cubic dense output limits the collocation defect at ~h^4, so the
    // emitted trajectory integrates tighter than the Newton iterations did
    opt.atol = std::min(opt.atol, 1e-13);
    opt.rtol = std::min(opt.rtol, 1e-13);
    opt.denseOutput = true;
    Trajectory full;
    full.lambda = p.lambda;
    full.mu = p.mu;
    full.c = p.c;
    full.bc = p.bc;
    for (size_t j = 0; j < st.z.size(); ++j) {
        double ta = st.times[j];
        double tb = (j + 1 < st.z.size()) ? st.times[j + 1] : st.tEnd;
        auto run = integrate_ivp(*p.w, *p.g, Real(p.lambda), Real(p.mu), Real(p.c), Real(ta),
                                 st.z[j], Real(tb), opt);
        const Trajectory& seg = run.traj;
        size_t start = full.t.empty() ? 0 : 1; // drop the duplicated node
        for (size_t i = start; i < seg.t.size(); ++i) {
            full.t.push_back(seg.t[i]);
            full.u.push_back(seg.u[i]);
            full.y.push_back(seg.y[i]);
            full.ypL.push_back(seg.ypL[i]);
            full.ypR.push_back(seg.ypR[i]);
        }
        if (start == 1 && !seg.t.empty()) full.ypR[full.t.size() - seg.t.size()] = seg.ypR[0];
    }
    full.residual = trajectory_defect(full, *p.w, *p.g);
    return full;
}

// boundary residual from a single flow evaluation at z0
template <class Real>
Real oneShotResidual(const Problem& p, double t0, double tEnd, std::array<Real, 2> z0,
                     const SolveSettings& s) {
    IvpOptions opt = rungOptions<Real>(s);
    auto run = integrate_ivp(*p.w, *p.g, Real(p.lambda), Real(p.mu), Real(p.c), Real(t0), z0,
                             Real(tEnd), opt);
    switch (p.bc) {
        case BcTag::Periodic: {
            Real d0 = fabs(run.finalState[0] - z0[0]);
            Real d1 = fabs(run.finalState[1] - z0[1]);
            return real_max(d0, d1);
        }
        case BcTag::Dirichlet:
        case BcTag::MixedRL:
            return fabs(run.finalState[0]);
        case BcTag::Neumann:
        case BcTag::MixedLR:
            return fabs(run.finalState[1]);
        case BcTag::None:
            return Real(0);
    }
    return Real(0);
}

// Damped Newton on the full-interval shooting map. Multiple shooting
// equilibrates per-segment mismatches, which a single sweep re-amplifies by
// the downstream flow; this polish pushes the one-shot residual down to the
// rung's own noise floor. Steps that do not improve are rejected, so it is
// harmless at any conditioning.
template <class Real>
Real singleShootPolish(const Problem& p, double t0, double tEnd, std::array<Real, 2>& z0,
                       const SolveSettings& s) {
    IvpOptions opt = rungOptions<Real>(s);
    bool periodic = p.bc == BcTag::Periodic;
    bool freeSlope = p.bc == BcTag::Dirichlet || p.bc == BcTag::MixedLR;
    bool wantU = p.bc == BcTag::Dirichlet || p.bc == BcTag::MixedRL;

    auto evalF = [&](const std::array<Real, 2>& z, std::array<std::array<Real, 2>, 2>& M) {
        auto run = integrate_flow_jacobian(*p.w, *p.g, Real(p.lambda), Real(p.mu), Real(p.c),
                                           Real(t0), z, Real(tEnd), opt);
        M = run.monodromy;
        std::array<Real, 2> F{Real(0), Real(0)};
        if (periodic) {
            F[0] = run.finalState[0] - z[0];
            F[1] = run.finalState[1] - z[1];
        } else {
            F[0] = wantU ? run.finalState[0] : run.finalState[1];
        }
        return F;
    };
    auto norm = [&](const std::array<Real, 2>& F) {
        return periodic ? real_max(fabs(F[0]), fabs(F[1])) : fabs(F[0]);
    };

    std::array<std::array<Real, 2>, 2> M;
    std::array<Real, 2> F = evalF(z0, M);
    Real best = norm(F);
    for (int it = 0; it < 6 && best > Real(s.newtonTol) * Real(1e-3); ++it) {
        std::array<Real, 2> dz{Real(0), Real(0)};
        if (periodic) {
            std::vector<Real> A{M[0][0] - Real(1), M[0][1], M[1][0], M[1][1] - Real(1)};
            std::vector<Real> b{-F[0], -F[1]};
            if (!lu_solve(A, b, 2)) break;
            dz = {b[0], b[1]};
        } else {
            Real dF = wantU ? (freeSlope ? M[0][1] : M[0][0])
                            : (freeSlope ? M[1][1] : M[1][0]);
            if (fabs(dF) == Real(0)) break;
            Real step = -F[0] / dF;
            (freeSlope ? dz[1] : dz[0]) = step;
        }
        bool improved = false;
        Real lam = Real(1);
        for (int half = 0; half < 8 && !improved; ++half, lam = lam / Real(2)) {
            std::array<Real, 2> zt{z0[0] + lam * dz[0], z0[1] + lam * dz[1]};
            try {
                std::array<std::array<Real, 2>, 2> Mt;
                std::array<Real, 2> Ft = evalF(zt, Mt);
                if (norm(Ft) < best) {
                    z0 = zt;
                    F = Ft;
                    M = Mt;
                    best = norm(Ft);
                    improved = true;
                }
            } catch (const std::exception&) {
            }
        }
        if (!improved) break;
    }
    return best;
}

template <class Src, class Dst>
MsState<Dst> castState(const MsState<Src>& st) {
    MsState<Dst> out;
    out.times = st.times;
    out.tEnd = st.tEnd;
    out.z.reserve(st.z.size());
    for (const auto& z : st.z)
        out.z.push_back({static_cast<Dst>(z[0]), static_cast<Dst>(z[1])});
    return out;
}

struct LadderResult {
    bool converged = false;
    double bcResidual = 0.0;
    Trajectory traj;
    std::array<double, 2> z0{0.0, 0.0};
    std::string z0Full[2];
    std::string precisionName = "double";
};

// One precision rung: re-converge the nodes, polish z0 on the full-interval
// map, assemble the dense trajectory from the node states.
template <class Real>
LadderResult finishRung(const Problem& p, MsState<Real>& st, bool msConverged,
                        const SolveSettings& s, int digits, SolvePrecision prec) {
    LadderResult res;
    res.converged = msConverged;
    std::array<Real, 2> z0 = st.z[0];
    res.bcResidual =
        static_cast<double>(singleShootPolish<Real>(p, st.times.front(), st.tEnd, z0, s));
    st.z[0] = z0;
    if constexpr (std::is_same_v<Real, double>) {
        // the cubic dense output needs the smaller extended-precision steps to
        // hold the collocation defect below the validation threshold
        auto stl = castState<double, long double>(st);
        res.traj = assembleTrajectory<long double>(p, stl, s);
    } else {
        res.traj = assembleTrajectory<Real>(p, st, s);
    }
    res.z0 = {static_cast<double>(z0[0]), static_cast<double>(z0[1])};
    res.z0Full[0] = format_real(z0[0], digits);
    res.z0Full[1] = format_real(z0[1], digits);
    res.precisionName = precName(prec);
    return res;
}

// Converge the double-precision node states at the problem's own mu, falling
// back to a warm-started continuation in mu when the direct solve stalls: the
// negativity intervals turn into boundary layers as mu grows and the plain
// profile guess leaves Newton's basin.
bool convergeDouble(const Problem& p, MsState<double>& st, const SolveSettings& s) {
    const bool dbg = std::getenv("HUMPS_DEBUG") != nullptr;
    auto attempt = [&](const Problem& prob, MsState<double>& state) {
        bool ok = false;
        for (int round = 0;; ++round) {
            auto out = msNewton<double>(prob, state, s);
            ok = out.converged;
            if (dbg)
                std::fprintf(stderr, "[ms] mu=%g round=%d resid=%.3e conv=%d nodes=%zu\n",
                             prob.mu, round, static_cast<double>(out.residual), int(ok),
                             state.z.size());
            if (round >= s.maxNodeRounds || !refineNodes<double>(prob, state, s)) break;
        }
        return ok;
    };
    MsState<double> pristine = st;
    if (attempt(p, st)) return true;
    if (p.mu <= 500.0) return false;

    // adaptive warm-started continuation in mu; the step shrinks on failure
    // and recovers on success
    MsState<double> warm = std::move(pristine);
    Problem pk = p;
    pk.mu = 250.0;
    if (!attempt(pk, warm)) return false;
    double cur = pk.mu;
    double factor = 2.2;
    MsState<double> good = warm;
    while (cur < p.mu) {
        pk.mu = std::min(cur * factor, p.mu);
        MsState<double> trial = good;
        if (attempt(pk, trial)) {
            cur = pk.mu;
            good = std::move(trial);
            factor = std::min(factor * 1.4, 2.2);
        } else {
            factor = std::sqrt(factor);
            if (factor < 1.02) return false;
        }
    }
    st = std::move(good);
    return true;
}

// double -> long double -> quad refinement; stops at the first rung at or
// above the requested precision whose one-shot residual meets the tolerance.
LadderResult runLadder(const Problem& p, MsState<double> st, const SolveSettings& s) {
    bool msConverged = convergeDouble(p, st, s);
    if (s.precision == SolvePrecision::Double) {
        LadderResult res = finishRung<double>(p, st, msConverged, s, 17,
                                              SolvePrecision::Double);
        if (res.bcResidual <= s.newtonTol || !msConverged) return res;
    }
    auto stl = castState<double, long double>(st);
    {
        auto out = msNewton<long double>(p, stl, s);
        if (out.converged) msConverged = true;
    }
    if (s.precision != SolvePrecision::Quad) {
        LadderResult res = finishRung<long double>(p, stl, msConverged, s, 21,
                                                   SolvePrecision::LongDouble);
        if (res.bcResidual <= s.newtonTol || !msConverged) return res;
    }
    auto stq = castState<long double, quad>(stl);
    auto out = msNewton<quad>(p, stq, s);
    return finishRung<quad>(p, stq, out.converged || msConverged, s, 36,
                            SolvePrecision::Quad);
}

// node grid: quarter points of every hump and of every gap between humps
std::vector<double> defaultNodeTimes(const Weight& w, double from, double span) {
    std::vector<double> ts{from};
    auto humps = humpsInWindow(w, from, span);
    auto quarters = [&](double a, double b) {
        for (int q = 0; q <= 4; ++q) {
            double t = a + (b - a) * q / 4.0;
            if (t > from + 1e-12 && t < from + span - 1e-12) ts.push_back(t);
        }
    };
    for (size_t i = 0; i < humps.size(); ++i) {
        const auto& h = humps[i];
        quarters(h.lo, h.hi);
        double nextLo = (i + 1 < humps.size()) ? humps[i + 1].lo : from + span;
        if (nextLo > h.hi + 1e-9) quarters(h.hi, nextLo);
    }
    if (!humps.empty() && humps.front().lo > from + 1e-9)
        quarters(from, humps.front().lo); // leading negativity interval
    std::sort(ts.begin(), ts.end());
    ts.erase(std::unique(ts.begin(), ts.end(),
                         [](double a, double b) { return std::fabs(a - b) < 1e-12; }),
             ts.end());
    return ts;
}

} // namespace

// ---------------------------------------------------------------------------
// per-hump seeds
// ---------------------------------------------------------------------------

HumpSeeds humpSeeds(const Problem& p, const Windows& win, const SolveSettings& s) {
    const auto& d = p.w->decompose();
    HumpSeeds seeds;
    int m = d.humpCount();
    seeds.smallSlope.assign(static_cast<size_t>(m), std::nullopt);
    seeds.largeSlope.assign(static_cast<size_t>(m), std::nullopt);
    IvpOptions opt;
    opt.atol = s.atol;
    opt.rtol = s.rtol;
    opt.denseOutput = false;

    for (int i = 0; i < m; ++i) {
        const Interval& h = d.humps[static_cast<size_t>(i)];
        auto shoot = [&](double slope) {
            auto run = integrate_ivp<double>(*p.w, *p.g, p.lambda, p.mu, p.c, h.lo,
                                             {0.0, slope}, h.hi, opt);
            return run.finalState[0];
        };
        auto humpMax = [&](double slope) {
            IvpOptions od = opt;
            od.denseOutput = true;
            auto run = integrate_ivp<double>(*p.w, *p.g, p.lambda, p.mu, p.c, h.lo,
                                             {0.0, slope}, h.hi, od);
            return run.traj.maxU(h.lo, h.hi);
        };
        double prevS = s.scanLo;
        double prevF = shoot(prevS);
        for (int kk = 1; kk <= s.scanPoints; ++kk) {
            double sk = s.scanLo * std::pow(s.scanHi / s.scanLo,
                                            static_cast<double>(kk) / s.scanPoints);
            double fk = shoot(sk);
            if ((prevF > 0) != (fk > 0) || fk == 0.0) {
                double root = bisect_root(shoot, prevS, sk, prevF, fk);
                double mx = humpMax(root);
                if (mx > win.r && mx < win.rho && !seeds.smallSlope[static_cast<size_t>(i)])
                    seeds.smallSlope[static_cast<size_t>(i)] = root;
                if (mx > win.rho && mx < win.R && !seeds.largeSlope[static_cast<size_t>(i)])
                    seeds.largeSlope[static_cast<size_t>(i)] = root;
            }
            prevS = sk;
            prevF = fk;
        }
    }
    return seeds;
}

// ---------------------------------------------------------------------------
// solve entry points
// ---------------------------------------------------------------------------

namespace {

AtlasEntry finishEntry(const Problem& p, const LadderResult& lad,
                       const std::vector<Interval>& humps, const Windows& win) {
    AtlasEntry e;
    e.bc = p.bc;
    e.converged = lad.converged;
    e.bcResidual = lad.bcResidual;
    e.trajectory = lad.traj;
    e.z0 = lad.z0;
    e.z0Full[0] = lad.z0Full[0];
    e.z0Full[1] = lad.z0Full[1];
    e.precisionName = lad.precisionName;
    e.defect = lad.traj.residual;
    if (lad.traj.minU(lad.traj.t0(), lad.traj.t1()) < -1e-9)
        throw ConvergedToNegative("solution dips below -1e-9: numerical artifact");
    e.code = classify(lad.traj, humps, win.r, win.rho, win.R, &e.humpMaxima);
    return e;
}

MsState<double> stateFromGuess(const Problem& p, double from, double span,
                               std::array<double, 2> guess, const SolveSettings& s) {
    MsState<double> st;
    st.times = defaultNodeTimes(*p.w, from, span);
    st.tEnd = from + span;
    st.z.resize(st.times.size());
    st.z[0] = guess;
    IvpOptions opt;
    opt.atol = s.atol;
    opt.rtol = s.rtol;
    opt.denseOutput = false;
    for (size_t j = 0; j + 1 < st.times.size(); ++j) {
        try {
            auto run = integrate_ivp<double>(*p.w, *p.g, p.lambda, p.mu, p.c, st.times[j],
                                             st.z[j], st.times[j + 1], opt);
            st.z[j + 1] = run.finalState;
            if (!std::isfinite(st.z[j + 1][0]) || !std::isfinite(st.z[j + 1][1]))
                st.z[j + 1] = {0.0, 0.0};
        } catch (const std::exception&) {
            st.z[j + 1] = {0.0, 0.0};
        }
    }
    return st;
}

} // namespace

AtlasEntry solveBVP(const Problem& p, const Windows& win, std::array<double, 2> guess,
                    const SolveSettings& s) {
    double from = p.w->start();
    double span = p.w->period();
    // enforce the boundary pin on the guess
    if (p.bc == BcTag::Dirichlet || p.bc == BcTag::MixedLR) guess[0] = 0.0;
    if (p.bc == BcTag::Neumann || p.bc == BcTag::MixedRL) guess[1] = 0.0;
    MsState<double> st = stateFromGuess(p, from, span, guess, s);
    LadderResult lad = runLadder(p, st, s);
    if (!lad.converged)
        throw NoConvergence("shooting Newton failed; final residual " +
                            std::to_string(lad.bcResidual));
    auto humps = humpsInWindow(*p.w, from, span);
    return finishEntry(p, lad, humps, win);
}

namespace {

// profile-seeded node states for a target code over the humps of the window
MsState<double> stateFromProfile(const Problem& p, double from, double span,
                                 const std::vector<Interval>& humps, const SymbolCode& code,
                                 const HumpSeeds& seeds, int baseHumps,
                                 const SolveSettings& s, std::mt19937_64& rng,
                                 bool jitter) {
    MsState<double> st;
    st.times = defaultNodeTimes(*p.w, from, span);
    st.tEnd = from + span;
    st.z.assign(st.times.size(), {0.0, 0.0});

    std::uniform_real_distribution<double> U(-0.15, 0.15);
    IvpOptions opt;
    opt.atol = s.atol;
    opt.rtol = s.rtol;
    opt.denseOutput = true;

    double P = p.w->period();
    std::vector<Trajectory> humpTraj(humps.size());
    for (size_t i = 0; i < humps.size(); ++i) {
        int digit = code.digits[i];
        if (digit == 0) continue;
        // base-period hump index for the seed lookup
        double baseLo = p.w->reduce(humps[i].lo + 1e-12);
        int baseIdx = 0;
        const auto& d = p.w->decompose();
        for (int b = 0; b < baseHumps; ++b) {
            if (std::fabs(d.humps[static_cast<size_t>(b)].lo - baseLo) < 1e-6 ||
                (baseLo > d.humps[static_cast<size_t>(b)].lo - 1e-6 &&
                 baseLo < d.humps[static_cast<size_t>(b)].hi))
                baseIdx = b;
        }
        auto slot = digit == 1 ? seeds.smallSlope[static_cast<size_t>(baseIdx)]
                               : seeds.largeSlope[static_cast<size_t>(baseIdx)];
        if (!slot) continue; // caller reports the missing seed
        double slope = *slot * (jitter ? (1.0 + U(rng)) : 1.0);
        auto run = integrate_ivp<double>(*p.w, *p.g, p.lambda, p.mu, p.c, humps[i].lo,
                                         {0.0, slope}, humps[i].hi, opt);
        humpTraj[i] = std::move(run.traj);
    }
    (void)P;

    // Outside the seeded humps, the limit profile is zero while the true
    // solution makes a small positive excursion. Node heights come from the
    // energy balance of the dive dynamics, mu*abar*G(u) = y^2/2 with
    // G(u) = int_0^u g: that puts hump-edge and dive nodes at the right
    // order of magnitude for any mu instead of an arbitrary floor.
    const double floorU = 1e-9;
    double negMass = 0.0, negLen = 0.0;
    {
        const auto& dd = p.w->decompose();
        WeightIntegrals wi = p.w->integrals();
        for (int i = 0; i < dd.humpCount(); ++i) {
            if (!wi.hasNeg(i)) continue;
            negMass += wi.normMinus[static_cast<size_t>(i)];
            negLen += wi.lenMinus[static_cast<size_t>(i)];
        }
        if (dd.headNeg) {
            negMass += p.w->integralNeg(dd.headNeg->lo, dd.headNeg->hi);
            negLen += dd.headNeg->length();
        }
    }
    double abar = negLen > 0 ? negMass / negLen : 1.0;
    auto energyHeight = [&](double yv) -> double {
        if (!(p.mu > 0.0) || !(abar > 0.0) || yv == 0.0) return floorU;
        double target = 0.5 * yv * yv / (p.mu * abar);
        auto G = [&](double u) {
            return integrate_adaptive([&](double sv) { return (*p.g)(sv); }, 0.0, u, 1e-9);
        };
        double hi = 1.0;
        int guard = 0;
        while (G(hi) < target && guard++ < 60) hi *= 2.0;
        double lo = 0.0;
        for (int it = 0; it < 100; ++it) {
            double mid = 0.5 * (lo + hi);
            (G(mid) < target ? lo : hi) = mid;
        }
        return std::max(0.5 * (lo + hi), floorU);
    };
    std::vector<std::pair<double, double>> anchors; // (t, y) at seeded hump edges
    for (size_t i = 0; i < humps.size(); ++i) {
        if (humpTraj[i].t.size() < 2) continue;
        anchors.emplace_back(humps[i].lo, humpTraj[i].eval(humps[i].lo).second);
        anchors.emplace_back(humps[i].hi, humpTraj[i].eval(humps[i].hi).second);
    }
    auto slopeAt = [&](double t) -> double {
        if (anchors.empty()) return 0.0;
        if (t <= anchors.front().first || t >= anchors.back().first) {
            // wrap across the window boundary (periodic reading)
            double span2 = span;
            double ta = anchors.back().first, ya = anchors.back().second;
            double tb = anchors.front().first + span2, yb = anchors.front().second;
            double tt = t < anchors.front().first ? t + span2 : t;
            if (tb <= ta) return ya;
            return ya + (yb - ya) * (tt - ta) / (tb - ta);
        }
        for (size_t a = 0; a + 1 < anchors.size(); ++a) {
            if (t >= anchors[a].first && t <= anchors[a + 1].first) {
                double ta = anchors[a].first, ya = anchors[a].second;
                double tb = anchors[a + 1].first, yb = anchors[a + 1].second;
                if (tb <= ta) return ya;
                return ya + (yb - ya) * (t - ta) / (tb - ta);
            }
        }
        return 0.0;
    };
    auto profileAt = [&](double t) -> std::array<double, 2> {
        for (size_t i = 0; i < humps.size(); ++i) {
            // strict interior: edge nodes take the energy-matched height below
            if (t > humps[i].lo + 1e-9 && t < humps[i].hi - 1e-9 &&
                humpTraj[i].t.size() >= 2) {
                auto uv = humpTraj[i].eval(t);
                return {std::max(uv.first, floorU), uv.second};
            }
        }
        double yv = slopeAt(t);
        return {energyHeight(yv), yv};
    };
    for (size_t j = 0; j < st.times.size(); ++j) st.z[j] = profileAt(st.times[j]);
    return st;
}

} // namespace

namespace {

// All roots of the scalar shooting residual for the 1D boundary conditions
// (Dirichlet/Neumann/mixed). Coarse log grid first; every root then gets
// dense uniform windows across a ladder of shrinking spreads, because sibling
// roots cluster within O(1/conditioning) of each other at large mu and a
// same-sign pair of samples hides them from plain sign-change bracketing.
std::vector<double> scanRoots1D(const Problem& p, const SolveSettings& s) {
    double t0 = p.w->start(), t1 = t0 + p.w->period();
    bool freeSlope = p.bc == BcTag::Dirichlet || p.bc == BcTag::MixedLR;
    IvpOptions coarse;
    coarse.atol = coarse.rtol = 1e-9;
    coarse.denseOutput = false;
    IvpOptions fine;
    fine.atol = fine.rtol = std::min(s.atol, 1e-12);
    fine.denseOutput = false;

    auto Fat = [&](double v, const IvpOptions& opt) -> double {
        std::array<double, 2> z0 = freeSlope ? std::array<double, 2>{0.0, v}
                                             : std::array<double, 2>{v, 0.0};
        auto run = integrate_ivp<double>(*p.w, *p.g, p.lambda, p.mu, p.c, t0, z0, t1, opt);
        bool wantU = p.bc == BcTag::Dirichlet || p.bc == BcTag::MixedRL;
        return wantU ? run.finalState[0] : run.finalState[1];
    };
    auto F = [&](double v) { return Fat(v, fine); };

    std::vector<double> roots;
    auto push = [&](double root) {
        for (double rr : roots)
            if (std::fabs(rr - root) <= 1e-11 * (1.0 + std::fabs(root))) return false;
        roots.push_back(root);
        return true;
    };
    auto sweep = [&](const std::vector<double>& grid) {
        std::vector<double> found;
        double prevV = 0.0, prevF = 0.0;
        bool have = false;
        for (double v : grid) {
            if (!(v > 0.0) || !std::isfinite(v)) continue;
            double f;
            try {
                f = Fat(v, coarse);
            } catch (const std::exception&) {
                have = false;
                continue;
            }
            if (!std::isfinite(f)) {
                have = false;
                continue;
            }
            if (have && (prevF > 0) != (f > 0)) {
                try {
                    double fa = F(prevV), fb = F(v);
                    if (fa == 0.0) found.push_back(prevV);
                    else if ((fa > 0) != (fb > 0))
                        found.push_back(bisect_root(F, prevV, v, fa, fb));
                } catch (const std::exception&) {
                }
            }
            prevV = v;
            prevF = f;
            have = true;
        }
        return found;
    };

    std::vector<double> grid;
    for (int i = 0; i <= s.scanPoints; ++i)
        grid.push_back(s.scanLo *
                       std::pow(s.scanHi / s.scanLo, static_cast<double>(i) / s.scanPoints));
    std::vector<double> work = sweep(grid);
    for (double r : work) push(r);

    // zoom ladder around every root (including ones found while zooming)
    const double ladder[] = {1e-1, 3e-2, 1e-2, 3e-3, 1e-3, 3e-4, 1e-4, 3e-5, 1e-5,
                             3e-6, 1e-6, 3e-7, 1e-7, 1e-8, 1e-9, 1e-10, 1e-11, 1e-12};
    for (size_t qi = 0; qi < roots.size() && roots.size() < 200; ++qi) {
        double rt = roots[qi];
        for (double rel : ladder) {
            double off = std::max(rt, 1e-3) * rel;
            std::vector<double> local;
            const int n = 96;
            for (int i = 0; i <= n; ++i) local.push_back(rt - off + 2.0 * off * i / n);
            for (double r : sweep(local)) push(r);
            if (roots.size() >= 200) break;
        }
    }
    std::sort(roots.begin(), roots.end());
    return roots;
}

} // namespace

AtlasResult buildAtlas(const Problem& p, const Windows& win, const SolveSettings& s) {
    const auto& d = p.w->decompose();
    int m = d.humpCount();
    if (p.bc == BcTag::Periodic && !d.periodicNormalForm())
        throw InvalidSignPattern("periodic atlas needs the periodic normal form");

    AtlasResult result;
    result.windows = win;
    HumpSeeds seeds = humpSeeds(p, win, s);

    // scalar-shooting scan fallback for the 1D boundary conditions; run at
    // most once, only when the profile strategy leaves gaps
    std::map<std::string, AtlasEntry> scanned;
    bool scanDone = p.bc == BcTag::Periodic; // no scalar parameter to scan
    auto runScan = [&]() {
        if (scanDone) return;
        scanDone = true;
        bool freeSlope = p.bc == BcTag::Dirichlet || p.bc == BcTag::MixedLR;
        for (double root : scanRoots1D(p, s)) {
            try {
                std::array<double, 2> z0 =
                    freeSlope ? std::array<double, 2>{0.0, root}
                              : std::array<double, 2>{root, 0.0};
                AtlasEntry e = solveBVP(p, win, z0, s);
                std::string key = e.code.str();
                if (e.code.nonzero() && !scanned.count(key)) scanned.emplace(key, std::move(e));
            } catch (const std::exception&) {
            }
        }
    };

    long total = 1;
    for (int i = 0; i < m; ++i) total *= 3;
    for (long key = 1; key < total; ++key) {
        SymbolCode code;
        long k = key;
        for (int i = 0; i < m; ++i) {
            code.digits.push_back(static_cast<int>(k % 3));
            k /= 3;
        }
        // targets enumerated most-significant-first for a stable report order
        std::reverse(code.digits.begin(), code.digits.end());
        // jitter stream independent of the other codes' consumption
        std::mt19937_64 rng(s.seed ^ (std::hash<std::string>{}(code.str()) | 1));

        bool seedMissing = false;
        for (int i = 0; i < m; ++i) {
            int digit = code.digits[static_cast<size_t>(i)];
            if (digit == 1 && !seeds.smallSlope[static_cast<size_t>(i)]) seedMissing = true;
            if (digit == 2 && !seeds.largeSlope[static_cast<size_t>(i)]) seedMissing = true;
        }

        // periodic solves start at a hump whose digit is nonzero
        int shift = 0;
        if (p.bc == BcTag::Periodic) {
            while (code.digits[static_cast<size_t>(shift)] == 0) ++shift;
        }
        double from = (shift == 0) ? p.w->start() : d.humps[static_cast<size_t>(shift)].lo;
        double span = p.w->period();
        SymbolCode target = (shift == 0) ? code : code.rotated(shift);
        auto humps = humpsInWindow(*p.w, from, span);

        std::string reason = seedMissing ? "per-hump seed missing for a digit"
                                         : "no convergence";
        bool done = false;
        if (p.bc == BcTag::Periodic && m == 2) {
            if (auto sym = trySymmetricSolve(p, win, code, s)) {
                result.entries.push_back(std::move(*sym));
                done = true;
            }
        }
        for (int attempt = 0; attempt < 6 && !done && !seedMissing; ++attempt) {
            MsState<double> st = stateFromProfile(p, from, span, humps, target, seeds, m, s,
                                                  rng, attempt > 0);
            try {
                LadderResult lad = runLadder(p, st, s);
                if (!lad.converged) {
                    reason = "Newton stalled at residual " + std::to_string(lad.bcResidual);
                    continue;
                }
                AtlasEntry e = finishEntry(p, lad, humps, win);
                if (!(e.code == target)) {
                    reason = "converged to code " + e.code.str();
                    continue;
                }
                e.code = code; // report in base-window orientation
                result.entries.push_back(std::move(e));
                done = true;
            } catch (const OnBoundary& ex) {
                reason = std::string("on-boundary: ") + ex.what();
            } catch (const AboveR& ex) {
                reason = std::string("above R: ") + ex.what();
            } catch (const ConvergedToNegative& ex) {
                reason = ex.what();
            } catch (const std::exception& ex) {
                reason = ex.what();
            }
        }
        if (!done) {
            runScan();
            if (auto it = scanned.find(code.str()); it != scanned.end()) {
                result.entries.push_back(std::move(it->second));
                scanned.erase(it);
                done = true;
            }
        }
        if (!done) result.misses.push_back({code, reason});
    }

    std::sort(result.entries.begin(), result.entries.end(),
              [](const AtlasEntry& a, const AtlasEntry& b) { return a.code < b.code; });

    result.minPairDistance = 1e300;
    for (size_t a = 0; a < result.entries.size(); ++a)
        for (size_t b = a + 1; b < result.entries.size(); ++b)
            result.minPairDistance = std::min(
                result.minPairDistance,
                trajectoryDistance(result.entries[a].trajectory, result.entries[b].trajectory));
    if (result.entries.size() < 2) result.minPairDistance = 0.0;
    result.distinct = result.entries.size() < 2 || result.minPairDistance > 1e-3;
    return result;
}

namespace {

// a(center + xi) == a(center - xi) for all xi (periodically extended)?
bool weightSymmetricAbout(const Weight& w, double center) {
    double scale = 0.0;
    const int n = 512;
    for (int i = 0; i <= n; ++i) {
        double xi = 0.5 * w.period() * i / n;
        scale = std::max(scale, std::fabs(w.evalRaw(center + xi)));
    }
    if (!(scale > 0.0)) return false;
    for (int i = 0; i <= n; ++i) {
        double xi = 0.5 * w.period() * i / n;
        if (std::fabs(w.evalRaw(center + xi) - w.evalRaw(center - xi)) > 1e-9 * scale)
            return false;
    }
    return true;
}

// Reversible-case node seed for periodic windows holding exactly two humps:
// symmetric orbits have u' = 0 at the window start (a hump center) and at the
// half-window point, so a scalar bracketing shoot through a single dive pins
// the orbit and the second half follows by reflection. This sidesteps the
// unstable rising half of the dives entirely, which is what defeats glued
// profiles once mu is large.
std::optional<MsState<double>> symmetricSeed(const Problem& p, const Windows& win,
                                             double from, double span,
                                             const std::vector<Interval>& humps,
                                             const SymbolCode& target,
                                             const SolveSettings& s) {
    if (humps.size() != 2 || p.bc != BcTag::Periodic) return std::nullopt;
    double half = from + 0.5 * span;
    if (std::fabs(0.5 * (humps[1].lo + humps[1].hi) - half) > 1e-9 * span)
        return std::nullopt; // second hump center must sit at the half-window point
    if (!weightSymmetricAbout(*p.w, from) || !weightSymmetricAbout(*p.w, half))
        return std::nullopt;

    // digit of the split hump centered at `from` comes last in the window code
    int d0 = target.digits[1];
    int d1 = target.digits[0];
    double lo = d0 == 1 ? win.r : win.rho;
    double hi = d0 == 1 ? win.rho : win.R;
    if (d0 == 0) {
        lo = 1e-6 * win.r;
        hi = win.r;
    }
    IvpOptions opt;
    opt.atol = std::min(s.atol, 1e-12);
    opt.rtol = opt.atol;
    opt.denseOutput = false;
    auto F = [&](double h) -> double {
        auto run = integrate_ivp<double>(*p.w, *p.g, p.lambda, p.mu, p.c, from, {h, 0.0},
                                         half, opt);
        return run.finalState[1];
    };
    auto digitAtHalf = [&](double h) -> int {
        IvpOptions od = opt;
        od.denseOutput = true;
        auto run = integrate_ivp<double>(*p.w, *p.g, p.lambda, p.mu, p.c, from, {h, 0.0},
                                         half, od);
        double mx = run.traj.eval(half).first; // u' = 0 there, so u is the hump max
        if (run.traj.minU(from, half) < -1e-9) return -1;
        return mx < win.r ? 0 : (mx < win.rho ? 1 : (mx < win.R ? 2 : -1));
    };

    const int n = 240;
    double prevH = 0.0, prevF = 0.0;
    bool have = false;
    for (int i = 0; i <= n; ++i) {
        double h = lo + (hi - lo) * i / n;
        double f;
        try {
            f = F(h);
        } catch (const std::exception&) {
            have = false;
            continue;
        }
        if (!std::isfinite(f)) {
            have = false;
            continue;
        }
        if (have && (prevF > 0) != (f > 0)) {
            double root;
            try {
                root = bisect_root(F, prevH, h, prevF, f);
            } catch (const std::exception&) {
                root = 0.5 * (prevH + h);
            }
            if (digitAtHalf(root) == d1) {
                // fill the first half forward, reflect into the second half
                IvpOptions od = opt;
                od.denseOutput = true;
                auto run = integrate_ivp<double>(*p.w, *p.g, p.lambda, p.mu, p.c, from,
                                                 {root, 0.0}, half, od);
                MsState<double> st;
                st.times = defaultNodeTimes(*p.w, from, span);
                st.tEnd = from + span;
                st.z.resize(st.times.size());
                for (size_t j = 0; j < st.times.size(); ++j) {
                    double t = st.times[j];
                    if (t <= half) {
                        auto uv = run.traj.eval(t);
                        st.z[j] = {uv.first, uv.second};
                    } else {
                        auto uv = run.traj.eval(2.0 * half - t);
                        st.z[j] = {uv.first, -uv.second};
                    }
                }
                return st;
            }
        }
        prevH = h;
        prevF = f;
        have = true;
    }
    return std::nullopt;
}

// Full symmetric-orbit solve for a two-hump periodic window; empty when the
// structure does not apply or the seed/solve fails.
std::optional<AtlasEntry> trySymmetricSolve(const Problem& p, const Windows& win,
                                            const SymbolCode& code,
                                            const SolveSettings& s) {
    try {
        const auto& d = p.w->decompose();
        if (d.humpCount() != 2 || p.bc != BcTag::Periodic) return std::nullopt;
        double c0 = 0.5 * (d.humps[0].lo + d.humps[0].hi);
        double span = p.w->period();
        auto humpsSym = humpsInWindow(*p.w, c0, span);
        if (humpsSym.size() != 2) return std::nullopt;
        SymbolCode targetSym = code.rotated(1);
        auto st = symmetricSeed(p, win, c0, span, humpsSym, targetSym, s);
        if (!st) return std::nullopt;
        LadderResult lad = runLadder(p, *st, s);
        if (!lad.converged) return std::nullopt;
        AtlasEntry e = finishEntry(p, lad, humpsSym, win);
        if (!(e.code == targetSym)) return std::nullopt;
        e.code = code;
        return e;
    } catch (const std::exception&) {
        return std::nullopt;
    }
}

} // namespace

AtlasEntry subharmonicSolve(const Problem& p, const Windows& win, const SymbolCode& code,
                            int k, const SolveSettings& s) {
    if (k < 1) throw std::invalid_argument("subharmonicSolve: k must be >= 1");
    if (!code.nonzero()) throw std::invalid_argument("subharmonicSolve: code must be nonzero");
    if (p.bc != BcTag::Periodic)
        throw std::invalid_argument("subharmonicSolve: periodic boundary conditions only");
    const auto& d = p.w->decompose();
    int m = d.humpCount();
    if (code.size() != k * m)
        throw std::invalid_argument("subharmonicSolve: code length must be k*m");

    Weight unrolled = p.w->unrolled(k);
    Problem pk = p;
    pk.w = &unrolled;
    const auto& dk = unrolled.decompose();

    if (auto sym = trySymmetricSolve(pk, win, code, s)) return std::move(*sym);

    HumpSeeds seeds = humpSeeds(p, win, s); // seeds live on the base period
    std::mt19937_64 rng(s.seed ^ 0x9e3779b97f4a7c15ull);

    int shift = 0;
    while (code.digits[static_cast<size_t>(shift)] == 0) ++shift;
    double from = (shift == 0) ? unrolled.start() : dk.humps[static_cast<size_t>(shift)].lo;
    double span = unrolled.period();
    SymbolCode target = (shift == 0) ? code : code.rotated(shift);
    auto humps = humpsInWindow(unrolled, from, span);

    std::string reason = "no convergence";
    for (int attempt = 0; attempt < 6; ++attempt) {
        MsState<double> st =
            stateFromProfile(pk, from, span, humps, target, seeds, m, s, rng, attempt > 0);
        try {
            LadderResult lad = runLadder(pk, st, s);
            if (!lad.converged) {
                reason = "Newton stalled at residual " + std::to_string(lad.bcResidual);
                continue;
            }
            AtlasEntry e = finishEntry(pk, lad, humps, win);
            if (!(e.code == target)) {
                reason = "converged to code " + e.code.str();
                continue;
            }
            e.code = code;
            return e;
        } catch (const std::exception& ex) {
            reason = ex.what();
        }
    }
    throw NoConvergence("subharmonicSolve(" + code.str() + "): " + reason);
}

ValidationReport validateSolution(const Problem& p, const AtlasEntry& entry,
                                  const Windows& win) {
    ValidationReport rep;
    const Trajectory& tr = entry.trajectory;
    double span = tr.t1() - tr.t0();
    double inset = 1e-6 * span;
    bool skipEnds = p.bc == BcTag::Dirichlet || p.bc == BcTag::MixedLR ||
                    p.bc == BcTag::MixedRL;
    double lo = tr.t0() + (skipEnds ? inset : 0.0);
    double hi = tr.t1() - (skipEnds ? inset : 0.0);
    double minU = tr.minU(lo, hi);
    double maxU = tr.maxU(tr.t0(), tr.t1());
    rep.checks.push_back({"positive", minU > 0.0, minU,
                          minU > 0.0 ? "" : "NotPositive: min u <= 0"});
    rep.checks.push_back({"below_R", maxU < win.R, maxU, ""});

    double margin = 1e300;
    for (double mx : entry.humpMaxima)
        for (double edge : {win.r, win.rho, win.R})
            margin = std::min(margin, std::fabs(mx - edge));
    rep.checks.push_back({"window_margin", margin > 1e-9, margin, ""});

    double K = boundK(*p.w, *p.g, p.lambda, win.R);
    double maxY = tr.maxAbsY();
    rep.checks.push_back({"derivative_bound", maxY <= K + 1e-6, maxY, ""});

    rep.checks.push_back({"defect", entry.defect < 1e-7, entry.defect, ""});
    return rep;
}

SemiconjugationReport semiconjugationCheck(const Problem& p, const Windows& win,
                                           const std::vector<AtlasEntry>& entries, int k,
                                           const SolveSettings& s) {
    SemiconjugationReport rep;
    const auto& d = p.w->decompose();
    int m = d.humpCount();
    double T = p.w->period();
    IvpOptions opt;
    opt.atol = s.atol;
    opt.rtol = s.rtol;
    opt.denseOutput = true;

    for (const auto& e : entries) {
        SemiconjugationEntry out;
        out.code = e.code;
        double t0 = e.trajectory.t0();
        // flow z0 forward one period, recode the translated solution
        auto step = integrate_ivp<double>(*p.w, *p.g, p.lambda, p.mu, p.c, t0, e.z0, t0 + T,
                                          opt);
        auto humpsShift = humpsInWindow(*p.w, t0 + T, k * T);
        IvpOptions optFull = opt;
        auto runShift = integrate_ivp<double>(*p.w, *p.g, p.lambda, p.mu, p.c, t0 + T,
                                              step.finalState, t0 + T + k * T, optFull);
        SymbolCode recoded;
        try {
            recoded = classify(runShift.traj, humpsShift, win.r, win.rho, win.R);
        } catch (const std::exception& ex) {
            out.commutes = false;
            out.detail = std::string("recoding failed: ") + ex.what();
            rep.entries.push_back(out);
            continue;
        }
        SymbolCode shifted = e.code.rotated(m); // left shift by one period block
        out.commutes = recoded == shifted;
        if (!out.commutes) {
            for (int block = 0; block < k; ++block) {
                for (int i = 0; i < m; ++i) {
                    size_t idx = static_cast<size_t>(block * m + i);
                    if (recoded.digits[idx] != shifted.digits[idx]) {
                        out.detail = "commutation failure at period block " +
                                     std::to_string(block) + ", hump " + std::to_string(i + 1);
                        break;
                    }
                }
                if (!out.detail.empty()) break;
            }
        }
        // k-fold flow map must return to z0
        std::array<double, 2> z = e.z0;
        for (int j = 0; j < k; ++j) {
            IvpOptions o2 = opt;
            o2.denseOutput = false;
            auto r2 = integrate_ivp<double>(*p.w, *p.g, p.lambda, p.mu, p.c, t0 + j * T, z,
                                            t0 + (j + 1) * T, o2);
            z = r2.finalState;
        }
        out.orbitResidual =
            std::max(std::fabs(z[0] - e.z0[0]), std::fabs(z[1] - e.z0[1]));
        rep.entries.push_back(out);
    }
    return rep;
}

double trajectoryDistance(const Trajectory& a, const Trajectory& b, int samples) {
    double lo = std::max(a.t0(), b.t0());
    double hi = std::min(a.t1(), b.t1());
    if (!(hi > lo)) return 0.0;
    double worst = 0.0;
    for (int i = 0; i <= samples; ++i) {
        double t = lo + (hi - lo) * i / samples;
        worst = std::max(worst, std::fabs(a.eval(t).first - b.eval(t).first));
    }
    return worst;
}

} // namespace humps
