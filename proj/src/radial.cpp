#include "humps/radial.hpp"

#include <cmath>

namespace humps {

namespace {

double evalQ(const AnnulusProblem& p, double r) {
    for (const auto& q : p.profile) {
        bool last = &q == &p.profile.back();
        if (r >= q.r0 && (r < q.r1 || last)) {
            if (q.kind == PieceKind::Constant) return q.value;
            return q.amp * std::sin(q.omega * r + q.phase);
        }
    }
    return 0.0;
}

} // namespace

ReducedProblem reduce(const AnnulusProblem& p) {
    if (!(p.rInner > 0.0) || !(p.rOuter > p.rInner))
        throw InvalidRadii("annulus needs 0 < R1 < R2");
    if (p.dim < 2) throw InvalidRadii("annulus dimension must be >= 2");
    if (p.profile.empty()) throw InvalidSignPattern("annulus profile is empty");
    for (const auto& q : p.profile)
        if (q.kind != PieceKind::Constant && q.kind != PieceKind::Sine)
            throw InvalidSignPattern("annulus profile pieces must be constant or sine");

    std::vector<Piece> pieces;
    for (const auto& q : p.profile) {
        Piece out;
        out.t0 = radial_time(q.r0, p.dim, p.rInner);
        out.t1 = radial_time(q.r1, p.dim, p.rInner);
        out.dim = p.dim;
        out.rinner = p.rInner;
        if (q.kind == PieceKind::Constant) {
            out.kind = PieceKind::RadialPow;
            out.coeff = q.value;
        } else {
            out.kind = PieceKind::RadialSine;
            out.amp = q.amp;
            out.omega = q.omega;
            out.phase = q.phase;
        }
        pieces.push_back(out);
    }
    ReducedProblem red{Weight(std::move(pieces)),
                       radial_time(p.rOuter, p.dim, p.rInner)};
    return red;
}

RadialProfile liftSolution(const Trajectory& traj, const AnnulusProblem& p, int samples) {
    RadialProfile prof;
    prof.reduced = traj;
    prof.dim = p.dim;
    prof.rInner = p.rInner;
    for (int i = 0; i <= samples; ++i) {
        double r = p.rInner + (p.rOuter - p.rInner) * i / samples;
        double t = radial_time(r, p.dim, p.rInner);
        auto [u, y] = traj.eval(t);
        prof.r.push_back(r);
        prof.U.push_back(u);
        prof.dU.push_back(y * std::pow(r, 1.0 - p.dim));
    }
    return prof;
}

double radialResidual(const RadialProfile& profile, const AnnulusProblem& p,
                      const Nonlinearity& g, double lambda, double mu) {
    double worst = 0.0;
    for (size_t i = 0; i < profile.r.size(); ++i) {
        double r = profile.r[i];
        double t = radial_time(r, p.dim, p.rInner);
        // (r^{N-1} U')'(r) = ydot(h(r)) * r^{1-N}
        double ydot = profile.reduced.evalYdot(t);
        double q = evalQ(p, r);
        double qlm = lambda * std::max(q, 0.0) - mu * std::max(-q, 0.0);
        double res = ydot * std::pow(r, 1.0 - p.dim) +
                     std::pow(r, p.dim - 1.0) * qlm * g(profile.U[i]);
        worst = std::max(worst, std::fabs(res));
    }
    return worst;
}

} // namespace humps
