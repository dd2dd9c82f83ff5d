#pragma once

#include <vector>

#include "humps/bvp.hpp"
#include "humps/weight.hpp"

namespace humps {

// Radial profile piece grammar on [r1, r2]: constant or sine in the radius.
struct RadialPiece {
    PieceKind kind = PieceKind::Constant; // Constant or Sine only
    double r0 = 0.0;
    double r1 = 0.0;
    double value = 0.0; // Constant
    double amp = 1.0;   // Sine: amp * sin(omega * r + phase)
    double omega = 1.0;
    double phase = 0.0;
};

struct AnnulusProblem {
    int dim = 2;        // space dimension N >= 2
    double rInner = 0.0;
    double rOuter = 0.0;
    std::vector<RadialPiece> profile; // Q(r) on [rInner, rOuter]
    BcTag bc = BcTag::Dirichlet;      // Dirichlet or Neumann
};

struct ReducedProblem {
    Weight weight;   // a(t) = r(t)^{2(N-1)} Q(r(t)) on [0, T']
    double horizon;  // T' = int_{R1}^{R2} s^{1-N} ds
};

// Change of variable t = h(r) = int_{R1}^r s^{1-N} ds.
ReducedProblem reduce(const AnnulusProblem& p);

struct RadialProfile {
    std::vector<double> r;
    std::vector<double> U;  // U(r) = u(h(r))
    std::vector<double> dU; // U'(r) = u'(h(r)) r^{1-N}
    Trajectory reduced;     // the 1D trajectory behind the samples
    int dim = 2;
    double rInner = 0.0;
};

RadialProfile liftSolution(const Trajectory& traj, const AnnulusProblem& p,
                           int samples = 2000);

// max defect of (r^{N-1} U')' + r^{N-1} Q_{lambda,mu}(r) g(U) = 0 over the
// sample mesh; the derivative comes from the reduced dense output through the
// change of variables, the nonlinear term from the profile samples.
double radialResidual(const RadialProfile& profile, const AnnulusProblem& p,
                      const Nonlinearity& g, double lambda, double mu);

} // namespace humps
