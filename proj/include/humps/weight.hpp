#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "humps/errors.hpp"
#include "humps/qmath.hpp"
#include "humps/util.hpp"

namespace humps {

enum class PieceKind { Constant, Sine, RadialPow, RadialSine };

// One segment of the weight on [t0, t1].
//   Constant:   a(t) = value
//   Sine:       a(t) = amp * sin(omega * (t - tOffset) + phase)
//   RadialPow:  a(t) = coeff * r(t)^(2(dim-1)), r(t) the annulus radius map
//   RadialSine: a(t) = amp * sin(omega * r(t) + phase) * r(t)^(2(dim-1))
// tOffset shifts the kernel argument; periodic unrolling uses it so copies
// evaluate identically to the originals.
struct Piece {
    PieceKind kind = PieceKind::Constant;
    double t0 = 0.0;
    double t1 = 0.0;
    double value = 0.0;
    double amp = 1.0;
    double omega = 1.0;
    double phase = 0.0;
    double coeff = 0.0;
    int dim = 2;
    double rinner = 1.0;
    double tOffset = 0.0;

    template <class Real>
    Real eval(Real t) const;

    // Interior points in (t0, t1) where the sign of a changes.
    std::vector<double> signCrossings() const;

    // Exact/adaptive integral of a over [x, y] subset of [t0, t1].
    double integral(double x, double y) const;

    bool identicallyZero() const;
};

// Radius map of the annulus reduction; kept here because radial pieces embed it.
template <class Real>
Real radial_radius(Real t, int dim, Real rinner) {
    if (dim == 2) return rinner * exp(t);
    Real e = Real(2 - dim);
    return pow(pow(rinner, e) - Real(dim - 2) * t, Real(1) / e);
}

inline double radial_time(double r, int dim, double rinner) {
    if (dim == 2) return std::log(r / rinner);
    double e = double(2 - dim);
    return (std::pow(rinner, e) - std::pow(r, e)) / double(dim - 2);
}

// Hump decomposition after the zero-plateau convention is applied.
// humps[i] = I+_{i+1}; negAfter[i] = the negativity interval following hump i
// when it exists (it always does for i < m-1). headNeg is the optional
// negativity interval before the first hump (Neumann/Dirichlet sign pattern).
struct HumpDecomposition {
    std::vector<Interval> humps;
    std::vector<std::optional<Interval>> negAfter;
    std::optional<Interval> headNeg;

    int humpCount() const { return static_cast<int>(humps.size()); }
    bool periodicNormalForm() const {
        return !headNeg && !humps.empty() && negAfter.back().has_value();
    }
    double maxHumpLength() const;
    double maxPairLength() const; // max_i (|I+_i| + |I-_i|) over existing pairs
};

// Integral quantities of the decomposition used by every threshold formula.
class Weight;
struct WeightIntegrals {
    std::vector<double> normPlus;   // per hump
    std::vector<double> lenPlus;
    std::vector<double> normMinus;  // per existing negAfter[i]; NaN when absent
    std::vector<double> lenMinus;
    std::vector<double> normAi;     // integral of A_i over I-_i; NaN when absent

    const Weight* weight = nullptr;

    bool hasNeg(int i) const { return !std::isnan(normMinus[static_cast<size_t>(i)]); }
    double Ai(int i, double t) const;                 // A_i(t) = int_{tau_i}^t a^-
    double Bi(int i, double t) const;                 // B_i(t) = int_t^{sigma_{i+1}} a^-
    double intAi(int i, double x, double y) const;    // int_x^y A_i(t) dt
    double intBi(int i, double x, double y) const;
};

class Weight {
public:
    explicit Weight(std::vector<Piece> pieces);

    double start() const { return start_; }
    double period() const { return period_; }
    const std::vector<Piece>& pieces() const { return pieces_; }

    // Reduce t into [start, start + period).
    double reduce(double t) const;

    // Raw a(t), T-periodic in t.
    template <class Real>
    Real evalRaw(Real t) const;

    // lambda * a^+(t) - mu * a^-(t). Total on the reals.
    template <class Real>
    Real evaluate(Real t, Real lambda, Real mu) const;

    // Hump decomposition under the plateau-joins-I+ convention.
    const HumpDecomposition& decompose() const;

    WeightIntegrals integrals() const;

    // Integral of a^+ / a^- (both >= 0) over [x, y] within one base window.
    double integralPos(double x, double y) const;
    double integralNeg(double x, double y) const;

    // All points in [from, to] where the weighted coefficient loses smoothness
    // (piece boundaries and sign crossings), period-extended.
    std::vector<double> breakpointsIn(double from, double to) const;

    // Weight with the piece list repeated k times; period k*T.
    Weight unrolled(int k) const;

private:
    std::vector<Piece> pieces_;
    double start_;
    double period_;
    std::vector<double> localBreaks_; // within [start, start+period], sorted
    mutable std::optional<HumpDecomposition> decomp_;

    double signedChunkIntegral(const Piece& p, double x, double y) const;
    void buildBreaks();
};

// --- template member definitions ---

template <class Real>
Real Piece::eval(Real t) const {
    Real tt = t - Real(tOffset);
    switch (kind) {
        case PieceKind::Constant:
            return Real(value);
        case PieceKind::Sine:
            return Real(amp) * sin(Real(omega) * tt + Real(phase));
        case PieceKind::RadialPow: {
            Real r = radial_radius(tt, dim, Real(rinner));
            return Real(coeff) * pow(r, Real(2 * (dim - 1)));
        }
        case PieceKind::RadialSine: {
            Real r = radial_radius(tt, dim, Real(rinner));
            return Real(amp) * sin(Real(omega) * r + Real(phase)) * pow(r, Real(2 * (dim - 1)));
        }
    }
    return Real(0);
}

template <class Real>
Real Weight::evalRaw(Real t) const {
    // Reduction mod T happens in double; breakpoints are double data, and the
    // pieces are evaluated in Real past that point.
    double td = reduce(static_cast<double>(t));
    Real tr = t - Real(static_cast<double>(t) - td);
    // Half-open convention [t0, t1): the lookup lands on the right piece at
    // shared boundaries.
    const Piece* hit = &pieces_.back();
    for (const auto& p : pieces_) {
        if (td < p.t1) { hit = &p; break; }
    }
    return hit->eval(tr);
}

template <class Real>
Real Weight::evaluate(Real t, Real lambda, Real mu) const {
    Real v = evalRaw(t);
    if (v >= Real(0)) return lambda * v;
    return mu * v; // v < 0: lambda*a+ - mu*a- = mu * v
}

} // namespace humps
