#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "humps/errors.hpp"
#include "humps/qmath.hpp"

namespace humps {

enum class KernelKind { RationalSquare, ArctanCube, PowerBlend, Tabulated, Linear };

// Scalar nonlinearity g with g(0)=0, g>0 on (0,inf). The named kernels are
// super-sublinear; Linear is a test kernel and Tabulated is user data (a
// monotone cubic through the table). The growth conditions at 0 and infinity
// are probed numerically at construction; failures are warnings, not errors.
class Nonlinearity {
public:
    static Nonlinearity rationalSquare();
    static Nonlinearity arctanCube();
    static Nonlinearity powerBlend(double alpha, double beta);
    static Nonlinearity linear();
    static Nonlinearity tabulated(std::vector<double> s, std::vector<double> g);

    KernelKind kind() const { return kind_; }
    double alpha() const { return alpha_; }
    double beta() const { return beta_; }
    double scaleRef() const { return sref_; }
    void setScaleRef(double s) { sref_ = s; }

    const std::vector<std::string>& warnings() const { return warnings_; }
    bool hasDerivative() const { return kind_ != KernelKind::Tabulated ? true : true; }
    bool lipschitz() const { return lipschitz_; }

    template <class Real>
    Real operator()(Real s) const;

    template <class Real>
    Real derivative(Real s) const;

    // Envelope functionals.
    double zeta(double d) const;                 // max of g(s)/s on [d/2, d]
    double gammaEnv(double d) const;             // min of g(s)/s on [d/2, d]
    double gStar(double d) const;                // max of g on [0, d]
    double gLower(double d, double D) const;     // min of g on [d, D]

    std::string describe() const;

private:
    Nonlinearity() = default;
    void validate();

    double evalD(double s) const;
    double derivD(double s) const;

    KernelKind kind_ = KernelKind::RationalSquare;
    double alpha_ = 2.0;
    double beta_ = 0.5;
    double sref_ = 1.0;
    bool lipschitz_ = true;
    std::vector<std::string> warnings_;

    // tabulated data (monotone cubic, Fritsch-Carlson slopes)
    std::vector<double> ts_, tg_, tm_;
};

// --- template members ---

template <class Real>
Real Nonlinearity::operator()(Real s) const {
    // test kernel: plain identity on the whole line (closed-form oscillator)
    if (kind_ == KernelKind::Linear) return s;
    if (s <= Real(0)) return Real(0); // extension g(s)=0 for s<=0
    switch (kind_) {
        case KernelKind::RationalSquare:
            return s * s / (Real(1) + s * s);
        case KernelKind::ArctanCube:
            return atan(s * s * s);
        case KernelKind::PowerBlend:
            return pow(s, Real(alpha_)) / (Real(1) + pow(s, Real(alpha_ - beta_)));
        case KernelKind::Linear:
            return s;
        case KernelKind::Tabulated:
            return Real(evalD(static_cast<double>(s)));
    }
    return Real(0);
}

template <class Real>
Real Nonlinearity::derivative(Real s) const {
    if (kind_ == KernelKind::Linear) return Real(1);
    if (s <= Real(0)) return Real(0);
    switch (kind_) {
        case KernelKind::RationalSquare: {
            Real q = Real(1) + s * s;
            return Real(2) * s / (q * q);
        }
        case KernelKind::ArctanCube: {
            Real s3 = s * s * s;
            return Real(3) * s * s / (Real(1) + s3 * s3);
        }
        case KernelKind::PowerBlend: {
            Real p = pow(s, Real(alpha_ - beta_));
            Real q = Real(1) + p;
            return pow(s, Real(alpha_ - 1.0)) * (Real(alpha_) + Real(beta_) * p) / (q * q);
        }
        case KernelKind::Linear:
            return Real(1);
        case KernelKind::Tabulated:
            return Real(derivD(static_cast<double>(s)));
    }
    return Real(0);
}

} // namespace humps
