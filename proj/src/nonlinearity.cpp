#include "humps/nonlinearity.hpp"

#include <algorithm>
#include <cmath>

#include "humps/util.hpp"

namespace humps {

Nonlinearity Nonlinearity::rationalSquare() {
    Nonlinearity g;
    g.kind_ = KernelKind::RationalSquare;
    g.validate();
    return g;
}

Nonlinearity Nonlinearity::arctanCube() {
    Nonlinearity g;
    g.kind_ = KernelKind::ArctanCube;
    g.validate();
    return g;
}

Nonlinearity Nonlinearity::powerBlend(double alpha, double beta) {
    if (!(alpha > 1.0) || !(beta > 0.0) || !(beta < 1.0))
        throw NonPositiveInput("power_blend needs alpha > 1 and 0 < beta < 1");
    Nonlinearity g;
    g.kind_ = KernelKind::PowerBlend;
    g.alpha_ = alpha;
    g.beta_ = beta;
    g.validate();
    return g;
}

Nonlinearity Nonlinearity::linear() {
    Nonlinearity g;
    g.kind_ = KernelKind::Linear;
    g.validate();
    return g;
}

Nonlinearity Nonlinearity::tabulated(std::vector<double> s, std::vector<double> gv) {
    if (s.size() != gv.size() || s.size() < 3)
        throw NonPositiveInput("tabulated kernel needs >= 3 (s, g) pairs");
    Nonlinearity g;
    g.kind_ = KernelKind::Tabulated;
    g.ts_ = std::move(s);
    g.tg_ = std::move(gv);
    for (size_t i = 1; i < g.ts_.size(); ++i)
        if (!(g.ts_[i] > g.ts_[i - 1]))
            throw NonPositiveInput("tabulated kernel: s values must increase strictly");
    if (g.ts_.front() != 0.0 || g.tg_.front() != 0.0)
        throw NonPositiveInput("tabulated kernel: table must start at (0, 0)");
    // Fritsch-Carlson monotone slopes
    size_t n = g.ts_.size();
    std::vector<double> delta(n - 1);
    for (size_t i = 0; i + 1 < n; ++i)
        delta[i] = (g.tg_[i + 1] - g.tg_[i]) / (g.ts_[i + 1] - g.ts_[i]);
    g.tm_.assign(n, 0.0);
    g.tm_[0] = delta[0];
    g.tm_[n - 1] = delta[n - 2];
    for (size_t i = 1; i + 1 < n; ++i) {
        if (delta[i - 1] * delta[i] <= 0.0) g.tm_[i] = 0.0;
        else g.tm_[i] = 2.0 * delta[i - 1] * delta[i] / (delta[i - 1] + delta[i]);
    }
    for (size_t i = 0; i + 1 < n; ++i) {
        if (delta[i] == 0.0) { g.tm_[i] = g.tm_[i + 1] = 0.0; continue; }
        double a = g.tm_[i] / delta[i], b = g.tm_[i + 1] / delta[i];
        double r = a * a + b * b;
        if (r > 9.0) {
            double tau = 3.0 / std::sqrt(r);
            g.tm_[i] = tau * a * delta[i];
            g.tm_[i + 1] = tau * b * delta[i];
        }
    }
    g.validate();
    return g;
}

double Nonlinearity::evalD(double s) const {
    if (s <= ts_.front()) return tg_.front();
    if (s >= ts_.back()) return tg_.back(); // flat extension past the table
    size_t hi = static_cast<size_t>(
        std::upper_bound(ts_.begin(), ts_.end(), s) - ts_.begin());
    size_t lo = hi - 1;
    double h = ts_[hi] - ts_[lo];
    double x = (s - ts_[lo]) / h;
    double h00 = (1 + 2 * x) * (1 - x) * (1 - x);
    double h10 = x * (1 - x) * (1 - x);
    double h01 = x * x * (3 - 2 * x);
    double h11 = x * x * (x - 1);
    return h00 * tg_[lo] + h10 * h * tm_[lo] + h01 * tg_[hi] + h11 * h * tm_[hi];
}

double Nonlinearity::derivD(double s) const {
    if (s <= ts_.front() || s >= ts_.back()) return 0.0;
    size_t hi = static_cast<size_t>(
        std::upper_bound(ts_.begin(), ts_.end(), s) - ts_.begin());
    size_t lo = hi - 1;
    double h = ts_[hi] - ts_[lo];
    double x = (s - ts_[lo]) / h;
    double d00 = 6 * x * x - 6 * x;
    double d10 = 3 * x * x - 4 * x + 1;
    double d01 = -6 * x * x + 6 * x;
    double d11 = 3 * x * x - 2 * x;
    return (d00 * tg_[lo] / h + d10 * tm_[lo] + d01 * tg_[hi] / h + d11 * tm_[hi]);
}

void Nonlinearity::validate() {
    auto g = [&](double s) { return (*this)(s); };
    if (std::fabs(g(0.0)) > 1e-15)
        warnings_.push_back("g(0) != 0");
    for (double s : {1e-3 * sref_, 0.5 * sref_, sref_, 10.0 * sref_}) {
        if (!(g(s) > 0.0)) {
            warnings_.push_back("g(s) <= 0 at probe s=" + std::to_string(s));
            break;
        }
    }
    double s0 = 1e-6 * sref_, sInf = 1e6 * sref_;
    if (!(g(s0) / s0 < 1e-3))
        warnings_.push_back("superlinearity at 0 not visible at probe (g0)");
    if (!(g(sInf) / sInf < 1e-3))
        warnings_.push_back("sublinearity at infinity not visible at probe (ginf)");
    lipschitz_ = kind_ != KernelKind::PowerBlend || alpha_ >= 1.0;
}

double Nonlinearity::zeta(double d) const {
    if (!(d > 0.0)) throw NonPositiveInput("zeta: d must be > 0");
    auto f = [&](double s) { return (*this)(s) / s; };
    return scan_extremize(f, 0.5 * d, d, /*maximize=*/true);
}

double Nonlinearity::gammaEnv(double d) const {
    if (!(d > 0.0)) throw NonPositiveInput("gamma: d must be > 0");
    auto f = [&](double s) { return (*this)(s) / s; };
    return scan_extremize(f, 0.5 * d, d, /*maximize=*/false);
}

double Nonlinearity::gStar(double d) const {
    if (!(d > 0.0)) throw NonPositiveInput("gStar: d must be > 0");
    auto f = [&](double s) { return (*this)(s); };
    return scan_extremize(f, 0.0, d, /*maximize=*/true);
}

double Nonlinearity::gLower(double d, double D) const {
    if (!(d > 0.0) || !(D > d)) throw NonPositiveInput("gLower: need 0 < d < D");
    auto f = [&](double s) { return (*this)(s); };
    return scan_extremize(f, d, D, /*maximize=*/false);
}

std::string Nonlinearity::describe() const {
    switch (kind_) {
        case KernelKind::RationalSquare: return "rational_square";
        case KernelKind::ArctanCube: return "arctan_cube";
        case KernelKind::PowerBlend:
            return "power_blend(alpha=" + std::to_string(alpha_) +
                   ", beta=" + std::to_string(beta_) + ")";
        case KernelKind::Tabulated: return "tabulated[" + std::to_string(ts_.size()) + "]";
        case KernelKind::Linear: return "linear";
    }
    return "?";
}

} // namespace humps
