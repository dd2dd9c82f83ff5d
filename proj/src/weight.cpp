#include "humps/weight.hpp"

#include <algorithm>
#include <cmath>

#include "humps/quadrature.hpp"

namespace humps {

namespace {

constexpr double kGeomTol = 1e-12;

bool isZeroValue(double v) { return v == 0.0; }

} // namespace

bool Piece::identicallyZero() const {
    switch (kind) {
        case PieceKind::Constant: return isZeroValue(value);
        case PieceKind::Sine: return isZeroValue(amp);
        case PieceKind::RadialPow: return isZeroValue(coeff);
        case PieceKind::RadialSine: return isZeroValue(amp);
    }
    return false;
}

std::vector<double> Piece::signCrossings() const {
    std::vector<double> out;
    if (identicallyZero()) return out;
    switch (kind) {
        case PieceKind::Constant:
        case PieceKind::RadialPow:
            return out;
        case PieceKind::Sine: {
            // zeros of sin(omega*(t - tOffset) + phase) at argument = j*pi
            double lo = omega * (t0 - tOffset) + phase;
            double hi = omega * (t1 - tOffset) + phase;
            if (omega < 0) std::swap(lo, hi);
            long jlo = static_cast<long>(std::ceil(lo / M_PI - 1e-12));
            long jhi = static_cast<long>(std::floor(hi / M_PI + 1e-12));
            for (long j = jlo; j <= jhi; ++j) {
                double targ = j * M_PI;
                double t = tOffset + (targ - phase) / omega;
                if (t > t0 + kGeomTol && t < t1 - kGeomTol) out.push_back(t);
            }
            std::sort(out.begin(), out.end());
            return out;
        }
        case PieceKind::RadialSine: {
            double ra = radial_radius(t0 - tOffset, dim, rinner);
            double rb = radial_radius(t1 - tOffset, dim, rinner);
            double lo = omega * std::min(ra, rb) + phase;
            double hi = omega * std::max(ra, rb) + phase;
            long jlo = static_cast<long>(std::ceil(lo / M_PI - 1e-12));
            long jhi = static_cast<long>(std::floor(hi / M_PI + 1e-12));
            for (long j = jlo; j <= jhi; ++j) {
                double r = (j * M_PI - phase) / omega;
                if (r <= 0) continue;
                double t = tOffset + radial_time(r, dim, rinner);
                if (t > t0 + kGeomTol && t < t1 - kGeomTol) out.push_back(t);
            }
            std::sort(out.begin(), out.end());
            return out;
        }
    }
    return out;
}

double Piece::integral(double x, double y) const {
    if (y <= x) return 0.0;
    switch (kind) {
        case PieceKind::Constant:
            return value * (y - x);
        case PieceKind::Sine: {
            // product form of cos(Bx) - cos(By); the naive difference cancels
            // catastrophically on windows near the kernel's zeros
            double bx = omega * (x - tOffset) + phase;
            double by = omega * (y - tOffset) + phase;
            return 2.0 * amp / omega * std::sin(0.5 * (bx + by)) * std::sin(0.5 * (by - bx));
        }
        case PieceKind::RadialPow: {
            // dt = r^{1-N} dr turns the integrand into coeff * r^{N-1}
            double rx = radial_radius(x - tOffset, dim, rinner);
            double ry = radial_radius(y - tOffset, dim, rinner);
            return coeff * (std::pow(ry, dim) - std::pow(rx, dim)) / dim;
        }
        case PieceKind::RadialSine: {
            auto f = [&](double t) { return eval(t); };
            return integrate_adaptive(f, x, y, 1e-12);
        }
    }
    return 0.0;
}

Weight::Weight(std::vector<Piece> pieces) : pieces_(std::move(pieces)) {
    if (pieces_.empty()) throw InvalidSignPattern("weight: empty piece list");
    std::sort(pieces_.begin(), pieces_.end(),
              [](const Piece& a, const Piece& b) { return a.t0 < b.t0; });
    for (const auto& p : pieces_) {
        if (!(p.t1 > p.t0 + kGeomTol))
            throw InvalidSignPattern("weight: piece of non-positive width at t=" +
                                     std::to_string(p.t0));
        if ((p.kind == PieceKind::Sine || p.kind == PieceKind::RadialSine) && p.omega == 0.0)
            throw InvalidSignPattern("weight: sine piece with omega = 0");
        if ((p.kind == PieceKind::RadialPow || p.kind == PieceKind::RadialSine) &&
            (p.dim < 2 || p.rinner <= 0.0))
            throw InvalidSignPattern("weight: radial piece needs dim >= 2 and rinner > 0");
    }
    for (size_t i = 1; i < pieces_.size(); ++i) {
        if (std::fabs(pieces_[i].t0 - pieces_[i - 1].t1) > kGeomTol)
            throw InvalidSignPattern("weight: pieces must tile the period contiguously");
        pieces_[i].t0 = pieces_[i - 1].t1; // snap
    }
    start_ = pieces_.front().t0;
    period_ = pieces_.back().t1 - start_;
    buildBreaks();
}

void Weight::buildBreaks() {
    localBreaks_.clear();
    for (const auto& p : pieces_) {
        localBreaks_.push_back(p.t0);
        for (double z : p.signCrossings()) localBreaks_.push_back(z);
    }
    localBreaks_.push_back(pieces_.back().t1);
    std::sort(localBreaks_.begin(), localBreaks_.end());
    localBreaks_.erase(std::unique(localBreaks_.begin(), localBreaks_.end(),
                                   [](double a, double b) { return std::fabs(a - b) < kGeomTol; }),
                       localBreaks_.end());
}

double Weight::reduce(double t) const {
    double k = std::floor((t - start_) / period_);
    double r = t - k * period_;
    if (r >= start_ + period_) r -= period_;
    if (r < start_) r += period_;
    return r;
}

double Weight::signedChunkIntegral(const Piece& p, double x, double y) const {
    return p.integral(std::max(x, p.t0), std::min(y, p.t1));
}

double Weight::integralPos(double x, double y) const {
    if (y <= x) return 0.0;
    double total = 0.0;
    for (const auto& p : pieces_) {
        double lo = std::max(x, p.t0), hi = std::min(y, p.t1);
        if (hi <= lo) continue;
        std::vector<double> cuts{lo};
        for (double z : p.signCrossings())
            if (z > lo && z < hi) cuts.push_back(z);
        cuts.push_back(hi);
        for (size_t j = 0; j + 1 < cuts.size(); ++j) {
            double mid = 0.5 * (cuts[j] + cuts[j + 1]);
            if (p.eval(mid) > 0.0) total += p.integral(cuts[j], cuts[j + 1]);
        }
    }
    return total;
}

double Weight::integralNeg(double x, double y) const {
    if (y <= x) return 0.0;
    double total = 0.0;
    for (const auto& p : pieces_) {
        double lo = std::max(x, p.t0), hi = std::min(y, p.t1);
        if (hi <= lo) continue;
        std::vector<double> cuts{lo};
        for (double z : p.signCrossings())
            if (z > lo && z < hi) cuts.push_back(z);
        cuts.push_back(hi);
        for (size_t j = 0; j + 1 < cuts.size(); ++j) {
            double mid = 0.5 * (cuts[j] + cuts[j + 1]);
            if (p.eval(mid) < 0.0) total -= p.integral(cuts[j], cuts[j + 1]);
        }
    }
    return total;
}

namespace {

enum class SignClass { Pos, Neg, Zero };

struct Run {
    Interval iv;
    SignClass cls;
};

} // namespace

const HumpDecomposition& Weight::decompose() const {
    if (decomp_) return *decomp_;

    // 1. split the window into sign-definite runs
    std::vector<Run> runs;
    for (const auto& p : pieces_) {
        std::vector<double> cuts{p.t0};
        for (double z : p.signCrossings()) cuts.push_back(z);
        cuts.push_back(p.t1);
        for (size_t j = 0; j + 1 < cuts.size(); ++j) {
            double mid = 0.5 * (cuts[j] + cuts[j + 1]);
            SignClass cls;
            if (p.identicallyZero()) cls = SignClass::Zero;
            else {
                double v = p.eval(mid);
                cls = v > 0.0 ? SignClass::Pos : (v < 0.0 ? SignClass::Neg : SignClass::Zero);
            }
            if (!runs.empty() && runs.back().cls == cls &&
                std::fabs(runs.back().iv.hi - cuts[j]) < kGeomTol) {
                runs.back().iv.hi = cuts[j + 1];
            } else {
                runs.push_back({{cuts[j], cuts[j + 1]}, cls});
            }
        }
    }

    // 2. plateau convention: a zero run adjoining positivity joins I+; a zero
    //    run between negativity runs stays inside I-.
    bool changed = true;
    while (changed) {
        changed = false;
        for (size_t j = 0; j < runs.size(); ++j) {
            if (runs[j].cls != SignClass::Zero) continue;
            bool leftPos = j > 0 && runs[j - 1].cls == SignClass::Pos;
            bool rightPos = j + 1 < runs.size() && runs[j + 1].cls == SignClass::Pos;
            bool leftNeg = j > 0 && runs[j - 1].cls == SignClass::Neg;
            bool rightNeg = j + 1 < runs.size() && runs[j + 1].cls == SignClass::Neg;
            SignClass target;
            if (leftPos || rightPos) target = SignClass::Pos;
            else if (leftNeg || rightNeg) target = SignClass::Neg;
            else continue;
            runs[j].cls = target;
            // merge with equal-class neighbours
            if (j + 1 < runs.size() && runs[j + 1].cls == target) {
                runs[j].iv.hi = runs[j + 1].iv.hi;
                runs.erase(runs.begin() + j + 1);
            }
            if (j > 0 && runs[j - 1].cls == target) {
                runs[j - 1].iv.hi = runs[j].iv.hi;
                runs.erase(runs.begin() + j);
            }
            changed = true;
            break;
        }
    }

    for (const auto& r : runs)
        if (r.cls == SignClass::Zero)
            throw InvalidSignPattern("weight: identically zero on the whole period");

    // 3. assemble humps and negativity intervals
    HumpDecomposition d;
    size_t j = 0;
    if (runs[j].cls == SignClass::Neg) {
        d.headNeg = runs[j].iv;
        ++j;
    }
    while (j < runs.size()) {
        if (runs[j].cls != SignClass::Pos)
            throw InvalidSignPattern("weight: sign runs do not alternate");
        d.humps.push_back(runs[j].iv);
        ++j;
        if (j < runs.size()) {
            if (runs[j].cls != SignClass::Neg)
                throw InvalidSignPattern("weight: sign runs do not alternate");
            d.negAfter.push_back(runs[j].iv);
            ++j;
        } else {
            d.negAfter.push_back(std::nullopt);
        }
    }
    if (d.humps.empty())
        throw InvalidSignPattern("weight: no positivity hump (int a+ must be > 0)");
    bool anyNeg = d.headNeg.has_value();
    for (const auto& n : d.negAfter) anyNeg = anyNeg || n.has_value();
    if (!anyNeg)
        throw InvalidSignPattern("weight: no negativity interval (int a- must be > 0)");

    decomp_ = std::move(d);
    return *decomp_;
}

double HumpDecomposition::maxHumpLength() const {
    double m = 0.0;
    for (const auto& h : humps) m = std::max(m, h.length());
    return m;
}

double HumpDecomposition::maxPairLength() const {
    double m = 0.0;
    for (size_t i = 0; i < humps.size(); ++i) {
        if (negAfter[i])
            m = std::max(m, humps[i].length() + negAfter[i]->length());
    }
    // Neumann/Dirichlet tail-less weights: the last hump pairs with nothing;
    // pair it with the head interval if one exists (cyclic reading).
    if (!negAfter.back() && headNeg)
        m = std::max(m, humps.back().length() + headNeg->length());
    return m;
}

WeightIntegrals Weight::integrals() const {
    const HumpDecomposition& d = decompose();
    WeightIntegrals w;
    w.weight = this;
    const double nan = std::nan("");
    for (size_t i = 0; i < d.humps.size(); ++i) {
        const Interval& hp = d.humps[i];
        w.normPlus.push_back(integralPos(hp.lo, hp.hi));
        w.lenPlus.push_back(hp.length());
        if (d.negAfter[i]) {
            const Interval& ng = *d.negAfter[i];
            double nm = integralNeg(ng.lo, ng.hi);
            w.normMinus.push_back(nm);
            w.lenMinus.push_back(ng.length());
            auto Ai = [&](double t) { return integralNeg(ng.lo, t); };
            w.normAi.push_back(integrate_adaptive(Ai, ng.lo, ng.hi, 1e-12));
        } else {
            w.normMinus.push_back(nan);
            w.lenMinus.push_back(nan);
            w.normAi.push_back(nan);
        }
    }
    for (size_t i = 0; i < d.humps.size(); ++i) {
        if (!(w.normPlus[i] > 0.0))
            throw InvalidSignPattern("weight: hump " + std::to_string(i + 1) +
                                     " has vanishing positive mass");
        if (d.negAfter[i] && !(w.normMinus[i] > 0.0))
            throw InvalidSignPattern("weight: negativity interval " + std::to_string(i + 1) +
                                     " has vanishing negative mass");
    }
    return w;
}

double WeightIntegrals::Ai(int i, double t) const {
    const auto& d = weight->decompose();
    const Interval& ng = *d.negAfter[static_cast<size_t>(i)];
    return weight->integralNeg(ng.lo, std::min(t, ng.hi));
}

double WeightIntegrals::Bi(int i, double t) const {
    const auto& d = weight->decompose();
    const Interval& ng = *d.negAfter[static_cast<size_t>(i)];
    return weight->integralNeg(std::max(t, ng.lo), ng.hi);
}

double WeightIntegrals::intAi(int i, double x, double y) const {
    auto f = [&](double t) { return Ai(i, t); };
    return integrate_adaptive(f, x, y, 1e-12);
}

double WeightIntegrals::intBi(int i, double x, double y) const {
    auto f = [&](double t) { return Bi(i, t); };
    return integrate_adaptive(f, x, y, 1e-12);
}

std::vector<double> Weight::breakpointsIn(double from, double to) const {
    std::vector<double> out;
    if (to <= from) return out;
    long kFrom = static_cast<long>(std::floor((from - start_) / period_)) - 1;
    long kTo = static_cast<long>(std::ceil((to - start_) / period_)) + 1;
    for (long k = kFrom; k <= kTo; ++k) {
        double shift = k * period_;
        for (double b : localBreaks_) {
            double t = b + shift;
            if (t > from + kGeomTol && t < to - kGeomTol) out.push_back(t);
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end(),
                          [](double a, double b) { return std::fabs(a - b) < kGeomTol; }),
              out.end());
    return out;
}

Weight Weight::unrolled(int k) const {
    if (k < 1) throw std::invalid_argument("unrolled: k must be >= 1");
    if (k == 1) return *this;
    std::vector<Piece> ps;
    ps.reserve(pieces_.size() * static_cast<size_t>(k));
    for (int j = 0; j < k; ++j) {
        double shift = j * period_;
        for (Piece p : pieces_) {
            p.t0 += shift;
            p.t1 += shift;
            p.tOffset += shift;
            ps.push_back(p);
        }
    }
    return Weight(std::move(ps));
}

} // namespace humps
