#include "humps/thresholds.hpp"

#include <algorithm>
#include <cmath>

#include "humps/util.hpp"

namespace humps {

namespace {

const double kNaN = std::nan("");

double maxPairTimesNorm(const HumpDecomposition& d, const WeightIntegrals& wi) {
    double m = 0.0;
    int n = d.humpCount();
    for (int i = 0; i < n; ++i) {
        if (d.negAfter[static_cast<size_t>(i)]) {
            double pair = d.humps[static_cast<size_t>(i)].length() +
                          d.negAfter[static_cast<size_t>(i)]->length();
            m = std::max(m, pair * wi.normPlus[static_cast<size_t>(i)]);
        }
    }
    if (!d.negAfter.back() && d.headNeg) {
        double pair = d.humps.back().length() + d.headNeg->length();
        m = std::max(m, pair * wi.normPlus.back());
    }
    if (m == 0.0) {
        // single hump with head negativity only; fall back to hump alone
        for (int i = 0; i < n; ++i)
            m = std::max(m, d.humps[static_cast<size_t>(i)].length() *
                                wi.normPlus[static_cast<size_t>(i)]);
    }
    return m;
}

double condBound(const Weight& w, double lambda) {
    const auto& d = w.decompose();
    WeightIntegrals wi = w.integrals();
    return 1.0 / (2.0 * lambda * maxPairTimesNorm(d, wi));
}

// zeta(s) < bound on every point of a log grid over [lo, hi].
bool certifiedBelow(const Nonlinearity& g, double bound, double lo, double hi, int n = 192) {
    if (hi <= lo) return true;
    double ratio = std::pow(hi / lo, 1.0 / n);
    double s = lo;
    for (int i = 0; i <= n; ++i) {
        if (!(g.zeta(s) < bound)) return false;
        s = (i + 1 == n) ? hi : s * ratio;
    }
    return true;
}

} // namespace

LambdaStarInfo lambdaStar(const Weight& w, const Nonlinearity& g, double rho,
                          std::optional<double> eps) {
    if (!(rho > 0.0)) throw NonPositiveInput("lambdaStar: rho must be > 0");
    const auto& d = w.decompose();
    double minHalf = 1e300;
    for (const auto& h : d.humps) minHalf = std::min(minHalf, 0.5 * h.length());
    double maxLen = d.maxHumpLength();

    auto evalAt = [&](double e) -> std::optional<LambdaStarInfo> {
        double nu = 1e300;
        for (const auto& h : d.humps)
            nu = std::min(nu, w.integralPos(h.lo + e, h.hi - e));
        if (!(nu > 0.0)) return std::nullopt;
        double sLo = e * rho / maxLen;
        double eta = scan_extremize([&](double s) { return g(s); }, sLo, rho,
                                    /*maximize=*/false);
        if (!(eta > 0.0)) return std::nullopt;
        LambdaStarInfo info;
        info.value = 2.0 * rho / (e * nu * eta);
        info.epsilon = e;
        info.nu = nu;
        info.eta = eta;
        return info;
    };

    if (eps) {
        if (!(*eps > 0.0) || !(*eps < minHalf))
            throw EpsilonTooLarge("lambdaStar: need 0 < eps < min_i (tau_i - sigma_i)/2");
        auto info = evalAt(*eps);
        if (!info) throw DegenerateHump("lambdaStar: nu_eps = 0 at the requested eps");
        return *info;
    }

    // auto: minimize over a 64-point log grid of eps
    std::optional<LambdaStarInfo> best;
    double lo = minHalf * 1e-4, hi = minHalf * (1.0 - 1e-9);
    for (int i = 0; i < 64; ++i) {
        double e = lo * std::pow(hi / lo, i / 63.0);
        auto info = evalAt(e);
        if (info && (!best || info->value < best->value)) best = info;
    }
    if (!best) throw DegenerateHump("lambdaStar: nu_eps = 0 on the whole eps grid");
    return *best;
}

std::pair<double, double> admissibleRR(const Weight& w, const Nonlinearity& g, double lambda,
                                       double rho) {
    if (!(lambda > 0.0)) throw NonPositiveInput("admissibleRR: lambda must be > 0");
    double bound = condBound(w, lambda);
    double tol = 1e-6 * rho;

    // small radius: largest r <= rho/2 with zeta < bound certified on (0, r]
    double r = 0.5 * rho;
    int guard = 0;
    while (guard++ < 1000 && r > 1e-250 && !(g.zeta(r) < bound)) r *= 0.5;
    if (!(r > 1e-250) || !(g.zeta(r) < bound))
        throw NoAdmissibleR("no r with zeta(r) below the bound; check (g0)");
    if (r < 0.5 * rho) {
        // bisect the predicate boundary in [r, 2r]
        double lo = r, hi = std::min(2.0 * r, 0.5 * rho);
        while (hi - lo > tol) {
            double mid = 0.5 * (lo + hi);
            if (g.zeta(mid) < bound) lo = mid;
            else hi = mid;
        }
        r = lo;
    }
    for (int k = 0; k < 60; ++k) {
        if (certifiedBelow(g, bound, r * 1e-9, r)) break;
        r *= 0.5;
        if (!(r > 0.0)) throw NoAdmissibleR("tail certification near 0 failed; check (g0)");
    }

    // large radius: smallest R >= 2 rho with zeta < bound certified on [R, 10R]
    double R = 2.0 * rho;
    guard = 0;
    while (guard++ < 1000 && R < 1e250 && !(g.zeta(R) < bound)) R *= 2.0;
    if (!(R < 1e250) || !(g.zeta(R) < bound))
        throw NoAdmissibleR("no R with zeta(R) below the bound; check (ginf)");
    if (R > 2.0 * rho) {
        double lo = 0.5 * R, hi = R;
        while (hi - lo > tol * std::max(1.0, R / rho)) {
            double mid = 0.5 * (lo + hi);
            if (g.zeta(mid) < bound) hi = mid;
            else lo = mid;
        }
        R = hi;
    }
    for (int k = 0; k < 60; ++k) {
        bool gridOk = certifiedBelow(g, bound, R, 10.0 * R);
        bool probeOk = g(10.0 * R) / (10.0 * R) < bound;   // (ginf) probe
        bool monoOk = g.zeta(10.0 * R) <= g.zeta(R) * 1.5; // envelope not re-growing
        if (gridOk && probeOk && monoOk) break;
        R *= 2.0;
        if (k == 59) throw NoAdmissibleR("tail certification at infinity failed; check (ginf)");
    }
    return {r, R};
}

bool checkCondRR(const Weight& w, const Nonlinearity& g, double lambda, double r, double R) {
    double bound = condBound(w, lambda);
    return certifiedBelow(g, bound, r * 1e-9, r) && certifiedBelow(g, bound, R, 10.0 * R);
}

ParamSet muThresholds(const Weight& w, const Nonlinearity& g, double lambda, double rho,
                      double r, double R, bool periodic, double c) {
    if (!(0.0 < r && r < rho && rho < R))
        throw NonPositiveInput("muThresholds: need 0 < r < rho < R");
    const auto& d = w.decompose();
    WeightIntegrals wi = w.integrals();
    int m = d.humpCount();

    if (periodic && !d.periodicNormalForm())
        throw InvalidSignPattern(
            "periodic thresholds need the normal form: weight starts with a hump and ends "
            "with a negativity interval");

    ParamSet ps;
    ps.lambda = lambda;
    ps.rho = rho;
    ps.r = r;
    ps.R = R;
    ps.c = c;
    ps.periodic = periodic;
    ps.condRRBound = condBound(w, lambda);

    double gammaR = g.gammaEnv(R);
    double gammar = g.gammaEnv(r);
    double gstarR = g.gStar(R);
    double glow = g.gLower(r, R);

    auto humpExists = [&](int i) { return periodic || (i >= 0 && i < m); };
    auto humpIdx = [&](int i) { return ((i % m) + m) % m; };

    ThresholdBreakdown tb;
    auto& hat = tb.muHat;
    auto& chk = tb.muCheck;
    auto& til = tb.muTilde;
    auto& bar = tb.muBar;
    auto& sp = tb.muStarPlus;
    auto& sm = tb.muStarMinus;
    hat.assign(static_cast<size_t>(m), kNaN);
    chk.assign(static_cast<size_t>(m), kNaN);
    til.assign(static_cast<size_t>(m), kNaN);
    bar.assign(static_cast<size_t>(m), kNaN);
    sp.assign(static_cast<size_t>(m), kNaN);
    sm.assign(static_cast<size_t>(m), kNaN);

    for (int j = 0; j < m; ++j) {
        auto ju = static_cast<size_t>(j);
        if (!wi.hasNeg(j)) continue;
        double nA = wi.normAi[ju];
        double nM = wi.normMinus[ju];
        hat[ju] = 2.0 * R / (r * gammar * nA);
        chk[ju] = 1.0 / (gammaR * nA);
        // backward quantities push from hump j across neg j
        bar[ju] = (1.0 + 2.0 * lambda * wi.lenPlus[ju] * wi.normPlus[ju] * gstarR / r) /
                  (gammar * nA);
        sm[ju] = lambda * wi.normPlus[ju] * gstarR / (nM * glow);
        // forward quantities land in hump j+1 (cyclic when periodic)
        if (humpExists(j + 1)) {
            auto nx = static_cast<size_t>(humpIdx(j + 1));
            til[ju] = (1.0 + 2.0 * lambda * wi.lenPlus[nx] * wi.normPlus[nx] * gstarR / r) /
                      (gammar * nA);
            sp[ju] = lambda * wi.normPlus[nx] * gstarR / (nM * glow);
        }
    }

    double totPos = w.integralPos(w.start(), w.start() + w.period());
    double totNeg = w.integralNeg(w.start(), w.start() + w.period());
    ps.muSharp = lambda * totPos / totNeg;

    auto maxOf = [](const std::vector<double>& v) {
        double m2 = 0.0;
        for (double x : v)
            if (!std::isnan(x)) m2 = std::max(m2, x);
        return m2;
    };
    ps.muH1 = std::max(maxOf(hat), maxOf(chk));
    ps.muH3 = std::max({maxOf(til), maxOf(bar), maxOf(sp), maxOf(sm), maxOf(chk), ps.muSharp});
    ps.muStar = std::max(ps.muH1, ps.muH3);
    ps.perInterval = std::move(tb);
    return ps;
}

std::pair<double, double> epsilonThresholds(const Weight& w, const Nonlinearity& g,
                                            double lambda, double r, double R, double eps,
                                            bool periodic) {
    if (!(eps > 0.0) || !(eps <= r))
        throw EpsilonOutOfRange("epsilonThresholds: need 0 < eps <= r");
    const auto& d = w.decompose();
    WeightIntegrals wi = w.integrals();
    int m = d.humpCount();

    double rho = std::sqrt(r * R); // only recorded; formulas below use (r, R)
    ParamSet base = muThresholds(w, g, lambda, rho, r, R, periodic);
    double muStar = base.muStar;

    double gammaStar = scan_extremize([&](double s) { return g(s) / s; }, 0.5 * eps, r,
                                      /*maximize=*/false);
    double gLowHalf = g.gLower(0.5 * eps, R);
    double gstarR = g.gStar(R);

    auto humpIdx = [&](int i) { return ((i % m) + m) % m; };
    std::vector<double> kappa(static_cast<size_t>(m));
    for (int i = 0; i < m; ++i) {
        auto iu = static_cast<size_t>(i);
        kappa[iu] = R / wi.lenPlus[iu] + lambda * wi.normPlus[iu] * gstarR;
    }

    double muStarEps = muStar;
    double muStarStarEps = muStar;
    for (int j = 0; j < m; ++j) {
        auto ju = static_cast<size_t>(j);
        if (!wi.hasNeg(j)) continue;
        const Interval& ng = *d.negAfter[ju];
        muStarEps = std::max(muStarEps, 2.0 * R / (eps * gammaStar * wi.normAi[ju]));

        double deltaL = std::min(eps / (2.0 * kappa[ju]), 0.5 * ng.length());
        double intA = wi.intAi(j, ng.lo, ng.lo + deltaL);
        if (!(intA > 0.0))
            throw InvalidSignPattern(
                "epsilonThresholds: int A_i vanishes right of tau_i; plateau convention "
                "violated");
        double muLeft = (R + kappa[ju] * deltaL) / (gLowHalf * intA);

        bool nextExists = periodic || (j + 1 < m);
        double muRight = 0.0;
        if (nextExists) {
            auto nx = static_cast<size_t>(humpIdx(j + 1));
            double deltaR = std::min(eps / (2.0 * kappa[nx]), 0.5 * ng.length());
            double intB = wi.intBi(j, ng.hi - deltaR, ng.hi);
            if (!(intB > 0.0))
                throw InvalidSignPattern(
                    "epsilonThresholds: int B_i vanishes left of sigma_{i+1}; plateau "
                    "convention violated");
            muRight = (R + kappa[nx] * deltaR) / (gLowHalf * intB);
        }
        muStarStarEps = std::max({muStarStarEps, muLeft, muRight});
    }
    return {muStarEps, muStarStarEps};
}

std::vector<ConstantRow> constantsTable(const Weight& w, const Nonlinearity& g,
                                        const ParamSet& ps) {
    (void)w;
    (void)g;
    std::vector<ConstantRow> rows;
    rows.push_back({"rho", ps.rho, "pivot amplitude (input)"});
    rows.push_back({"epsilon", ps.epsilon, "hump margin used by lambda*"});
    rows.push_back({"nu_eps", ps.nuEps, "min_i int_{sigma_i+eps}^{tau_i-eps} a+"});
    rows.push_back({"eta_eps_rho", ps.etaEpsRho, "min g on [eps*rho/max|I+|, rho]"});
    rows.push_back({"lambda_star", ps.lambdaStar, "2 rho / (eps nu_eps eta)"});
    rows.push_back({"lambda", ps.lambda, "positive-part multiplier (input)"});
    rows.push_back({"cond_rR_bound", ps.condRRBound,
                    "1 / (2 lambda max_i (|I+_i|+|I-_i|) ||a||+,i)"});
    rows.push_back({"r", ps.r, "small window radius"});
    rows.push_back({"R", ps.R, "large window radius"});
    rows.push_back({"mu_sharp", ps.muSharp, "lambda int a+ / int a-"});
    const auto& tb = ps.perInterval;
    for (size_t i = 0; i < tb.muHat.size(); ++i) {
        std::string k = "[" + std::to_string(i + 1) + "]";
        if (!std::isnan(tb.muHat[i]))
            rows.push_back({"mu_hat" + k, tb.muHat[i], "2R / (r gamma(r) |A_i|)"});
        if (!std::isnan(tb.muCheck[i]))
            rows.push_back({"mu_check" + k, tb.muCheck[i], "1 / (gamma(R) |A_i|)"});
        if (!std::isnan(tb.muTilde[i]))
            rows.push_back({"mu_tilde" + k, tb.muTilde[i],
                            "(1 + 2 lambda |I+_{i+1}| ||a||+,i+1 g*(R)/r) / (gamma(r) |A_i|)"});
        if (!std::isnan(tb.muBar[i]))
            rows.push_back({"mu_bar" + k, tb.muBar[i],
                            "(1 + 2 lambda |I+_i| ||a||+,i g*(R)/r) / (gamma(r) |A_i|)"});
        if (!std::isnan(tb.muStarPlus[i]))
            rows.push_back({"mu_star_plus" + k, tb.muStarPlus[i],
                            "lambda ||a||+,i+1 g*(R) / (||a||-,i g_*(r,R))"});
        if (!std::isnan(tb.muStarMinus[i]))
            rows.push_back({"mu_star_minus" + k, tb.muStarMinus[i],
                            "lambda ||a||+,i g*(R) / (||a||-,i g_*(r,R))"});
    }
    rows.push_back({"mu_H1", ps.muH1, "max_i {mu_hat_i, mu_check_i}"});
    rows.push_back({"mu_H3", ps.muH3,
                    "max{max_i{mu_tilde,mu_bar,mu*+,mu*-,mu_check}, mu_sharp}"});
    rows.push_back({"mu_star", ps.muStar, "max{mu_H1, mu_H3}"});
    rows.push_back({"mu", ps.mu, "negative-part multiplier (input)"});
    return rows;
}

} // namespace humps
