#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <functional>

#include "humps/thresholds.hpp"
#include "test_helpers.hpp"

using namespace humps;
using namespace humps::testing;

namespace {

// ---- independent re-derivation oracle ----
// Composite 4-point Gauss-Legendre on raw piece evaluations (interior nodes
// only, so piece boundaries are never sampled); nothing below shares code
// with the implementation's exact/adaptive integral path.

double gauss4(const std::function<double(double)>& f, double a, double b, int panels) {
    static const double X[2] = {0.3399810435848563, 0.8611363115940526};
    static const double W[2] = {0.6521451548625461, 0.3478548451374538};
    double h = (b - a) / panels;
    double acc = 0.0;
    for (int i = 0; i < panels; ++i) {
        double mid = a + (i + 0.5) * h;
        for (int j = 0; j < 2; ++j) {
            acc += W[j] * (f(mid - 0.5 * h * X[j]) + f(mid + 0.5 * h * X[j]));
        }
    }
    return acc * 0.5 * h;
}

double oraclePos(const Weight& w, double a, double b, int panels = 4000) {
    return gauss4([&](double t) { return std::max(w.evalRaw(t), 0.0); }, a, b, panels);
}

double oracleNeg(const Weight& w, double a, double b, int panels = 4000) {
    return gauss4([&](double t) { return std::max(-w.evalRaw(t), 0.0); }, a, b, panels);
}

double oracleNormA(const Weight& w, double tau, double sigma) {
    auto A = [&](double t) { return oracleNeg(w, tau, t, 2000); };
    return gauss4(A, tau, sigma, 2000);
}

double oracleScanMin(const std::function<double(double)>& f, double lo, double hi,
                     int n = 1000000) {
    double best = 1e300;
    for (int i = 0; i <= n; ++i) best = std::min(best, f(lo + (hi - lo) * i / n));
    return best;
}

double oracleScanMax(const std::function<double(double)>& f, double lo, double hi,
                     int n = 1000000) {
    double best = -1e300;
    for (int i = 0; i <= n; ++i) best = std::max(best, f(lo + (hi - lo) * i / n));
    return best;
}

} // namespace

TEST_CASE("lambdaStar: sine weight closed-form check") {
    Weight w = sineWeight();
    Nonlinearity g = Nonlinearity::rationalSquare();
    auto info = lambdaStar(w, g, 1.0, M_PI / 4);
    double nu = std::sqrt(2.0);
    double eta = (1.0 / 16.0) / (1.0 + 1.0 / 16.0); // g(1/4) = 1/17
    double want = 2.0 / ((M_PI / 4) * nu * eta);
    CHECK(info.nu == doctest::Approx(nu).epsilon(1e-12));
    CHECK(info.eta == doctest::Approx(eta).epsilon(1e-10));
    CHECK(info.value == doctest::Approx(want).epsilon(1e-10));
    CHECK(info.value == doctest::Approx(30.6107).epsilon(1e-4));
}

TEST_CASE("lambdaStar: epsilon too large") {
    Weight w = sineWeight();
    Nonlinearity g = Nonlinearity::rationalSquare();
    CHECK_THROWS_AS(lambdaStar(w, g, 1.0, M_PI / 2), EpsilonTooLarge);
}

TEST_CASE("lambdaStar: doubling rho tracks the re-evaluated formula") {
    Weight w = sineWeight();
    Nonlinearity g = Nonlinearity::rationalSquare();
    double eps = M_PI / 4;
    for (double rho : {1.0, 2.0}) {
        auto info = lambdaStar(w, g, rho, eps);
        double nu = oraclePos(w, eps, M_PI - eps, 20000);
        double eta = oracleScanMin([&](double s) { return g(s); }, eps * rho / M_PI, rho,
                                   200000);
        CHECK(info.value == doctest::Approx(2.0 * rho / (eps * nu * eta)).epsilon(1e-9));
    }
}

TEST_CASE("lambdaStar: auto eps is no worse than a fixed eps") {
    Weight w = sineWeight();
    Nonlinearity g = Nonlinearity::rationalSquare();
    auto fixed = lambdaStar(w, g, 1.0, M_PI / 4);
    auto autoE = lambdaStar(w, g, 1.0, std::nullopt);
    CHECK(autoE.value <= fixed.value * (1.0 + 1e-12));
}

TEST_CASE("admissibleRR: sine weight at lambda=3") {
    Weight w = sineWeight();
    Nonlinearity g = Nonlinearity::rationalSquare();
    auto [r, R] = admissibleRR(w, g, 3.0, 1.0);
    double bound = 1.0 / (24.0 * M_PI);
    // oracle: bisect zeta(r) = bound with zeta evaluated by dense scan
    auto zeta = [&](double d) {
        return oracleScanMax([&](double s) { return g(s) / s; }, d / 2, d, 20000);
    };
    double lo = 1e-6, hi = 0.5;
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        if (zeta(mid) < bound) lo = mid;
        else hi = mid;
    }
    CHECK(r == doctest::Approx(lo).epsilon(1e-4));
    CHECK(r == doctest::Approx(0.0132).epsilon(2e-2));
    CHECK(g.zeta(r) < bound);
    CHECK(g.zeta(R) < bound);
    CHECK(R >= 2.0);

    auto [r2, R2] = admissibleRR(w, g, 6.0, 1.0);
    CHECK(r2 < r); // bound halves, so the small radius shrinks
    CHECK(R2 >= R);
}

TEST_CASE("admissibleRR: linear kernel has no admissible pair") {
    Weight w = sineWeight();
    Nonlinearity g = Nonlinearity::linear();
    CHECK_THROWS_AS(admissibleRR(w, g, 3.0, 1.0), NoAdmissibleR);
}

TEST_CASE("muThresholds: sine weight formula oracle") {
    Weight w = sineWeight();
    Nonlinearity g = Nonlinearity::rationalSquare();
    double lambda = 31.0, rho = 1.0;
    auto [r, R] = admissibleRR(w, g, lambda, rho);
    ParamSet ps = muThresholds(w, g, lambda, rho, r, R, /*periodic=*/true);

    CHECK(ps.muSharp == doctest::Approx(lambda).epsilon(1e-12)); // ||a||+ = ||a||-
    CHECK(ps.muStar >= ps.muSharp);
    CHECK(ps.muH3 >= ps.muSharp);

    // oracle re-derivation of every per-interval constant (m = 1, cyclic)
    double normA = oracleNormA(w, M_PI, 2 * M_PI);
    double normPlus = oraclePos(w, 0, M_PI);
    double normMinus = oracleNeg(w, M_PI, 2 * M_PI);
    double gammar = oracleScanMin([&](double s) { return g(s) / s; }, r / 2, r);
    double gammaR = oracleScanMin([&](double s) { return g(s) / s; }, R / 2, R);
    double gstarR = oracleScanMax([&](double s) { return g(s); }, 0, R);
    double glow = oracleScanMin([&](double s) { return g(s); }, r, R);

    CHECK(normA == doctest::Approx(M_PI).epsilon(1e-9));
    CHECK(ps.perInterval.muHat[0] ==
          doctest::Approx(2 * R / (r * gammar * normA)).epsilon(1e-9));
    CHECK(ps.perInterval.muCheck[0] == doctest::Approx(1 / (gammaR * normA)).epsilon(1e-9));
    double tilde = (1 + 2 * lambda * M_PI * normPlus * gstarR / r) / (gammar * normA);
    CHECK(ps.perInterval.muTilde[0] == doctest::Approx(tilde).epsilon(1e-9));
    CHECK(ps.perInterval.muBar[0] == doctest::Approx(tilde).epsilon(1e-9)); // m=1 wraps
    double mplus = lambda * normPlus * gstarR / (normMinus * glow);
    CHECK(ps.perInterval.muStarPlus[0] == doctest::Approx(mplus).epsilon(1e-9));
    CHECK(ps.perInterval.muStarMinus[0] == doctest::Approx(mplus).epsilon(1e-9));

    double h1 = std::max(ps.perInterval.muHat[0], ps.perInterval.muCheck[0]);
    CHECK(ps.muH1 == doctest::Approx(h1).epsilon(1e-12));
    CHECK(ps.muStar == doctest::Approx(std::max(ps.muH1, ps.muH3)).epsilon(1e-12));

    // recomputation is bit-identical
    ParamSet ps2 = muThresholds(w, g, lambda, rho, r, R, true);
    CHECK(ps.muStar == ps2.muStar);
    CHECK(ps.perInterval.muHat[0] == ps2.perInterval.muHat[0]);

    // cond-rR re-check passes at the certified pair
    CHECK(checkCondRR(w, g, lambda, r, R));
}

TEST_CASE("muThresholds: stepwise weight, two humps, oracle per interval") {
    Weight w = stepWeight();
    Nonlinearity g = Nonlinearity::arctanCube();
    double lambda = 20.0, rho = 1.0;
    auto [r, R] = admissibleRR(w, g, lambda, rho);
    // tail-less weight: not a periodic normal form
    CHECK_THROWS_AS(muThresholds(w, g, lambda, rho, r, R, true), InvalidSignPattern);
    ParamSet ps = muThresholds(w, g, lambda, rho, r, R, /*periodic=*/false);

    // interval 1 exists ([1,2]); interval 2 does not
    CHECK(std::isnan(ps.perInterval.muHat[1]));
    double normA = oracleNormA(w, 1.0, 2.0);
    double gammar = oracleScanMin([&](double s) { return g(s) / s; }, r / 2, r);
    CHECK(ps.perInterval.muHat[0] ==
          doctest::Approx(2 * R / (r * gammar * normA)).epsilon(1e-9));
    // forward push lands in hump 2 ([2,3], mass 1, length 1)
    double gstarR = oracleScanMax([&](double s) { return g(s); }, 0, R);
    double tilde = (1 + 2 * lambda * 1.0 * 1.0 * gstarR / r) / (gammar * normA);
    CHECK(ps.perInterval.muTilde[0] == doctest::Approx(tilde).epsilon(1e-9));
    CHECK(ps.muStar > 0.0);
    CHECK(ps.muSharp == doctest::Approx(lambda * 2.0 / 2.0).epsilon(1e-12));
}

TEST_CASE("epsilonThresholds: monotonicity and floor") {
    Weight w = sineWeight();
    Nonlinearity g = Nonlinearity::rationalSquare();
    double lambda = 31.0, rho = 1.0;
    auto [r, R] = admissibleRR(w, g, lambda, rho);
    ParamSet ps = muThresholds(w, g, lambda, rho, r, R, true);

    auto [mA, mB] = epsilonThresholds(w, g, lambda, r, R, r, true);
    CHECK(mA >= ps.muStar);
    CHECK(mB >= ps.muStar);
    auto [mA2, mB2] = epsilonThresholds(w, g, lambda, r, R, r / 2, true);
    CHECK(mA2 > mA);
    CHECK(mB2 >= mB * (1.0 - 1e-12));

    CHECK_THROWS_AS(epsilonThresholds(w, g, lambda, r, R, 2 * r, true), EpsilonOutOfRange);
    CHECK_THROWS_AS(epsilonThresholds(w, g, lambda, r, R, 0.0, true), EpsilonOutOfRange);
}

TEST_CASE("epsilonThresholds: oracle evaluation of mu_left") {
    Weight w = sineWeight();
    Nonlinearity g = Nonlinearity::rationalSquare();
    double lambda = 31.0, rho = 1.0;
    auto [r, R] = admissibleRR(w, g, lambda, rho);
    double eps = r;
    auto [mA, mB] = epsilonThresholds(w, g, lambda, r, R, eps, true);

    double gstarR = oracleScanMax([&](double s) { return g(s); }, 0, R);
    double kappa = R / M_PI + lambda * 2.0 * gstarR;
    double delta = std::min(eps / (2 * kappa), M_PI / 2);
    auto A = [&](double t) { return oracleNeg(w, M_PI, t, 2000); };
    double intA = gauss4(A, M_PI, M_PI + delta, 1024);
    double glowHalf = oracleScanMin([&](double s) { return g(s); }, eps / 2, R);
    double muLeft = (R + kappa * delta) / (glowHalf * intA);
    // m = 1: left and right pushes are symmetric for the sine weight, so the
    // max reduces to muLeft vs the muStar floor.
    ParamSet ps = muThresholds(w, g, lambda, rho, r, R, true);
    CHECK(mB == doctest::Approx(std::max(muLeft, ps.muStar)).epsilon(1e-7));

    double gammaStar = oracleScanMin([&](double s) { return g(s) / s; }, eps / 2, r);
    double muStarEps = 2 * R / (eps * gammaStar * M_PI);
    CHECK(mA == doctest::Approx(std::max(muStarEps, ps.muStar)).epsilon(1e-9));
}
