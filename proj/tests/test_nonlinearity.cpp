#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "humps/nonlinearity.hpp"

using namespace humps;

namespace {

// brute-force envelope oracle on a 10^6-point grid
double bruteExtremum(const Nonlinearity& g, double lo, double hi, bool maximize,
                     bool ratio) {
    const int n = 1'000'000;
    double best = maximize ? -1e300 : 1e300;
    for (int i = 0; i <= n; ++i) {
        double s = lo + (hi - lo) * i / n;
        double v = ratio ? (s > 0 ? g(s) / s : 0.0) : g(s);
        if (maximize ? (v > best) : (v < best)) best = v;
    }
    return best;
}

} // namespace

TEST_CASE("rational square envelope point values") {
    Nonlinearity g = Nonlinearity::rationalSquare();
    CHECK(g.zeta(0.5) == doctest::Approx(0.4).epsilon(1e-12));
    CHECK(g.gStar(1.0) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(g.gLower(1.0, 2.0) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("linear test kernel has unit envelopes") {
    Nonlinearity g = Nonlinearity::linear();
    for (double d : {0.1, 1.0, 7.3}) {
        CHECK(g.zeta(d) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(g.gammaEnv(d) == doctest::Approx(1.0).epsilon(1e-12));
    }
    CHECK_FALSE(g.warnings().empty()); // growth probes must complain
}

TEST_CASE("envelopes bracket g(d)/d") {
    for (auto g : {Nonlinearity::rationalSquare(), Nonlinearity::arctanCube(),
                   Nonlinearity::powerBlend(2.5, 0.5)}) {
        for (double d : {0.05, 0.3, 1.0, 4.0, 20.0}) {
            double ratio = g(d) / d;
            CHECK(g.gammaEnv(d) <= ratio + 1e-12);
            CHECK(g.zeta(d) >= ratio - 1e-12);
            CHECK(g.gammaEnv(d) <= g.zeta(d) + 1e-12);
        }
    }
}

TEST_CASE("definitional inequalities of gStar / gLower on random probes") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    for (auto g : {Nonlinearity::rationalSquare(), Nonlinearity::arctanCube()}) {
        double d = 0.2, D = 5.0;
        double lowv = g.gLower(d, D);
        double star = g.gStar(D);
        for (int k = 0; k < 100; ++k) {
            double s = d + (D - d) * U(rng);
            CHECK(lowv <= g(s) + 1e-12);
            CHECK(g(s) <= star + 1e-12);
        }
        CHECK(g.gStar(2.0) <= g.gStar(5.0) + 1e-12); // nondecreasing in d
    }
}

TEST_CASE("envelopes agree with the 1e6-point brute-force oracle") {
    for (auto g : {Nonlinearity::rationalSquare(), Nonlinearity::arctanCube(),
                   Nonlinearity::powerBlend(2.0, 0.5)}) {
        for (double d : {0.4, 1.7}) {
            CHECK(g.zeta(d) ==
                  doctest::Approx(bruteExtremum(g, 0.5 * d, d, true, true)).epsilon(1e-9));
            CHECK(g.gammaEnv(d) ==
                  doctest::Approx(bruteExtremum(g, 0.5 * d, d, false, true)).epsilon(1e-9));
            CHECK(g.gStar(d) ==
                  doctest::Approx(bruteExtremum(g, 0.0, d, true, false)).epsilon(1e-9));
        }
        CHECK(g.gLower(0.3, 2.0) ==
              doctest::Approx(bruteExtremum(g, 0.3, 2.0, false, false)).epsilon(1e-9));
    }
}

TEST_CASE("growth probes pass for the named super-sublinear kernels") {
    CHECK(Nonlinearity::rationalSquare().warnings().empty());
    CHECK(Nonlinearity::arctanCube().warnings().empty());
    CHECK(Nonlinearity::powerBlend(2.0, 0.5).warnings().empty());
}

TEST_CASE("invalid envelope arguments") {
    Nonlinearity g = Nonlinearity::rationalSquare();
    CHECK_THROWS_AS(g.zeta(0.0), NonPositiveInput);
    CHECK_THROWS_AS(g.gLower(1.0, 0.5), NonPositiveInput);
    CHECK_THROWS_AS(Nonlinearity::powerBlend(0.9, 0.5), NonPositiveInput);
}

TEST_CASE("tabulated kernel reproduces its nodes and stays monotone") {
    std::vector<double> s, v;
    Nonlinearity ref = Nonlinearity::rationalSquare();
    for (int i = 0; i <= 60; ++i) {
        double x = 8.0 * i / 60.0;
        s.push_back(x);
        v.push_back(ref(x));
    }
    Nonlinearity tab = Nonlinearity::tabulated(s, v);
    for (size_t i = 0; i < s.size(); ++i)
        CHECK(tab(s[i]) == doctest::Approx(v[i]).epsilon(1e-13));
    for (int i = 0; i < 400; ++i) {
        double x0 = 8.0 * i / 400.0, x1 = 8.0 * (i + 1) / 400.0;
        CHECK(tab(x1) >= tab(x0) - 1e-12);
    }
    CHECK(tab.zeta(1.0) == doctest::Approx(ref.zeta(1.0)).epsilon(1e-3));
}

TEST_CASE("derivatives match central differences") {
    for (auto g : {Nonlinearity::rationalSquare(), Nonlinearity::arctanCube(),
                   Nonlinearity::powerBlend(2.2, 0.4)}) {
        for (double s : {0.2, 0.9, 3.0, 11.0}) {
            double h = 1e-6 * std::max(1.0, s);
            double fd = (g(s + h) - g(s - h)) / (2 * h);
            CHECK(g.derivative(s) == doctest::Approx(fd).epsilon(1e-6));
        }
    }
}
