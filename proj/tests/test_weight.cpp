#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "humps/weight.hpp"
#include "test_helpers.hpp"

using namespace humps;
using namespace humps::testing;

TEST_CASE("evaluate: sine weight point values") {
    Weight w = sineWeight();
    CHECK(w.evaluate(M_PI / 2, 3.0, 10.0) == doctest::Approx(3.0).epsilon(1e-14));
    CHECK(w.evaluate(3 * M_PI / 2, 3.0, 10.0) == doctest::Approx(-10.0).epsilon(1e-14));
}

TEST_CASE("evaluate: T-periodicity") {
    Weight w = sineWeight();
    for (double t : {0.3, 1.7, 4.0, 6.1}) {
        CHECK(w.evaluate(t, 2.0, 5.0) ==
              doctest::Approx(w.evaluate(t + 2 * M_PI, 2.0, 5.0)).epsilon(1e-12));
        CHECK(w.evaluate(t, 2.0, 5.0) ==
              doctest::Approx(w.evaluate(t - 2 * M_PI, 2.0, 5.0)).epsilon(1e-12));
    }
}

TEST_CASE("evaluate matches raw positive/negative split on a fine mesh") {
    Weight w = stepWeight();
    double lam = 7.0, mu = 3.0;
    for (int i = 0; i <= 3000; ++i) {
        double t = 3.0 * i / 3000.0;
        double a = w.evalRaw(t);
        double want = lam * std::max(a, 0.0) - mu * std::max(-a, 0.0);
        CHECK(w.evaluate(t, lam, mu) == doctest::Approx(want).epsilon(1e-14));
    }
}

TEST_CASE("decompose: sine weight") {
    Weight w = sineWeight();
    const auto& d = w.decompose();
    REQUIRE(d.humpCount() == 1);
    CHECK(d.humps[0].lo == doctest::Approx(0.0));
    CHECK(d.humps[0].hi == doctest::Approx(M_PI));
    REQUIRE(d.negAfter[0].has_value());
    CHECK(d.negAfter[0]->lo == doctest::Approx(M_PI));
    CHECK(d.negAfter[0]->hi == doctest::Approx(2 * M_PI));
    CHECK(d.periodicNormalForm());
}

TEST_CASE("decompose: stepwise weight absorbs the plateau into I+") {
    Weight w = stepWeight();
    const auto& d = w.decompose();
    REQUIRE(d.humpCount() == 2);
    CHECK(d.humps[0].lo == doctest::Approx(0.0));
    CHECK(d.humps[0].hi == doctest::Approx(1.0));
    REQUIRE(d.negAfter[0].has_value());
    CHECK(d.negAfter[0]->lo == doctest::Approx(1.0));
    CHECK(d.negAfter[0]->hi == doctest::Approx(2.0)); // plateau [2, 2.5] joins I+_2
    CHECK(d.humps[1].lo == doctest::Approx(2.0));
    CHECK(d.humps[1].hi == doctest::Approx(3.0));
    CHECK_FALSE(d.negAfter[1].has_value());
    CHECK_FALSE(d.headNeg.has_value());
}

TEST_CASE("decompose: all-positive weight is rejected") {
    Weight w = constantWeight(1.0);
    CHECK_THROWS_AS(w.decompose(), InvalidSignPattern);
}

TEST_CASE("construction: degenerate piece is rejected") {
    Piece p;
    p.kind = PieceKind::Constant;
    p.t0 = 1.0;
    p.t1 = 1.0;
    p.value = 2.0;
    CHECK_THROWS_AS(Weight({p}), InvalidSignPattern);
}

TEST_CASE("integrals: sine weight closed forms") {
    Weight w = sineWeight();
    WeightIntegrals wi = w.integrals();
    CHECK(wi.normPlus[0] == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(wi.normMinus[0] == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(wi.normAi[0] == doctest::Approx(M_PI).epsilon(1e-11));
    // A_1(t) = 1 + cos t on [pi, 2 pi]
    for (int k = 0; k <= 100; ++k) {
        double t = M_PI + M_PI * k / 100.0;
        CHECK(wi.Ai(0, t) == doctest::Approx(1.0 + std::cos(t)).epsilon(1e-11));
    }
}

TEST_CASE("integrals: stepwise weight piecewise-constant arithmetic") {
    Weight w = stepWeight();
    WeightIntegrals wi = w.integrals();
    CHECK(wi.normPlus[0] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(wi.normMinus[0] == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(wi.normPlus[1] == doctest::Approx(1.0).epsilon(1e-14));
    // A_1 on [1, 2] is 2 (t - 1); its integral over [1,2] is 1
    CHECK(wi.normAi[0] == doctest::Approx(1.0).epsilon(1e-12));
    // B_1(t) = 2 (2 - t) on [1, 2]
    CHECK(wi.Bi(0, 1.5) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("property: A_i anchored, monotone, total mass") {
    for (const Weight& w : {sineWeight(), stepWeight()}) {
        const auto& d = w.decompose();
        WeightIntegrals wi = w.integrals();
        for (int i = 0; i < d.humpCount(); ++i) {
            if (!d.negAfter[static_cast<size_t>(i)]) continue;
            const Interval& ng = *d.negAfter[static_cast<size_t>(i)];
            CHECK(wi.Ai(i, ng.lo) == doctest::Approx(0.0).epsilon(1e-13));
            CHECK(wi.Ai(i, ng.hi) ==
                  doctest::Approx(wi.normMinus[static_cast<size_t>(i)]).epsilon(1e-12));
            double prev = -1e-15;
            for (int k = 0; k <= 100; ++k) {
                double t = ng.lo + ng.length() * k / 100.0;
                double v = wi.Ai(i, t);
                CHECK(v >= prev - 1e-12);
                prev = v;
            }
        }
    }
}

TEST_CASE("property: interval lengths tile the period") {
    for (const Weight& w : {sineWeight(), stepWeight(), sine3piWeight()}) {
        const auto& d = w.decompose();
        double sum = 0.0;
        if (d.headNeg) sum += d.headNeg->length();
        for (int i = 0; i < d.humpCount(); ++i) {
            sum += d.humps[static_cast<size_t>(i)].length();
            if (d.negAfter[static_cast<size_t>(i)])
                sum += d.negAfter[static_cast<size_t>(i)]->length();
        }
        CHECK(sum == doctest::Approx(w.period()).epsilon(1e-13));
    }
}

TEST_CASE("property: integrals invariant under piece subdivision") {
    auto cp = [](double a, double b, double v) {
        Piece p;
        p.kind = PieceKind::Constant;
        p.t0 = a;
        p.t1 = b;
        p.value = v;
        return p;
    };
    Weight coarse({cp(0, 1, 1), cp(1, 2, -2), cp(2, 2.5, 0), cp(2.5, 3, 2)});
    Weight fine({cp(0, 0.4, 1), cp(0.4, 1, 1), cp(1, 1.3, -2), cp(1.3, 2, -2), cp(2, 2.5, 0),
                 cp(2.5, 2.9, 2), cp(2.9, 3, 2)});
    WeightIntegrals a = coarse.integrals();
    WeightIntegrals b = fine.integrals();
    REQUIRE(a.normPlus.size() == b.normPlus.size());
    for (size_t i = 0; i < a.normPlus.size(); ++i) {
        CHECK(a.normPlus[i] == doctest::Approx(b.normPlus[i]).epsilon(1e-14));
        if (!std::isnan(a.normMinus[i])) {
            CHECK(a.normMinus[i] == doctest::Approx(b.normMinus[i]).epsilon(1e-14));
            CHECK(a.normAi[i] == doctest::Approx(b.normAi[i]).epsilon(1e-13));
        }
    }
}

TEST_CASE("sine weight on [0, 3pi]: Neumann/Dirichlet shape") {
    Weight w = sine3piWeight();
    const auto& d = w.decompose();
    REQUIRE(d.humpCount() == 2);
    CHECK(d.humps[0].hi == doctest::Approx(M_PI));
    CHECK(d.humps[1].lo == doctest::Approx(2 * M_PI));
    CHECK(d.negAfter[0].has_value());
    CHECK_FALSE(d.negAfter[1].has_value());
    CHECK_FALSE(d.periodicNormalForm());
}

TEST_CASE("unrolled weight doubles the structure") {
    Weight w = sineWeight();
    Weight w2 = w.unrolled(2);
    CHECK(w2.period() == doctest::Approx(4 * M_PI));
    const auto& d = w2.decompose();
    CHECK(d.humpCount() == 2);
    for (double t : {0.7, 2.0, 3.9, 5.5}) {
        CHECK(w2.evalRaw(t) == doctest::Approx(w.evalRaw(t)).epsilon(1e-13));
    }
}

TEST_CASE("breakpoints are period-extended") {
    Weight w = stepWeight();
    auto bps = w.breakpointsIn(0.0, 6.0);
    // interior breakpoints of two periods: 1, 2, 2.5, 3, 4, 5, 5.5
    REQUIRE(bps.size() == 7);
    CHECK(bps[0] == doctest::Approx(1.0));
    CHECK(bps[3] == doctest::Approx(3.0));
    CHECK(bps[6] == doctest::Approx(5.5));
}
