#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "humps/integrate.hpp"
#include "test_helpers.hpp"

using namespace humps;
using namespace humps::testing;

TEST_CASE("linear oscillator against the closed form") {
    Weight w = constantWeight(1.0, 0.0, 2 * M_PI); // q = lambda * 1
    Nonlinearity g = Nonlinearity::linear();
    auto run = integrate_ivp<double>(w, g, 1.0, 1.0, 0.0, 0.0, {1.0, 0.0}, 2 * M_PI);
    REQUIRE(run.traj.t.size() > 10);
    double worst = 0.0;
    for (int i = 0; i <= 500; ++i) {
        double t = 2 * M_PI * i / 500.0;
        auto [u, y] = run.traj.eval(t);
        worst = std::max(worst, std::fabs(u - std::cos(t)));
        worst = std::max(worst, std::fabs(y + std::sin(t)));
    }
    CHECK(worst < 1e-8);
    CHECK(run.traj.residual < 1e-6);
    CHECK(run.traj.residual >= 0.0);
}

TEST_CASE("equilibrium is preserved exactly over 100 periods") {
    Weight w = sineWeight();
    Nonlinearity g = Nonlinearity::rationalSquare();
    auto run = integrate_ivp<double>(w, g, 3.0, 10.0, 0.0, 0.0, {0.0, 0.0},
                                     100.0 * 2 * M_PI);
    CHECK(run.finalState[0] == 0.0);
    CHECK(run.finalState[1] == 0.0);
}

TEST_CASE("step endpoints include every weight breakpoint") {
    Weight w = stepWeight();
    Nonlinearity g = Nonlinearity::arctanCube();
    auto run = integrate_ivp<double>(w, g, 20.0, 100.0, 0.0, 0.0, {0.4, 0.0}, 3.0);
    for (double b : {1.0, 2.0, 2.5}) {
        bool found = false;
        for (double t : run.traj.t)
            if (t == b) { found = true; break; }
        CHECK_MESSAGE(found, "missing breakpoint " << b);
    }
}

TEST_CASE("observed convergence order of the pair is at least 4.5") {
    Weight w = constantWeight(1.0, 0.0, 2 * M_PI);
    Nonlinearity g = Nonlinearity::linear();
    auto errAt = [&](double h) {
        IvpOptions opt;
        opt.fixedStep = h;
        opt.denseOutput = false;
        auto run = integrate_ivp<double>(w, g, 1.0, 1.0, 0.0, 0.0, {1.0, 0.0}, 2 * M_PI, opt);
        return std::fabs(run.finalState[0] - 1.0) + std::fabs(run.finalState[1]);
    };
    double e1 = errAt(2 * M_PI / 50);
    double e2 = errAt(2 * M_PI / 100);
    double order = std::log2(e1 / e2);
    CHECK(order >= 4.5);
}

TEST_CASE("y is nonincreasing on humps and nondecreasing on negativity intervals") {
    Weight w = sineWeight();
    Nonlinearity g = Nonlinearity::rationalSquare();
    auto run = integrate_ivp<double>(w, g, 3.0, 10.0, 0.0, 0.0, {0.8, 0.2}, 2 * M_PI);
    const auto& d = w.decompose();
    const Trajectory& tr = run.traj;
    for (size_t i = 0; i + 1 < tr.t.size(); ++i) {
        double a = tr.t[i], b = tr.t[i + 1];
        bool inHump = a >= d.humps[0].lo - 1e-13 && b <= d.humps[0].hi + 1e-13;
        bool inNeg = a >= d.negAfter[0]->lo - 1e-13 && b <= d.negAfter[0]->hi + 1e-13;
        if (inHump) CHECK(tr.y[i + 1] <= tr.y[i] + 1e-9);
        if (inNeg) CHECK(tr.y[i + 1] >= tr.y[i] - 1e-9);
    }
}

TEST_CASE("poincare map at the origin has the shear monodromy") {
    Weight w = sineWeight();
    Nonlinearity g = Nonlinearity::rationalSquare();
    auto run = poincare_map<double>(w, g, 3.0, 10.0, 0.0, {0.0, 0.0});
    CHECK(run.finalState[0] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(run.finalState[1] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(run.monodromy[0][0] == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(run.monodromy[0][1] == doctest::Approx(2 * M_PI).epsilon(1e-9));
    CHECK(run.monodromy[1][0] == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(run.monodromy[1][1] == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("poincare convergence study: tighter tolerance, smaller drift") {
    Weight w = sineWeight();
    Nonlinearity g = Nonlinearity::rationalSquare();
    std::array<double, 2> z0{0.4, 0.1};
    IvpOptions ref;
    ref.atol = ref.rtol = 1e-13;
    auto truth = poincare_map<double>(w, g, 3.0, 10.0, 0.0, z0, ref);
    auto drift = [&](double tol) {
        IvpOptions o;
        o.atol = o.rtol = tol;
        auto r = poincare_map<double>(w, g, 3.0, 10.0, 0.0, z0, o);
        return std::fabs(r.finalState[0] - truth.finalState[0]) +
               std::fabs(r.finalState[1] - truth.finalState[1]);
    };
    double loose = drift(1e-6);
    double tight = drift(1e-10);
    CHECK(tight <= loose);
}

TEST_CASE("boundK formula value") {
    Weight w = sineWeight();
    Nonlinearity g = Nonlinearity::rationalSquare();
    double K = boundK(w, g, 3.0, 2.0);
    CHECK(K == doctest::Approx(2.0 / M_PI + 6.0 * 0.8).epsilon(1e-10));
    CHECK(boundK(w, g, 3.0, 4.0) > K); // increasing in R
    CHECK_THROWS_AS(boundK(w, g, 3.0, 0.0), NonPositiveInput);
}

TEST_CASE("derivative bound holds for a hump-confined trajectory") {
    // The K_i estimate only needs 0 <= u <= R across one positivity hump.
    Weight w = sineWeight();
    Nonlinearity g = Nonlinearity::rationalSquare();
    double R = 2.0;
    auto run = integrate_ivp<double>(w, g, 3.0, 10.0, 0.0, 0.0, {0.0, 0.05}, M_PI);
    REQUIRE(run.traj.minU(0.0, M_PI) >= 0.0);
    REQUIRE(run.traj.maxU(0.0, M_PI) <= R);
    CHECK(run.traj.maxAbsY() <= boundK(w, g, 3.0, R) + 1e-6);
}

TEST_CASE("dense output clamps outside the interval") {
    Weight w = sineWeight();
    Nonlinearity g = Nonlinearity::rationalSquare();
    auto run = integrate_ivp<double>(w, g, 3.0, 10.0, 0.0, 0.0, {0.5, 0.0}, 1.0);
    auto atLo = run.traj.eval(-5.0);
    auto atHi = run.traj.eval(50.0);
    CHECK(atLo.first == run.traj.u.front());
    CHECK(atHi.first == run.traj.u.back());
}

TEST_CASE("quad rung reproduces the double run") {
    Weight w = sineWeight();
    Nonlinearity g = Nonlinearity::rationalSquare();
    IvpOptions opt;
    opt.denseOutput = false;
    auto d = integrate_ivp<double>(w, g, 3.0, 10.0, 0.0, 0.0, {0.3, 0.1}, 2 * M_PI, opt);
    auto q = integrate_ivp<quad>(w, g, quad(3), quad(10), quad(0), quad(0),
                                 {quad(0.3), quad(0.1)}, quad(2 * M_PI), opt);
    CHECK(static_cast<double>(q.finalState[0]) ==
          doctest::Approx(d.finalState[0]).epsilon(1e-8));
    CHECK(static_cast<double>(q.finalState[1]) ==
          doctest::Approx(d.finalState[1]).epsilon(1e-8));
}
