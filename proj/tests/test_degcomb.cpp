#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <chrono>
#include <random>

#include "humps/degcomb.hpp"

using namespace humps;

TEST_CASE("axiom patterns and paper point values") {
    CHECK(valuationRecursive(BoxFamily::parse("01,012")) == 0);
    CHECK(valuationRecursive(BoxFamily::parse("0,012")) == 1);
    CHECK(valuationRecursive(BoxFamily::parse("1,2")) == -1);
    CHECK(valuationRecursive(BoxFamily::parse("02")) == 2);
    CHECK(valuationRecursive(BoxFamily::parse("12")) == 0);
    CHECK(valuationRecursive(BoxFamily::parse("012,012,012")) == 1);
    CHECK(valuationRecursive(BoxFamily::parse("-,012")) == 0); // empty factor
}

TEST_CASE("product oracle matches on all boxes up to m = 6, within budget") {
    auto start = std::chrono::steady_clock::now();
    for (int m = 1; m <= 6; ++m) {
        long total = 1;
        for (int i = 0; i < m; ++i) total *= 8;
        for (long key = 0; key < total; ++key) {
            std::vector<uint8_t> f(static_cast<size_t>(m));
            long k = key;
            for (int i = 0; i < m; ++i) {
                f[static_cast<size_t>(i)] = static_cast<uint8_t>(k & 7);
                k >>= 3;
            }
            BoxFamily box(f);
            REQUIRE(valuationRecursive(box) == valuationProduct(box));
        }
    }
    auto secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start);
    CHECK(secs.count() < 5.0);
}

TEST_CASE("additivity on random factor splits") {
    std::mt19937 rng(99);
    std::uniform_int_distribution<int> mdist(1, 6), fdist(0, 7);
    for (int trial = 0; trial < 10000; ++trial) {
        int m = mdist(rng);
        std::vector<uint8_t> f(static_cast<size_t>(m));
        for (auto& v : f) v = static_cast<uint8_t>(fdist(rng));
        int i = std::uniform_int_distribution<int>(0, m - 1)(rng);
        uint8_t whole = f[static_cast<size_t>(i)];
        // random disjoint split of the factor
        uint8_t part = static_cast<uint8_t>(fdist(rng)) & whole;
        uint8_t rest = whole & static_cast<uint8_t>(~part);
        auto with = [&](uint8_t mask) {
            auto g = f;
            g[static_cast<size_t>(i)] = mask;
            return valuationRecursive(BoxFamily(g));
        };
        REQUIRE(with(whole) == with(part) + with(rest));
    }
}

TEST_CASE("lambda degree is (-1)^#I") {
    CHECK(lambdaDegree({}, {}, 1) == 1);
    CHECK(lambdaDegree({}, {}, 4) == 1);
    CHECK(lambdaDegree({1, 3}, {2}, 3) == 1);
    CHECK(lambdaDegree({2}, {}, 2) == -1);
    CHECK(lambdaDegree({1}, {2}, 2) == -1);
    CHECK_THROWS_AS(lambdaDegree({1}, {1}, 2), OverlappingIndexSets);
}

TEST_CASE("both appendix arguments agree exhaustively up to m = 6") {
    for (int m = 1; m <= 6; ++m) {
        // iterate all pairs of disjoint subsets via ternary masks
        long total = 1;
        for (int i = 0; i < m; ++i) total *= 3;
        for (long key = 0; key < total; ++key) {
            std::set<int> I, J;
            long k = key;
            int signCount = 0;
            for (int i = 1; i <= m; ++i) {
                int digit = static_cast<int>(k % 3);
                k /= 3;
                if (digit == 1) { I.insert(i); ++signCount; }
                if (digit == 2) J.insert(i);
            }
            long a = lambdaDegree(I, J, m);
            long b = lambdaDegreeViaPartition(I, J, m);
            REQUIRE(a == b);
            REQUIRE(a == (signCount % 2 == 0 ? 1 : -1));
        }
    }
}

TEST_CASE("inclusion-exclusion partition: spec m = 1 cases") {
    auto repJ = inclusionExclusionCheck({}, {1}, 1);
    CHECK(repJ.passed());
    CHECK(repJ.atomCount == 3); // Lambda^{{},{}}, Lambda^{{1},{}}, Lambda^{{},{1}}
    CHECK(repJ.degreeSum == 1);
    CHECK(repJ.omegaDegree == 1);

    auto repI = inclusionExclusionCheck({1}, {}, 1);
    CHECK(repI.passed());
    CHECK(repI.atomCount == 2);
    CHECK(repI.degreeSum == 0);
    CHECK(repI.omegaDegree == 0);
}

TEST_CASE("inclusion-exclusion exhaustive for m <= 5") {
    for (int m = 1; m <= 5; ++m) {
        long total = 1;
        for (int i = 0; i < m; ++i) total *= 3;
        for (long key = 0; key < total; ++key) {
            std::set<int> I, J;
            long k = key;
            for (int i = 1; i <= m; ++i) {
                int digit = static_cast<int>(k % 3);
                k /= 3;
                if (digit == 1) I.insert(i);
                if (digit == 2) J.insert(i);
            }
            auto rep = inclusionExclusionCheck(I, J, m);
            REQUIRE(rep.passed());
        }
    }
}

TEST_CASE("even/odd subset cancellation identity") {
    // sum over subsets L of S of (-1)^{#L} = 0 for S nonempty
    for (int n = 1; n <= 10; ++n) {
        long sum = 0;
        for (uint32_t mask = 0; mask < (1u << n); ++mask)
            sum += __builtin_popcount(mask) % 2 == 0 ? 1 : -1;
        CHECK(sum == 0);
    }
}

TEST_CASE("box parsing round trip") {
    for (const char* s : {"0,1,2", "01,012", "-,02", "012"}) {
        BoxFamily b = BoxFamily::parse(s);
        CHECK(BoxFamily::parse(b.str()).str() == b.str());
    }
}
