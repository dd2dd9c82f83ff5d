#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>

#include "humps/symbolic.hpp"

using namespace humps;

namespace {

// brute-force Lyndon test: strictly smaller than all nontrivial rotations
bool isLyndonBrute(const std::vector<int>& w) {
    for (size_t r = 1; r < w.size(); ++r) {
        std::vector<int> rot(w.size());
        for (size_t i = 0; i < w.size(); ++i) rot[i] = w[(i + r) % w.size()];
        if (!(w < rot)) return false;
    }
    return true;
}

std::vector<std::vector<int>> lyndonBrute(int n, int k) {
    double total = std::pow(double(n), double(k));
    REQUIRE(total <= 1e8);
    std::vector<std::vector<int>> out;
    std::vector<int> w(static_cast<size_t>(k), 0);
    while (true) {
        if (isLyndonBrute(w)) out.push_back(w);
        int i = k - 1;
        while (i >= 0 && w[static_cast<size_t>(i)] == n - 1) w[static_cast<size_t>(i--)] = 0;
        if (i < 0) break;
        ++w[static_cast<size_t>(i)];
    }
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace

TEST_CASE("mobius values") {
    CHECK(mobius(1) == 1);
    CHECK(mobius(2) == -1);
    CHECK(mobius(6) == 1);
    CHECK(mobius(12) == 0);
    CHECK(mobius(30) == -1);
    CHECK(mobius(49) == 0);
    CHECK_THROWS(mobius(0));
}

TEST_CASE("ternary Lyndon counts match the published table") {
    std::vector<long> want{3, 8, 18, 48, 116, 312, 810, 2184, 5880};
    for (int k = 2; k <= 10; ++k)
        CHECK(lyndonCount(3, k) == BigInt(want[static_cast<size_t>(k - 2)]));
    CHECK(lyndonCount(3, 1) == 3);
    CHECK(lyndonCount(9, 2) == 36);
}

TEST_CASE("lyndonCount handles sizes past 64-bit") {
    BigInt big = lyndonCount(10, 25);
    CHECK(big > BigInt("1000000000000000000")); // > 1e18
    // necklace identity still exact at that size
    BigInt sum = 0;
    for (int k : {1, 5, 25}) sum += k * lyndonCount(10, k);
    CHECK(sum == boost::multiprecision::pow(BigInt(10), 25));
}

TEST_CASE("enumeration agrees with brute force on small alphabets") {
    auto words32 = lyndonEnumerate(3, 2);
    REQUIRE(words32.size() == 3);
    CHECK(words32[0].digits == std::vector<int>{0, 1});
    CHECK(words32[1].digits == std::vector<int>{0, 2});
    CHECK(words32[2].digits == std::vector<int>{1, 2});

    auto words23 = lyndonEnumerate(2, 3);
    REQUIRE(words23.size() == 2);
    CHECK(words23[0].digits == std::vector<int>{0, 0, 1});
    CHECK(words23[1].digits == std::vector<int>{0, 1, 1});

    auto words31 = lyndonEnumerate(3, 1);
    REQUIRE(words31.size() == 3);

    for (int n : {2, 3}) {
        for (int k = 1; k <= 7; ++k) {
            auto fast = lyndonEnumerate(n, k);
            auto brute = lyndonBrute(n, k);
            REQUIRE(fast.size() == brute.size());
            for (size_t i = 0; i < fast.size(); ++i) CHECK(fast[i].digits == brute[i]);
        }
    }
}

TEST_CASE("enumeration length equals the count formula") {
    for (int n : {2, 3, 9}) {
        for (int k = 1; k <= 8; ++k) {
            auto words = lyndonEnumerate(n, k);
            CHECK(BigInt(words.size()) == lyndonCount(n, k));
            CHECK(std::is_sorted(words.begin(), words.end(),
                                 [](const LyndonWord& a, const LyndonWord& b) {
                                     return a.digits < b.digits;
                                 }));
        }
    }
    CHECK_THROWS_AS(lyndonEnumerate(3, 100), InfeasibleSize);
}

TEST_CASE("necklace completeness identity") {
    for (int n : {2, 3}) {
        for (int K = 1; K <= 12; ++K) {
            BigInt sum = 0;
            for (int k = 1; k <= K; ++k)
                if (K % k == 0) sum += k * lyndonCount(n, k);
            CHECK(sum == boost::multiprecision::pow(BigInt(n), static_cast<unsigned>(K)));
        }
    }
}

TEST_CASE("codeToIndexSets") {
    auto [i1, j1] = codeToIndexSets(SymbolCode::parse("120"));
    CHECK(i1 == std::set<int>{1});
    CHECK(j1 == std::set<int>{2});
    auto [i2, j2] = codeToIndexSets(SymbolCode::parse("000"));
    CHECK(i2.empty());
    CHECK(j2.empty());
    auto [i3, j3] = codeToIndexSets(SymbolCode::parse("22"));
    CHECK(i3.empty());
    CHECK(j3 == std::set<int>{1, 2});
}

TEST_CASE("shift distance basics") {
    auto mk = [](std::vector<int> w) { return ShiftSequence::fromWindow(3, std::move(w)); };
    auto a = mk({0, 1, 2, 1, 0});
    auto b = mk({0, 1, 2, 1, 0});
    auto d0 = shiftDistance(a, b);
    CHECK(d0.value == 0.0);
    CHECK(d0.truncationBound == doctest::Approx(std::pow(2.0, -1)));

    auto c = mk({0, 1, 0, 1, 0}); // differs only at ell = 0
    CHECK(shiftDistance(a, c).value == doctest::Approx(1.0));

    auto e = mk({0, 0, 2, 2, 0}); // differs at ell = -1 and +1
    CHECK(shiftDistance(a, e).value == doctest::Approx(1.0));

    auto tooSmall = ShiftSequence::fromWindow(3, {0, 1, 2});
    CHECK_THROWS_AS(shiftDistance(a, tooSmall), WindowMismatch);
}

TEST_CASE("shift distance is a metric on random windows") {
    std::mt19937 rng(123);
    std::uniform_int_distribution<int> sym(0, 2);
    auto randWin = [&] {
        std::vector<int> w(9);
        for (auto& v : w) v = sym(rng);
        return ShiftSequence::fromWindow(3, std::move(w));
    };
    for (int trial = 0; trial < 1000; ++trial) {
        auto a = randWin(), b = randWin(), c = randWin();
        double dab = shiftDistance(a, b).value;
        double dba = shiftDistance(b, a).value;
        double dac = shiftDistance(a, c).value;
        double dcb = shiftDistance(c, b).value;
        CHECK(dab == dba);
        CHECK(dab <= dac + dcb + 1e-15);
        CHECK(dab >= 0.0);
    }
}
