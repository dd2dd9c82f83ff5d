#include "humps/symbolic.hpp"

#include <algorithm>
#include <cmath>

namespace humps {

int mobius(long l) {
    if (l < 1) throw std::invalid_argument("mobius: l must be >= 1");
    int s = 0;
    for (long p = 2; p * p <= l; ++p) {
        if (l % p == 0) {
            l /= p;
            ++s;
            if (l % p == 0) return 0; // square factor
        }
    }
    if (l > 1) ++s;
    return s % 2 == 0 ? 1 : -1;
}

BigInt lyndonCount(int n, int k) {
    if (n < 2) throw std::invalid_argument("lyndonCount: alphabet size must be >= 2");
    if (k < 1) throw std::invalid_argument("lyndonCount: length must be >= 1");
    BigInt sum = 0;
    for (int l = 1; l <= k; ++l) {
        if (k % l != 0) continue;
        int mu = mobius(l);
        if (mu == 0) continue;
        BigInt term = boost::multiprecision::pow(BigInt(n), static_cast<unsigned>(k / l));
        sum += mu * term;
    }
    if (sum % k != 0)
        throw std::logic_error("lyndonCount: necklace sum not divisible by k");
    return sum / k;
}

std::vector<LyndonWord> lyndonEnumerate(int n, int k) {
    if (n < 2) throw std::invalid_argument("lyndonEnumerate: alphabet size must be >= 2");
    if (k < 1 || k > 64)
        throw InfeasibleSize("lyndonEnumerate: length must be within 1..64");
    // Duval: iterate Lyndon words of length <= k in lex order, keep length == k.
    std::vector<LyndonWord> out;
    std::vector<int> w{0};
    while (!w.empty()) {
        if (static_cast<int>(w.size()) == k) {
            LyndonWord lw;
            lw.digits = w;
            out.push_back(std::move(lw));
        }
        // extend periodically to length k, then increment
        std::vector<int> t = w;
        while (static_cast<int>(t.size()) < k)
            t.push_back(t[t.size() % w.size()]);
        while (!t.empty() && t.back() == n - 1) t.pop_back();
        if (!t.empty()) ++t.back();
        w = std::move(t);
    }
    return out;
}

ShiftSequence ShiftSequence::fromWindow(int alphabet, std::vector<int> window) {
    if (window.size() % 2 == 0)
        throw WindowMismatch("shift window must have odd length (centered)");
    ShiftSequence s;
    s.alphabet = alphabet;
    s.halfWidth = static_cast<int>(window.size() / 2);
    for (int v : window)
        if (v < 0 || v >= alphabet)
            throw WindowMismatch("shift window symbol outside the alphabet");
    s.symbols = std::move(window);
    return s;
}

ShiftDistance shiftDistance(const ShiftSequence& a, const ShiftSequence& b) {
    if (a.alphabet != b.alphabet || a.halfWidth != b.halfWidth)
        throw WindowMismatch("shiftDistance: windows must share alphabet and width");
    ShiftDistance d;
    for (int ell = -a.halfWidth; ell <= a.halfWidth; ++ell) {
        if (a.at(ell) != b.at(ell)) d.value += std::pow(2.0, -std::abs(ell));
    }
    d.truncationBound = std::pow(2.0, 1 - a.halfWidth);
    return d;
}

} // namespace humps
