#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <string>
#include <vector>

#include "humps/errors.hpp"
#include "humps/symbol_code.hpp"

namespace humps {

using BigInt = boost::multiprecision::cpp_int;

// Moebius function: mu(1)=1, (-1)^s for squarefree with s prime factors, else 0.
int mobius(long l);

// Number of n-ary Lyndon words of length k: (1/k) sum_{l | k} mu(l) n^{k/l}.
// Exact integer arithmetic; asserts the divisibility of the sum by k.
BigInt lyndonCount(int n, int k);

struct LyndonWord {
    std::vector<int> digits; // over alphabet {0..n-1}
    std::string str() const {
        std::string s;
        for (int d : digits) s += std::to_string(d) + (d > 9 ? "." : "");
        return s;
    }
};

// Duval generation, lexicographically sorted, length exactly k.
std::vector<LyndonWord> lyndonEnumerate(int n, int k);

// Finite centered window of a two-sided symbol sequence over an n-letter
// alphabet: symbols[j] is the letter at position j - N for j = 0..2N.
struct ShiftSequence {
    int alphabet = 3;
    int halfWidth = 0; // N
    std::vector<int> symbols;

    static ShiftSequence fromWindow(int alphabet, std::vector<int> window);
    int at(int ell) const { return symbols[static_cast<size_t>(ell + halfWidth)]; }
};

struct ShiftDistance {
    double value = 0.0;
    double truncationBound = 0.0; // sum_{|l| > N} 2^{-|l|} = 2^{1-N}
};

// d(T', T'') = sum_l delta(T'_l, T''_l) / 2^{|l|}, truncated to the windows.
ShiftDistance shiftDistance(const ShiftSequence& a, const ShiftSequence& b);

} // namespace humps
