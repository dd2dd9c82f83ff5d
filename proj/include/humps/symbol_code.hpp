#pragma once

#include <set>
#include <string>
#include <vector>

#include "humps/errors.hpp"

namespace humps {

// Word over {0,1,2}; digit i classifies the solution's maximum on the i-th
// positivity hump as very small (< r), small (r..rho) or large (rho..R).
struct SymbolCode {
    std::vector<int> digits;

    SymbolCode() = default;
    explicit SymbolCode(std::vector<int> d) : digits(std::move(d)) {}
    static SymbolCode parse(const std::string& s) {
        SymbolCode c;
        for (char ch : s) {
            if (ch < '0' || ch > '2')
                throw std::invalid_argument("symbol code: digits must be 0, 1 or 2");
            c.digits.push_back(ch - '0');
        }
        return c;
    }

    int size() const { return static_cast<int>(digits.size()); }
    bool nonzero() const {
        for (int d : digits)
            if (d != 0) return true;
        return false;
    }
    std::string str() const {
        std::string s;
        for (int d : digits) s.push_back(static_cast<char>('0' + d));
        return s;
    }
    SymbolCode rotated(int shift) const { // left rotation by shift
        int n = size();
        SymbolCode out;
        out.digits.resize(static_cast<size_t>(n));
        for (int i = 0; i < n; ++i)
            out.digits[static_cast<size_t>(i)] = digits[static_cast<size_t>((i + shift) % n)];
        return out;
    }
    bool operator==(const SymbolCode& o) const { return digits == o.digits; }
    bool operator<(const SymbolCode& o) const { return digits < o.digits; }
};

// I = {i : S_i = 1}, J = {i : S_i = 2}, 1-based indices.
inline std::pair<std::set<int>, std::set<int>> codeToIndexSets(const SymbolCode& code) {
    std::set<int> I, J;
    for (int i = 0; i < code.size(); ++i) {
        if (code.digits[static_cast<size_t>(i)] == 1) I.insert(i + 1);
        if (code.digits[static_cast<size_t>(i)] == 2) J.insert(i + 1);
    }
    return {I, J};
}

} // namespace humps
