#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "humps/errors.hpp"
#include "humps/symbol_code.hpp"

namespace humps {

// Product of m subsets of {0,1,2}; factor i is a 3-bit mask (bit d <=> digit d).
struct BoxFamily {
    std::vector<uint8_t> factors;

    explicit BoxFamily(std::vector<uint8_t> f) : factors(std::move(f)) {
        for (uint8_t m : factors)
            if (m > 7) throw std::invalid_argument("box factor mask out of range");
    }
    static BoxFamily parse(const std::string& spec); // "01,2,012" etc., "-" for empty
    int m() const { return static_cast<int>(factors.size()); }
    std::string str() const;
};

// Valuation via the appendix's inductive decompositions: multi-digit factors
// split by additivity, then the lemma chain over {0},{1},{2},{0,1},{0,1,2}
// grounded in the two degree axioms (0 on the {0,1}-pattern, 1 on the
// {0}/{0,1,2}-pattern).
long valuationRecursive(const BoxFamily& box);

// Independent oracle: d(box) = prod_i s(A_i), s = #({0,2} members) - #({1} members).
long valuationProduct(const BoxFamily& box);

// Degree of the window set Lambda^{I,J}: the atomic box with {1} on I, {2} on
// J, {0} elsewhere. 1-based index sets.
long lambdaDegree(const std::set<int>& I, const std::set<int>& J, int m);

// Same value through the partition/inclusion-exclusion induction instead of
// the valuation lemmas.
long lambdaDegreeViaPartition(const std::set<int>& I, const std::set<int>& J, int m);

struct InclusionExclusionReport {
    bool partitionOk = false; // codes of Omega^{I,J} = disjoint union of atom codes
    bool sumOk = false;       // sum of atom degrees equals the Omega degree
    bool omegaValueOk = false;
    long atomCount = 0;
    long degreeSum = 0;
    long omegaDegree = 0;
    long omegaExpected = 0; // 0 when I nonempty, 1 otherwise
    bool passed() const { return partitionOk && sumOk && omegaValueOk; }
};

InclusionExclusionReport inclusionExclusionCheck(const std::set<int>& I,
                                                 const std::set<int>& J, int m);

} // namespace humps
