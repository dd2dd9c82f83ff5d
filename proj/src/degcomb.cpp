#include "humps/degcomb.hpp"

#include <algorithm>
#include <map>
#include <unordered_map>

namespace humps {

namespace {

constexpr uint8_t M0 = 1;   // {0}
constexpr uint8_t M1 = 2;   // {1}
constexpr uint8_t M2 = 4;   // {2}
constexpr uint8_t M01 = 3;  // {0,1}
constexpr uint8_t MALL = 7; // {0,1,2}

uint64_t packKey(const std::vector<uint8_t>& f) {
    uint64_t k = 1;
    for (uint8_t m : f) k = (k << 3) | m;
    return k;
}

using Memo = std::unordered_map<uint64_t, long>;

// Lemma family with factors in {{0},{0,1},{2},{0,1,2}} and at least one {0,1}:
// induction on the number of {2} factors, grounded in the zero axiom.
long dZeroFamily(std::vector<uint8_t>& f, Memo& memo) {
    uint64_t key = packKey(f);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    long res = 0;
    size_t j = f.size();
    for (size_t i = 0; i < f.size(); ++i)
        if (f[i] == M2) { j = i; break; }
    if (j == f.size()) {
        res = 0; // axiom: some factor {0,1}, the rest {0} or {0,1,2}
    } else {
        // A[j:{0,1,2}] = A  u  A[j:{0,1}]  (disjoint), so d(A) = d(full) - d(01)
        f[j] = MALL;
        long dFull = dZeroFamily(f, memo);
        f[j] = M01;
        long d01 = dZeroFamily(f, memo);
        f[j] = M2;
        res = dFull - d01;
    }
    memo.emplace(key, res);
    return res;
}

// Lemma family with factors in {{0},{1},{2},{0,1,2}}: first remove {1} factors
// via the three-way split, then remove {2} factors via the two-way split.
long dAtomFamily(std::vector<uint8_t>& f, Memo& memo) {
    uint64_t key = packKey(f);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    long res;
    size_t i1 = f.size(), i2 = f.size();
    for (size_t i = 0; i < f.size(); ++i) {
        if (f[i] == M1 && i1 == f.size()) i1 = i;
        if (f[i] == M2 && i2 == f.size()) i2 = i;
    }
    if (i1 != f.size()) {
        // A[i:{0,1,2}] = A[i:{0}] u A u A[i:{2}]
        f[i1] = MALL;
        long dFull = dAtomFamily(f, memo);
        f[i1] = M0;
        long d0 = dAtomFamily(f, memo);
        f[i1] = M2;
        long d2 = dAtomFamily(f, memo);
        f[i1] = M1;
        res = dFull - d0 - d2;
    } else if (i2 != f.size()) {
        f[i2] = MALL;
        long dFull = dAtomFamily(f, memo);
        f[i2] = M01;
        long d01 = dZeroFamily(f, memo);
        f[i2] = M2;
        res = dFull - d01;
    } else {
        res = 1; // axiom: every factor {0} or {0,1,2}
    }
    memo.emplace(key, res);
    return res;
}

long dGeneral(std::vector<uint8_t>& f, Memo& memo) {
    for (uint8_t m : f)
        if (m == 0) return 0; // empty factor: additivity with the empty split
    for (size_t i = 0; i < f.size(); ++i) {
        uint8_t m = f[i];
        if (m == M0 || m == M1 || m == M2 || m == MALL) continue;
        // split a two-digit factor into its singletons
        long sum = 0;
        for (uint8_t bit : {M0, M1, M2}) {
            if (!(m & bit)) continue;
            f[i] = bit;
            sum += dGeneral(f, memo);
        }
        f[i] = m;
        return sum;
    }
    return dAtomFamily(f, memo);
}

} // namespace

BoxFamily BoxFamily::parse(const std::string& spec) {
    std::vector<uint8_t> factors;
    uint8_t cur = 0;
    bool any = false;
    for (char ch : spec) {
        if (ch == ',') {
            factors.push_back(cur);
            cur = 0;
            any = true;
            continue;
        }
        if (ch == '-' || ch == ' ') continue;
        if (ch < '0' || ch > '2')
            throw std::invalid_argument("box factor digits must be 0, 1 or 2");
        cur |= static_cast<uint8_t>(1u << (ch - '0'));
        any = true;
    }
    if (any || !spec.empty()) factors.push_back(cur);
    if (factors.empty()) throw std::invalid_argument("empty box spec");
    return BoxFamily(std::move(factors));
}

std::string BoxFamily::str() const {
    std::string out;
    for (size_t i = 0; i < factors.size(); ++i) {
        if (i) out += ",";
        if (factors[i] == 0) out += "-";
        for (int d = 0; d < 3; ++d)
            if (factors[i] & (1u << d)) out += static_cast<char>('0' + d);
    }
    return out;
}

long valuationRecursive(const BoxFamily& box) {
    thread_local Memo memo;
    if (memo.size() > 4'000'000) memo.clear();
    std::vector<uint8_t> f = box.factors;
    return dGeneral(f, memo);
}

long valuationProduct(const BoxFamily& box) {
    long prod = 1;
    for (uint8_t m : box.factors) {
        long s = 0;
        if (m & M0) s += 1;
        if (m & M1) s -= 1;
        if (m & M2) s += 1;
        prod *= s;
    }
    return prod;
}

namespace {

std::vector<uint8_t> atomicFactors(const std::set<int>& I, const std::set<int>& J, int m) {
    if (m < 1) throw std::invalid_argument("lambdaDegree: m must be >= 1");
    for (int i : I)
        if (i < 1 || i > m) throw std::invalid_argument("index set out of 1..m");
    for (int j : J)
        if (j < 1 || j > m) throw std::invalid_argument("index set out of 1..m");
    for (int i : I)
        if (J.count(i)) throw OverlappingIndexSets("lambdaDegree: I and J must be disjoint");
    std::vector<uint8_t> f(static_cast<size_t>(m), M0);
    for (int i : I) f[static_cast<size_t>(i - 1)] = M1;
    for (int j : J) f[static_cast<size_t>(j - 1)] = M2;
    return f;
}

} // namespace

long lambdaDegree(const std::set<int>& I, const std::set<int>& J, int m) {
    return valuationRecursive(BoxFamily(atomicFactors(I, J, m)));
}

namespace {

uint64_t setMask(const std::set<int>& s) {
    uint64_t m = 0;
    for (int i : s) m |= 1ull << (i - 1);
    return m;
}

long lambdaIE(uint64_t I, uint64_t J, std::map<std::pair<uint64_t, uint64_t>, long>& memo) {
    auto key = std::make_pair(I, J);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    long omega = (I == 0) ? 1 : 0;
    // Omega^{I,J} is the disjoint union of Lambda^{I',J'} over I' subset of
    // I u J, J' subset of J, disjoint; solve for the (I, J) term.
    long sum = 0;
    uint64_t U = I | J;
    for (uint64_t Ip = U;; Ip = (Ip - 1) & U) {
        for (uint64_t Jp = J;; Jp = (Jp - 1) & J) {
            if ((Ip & Jp) == 0 && !(Ip == I && Jp == J)) sum += lambdaIE(Ip, Jp, memo);
            if (Jp == 0) break;
        }
        if (Ip == 0) break;
    }
    long res = omega - sum;
    memo.emplace(key, res);
    return res;
}

} // namespace

long lambdaDegreeViaPartition(const std::set<int>& I, const std::set<int>& J, int m) {
    atomicFactors(I, J, m); // validation only
    if (static_cast<size_t>(I.size() + J.size()) > 20)
        throw InfeasibleSize("lambdaDegreeViaPartition: subset enumeration too large");
    std::map<std::pair<uint64_t, uint64_t>, long> memo;
    return lambdaIE(setMask(I), setMask(J), memo);
}

InclusionExclusionReport inclusionExclusionCheck(const std::set<int>& I,
                                                 const std::set<int>& J, int m) {
    InclusionExclusionReport rep;
    auto omegaFactors = atomicFactors(I, J, m);
    for (int i : I) omegaFactors[static_cast<size_t>(i - 1)] = M01;
    for (int j : J) omegaFactors[static_cast<size_t>(j - 1)] = MALL;
    BoxFamily omega(omegaFactors);
    rep.omegaDegree = valuationRecursive(omega);
    rep.omegaExpected = I.empty() ? 1 : 0;
    rep.omegaValueOk = rep.omegaDegree == rep.omegaExpected;

    // enumerate the codes of the Omega box and bucket them by (I', J')
    std::set<std::pair<uint64_t, uint64_t>> fromCodes;
    long codeCount = 0;
    std::vector<int> idx(omegaFactors.size(), 0);
    std::vector<std::vector<int>> choices(omegaFactors.size());
    for (size_t i = 0; i < omegaFactors.size(); ++i)
        for (int d = 0; d < 3; ++d)
            if (omegaFactors[i] & (1u << d)) choices[i].push_back(d);
    bool done = false;
    while (!done) {
        uint64_t Ip = 0, Jp = 0;
        for (size_t i = 0; i < idx.size(); ++i) {
            int digit = choices[i][static_cast<size_t>(idx[i])];
            if (digit == 1) Ip |= 1ull << i;
            if (digit == 2) Jp |= 1ull << i;
        }
        ++codeCount;
        if (!fromCodes.insert({Ip, Jp}).second) {
            rep.partitionOk = false;
            return rep; // duplicate bucket: atoms would overlap
        }
        done = true;
        for (size_t i = 0; i < idx.size(); ++i) {
            if (++idx[i] < static_cast<int>(choices[i].size())) { done = false; break; }
            idx[i] = 0;
        }
    }

    // enumerate the admissible atom pairs and their degrees
    uint64_t Umask = setMask(I) | setMask(J);
    uint64_t Jmask = setMask(J);
    long sum = 0;
    long atoms = 0;
    std::set<std::pair<uint64_t, uint64_t>> fromPairs;
    for (uint64_t Ip = Umask;; Ip = (Ip - 1) & Umask) {
        for (uint64_t Jp = Jmask;; Jp = (Jp - 1) & Jmask) {
            if ((Ip & Jp) == 0) {
                ++atoms;
                fromPairs.insert({Ip, Jp});
                std::set<int> Is, Js;
                for (int b = 0; b < m; ++b) {
                    if (Ip & (1ull << b)) Is.insert(b + 1);
                    if (Jp & (1ull << b)) Js.insert(b + 1);
                }
                sum += lambdaDegree(Is, Js, m);
            }
            if (Jp == 0) break;
        }
        if (Ip == 0) break;
    }
    rep.atomCount = atoms;
    rep.degreeSum = sum;
    rep.partitionOk = (fromPairs == fromCodes) && (codeCount == atoms);
    rep.sumOk = sum == rep.omegaDegree;
    return rep;
}

} // namespace humps
