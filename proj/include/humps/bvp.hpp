#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "humps/integrate.hpp"
#include "humps/symbol_code.hpp"
#include "humps/thresholds.hpp"

namespace humps {

enum class SolvePrecision { Double, LongDouble, Quad };

struct SolveSettings {
    double atol = 1e-11;
    double rtol = 1e-11;
    double newtonTol = 1e-10;   // convergence threshold on the shooting residual
    int maxNewtonIters = 40;
    SolvePrecision precision = SolvePrecision::Double;
    uint64_t seed = 0;          // multi-start jitter seed
    int maxNodeRounds = 4;      // adaptive node-splitting rounds
    double segmentGrowthCap = 1e5;
    double scanLo = 1e-6;       // per-hump seed scan window (slopes)
    double scanHi = 1e3;
    int scanPoints = 480;
};

struct Problem {
    const Weight* w = nullptr;
    const Nonlinearity* g = nullptr;
    double lambda = 0.0;
    double mu = 0.0;
    double c = 0.0;
    BcTag bc = BcTag::Periodic;
};

struct Windows {
    double r = 0.0;
    double rho = 0.0;
    double R = 0.0;
};

struct AtlasEntry {
    SymbolCode code;
    Trajectory trajectory;
    std::vector<double> humpMaxima;
    bool converged = false;
    double bcResidual = 0.0;
    double defect = 0.0;
    std::array<double, 2> z0{0.0, 0.0};
    std::string z0Full[2]; // full-precision decimal form of z0 at solve precision
    BcTag bc = BcTag::None;
    std::string precisionName = "double";
};

struct MissReport {
    SymbolCode code;
    std::string reason;
};

struct AtlasResult {
    std::vector<AtlasEntry> entries; // sorted by code
    std::vector<MissReport> misses;
    Windows windows;
    double minPairDistance = 0.0; // smallest pairwise sup-norm gap
    bool distinct = false;
    bool complete() const { return misses.empty(); }
};

// Positivity humps of the periodically extended weight inside
// [from, from + span].
std::vector<Interval> humpsInWindow(const Weight& w, double from, double span);

// Symbol code of a nonnegative trajectory covering the given humps.
// Throws OnBoundary when a hump maximum sits within 1e-9 of a window edge and
// AboveR when one reaches R.
SymbolCode classify(const Trajectory& traj, const std::vector<Interval>& humps, double r,
                    double rho, double R, std::vector<double>* maximaOut = nullptr);

// Per-hump Dirichlet sub-solutions of u'' + lambda a+ g(u) = 0 (the mu -> inf
// limit profiles): initial slopes of the small- and large-window solutions.
struct HumpSeeds {
    std::vector<std::optional<double>> smallSlope; // hump max in (r, rho)
    std::vector<std::optional<double>> largeSlope; // hump max in (rho, R)
};
HumpSeeds humpSeeds(const Problem& p, const Windows& win, const SolveSettings& s = {});

// One boundary-value solve by (multiple-)shooting Newton from a state guess.
AtlasEntry solveBVP(const Problem& p, const Windows& win, std::array<double, 2> guess,
                    const SolveSettings& s = {});

// Full 3^m - 1 atlas over the nonzero codes.
AtlasResult buildAtlas(const Problem& p, const Windows& win, const SolveSettings& s = {});

// kT-periodic solve for a code of length k*m over the unrolled weight.
AtlasEntry subharmonicSolve(const Problem& p, const Windows& win, const SymbolCode& code,
                            int k, const SolveSettings& s = {});

struct ValidationCheck {
    std::string name;
    bool passed = false;
    double value = 0.0;
    std::string detail;
};
struct ValidationReport {
    std::vector<ValidationCheck> checks;
    bool passed() const {
        for (const auto& c : checks)
            if (!c.passed) return false;
        return true;
    }
};
ValidationReport validateSolution(const Problem& p, const AtlasEntry& entry,
                                  const Windows& win);

// Coding-level semiconjugation probe on kT-periodic entries: time translation
// by T must shift the per-period coding, and the k-fold flow map must return
// to z0.
struct SemiconjugationEntry {
    SymbolCode code;
    bool commutes = false;
    double orbitResidual = 0.0;
    std::string detail;
};
struct SemiconjugationReport {
    std::vector<SemiconjugationEntry> entries;
    bool passed() const {
        for (const auto& e : entries)
            if (!e.commutes || !(e.orbitResidual < 1e-7)) return false;
        return !entries.empty();
    }
};
SemiconjugationReport semiconjugationCheck(const Problem& p, const Windows& win,
                                           const std::vector<AtlasEntry>& entries, int k,
                                           const SolveSettings& s = {});

// sup-norm distance between two trajectories on their common interval
double trajectoryDistance(const Trajectory& a, const Trajectory& b, int samples = 2048);

} // namespace humps
