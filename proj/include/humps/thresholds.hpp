#pragma once

#include <optional>
#include <string>
#include <vector>

#include "humps/nonlinearity.hpp"
#include "humps/weight.hpp"

namespace humps {

// Per-negativity-interval thresholds (0-based, aligned with negAfter).
// Entries are NaN where the referenced interval/hump does not exist
// (tail-less Neumann/Dirichlet weights outside periodic mode).
struct ThresholdBreakdown {
    std::vector<double> muHat;       // 2R / (r gamma(r) |A_i|)
    std::vector<double> muCheck;     // 1 / (gamma(R) |A_i|)
    std::vector<double> muTilde;     // forward push into hump i+1
    std::vector<double> muBar;       // backward push from hump i
    std::vector<double> muStarPlus;  // forward monotone crossing
    std::vector<double> muStarMinus; // backward monotone crossing
};

struct ParamSet {
    double lambda = 0.0;
    double mu = 0.0;
    double rho = 0.0;
    double r = 0.0;
    double R = 0.0;
    double c = 0.0;
    bool periodic = true;

    double epsilon = 0.0;     // hump margin used by lambdaStar
    double nuEps = 0.0;       // min_i int_{sigma_i+eps}^{tau_i-eps} a+
    double etaEpsRho = 0.0;   // min g on [eps*rho/max|I+|, rho]
    double lambdaStar = 0.0;
    double condRRBound = 0.0; // 1 / (2 lambda max_i (|I+|+|I-|)||a||+,i)

    double muSharp = 0.0;     // lambda int a+ / int a-
    double muH1 = 0.0;
    double muH3 = 0.0;
    double muStar = 0.0;
    ThresholdBreakdown perInterval;
};

// lambda*(rho) = 2 rho / (eps nu_eps eta_{eps,rho}). eps==nullopt selects the
// minimizer over a 64-point log grid. Outputs the pieces via the ParamSet-style
// struct below when requested.
struct LambdaStarInfo {
    double value = 0.0;
    double epsilon = 0.0;
    double nu = 0.0;
    double eta = 0.0;
};
LambdaStarInfo lambdaStar(const Weight& w, const Nonlinearity& g, double rho,
                          std::optional<double> eps);

// Largest r <= rho/2 and smallest R >= 2 rho satisfying the zeta bound, with
// heuristic certification of the envelope tails on (0, r] and [R, 10R].
std::pair<double, double> admissibleRR(const Weight& w, const Nonlinearity& g, double lambda,
                                       double rho);

// True when zeta(s) clears the bound on the certification grids for the pair
// (r, R); the re-check used by property tests.
bool checkCondRR(const Weight& w, const Nonlinearity& g, double lambda, double r, double R);

// All mu thresholds of the degree argument. Cyclic hump indexing when
// periodic; otherwise only quantities whose intervals exist are produced.
ParamSet muThresholds(const Weight& w, const Nonlinearity& g, double lambda, double rho,
                      double r, double R, bool periodic, double c = 0.0);

// A-posteriori smallness thresholds: mu*_eps (humps coded 0 sink below eps)
// and mu**_eps (solutions sink below eps on every negativity interval).
std::pair<double, double> epsilonThresholds(const Weight& w, const Nonlinearity& g,
                                            double lambda, double r, double R, double eps,
                                            bool periodic);

// Row of the constants table (value + defining formula, for reports).
struct ConstantRow {
    std::string name;
    double value;
    std::string formula;
};
std::vector<ConstantRow> constantsTable(const Weight& w, const Nonlinearity& g,
                                        const ParamSet& ps);

} // namespace humps
