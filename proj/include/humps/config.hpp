#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "humps/bvp.hpp"
#include "humps/nonlinearity.hpp"
#include "humps/radial.hpp"
#include "humps/weight.hpp"

namespace humps {

struct WeightPieceCfg {
    double t0 = 0.0;
    double t1 = 0.0;
    std::string kind; // const | sin | radialpow | radialsin
    std::map<std::string, double> params;
    bool operator==(const WeightPieceCfg&) const = default;
};

struct AnnulusPieceCfg {
    double r0 = 0.0;
    double r1 = 0.0;
    std::string kind; // const | sin
    std::map<std::string, double> params;
    bool operator==(const AnnulusPieceCfg&) const = default;
};

struct AnnulusCfg {
    int dim = 2;
    double r1 = 0.0;
    double r2 = 0.0;
    std::vector<AnnulusPieceCfg> pieces;
    bool operator==(const AnnulusCfg&) const = default;
};

struct ProblemConfig {
    BcTag bc = BcTag::Periodic;
    uint64_t seed = 0;
    bool autoRotate = false;

    std::vector<WeightPieceCfg> weightPieces;

    std::string kernel = "rational_square";
    std::map<std::string, double> kernelParams; // alpha, beta, s_ref
    std::vector<std::pair<double, double>> table;

    double lambda = 1.0;
    double mu = 1.0;
    double rho = 1.0;
    std::optional<double> rOverride;
    std::optional<double> ROverride;
    double c = 0.0;
    int k = 1;
    std::optional<double> epsilon; // nullopt = auto
    SolvePrecision precision = SolvePrecision::Double;

    std::optional<AnnulusCfg> annulus;

    bool operator==(const ProblemConfig&) const = default;
};

ProblemConfig parseConfig(const std::string& text);
ProblemConfig loadConfig(const std::string& path);
std::string serializeConfig(const ProblemConfig& cfg);

Weight buildWeight(const ProblemConfig& cfg);
Nonlinearity buildKernel(const ProblemConfig& cfg);
AnnulusProblem buildAnnulus(const ProblemConfig& cfg);

// Rotate the piece list so the weight starts at its first hump (periodic
// normal form).
Weight rotatedToNormalForm(const Weight& w);

} // namespace humps
