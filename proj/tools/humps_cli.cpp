#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <set>

#include <json.hpp>

#include "humps/config.hpp"
#include "humps/degcomb.hpp"
#include "humps/report.hpp"
#include "humps/symbolic.hpp"
#include "humps/thresholds.hpp"

using namespace humps;

namespace {

struct Loaded {
    ProblemConfig cfg;
    Weight weight;
    Nonlinearity kernel;
    Problem problem;
};

Loaded loadProblem(const std::string& path) {
    ProblemConfig cfg = loadConfig(path);
    Loaded out{cfg, buildWeight(cfg), buildKernel(cfg), {}};
    out.problem = {&out.weight, &out.kernel, cfg.lambda, cfg.mu, cfg.c, cfg.bc};
    for (const auto& wmsg : out.kernel.warnings())
        std::cerr << "warning: nonlinearity: " << wmsg << "\n";
    if (cfg.c != 0.0)
        std::cerr << "warning: damping c != 0: certified thresholds assume the "
                     "undamped equation\n";
    if (cfg.mu > 1e6)
        std::cerr << "warning: mu above the 1e6 advisory; expect slow negativity "
                     "intervals\n";
    return out;
}

SolveSettings settingsFrom(const ProblemConfig& cfg) {
    SolveSettings s;
    s.seed = cfg.seed;
    s.precision = cfg.precision;
    return s;
}

// windows: overrides win, else certified pipeline
Windows windowsFrom(const Loaded& L, bool* certified = nullptr) {
    Windows win;
    win.rho = L.cfg.rho;
    if (L.cfg.rOverride && L.cfg.ROverride) {
        win.r = *L.cfg.rOverride;
        win.R = *L.cfg.ROverride;
        if (certified) *certified = false;
        return win;
    }
    auto [r, R] = admissibleRR(L.weight, L.kernel, L.cfg.lambda, L.cfg.rho);
    win.r = L.cfg.rOverride.value_or(r);
    win.R = L.cfg.ROverride.value_or(R);
    if (certified) *certified = true;
    return win;
}

int cmdConstants(const std::string& cfgPath, const std::string& outFlag) {
    Loaded L = loadProblem(cfgPath);
    bool periodic = L.cfg.bc == BcTag::Periodic;
    auto info = lambdaStar(L.weight, L.kernel, L.cfg.rho, L.cfg.epsilon);
    Windows win = windowsFrom(L);
    ParamSet ps = muThresholds(L.weight, L.kernel, L.cfg.lambda, L.cfg.rho, win.r, win.R,
                               periodic, L.cfg.c);
    ps.mu = L.cfg.mu;
    ps.epsilon = info.epsilon;
    ps.nuEps = info.nu;
    ps.etaEpsRho = info.eta;
    ps.lambdaStar = info.value;
    auto rows = constantsTable(L.weight, L.kernel, ps);

    std::printf("%-18s %-24s %s\n", "name", "value", "formula");
    for (const auto& row : rows)
        std::printf("%-18s %-24.15g %s\n", row.name.c_str(), row.value,
                    row.formula.c_str());
    if (L.cfg.lambda <= info.value)
        std::printf("note: lambda <= lambda_star; the multiplicity theorem windows are "
                    "not certified at these parameters\n");
    if (L.cfg.mu <= ps.muStar)
        std::printf("note: mu <= mu_star; the multiplicity theorem windows are not "
                    "certified at these parameters\n");

    std::string dir = resolveOutputDir(outFlag);
    ensureDirectory(dir);
    writeConstantsReport(dir + "/constants.json", rows);
    std::printf("report: %s/constants.json\n", dir.c_str());
    return 0;
}

int cmdSolve(const std::string& cfgPath, double u0, double y0, const std::string& outFlag) {
    Loaded L = loadProblem(cfgPath);
    Windows win = windowsFrom(L);
    AtlasEntry e = solveBVP(L.problem, win, {u0, y0}, settingsFrom(L.cfg));
    std::printf("code %s  residual %.3g  defect %.3g  z0 = (%s, %s)\n", e.code.str().c_str(),
                e.bcResidual, e.defect, e.z0Full[0].c_str(), e.z0Full[1].c_str());
    auto rep = validateSolution(L.problem, e, win);
    for (const auto& c : rep.checks)
        std::printf("  %-18s %s (%.6g)\n", c.name.c_str(), c.passed ? "pass" : "FAIL",
                    c.value);
    std::string dir = resolveOutputDir(outFlag);
    ensureDirectory(dir);
    writeTrajectoryCsv(dir + "/solution.csv", e.trajectory);
    writeEntryMeta(dir + "/solution.meta.json", e, L.problem, win);
    std::printf("wrote %s/solution.csv\n", dir.c_str());
    return rep.passed() ? 0 : 2;
}

int cmdAtlas(const std::string& cfgPath, const std::string& outFlag) {
    Loaded L = loadProblem(cfgPath);
    Windows win = windowsFrom(L);
    AtlasResult atlas = buildAtlas(L.problem, win, settingsFrom(L.cfg));
    std::string dir = resolveOutputDir(outFlag);
    ensureDirectory(dir);
    for (const auto& e : atlas.entries) {
        writeTrajectoryCsv(dir + "/code_" + e.code.str() + ".csv", e.trajectory);
        writeEntryMeta(dir + "/code_" + e.code.str() + ".meta.json", e, L.problem, win);
        std::printf("code %s  max(", e.code.str().c_str());
        for (size_t i = 0; i < e.humpMaxima.size(); ++i)
            std::printf("%s%.4g", i ? ", " : "", e.humpMaxima[i]);
        std::printf(")  residual %.2e\n", e.bcResidual);
    }
    for (const auto& mrep : atlas.misses)
        std::printf("miss %s  (%s)\n", mrep.code.str().c_str(), mrep.reason.c_str());
    writeAtlasReport(dir + "/atlas.json", atlas, L.problem);
    std::printf("%zu found, %zu missing; report: %s/atlas.json\n", atlas.entries.size(),
                atlas.misses.size(), dir.c_str());
    return atlas.complete() ? 0 : 2;
}

int cmdSubharmonics(const std::string& cfgPath, int k, const std::string& codeStr,
                    const std::string& outFlag) {
    Loaded L = loadProblem(cfgPath);
    Windows win = windowsFrom(L);
    SymbolCode code = SymbolCode::parse(codeStr);
    AtlasEntry e = subharmonicSolve(L.problem, win, code, k, settingsFrom(L.cfg));
    std::printf("code %s  residual %.3g  defect %.3g  precision %s\n", e.code.str().c_str(),
                e.bcResidual, e.defect, e.precisionName.c_str());
    std::string dir = resolveOutputDir(outFlag);
    ensureDirectory(dir);
    writeTrajectoryCsv(dir + "/sub_" + e.code.str() + ".csv", e.trajectory);
    writeEntryMeta(dir + "/sub_" + e.code.str() + ".meta.json", e, L.problem, win);
    auto rep = semiconjugationCheck(L.problem, win, {e}, k, settingsFrom(L.cfg));
    for (const auto& se : rep.entries)
        std::printf("shift commutes: %s  orbit residual %.3g %s\n",
                    se.commutes ? "yes" : "NO", se.orbitResidual, se.detail.c_str());
    return rep.passed() ? 0 : 2;
}

int cmdLyndon(int n, int k, bool count, bool enumerate) {
    if (count || !enumerate) std::printf("%s\n", lyndonCount(n, k).str().c_str());
    if (enumerate) {
        for (const auto& w : lyndonEnumerate(n, k)) {
            std::string s;
            for (size_t i = 0; i < w.digits.size(); ++i) {
                if (n > 10 && i) s += ",";
                s += std::to_string(w.digits[i]);
            }
            std::printf("%s\n", s.c_str());
        }
    }
    return 0;
}

std::set<int> parseIndexSet(const std::string& s) {
    std::set<int> out;
    std::string cur;
    for (char ch : s + ",") {
        if (ch == ',') {
            if (!cur.empty()) out.insert(std::stoi(cur));
            cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    return out;
}

int cmdDegree(const std::string& Istr, const std::string& Jstr, int m,
              const std::string& boxSpec, bool check) {
    if (!boxSpec.empty()) {
        BoxFamily box = BoxFamily::parse(boxSpec);
        std::printf("%ld\n", valuationRecursive(box));
        return 0;
    }
    std::set<int> I = parseIndexSet(Istr), J = parseIndexSet(Jstr);
    if (check) {
        auto rep = inclusionExclusionCheck(I, J, m);
        std::printf("partition %s, degree sum %ld, omega degree %ld (expected %ld)\n",
                    rep.partitionOk ? "ok" : "BROKEN", rep.degreeSum, rep.omegaDegree,
                    rep.omegaExpected);
        return rep.passed() ? 0 : 1;
    }
    std::printf("%ld\n", lambdaDegree(I, J, m));
    return 0;
}

int cmdRadial(const std::string& cfgPath, const std::string& outFlag) {
    Loaded L = loadProblem(cfgPath);
    AnnulusProblem annulus = buildAnnulus(L.cfg);
    ReducedProblem red = reduce(annulus);

    std::string dir = resolveOutputDir(outFlag);
    ensureDirectory(dir);

    // emit the reduced weight as a reusable config
    ProblemConfig reducedCfg = L.cfg;
    reducedCfg.annulus.reset();
    reducedCfg.weightPieces.clear();
    for (const auto& p : red.weight.pieces()) {
        WeightPieceCfg pc;
        pc.t0 = p.t0;
        pc.t1 = p.t1;
        if (p.kind == PieceKind::RadialPow) {
            pc.kind = "radialpow";
            pc.params = {{"coeff", p.coeff}, {"dim", double(p.dim)}, {"r1", p.rinner}};
        } else {
            pc.kind = "radialsin";
            pc.params = {{"amp", p.amp}, {"omega", p.omega}, {"phase", p.phase},
                         {"dim", double(p.dim)}, {"r1", p.rinner}};
        }
        reducedCfg.weightPieces.push_back(pc);
    }
    {
        std::ofstream out(dir + "/reduced.cfg");
        out << serializeConfig(reducedCfg);
    }
    std::printf("reduced horizon T' = %.17g; config: %s/reduced.cfg\n", red.horizon,
                dir.c_str());

    Problem rp{&red.weight, &L.kernel, L.cfg.lambda, L.cfg.mu, L.cfg.c, L.cfg.bc};
    Windows win;
    win.rho = L.cfg.rho;
    if (L.cfg.rOverride && L.cfg.ROverride) {
        win.r = *L.cfg.rOverride;
        win.R = *L.cfg.ROverride;
    } else {
        auto [r, R] = admissibleRR(red.weight, L.kernel, L.cfg.lambda, L.cfg.rho);
        win.r = L.cfg.rOverride.value_or(r);
        win.R = L.cfg.ROverride.value_or(R);
    }
    AtlasResult atlas = buildAtlas(rp, win, settingsFrom(L.cfg));
    for (const auto& e : atlas.entries) {
        RadialProfile prof = liftSolution(e.trajectory, annulus);
        double res = radialResidual(prof, annulus, L.kernel, L.cfg.lambda, L.cfg.mu);
        writeRadialProfileCsv(dir + "/profile_" + e.code.str() + ".csv", prof);
        std::printf("code %s  radial residual %.3g\n", e.code.str().c_str(), res);
    }
    for (const auto& mrep : atlas.misses)
        std::printf("miss %s  (%s)\n", mrep.code.str().c_str(), mrep.reason.c_str());
    writeAtlasReport(dir + "/radial_atlas.json", atlas, rp);
    return atlas.complete() ? 0 : 2;
}

int cmdValidate(const std::string& cfgPath, const std::string& reportPath) {
    Loaded L = loadProblem(cfgPath);
    Windows win = windowsFrom(L);
    std::ifstream in(reportPath);
    if (!in) throw IoError("cannot open report: " + reportPath);
    nlohmann::json j;
    in >> j;
    bool allOk = true;
    for (const auto& je : j.at("entries")) {
        std::array<double, 2> z0{je.at("z0")[0].get<double>(), je.at("z0")[1].get<double>()};
        AtlasEntry e = solveBVP(L.problem, win, z0, settingsFrom(L.cfg));
        auto rep = validateSolution(L.problem, e, win);
        std::printf("code %s:", e.code.str().c_str());
        for (const auto& c : rep.checks) {
            std::printf(" %s=%s", c.name.c_str(), c.passed ? "pass" : "FAIL");
            allOk = allOk && c.passed;
        }
        std::printf("\n");
    }
    return allOk ? 0 : 2;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"solver and verification toolkit for super-sublinear indefinite "
                 "boundary value problems"};
    app.require_subcommand(1);

    std::string cfgPath, outDir, codeStr, Istr, Jstr, boxSpec, reportPath;
    double u0 = 0.0, y0 = 0.0;
    int n = 3, k = 2, m = 1;
    bool countFlag = false, enumFlag = false, checkFlag = false;

    auto* constants = app.add_subcommand("constants", "evaluate every certified threshold");
    constants->add_option("--config", cfgPath)->required();
    constants->add_option("--out", outDir);

    auto* solve = app.add_subcommand("solve", "one boundary-value solve from a state guess");
    solve->add_option("--config", cfgPath)->required();
    solve->add_option("--u0", u0);
    solve->add_option("--y0", y0);
    solve->add_option("--out", outDir);

    auto* atlas = app.add_subcommand("atlas", "find one solution per nonzero symbol code");
    atlas->add_option("--config", cfgPath)->required();
    atlas->add_option("--out", outDir);

    auto* sub = app.add_subcommand("subharmonics", "kT-periodic solve for a km-digit code");
    sub->add_option("--config", cfgPath)->required();
    sub->add_option("--k", k)->required();
    sub->add_option("--code", codeStr)->required();
    sub->add_option("--out", outDir);

    auto* lyndon = app.add_subcommand("lyndon", "count or enumerate n-ary Lyndon words");
    lyndon->add_option("--n", n)->required();
    lyndon->add_option("--k", k)->required();
    lyndon->add_flag("--count", countFlag);
    lyndon->add_flag("--enumerate", enumFlag);

    auto* degree = app.add_subcommand("degree", "combinatorial degree of a window set");
    degree->add_option("--I", Istr);
    degree->add_option("--J", Jstr);
    degree->add_option("--m", m);
    degree->add_option("--box", boxSpec);
    degree->add_flag("--check", checkFlag);

    auto* radial = app.add_subcommand("radial", "reduce an annulus problem and lift its atlas");
    radial->add_option("--config", cfgPath)->required();
    radial->add_option("--out", outDir);

    auto* validate = app.add_subcommand("validate", "re-check the entries of an atlas report");
    validate->add_option("--config", cfgPath)->required();
    validate->add_option("--report", reportPath)->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (constants->parsed()) return cmdConstants(cfgPath, outDir);
        if (solve->parsed()) return cmdSolve(cfgPath, u0, y0, outDir);
        if (atlas->parsed()) return cmdAtlas(cfgPath, outDir);
        if (sub->parsed()) return cmdSubharmonics(cfgPath, k, codeStr, outDir);
        if (lyndon->parsed()) return cmdLyndon(n, k, countFlag, enumFlag);
        if (degree->parsed()) return cmdDegree(Istr, Jstr, m, boxSpec, checkFlag);
        if (radial->parsed()) return cmdRadial(cfgPath, outDir);
        if (validate->parsed()) return cmdValidate(cfgPath, reportPath);
    } catch (const ConfigParseError& ex) {
        std::cerr << "config error: " << ex.what() << " [" << cfgPath << "]\n";
        return 1;
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what();
        if (!cfgPath.empty()) std::cerr << " [config: " << cfgPath << "]";
        std::cerr << "\n";
        return 1;
    }
    return 1;
}
