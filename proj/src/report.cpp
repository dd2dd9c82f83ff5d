#include "humps/report.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>

#include <json.hpp>

namespace humps {

using nlohmann::json;

namespace {

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void writeFile(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << content;
    if (!out) throw IoError("write failed: " + path);
}

json entryJson(const AtlasEntry& e) {
    json j;
    j["code"] = e.code.str();
    j["converged"] = e.converged;
    j["bc"] = bc_name(e.bc);
    j["z0"] = {e.z0[0], e.z0[1]};
    j["z0_full"] = {e.z0Full[0], e.z0Full[1]};
    j["hump_maxima"] = e.humpMaxima;
    j["bc_residual"] = e.bcResidual;
    j["defect"] = e.defect;
    j["precision"] = e.precisionName;
    return j;
}

} // namespace

void writeTrajectoryCsv(const std::string& path, const Trajectory& traj, int samples) {
    if (samples < 1000) samples = 1000;
    std::string out = "t,u,y\n";
    double t0 = traj.t0(), t1 = traj.t1();
    for (int i = 0; i <= samples; ++i) {
        double t = t0 + (t1 - t0) * i / samples;
        auto [u, y] = traj.eval(t);
        out += fmt17(t);
        out += ',';
        out += fmt17(u);
        out += ',';
        out += fmt17(y);
        out += '\n';
    }
    writeFile(path, out);
}

void writeEntryMeta(const std::string& path, const AtlasEntry& entry, const Problem& p,
                    const Windows& win) {
    json j = entryJson(entry);
    j["params"] = {{"lambda", p.lambda}, {"mu", p.mu}, {"c", p.c}};
    j["windows"] = {{"r", win.r}, {"rho", win.rho}, {"R", win.R}};
    writeFile(path, j.dump(2) + "\n");
}

void writeAtlasReport(const std::string& path, const AtlasResult& atlas, const Problem& p) {
    json j;
    j["bc"] = bc_name(p.bc);
    j["params"] = {{"lambda", p.lambda}, {"mu", p.mu}, {"c", p.c}};
    j["windows"] = {{"r", atlas.windows.r}, {"rho", atlas.windows.rho},
                    {"R", atlas.windows.R}};
    j["found"] = atlas.entries.size();
    j["missing"] = atlas.misses.size();
    j["min_pair_distance"] = atlas.minPairDistance;
    j["distinct"] = atlas.distinct;
    j["entries"] = json::array();
    for (const auto& e : atlas.entries) {
        json je = entryJson(e);
        je["csv"] = "code_" + e.code.str() + ".csv";
        j["entries"].push_back(je);
    }
    j["misses"] = json::array();
    for (const auto& mrep : atlas.misses)
        j["misses"].push_back({{"code", mrep.code.str()}, {"reason", mrep.reason}});
    writeFile(path, j.dump(2) + "\n");
}

void writeConstantsReport(const std::string& path, const std::vector<ConstantRow>& rows) {
    json j = json::array();
    for (const auto& row : rows)
        j.push_back({{"name", row.name}, {"value", row.value}, {"formula", row.formula}});
    writeFile(path, j.dump(2) + "\n");
}

void writeRadialProfileCsv(const std::string& path, const RadialProfile& prof) {
    std::string out = "r,U,dU\n";
    for (size_t i = 0; i < prof.r.size(); ++i) {
        out += fmt17(prof.r[i]);
        out += ',';
        out += fmt17(prof.U[i]);
        out += ',';
        out += fmt17(prof.dU[i]);
        out += '\n';
    }
    writeFile(path, out);
}

std::string resolveOutputDir(const std::string& flagValue) {
    if (!flagValue.empty()) return flagValue;
    if (const char* env = std::getenv("HUMPS_OUT"); env && *env) return env;
    return ".";
}

void ensureDirectory(const std::string& path) {
    std::error_code ec;
    std::filesystem::create_directories(path, ec);
    if (ec && !std::filesystem::is_directory(path))
        throw IoError("cannot create output directory: " + path + " (" + ec.message() + ")");
}

} // namespace humps
