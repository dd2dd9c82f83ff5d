#pragma once

#include <string>

#include "humps/bvp.hpp"
#include "humps/radial.hpp"
#include "humps/thresholds.hpp"

namespace humps {

// CSV with header "t,u,y", 17 significant digits, >= 1000 rows. Deterministic:
// re-emitting produces byte-identical output.
void writeTrajectoryCsv(const std::string& path, const Trajectory& traj, int samples = 2000);

// Sidecar metadata for one atlas entry.
void writeEntryMeta(const std::string& path, const AtlasEntry& entry, const Problem& p,
                    const Windows& win);

void writeAtlasReport(const std::string& path, const AtlasResult& atlas, const Problem& p);

void writeConstantsReport(const std::string& path, const std::vector<ConstantRow>& rows);

// CSV with header "r,U,dU".
void writeRadialProfileCsv(const std::string& path, const RadialProfile& prof);

// Resolve the output directory: --out flag beats HUMPS_OUT beats ".".
std::string resolveOutputDir(const std::string& flagValue);
void ensureDirectory(const std::string& path);

} // namespace humps
