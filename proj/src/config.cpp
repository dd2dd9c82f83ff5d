#include "humps/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace humps {

namespace {

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::vector<std::string> tokenize(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
}

double parseNum(const std::string& s, int line) {
    try {
        size_t pos = 0;
        double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ConfigParseError("not a number: '" + s + "'", line, 1);
    }
}

std::map<std::string, double> parseKvTokens(const std::vector<std::string>& toks,
                                            size_t from, int line) {
    std::map<std::string, double> out;
    for (size_t i = from; i < toks.size(); ++i) {
        auto eq = toks[i].find('=');
        if (eq == std::string::npos)
            throw ConfigParseError("expected key=value, got '" + toks[i] + "'", line, 1);
        out[toks[i].substr(0, eq)] = parseNum(toks[i].substr(eq + 1), line);
    }
    return out;
}

BcTag parseBc(const std::string& s, int line) {
    if (s == "periodic") return BcTag::Periodic;
    if (s == "neumann") return BcTag::Neumann;
    if (s == "dirichlet") return BcTag::Dirichlet;
    if (s == "mixed_lr") return BcTag::MixedLR;
    if (s == "mixed_rl") return BcTag::MixedRL;
    throw ConfigParseError("unknown bc '" + s + "'", line, 1);
}

const std::set<std::string> kPieceKinds{"const", "sin", "radialpow", "radialsin"};
const std::set<std::string> kKernels{"rational_square", "arctan_cube", "power_blend",
                                     "tabulated", "linear"};

} // namespace

ProblemConfig parseConfig(const std::string& text) {
    ProblemConfig cfg;
    std::istringstream in(text);
    std::string rawLine;
    std::string section;
    int lineNo = 0;
    bool sawWeight = false;

    while (std::getline(in, rawLine)) {
        ++lineNo;
        std::string lineStr = rawLine;
        auto hash = lineStr.find('#');
        if (hash != std::string::npos) lineStr.erase(hash);
        // trim
        auto b = lineStr.find_first_not_of(" \t\r");
        if (b == std::string::npos) continue;
        auto e = lineStr.find_last_not_of(" \t\r");
        lineStr = lineStr.substr(b, e - b + 1);

        if (lineStr.front() == '[') {
            if (lineStr.back() != ']')
                throw ConfigParseError("unterminated section header", lineNo, 1);
            section = lineStr.substr(1, lineStr.size() - 2);
            if (section != "problem" && section != "weight" && section != "nonlinearity" &&
                section != "parameters" && section != "annulus")
                throw ConfigParseError("unknown section [" + section + "]", lineNo, 1);
            if (section == "annulus" && !cfg.annulus) cfg.annulus = AnnulusCfg{};
            continue;
        }
        auto eq = lineStr.find('=');
        if (eq == std::string::npos)
            throw ConfigParseError("expected key = value", lineNo, 1);
        std::string key = lineStr.substr(0, eq);
        std::string val = lineStr.substr(eq + 1);
        auto kb = key.find_last_not_of(" \t");
        key = key.substr(0, kb + 1);
        auto vb = val.find_first_not_of(" \t");
        val = vb == std::string::npos ? "" : val.substr(vb);
        if (section.empty())
            throw ConfigParseError("key outside any section", lineNo, 1);

        if (section == "problem") {
            if (key == "bc") cfg.bc = parseBc(val, lineNo);
            else if (key == "seed") cfg.seed = static_cast<uint64_t>(parseNum(val, lineNo));
            else throw ConfigParseError("unknown key '" + key + "' in [problem]", lineNo, 1);
        } else if (section == "weight") {
            if (key == "piece") {
                auto toks = tokenize(val);
                if (toks.size() < 3)
                    throw ConfigParseError("piece needs: t0 t1 kind [key=value...]", lineNo, 1);
                WeightPieceCfg pc;
                pc.t0 = parseNum(toks[0], lineNo);
                pc.t1 = parseNum(toks[1], lineNo);
                pc.kind = toks[2];
                if (!kPieceKinds.count(pc.kind))
                    throw ConfigParseError("unknown piece kind '" + pc.kind + "'", lineNo, 1);
                pc.params = parseKvTokens(toks, 3, lineNo);
                cfg.weightPieces.push_back(std::move(pc));
                sawWeight = true;
            } else if (key == "auto_rotate") {
                cfg.autoRotate = val == "true" || val == "1";
            } else {
                throw ConfigParseError("unknown key '" + key + "' in [weight]", lineNo, 1);
            }
        } else if (section == "nonlinearity") {
            if (key == "kind") {
                if (!kKernels.count(val))
                    throw ConfigParseError("unknown kernel '" + val + "'", lineNo, 1);
                cfg.kernel = val;
            } else if (key == "alpha" || key == "beta" || key == "s_ref") {
                cfg.kernelParams[key] = parseNum(val, lineNo);
            } else if (key == "table") {
                for (const auto& tok : tokenize(val)) {
                    auto colon = tok.find(':');
                    if (colon == std::string::npos)
                        throw ConfigParseError("table entries are s:g", lineNo, 1);
                    cfg.table.emplace_back(parseNum(tok.substr(0, colon), lineNo),
                                           parseNum(tok.substr(colon + 1), lineNo));
                }
            } else {
                throw ConfigParseError("unknown key '" + key + "' in [nonlinearity]", lineNo,
                                       1);
            }
        } else if (section == "parameters") {
            if (key == "lambda") cfg.lambda = parseNum(val, lineNo);
            else if (key == "mu") cfg.mu = parseNum(val, lineNo);
            else if (key == "rho") cfg.rho = parseNum(val, lineNo);
            else if (key == "r") cfg.rOverride = parseNum(val, lineNo);
            else if (key == "R") cfg.ROverride = parseNum(val, lineNo);
            else if (key == "c") cfg.c = parseNum(val, lineNo);
            else if (key == "k") cfg.k = static_cast<int>(parseNum(val, lineNo));
            else if (key == "epsilon") {
                if (val == "auto") cfg.epsilon.reset();
                else cfg.epsilon = parseNum(val, lineNo);
            } else if (key == "precision") {
                if (val == "double") cfg.precision = SolvePrecision::Double;
                else if (val == "longdouble") cfg.precision = SolvePrecision::LongDouble;
                else if (val == "quad") cfg.precision = SolvePrecision::Quad;
                else throw ConfigParseError("unknown precision '" + val + "'", lineNo, 1);
            } else {
                throw ConfigParseError("unknown key '" + key + "' in [parameters]", lineNo, 1);
            }
        } else if (section == "annulus") {
            AnnulusCfg& an = *cfg.annulus;
            if (key == "dim") an.dim = static_cast<int>(parseNum(val, lineNo));
            else if (key == "r1") an.r1 = parseNum(val, lineNo);
            else if (key == "r2") an.r2 = parseNum(val, lineNo);
            else if (key == "qpiece") {
                auto toks = tokenize(val);
                if (toks.size() < 3)
                    throw ConfigParseError("qpiece needs: r0 r1 kind [key=value...]", lineNo,
                                           1);
                AnnulusPieceCfg pc;
                pc.r0 = parseNum(toks[0], lineNo);
                pc.r1 = parseNum(toks[1], lineNo);
                pc.kind = toks[2];
                if (pc.kind != "const" && pc.kind != "sin")
                    throw ConfigParseError("qpiece kind must be const or sin", lineNo, 1);
                pc.params = parseKvTokens(toks, 3, lineNo);
                an.pieces.push_back(std::move(pc));
            } else {
                throw ConfigParseError("unknown key '" + key + "' in [annulus]", lineNo, 1);
            }
        }
    }
    if (!sawWeight && !cfg.annulus)
        throw ConfigParseError("config defines neither [weight] pieces nor [annulus]", lineNo,
                               1);
    return cfg;
}

ProblemConfig loadConfig(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parseConfig(ss.str());
}

std::string serializeConfig(const ProblemConfig& cfg) {
    std::ostringstream out;
    out << "[problem]\n";
    out << "bc = " << bc_name(cfg.bc) << "\n";
    out << "seed = " << cfg.seed << "\n";
    if (!cfg.weightPieces.empty()) {
        out << "\n[weight]\n";
        if (cfg.autoRotate) out << "auto_rotate = true\n";
        for (const auto& pc : cfg.weightPieces) {
            out << "piece = " << fmt(pc.t0) << " " << fmt(pc.t1) << " " << pc.kind;
            for (const auto& [k, v] : pc.params) out << " " << k << "=" << fmt(v);
            out << "\n";
        }
    }
    out << "\n[nonlinearity]\n";
    out << "kind = " << cfg.kernel << "\n";
    for (const auto& [k, v] : cfg.kernelParams) out << k << " = " << fmt(v) << "\n";
    if (!cfg.table.empty()) {
        out << "table =";
        for (const auto& [s, gv] : cfg.table) out << " " << fmt(s) << ":" << fmt(gv);
        out << "\n";
    }
    out << "\n[parameters]\n";
    out << "lambda = " << fmt(cfg.lambda) << "\n";
    out << "mu = " << fmt(cfg.mu) << "\n";
    out << "rho = " << fmt(cfg.rho) << "\n";
    if (cfg.rOverride) out << "r = " << fmt(*cfg.rOverride) << "\n";
    if (cfg.ROverride) out << "R = " << fmt(*cfg.ROverride) << "\n";
    out << "c = " << fmt(cfg.c) << "\n";
    out << "k = " << cfg.k << "\n";
    if (cfg.epsilon) out << "epsilon = " << fmt(*cfg.epsilon) << "\n";
    else out << "epsilon = auto\n";
    switch (cfg.precision) {
        case SolvePrecision::Double: out << "precision = double\n"; break;
        case SolvePrecision::LongDouble: out << "precision = longdouble\n"; break;
        case SolvePrecision::Quad: out << "precision = quad\n"; break;
    }
    if (cfg.annulus) {
        const auto& an = *cfg.annulus;
        out << "\n[annulus]\n";
        out << "dim = " << an.dim << "\n";
        out << "r1 = " << fmt(an.r1) << "\n";
        out << "r2 = " << fmt(an.r2) << "\n";
        for (const auto& pc : an.pieces) {
            out << "qpiece = " << fmt(pc.r0) << " " << fmt(pc.r1) << " " << pc.kind;
            for (const auto& [k, v] : pc.params) out << " " << k << "=" << fmt(v);
            out << "\n";
        }
    }
    return out.str();
}

namespace {

double param(const std::map<std::string, double>& m, const std::string& key, double dflt) {
    auto it = m.find(key);
    return it == m.end() ? dflt : it->second;
}

Piece buildPiece(const WeightPieceCfg& pc) {
    Piece p;
    p.t0 = pc.t0;
    p.t1 = pc.t1;
    if (pc.kind == "const") {
        p.kind = PieceKind::Constant;
        p.value = param(pc.params, "value", 0.0);
    } else if (pc.kind == "sin") {
        p.kind = PieceKind::Sine;
        p.amp = param(pc.params, "amp", 1.0);
        p.omega = param(pc.params, "omega", 1.0);
        p.phase = param(pc.params, "phase", 0.0);
    } else if (pc.kind == "radialpow") {
        p.kind = PieceKind::RadialPow;
        p.coeff = param(pc.params, "coeff", 0.0);
        p.dim = static_cast<int>(param(pc.params, "dim", 2));
        p.rinner = param(pc.params, "r1", 1.0);
    } else {
        p.kind = PieceKind::RadialSine;
        p.amp = param(pc.params, "amp", 1.0);
        p.omega = param(pc.params, "omega", 1.0);
        p.phase = param(pc.params, "phase", 0.0);
        p.dim = static_cast<int>(param(pc.params, "dim", 2));
        p.rinner = param(pc.params, "r1", 1.0);
    }
    return p;
}

} // namespace

Weight buildWeight(const ProblemConfig& cfg) {
    if (cfg.weightPieces.empty()) {
        if (cfg.annulus) return reduce(buildAnnulus(cfg)).weight;
        throw InvalidSignPattern("config has no weight pieces");
    }
    std::vector<Piece> pieces;
    pieces.reserve(cfg.weightPieces.size());
    for (const auto& pc : cfg.weightPieces) pieces.push_back(buildPiece(pc));
    Weight w(std::move(pieces));
    if (cfg.autoRotate && cfg.bc == BcTag::Periodic) return rotatedToNormalForm(w);
    return w;
}

Nonlinearity buildKernel(const ProblemConfig& cfg) {
    Nonlinearity g = [&] {
        if (cfg.kernel == "rational_square") return Nonlinearity::rationalSquare();
        if (cfg.kernel == "arctan_cube") return Nonlinearity::arctanCube();
        if (cfg.kernel == "power_blend")
            return Nonlinearity::powerBlend(param(cfg.kernelParams, "alpha", 2.0),
                                            param(cfg.kernelParams, "beta", 0.5));
        if (cfg.kernel == "linear") return Nonlinearity::linear();
        std::vector<double> s, v;
        for (const auto& [a, b] : cfg.table) {
            s.push_back(a);
            v.push_back(b);
        }
        return Nonlinearity::tabulated(std::move(s), std::move(v));
    }();
    auto it = cfg.kernelParams.find("s_ref");
    if (it != cfg.kernelParams.end()) g.setScaleRef(it->second);
    return g;
}

AnnulusProblem buildAnnulus(const ProblemConfig& cfg) {
    if (!cfg.annulus) throw InvalidRadii("config has no [annulus] section");
    const auto& an = *cfg.annulus;
    AnnulusProblem p;
    p.dim = an.dim;
    p.rInner = an.r1;
    p.rOuter = an.r2;
    p.bc = cfg.bc;
    for (const auto& pc : an.pieces) {
        RadialPiece q;
        q.r0 = pc.r0;
        q.r1 = pc.r1;
        if (pc.kind == "const") {
            q.kind = PieceKind::Constant;
            q.value = param(pc.params, "value", 0.0);
        } else {
            q.kind = PieceKind::Sine;
            q.amp = param(pc.params, "amp", 1.0);
            q.omega = param(pc.params, "omega", 1.0);
            q.phase = param(pc.params, "phase", 0.0);
        }
        p.profile.push_back(q);
    }
    return p;
}

Weight rotatedToNormalForm(const Weight& w) {
    const auto& d = w.decompose();
    double sigma1 = d.humps.front().lo;
    if (std::fabs(sigma1 - w.start()) < 1e-12) return w;
    double T = w.period();
    std::vector<Piece> out;
    for (const Piece& p : w.pieces()) {
        if (p.t1 <= sigma1 + 1e-15) {
            Piece q = p;
            q.t0 += T;
            q.t1 += T;
            q.tOffset += T;
            out.push_back(q);
        } else if (p.t0 >= sigma1 - 1e-15) {
            out.push_back(p);
        } else {
            Piece left = p, right = p;
            right.t0 = sigma1;
            left.t1 = sigma1;
            left.t0 += T;
            left.t1 += T;
            left.tOffset += T;
            out.push_back(right);
            out.push_back(left);
        }
    }
    return Weight(std::move(out));
}

} // namespace humps
