#include "enclosure/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace enclosure {

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::vector<double> parse_numbers(const std::string& value, const std::string& path) {
    std::vector<double> out;
    std::istringstream iss(value);
    std::string tok;
    while (iss >> tok) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(tok, &used));
            if (used != tok.size()) throw std::invalid_argument("trailing");
        } catch (...) {
            throw std::runtime_error(path + ": cannot parse number '" + tok + "'");
        }
    }
    return out;
}

double parse_one(const std::string& value, const std::string& path) {
    const auto v = parse_numbers(value, path);
    if (v.size() != 1) throw std::runtime_error(path + ": expected a single number");
    return v[0];
}

Point parse_point(const std::string& value, const std::string& path) {
    const auto v = parse_numbers(value, path);
    if (v.size() != 2) throw std::runtime_error(path + ": expected two numbers");
    return {v[0], v[1]};
}

bool parse_bool(const std::string& value, const std::string& path) {
    if (value == "true" || value == "1") return true;
    if (value == "false" || value == "0") return false;
    throw std::runtime_error(path + ": expected true or false");
}

struct RawSection {
    std::string name;
    std::vector<std::pair<std::string, std::string>> entries;
};

std::vector<RawSection> tokenize(const std::string& text) {
    std::vector<RawSection> sections;
    std::istringstream iss(text);
    std::string line;
    int lineno = 0;
    while (std::getline(iss, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw std::runtime_error("line " + std::to_string(lineno) +
                                         ": malformed section header");
            sections.push_back({trim(line.substr(1, line.size() - 2)), {}});
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("line " + std::to_string(lineno) + ": expected key = value");
        if (sections.empty())
            throw std::runtime_error("line " + std::to_string(lineno) +
                                     ": key outside any section");
        sections.back().entries.emplace_back(trim(line.substr(0, eq)),
                                             trim(line.substr(eq + 1)));
    }
    return sections;
}

InclusionShape parse_inclusion(const RawSection& sec, const std::string& path) {
    std::map<std::string, std::string> kv;
    for (const auto& [k, v] : sec.entries) {
        if (!kv.emplace(k, v).second)
            throw std::runtime_error(path + "." + k + ": duplicate key");
    }
    auto take = [&](const char* key) -> std::string {
        auto it = kv.find(key);
        if (it == kv.end()) throw std::runtime_error(path + "." + key + ": missing key");
        const std::string v = it->second;
        kv.erase(it);
        return v;
    };
    auto take_opt = [&](const char* key) -> std::string {
        auto it = kv.find(key);
        if (it == kv.end()) return "";
        const std::string v = it->second;
        kv.erase(it);
        return v;
    };

    InclusionShape inc;
    const std::string kind = take("kind");
    if (kind == "disc") {
        DiscShape s;
        s.center = parse_point(take("center"), path + ".center");
        s.radius = parse_one(take("radius"), path + ".radius");
        if (!(s.radius > 0.0)) throw std::runtime_error(path + ".radius: must be positive");
        inc.shape = s;
    } else if (kind == "ellipse") {
        EllipseShape s;
        s.center = parse_point(take("center"), path + ".center");
        const auto ax = parse_numbers(take("semiaxes"), path + ".semiaxes");
        if (ax.size() != 2 || !(ax[0] > 0.0) || !(ax[1] > 0.0))
            throw std::runtime_error(path + ".semiaxes: expected two positive numbers");
        s.semiA = ax[0];
        s.semiB = ax[1];
        const std::string angle = take_opt("angle");
        s.angle = angle.empty() ? 0.0 : parse_one(angle, path + ".angle");
        inc.shape = s;
    } else if (kind == "polygon") {
        PolygonShape s;
        const auto v = parse_numbers(take("vertices"), path + ".vertices");
        if (v.size() < 6 || v.size() % 2 != 0)
            throw std::runtime_error(path + ".vertices: expected at least 3 coordinate pairs");
        for (std::size_t i = 0; i + 1 < v.size(); i += 2) s.vertices.push_back({v[i], v[i + 1]});
        inc.shape = s;
    } else if (kind == "star") {
        RadialStarShape s;
        s.center = parse_point(take("center"), path + ".center");
        s.base = parse_one(take("base"), path + ".base");
        if (!(s.base > 0.0)) throw std::runtime_error(path + ".base: must be positive");
        const std::string c = take_opt("cos");
        const std::string si = take_opt("sin");
        if (!c.empty()) s.cosCoef = parse_numbers(c, path + ".cos");
        if (!si.empty()) s.sinCoef = parse_numbers(si, path + ".sin");
        inc.shape = s;
    } else {
        throw std::runtime_error(path + ".kind: unknown shape kind '" + kind + "'");
    }
    inc.lambdaD = parse_one(take("lambdaD"), path + ".lambdaD");
    inc.muD = parse_one(take("muD"), path + ".muD");
    if (!kv.empty()) throw std::runtime_error(path + "." + kv.begin()->first + ": unknown key");
    return inc;
}

}  // namespace

RunConfig parse_config_text(const std::string& text) {
    RunConfig cfg;
    cfg.material.inclusions.clear();
    cfg.cones.clear();
    bool hGridSet = false;

    for (const RawSection& sec : tokenize(text)) {
        if (sec.name == "inclusion") {
            const std::string path = "inclusion[" + std::to_string(cfg.material.inclusions.size()) + "]";
            cfg.material.inclusions.push_back(parse_inclusion(sec, path));
            continue;
        }
        if (sec.name == "cone") {
            const std::string path = "cone[" + std::to_string(cfg.cones.size()) + "]";
            ConeFrame frame;
            bool haveN = false, haveTheta = false, haveApex = false;
            for (const auto& [k, v] : sec.entries) {
                if (k == "N") {
                    const double n = parse_one(v, path + ".N");
                    if (n < 1.0 || n != std::floor(n))
                        throw std::runtime_error(path + ".N: must be a positive integer");
                    frame.order = int(n);
                    haveN = true;
                } else if (k == "theta0") {
                    frame.axis = parse_one(v, path + ".theta0");
                    haveTheta = true;
                } else if (k == "apex") {
                    frame.apex = parse_point(v, path + ".apex");
                    haveApex = true;
                } else {
                    throw std::runtime_error(path + "." + k + ": unknown key");
                }
            }
            if (!haveN || !haveTheta || !haveApex)
                throw std::runtime_error(path + ": requires N, theta0 and apex");
            cfg.cones.push_back(frame);
            continue;
        }

        for (const auto& [k, v] : sec.entries) {
            const std::string path = sec.name + "." + k;
            if (sec.name == "domain") {
                if (k == "center") cfg.domain.center = parse_point(v, path);
                else if (k == "radius") cfg.domain.radius = parse_one(v, path);
                else throw std::runtime_error(path + ": unknown key");
            } else if (sec.name == "background") {
                if (k == "lambda0") cfg.material.lambda0 = parse_one(v, path);
                else if (k == "mu0") cfg.material.mu0 = parse_one(v, path);
                else if (k == "k") cfg.material.k = parse_one(v, path);
                else throw std::runtime_error(path + ": unknown key");
            } else if (sec.name == "probe") {
                if (k == "epsBand") cfg.epsBand = parse_one(v, path);
                else if (k == "hGrid") {
                    cfg.hGrid = parse_numbers(v, path);
                    hGridSet = true;
                } else if (k == "dMin") cfg.dMin = parse_one(v, path);
                else if (k == "dMax") cfg.dMax = parse_one(v, path);
                else if (k == "bisectionTol") cfg.bisectionTol = parse_one(v, path);
                else if (k == "quadOrder") cfg.quadOrder = int(parse_one(v, path));
                else if (k == "angularGuard") cfg.angularGuard = parse_one(v, path);
                else throw std::runtime_error(path + ": unknown key");
            } else if (sec.name == "mesh") {
                if (k == "meshSize") cfg.meshSize = parse_one(v, path);
                else if (k == "refineInclusionBoundary") cfg.refineInclusionBoundary = parse_bool(v, path);
                else throw std::runtime_error(path + ": unknown key");
            } else if (sec.name == "noise") {
                if (k == "level") cfg.noiseLevel = parse_one(v, path);
                else if (k == "seed") cfg.seed = std::uint64_t(parse_one(v, path));
                else throw std::runtime_error(path + ": unknown key");
            } else if (sec.name == "output") {
                if (k == "directory") cfg.outputDir = v;
                else if (k == "plot") cfg.plot = parse_bool(v, path);
                else if (k == "jobs") cfg.jobs = int(parse_one(v, path));
                else if (k == "carveGrid") cfg.carveGridN = int(parse_one(v, path));
                else throw std::runtime_error(path + ": unknown key");
            } else {
                throw std::runtime_error(sec.name + ": unknown section");
            }
        }
    }
    (void)hGridSet;

    const auto problems = validate_config(cfg);
    if (!problems.empty()) {
        std::string msg = "invalid configuration:";
        for (const auto& p : problems) msg += "\n  " + p;
        throw std::runtime_error(msg);
    }
    return cfg;
}

RunConfig parse_config(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open config file: " + path);
    std::ostringstream ss;
    ss << is.rdbuf();
    return parse_config_text(ss.str());
}

std::vector<std::string> validate_config(const RunConfig& cfg) {
    std::vector<std::string> out;
    if (!(cfg.domain.radius > 0.0)) out.push_back("domain.radius: must be positive");

    for (const std::string& v : cfg.material.violations()) out.push_back("background/" + v);

    // Inclusions strictly inside the domain and pairwise disjoint (sampled).
    for (std::size_t i = 0; i < cfg.material.inclusions.size(); ++i) {
        const auto& inc = cfg.material.inclusions[i];
        const std::string path = "inclusion[" + std::to_string(i) + "]";
        double maxd = 0.0;
        for (int t = 0; t < 512; ++t)
            maxd = std::max(maxd, dist(inc.boundary_point(t / 512.0), cfg.domain.center));
        if (!(maxd < cfg.domain.radius))
            out.push_back(path + ": closure must lie strictly inside the domain");
        for (std::size_t j = i + 1; j < cfg.material.inclusions.size(); ++j) {
            const auto& other = cfg.material.inclusions[j];
            bool overlap = false;
            for (int t = 0; t < 512 && !overlap; ++t) {
                if (other.contains(inc.boundary_point(t / 512.0))) overlap = true;
                if (inc.contains(other.boundary_point(t / 512.0))) overlap = true;
            }
            if (overlap)
                out.push_back(path + ": overlaps inclusion[" + std::to_string(j) + "]");
        }
    }

    for (std::size_t c = 0; c < cfg.cones.size(); ++c) {
        const std::string path = "cone[" + std::to_string(c) + "]";
        if (cfg.cones[c].order < 1) out.push_back(path + ".N: must be a positive integer");
        if (!(dist(cfg.cones[c].apex, cfg.domain.center) > cfg.domain.radius))
            out.push_back(path + ".apex: apex inside the closed domain violates the placement assumption");
    }

    if (cfg.hGrid.size() < 4) out.push_back("probe.hGrid: needs at least 4 entries");
    for (std::size_t i = 0; i < cfg.hGrid.size(); ++i) {
        if (!(cfg.hGrid[i] > 0.0) || cfg.hGrid[i] > 1.0) {
            out.push_back("probe.hGrid: entries must lie in (0,1]");
            break;
        }
        if (i > 0 && !(cfg.hGrid[i] < cfg.hGrid[i - 1])) {
            out.push_back("probe.hGrid: must be strictly decreasing");
            break;
        }
    }
    if (!(cfg.epsBand > 0.0)) out.push_back("probe.epsBand: must be positive");
    if (!(cfg.dMin > 0.0)) out.push_back("probe.dMin: must be positive");
    if (!(cfg.dMin < cfg.dMax)) out.push_back("probe.dMax: must exceed dMin");
    if (!(cfg.bisectionTol > 0.0)) out.push_back("probe.bisectionTol: must be positive");
    if (cfg.quadOrder < 16) out.push_back("probe.quadOrder: must be at least 16");
    if (cfg.angularGuard < 0.0) out.push_back("probe.angularGuard: must be nonnegative");
    for (const ConeFrame& cone : cfg.cones) {
        if (cfg.angularGuard > 0.0 && cfg.angularGuard >= 0.5 * std::numbers::pi / cone.order)
            out.push_back("probe.angularGuard: must stay below the cone half-angle");
    }
    if (!(cfg.meshSize > 0.0)) out.push_back("mesh.meshSize: must be positive");
    if (cfg.noiseLevel < 0.0) out.push_back("noise.level: must be nonnegative");
    if (cfg.jobs < 0) out.push_back("output.jobs: must be nonnegative");
    if (cfg.carveGridN < 2) out.push_back("output.carveGrid: must be at least 2");
    if (cfg.outputDir.empty()) out.push_back("output.directory: must not be empty");
    return out;
}

std::string emit_config(const RunConfig& cfg) {
    std::ostringstream os;
    os << "# resolved enclosure2d configuration\n";
    os << "[domain]\n";
    os << "center = " << fmt(cfg.domain.center.x1) << " " << fmt(cfg.domain.center.x2) << "\n";
    os << "radius = " << fmt(cfg.domain.radius) << "\n\n";

    os << "[background]\n";
    os << "lambda0 = " << fmt(cfg.material.lambda0) << "\n";
    os << "mu0 = " << fmt(cfg.material.mu0) << "\n";
    os << "k = " << fmt(cfg.material.k) << "\n";

    for (const auto& inc : cfg.material.inclusions) {
        os << "\n[inclusion]\n";
        if (const auto* d = std::get_if<DiscShape>(&inc.shape)) {
            os << "kind = disc\n";
            os << "center = " << fmt(d->center.x1) << " " << fmt(d->center.x2) << "\n";
            os << "radius = " << fmt(d->radius) << "\n";
        } else if (const auto* e = std::get_if<EllipseShape>(&inc.shape)) {
            os << "kind = ellipse\n";
            os << "center = " << fmt(e->center.x1) << " " << fmt(e->center.x2) << "\n";
            os << "semiaxes = " << fmt(e->semiA) << " " << fmt(e->semiB) << "\n";
            os << "angle = " << fmt(e->angle) << "\n";
        } else if (const auto* p = std::get_if<PolygonShape>(&inc.shape)) {
            os << "kind = polygon\n";
            os << "vertices =";
            for (const Point& v : p->vertices) os << " " << fmt(v.x1) << " " << fmt(v.x2);
            os << "\n";
        } else if (const auto* st = std::get_if<RadialStarShape>(&inc.shape)) {
            os << "kind = star\n";
            os << "center = " << fmt(st->center.x1) << " " << fmt(st->center.x2) << "\n";
            os << "base = " << fmt(st->base) << "\n";
            if (!st->cosCoef.empty()) {
                os << "cos =";
                for (double v : st->cosCoef) os << " " << fmt(v);
                os << "\n";
            }
            if (!st->sinCoef.empty()) {
                os << "sin =";
                for (double v : st->sinCoef) os << " " << fmt(v);
                os << "\n";
            }
        }
        os << "lambdaD = " << fmt(inc.lambdaD) << "\n";
        os << "muD = " << fmt(inc.muD) << "\n";
    }

    for (const ConeFrame& cone : cfg.cones) {
        os << "\n[cone]\n";
        os << "N = " << cone.order << "\n";
        os << "theta0 = " << fmt(cone.axis) << "\n";
        os << "apex = " << fmt(cone.apex.x1) << " " << fmt(cone.apex.x2) << "\n";
    }

    os << "\n[probe]\n";
    os << "epsBand = " << fmt(cfg.epsBand) << "\n";
    os << "hGrid =";
    for (double h : cfg.hGrid) os << " " << fmt(h);
    os << "\n";
    os << "dMin = " << fmt(cfg.dMin) << "\n";
    os << "dMax = " << fmt(cfg.dMax) << "\n";
    os << "bisectionTol = " << fmt(cfg.bisectionTol) << "\n";
    os << "quadOrder = " << cfg.quadOrder << "\n";
    os << "angularGuard = " << fmt(cfg.angularGuard) << "\n";

    os << "\n[mesh]\n";
    os << "meshSize = " << fmt(cfg.meshSize) << "\n";
    os << "refineInclusionBoundary = " << (cfg.refineInclusionBoundary ? "true" : "false") << "\n";

    os << "\n[noise]\n";
    os << "level = " << fmt(cfg.noiseLevel) << "\n";
    os << "seed = " << cfg.seed << "\n";

    os << "\n[output]\n";
    os << "directory = " << cfg.outputDir << "\n";
    os << "plot = " << (cfg.plot ? "true" : "false") << "\n";
    os << "jobs = " << cfg.jobs << "\n";
    os << "carveGrid = " << cfg.carveGridN << "\n";
    return os.str();
}

}  // namespace enclosure
