#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "enclosure/geometry.hpp"

namespace enclosure {

/// Fully resolved run configuration; every field carries its default.
struct RunConfig {
    DomainSpec domain{{3.0, 0.0}, 1.0};
    MaterialConfig material;  // lambda0=2, mu0=1, k=1, no inclusions
    std::vector<ConeFrame> cones;

    // probe
    double epsBand = 0.1;
    std::vector<double> hGrid = {0.25, 0.2, 0.16, 0.128, 0.1024, 0.08};
    double dMin = 0.25;
    double dMax = 0.4;
    double bisectionTol = 0.05;
    int quadOrder = 48;
    double angularGuard = 0.0;  // 0 selects pi/(8N) per cone

    // mesh
    double meshSize = 0.05;
    bool refineInclusionBoundary = false;

    // noise
    double noiseLevel = 0.0;
    std::uint64_t seed = 1;

    // output
    std::string outputDir = "out";
    bool plot = false;
    int jobs = 0;  // 0 = hardware concurrency
    int carveGridN = 400;
};

/// Parses and fully validates a config file; throws std::runtime_error with
/// the offending key path on unknown keys or invariant violations.
RunConfig parse_config(const std::string& path);

/// Same, from in-memory text.
RunConfig parse_config_text(const std::string& text);

/// Canonical echo of a resolved config (fixed section/key order, full
/// precision); parse_config_text(emit_config(c)) reproduces c.
std::string emit_config(const RunConfig& config);

/// Re-validates every invariant; returns human-readable violations keyed by path.
std::vector<std::string> validate_config(const RunConfig& config);

}  // namespace enclosure
