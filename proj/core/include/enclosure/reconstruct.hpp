#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "enclosure/cgo.hpp"
#include "enclosure/indicator.hpp"

namespace enclosure {

enum class Classification { Decay, Growth, Inconclusive };
const char* to_string(Classification c);

/// Slope threshold separating growth/decay from flat noise.
inline constexpr double kSlopeThreshold = 0.05;

/// Points used in the slope fit (the smallest-h window).
inline constexpr int kSlopeWindow = 4;

struct SweepResult {
    ConeFrame frame;
    double d = 0.0;
    std::vector<IndicatorSample> samples;  // sorted by decreasing h
    double slope = 0.0;                    // log|E| against 1/h over the window
    Classification classification = Classification::Inconclusive;
    bool underflowFloor = false;
};

/// Runs the indicator over the h-grid at fixed d and classifies the trend.
/// hGrid must be strictly decreasing in (0, 1] with at least 4 entries.
SweepResult h_sweep(const IndicatorContext& ctx, const ConeFrame& frame,
                    const WaveNumbers& waves, const ProbeParams& base, double d,
                    const std::vector<double>& hGrid, double noiseLevel = 0.0,
                    std::uint64_t seed = 0, int frameIndex = 0);

struct BisectionStep {
    double d = 0.0;
    Classification classification = Classification::Inconclusive;
    double slope = 0.0;
};

struct DirectionEstimate {
    ConeFrame frame;
    double sStar = 0.0;
    double dStar = 0.0;  // 1/sStar when detected
    bool detected = false;
    std::string flag;
    std::vector<BisectionStep> bisectionTrace;
    std::vector<Point> touchingCurve;
    /// tau threshold this direction certifies as outside the inclusions
    /// (sStar when detected, the smallest tested level otherwise).
    double carveThreshold = 0.0;
};

/// Bisects on d between a decaying dMin and a growing dMax until the bracket
/// width in 1/d drops below tol; the estimate is the bracket midpoint.
DirectionEstimate estimate_s_star(const IndicatorContext& ctx, const ConeFrame& frame,
                                  const WaveNumbers& waves, const ProbeParams& base, double dMin,
                                  double dMax, double tol, const std::vector<double>& hGrid,
                                  double noiseLevel = 0.0, std::uint64_t seed = 0,
                                  int frameIndex = 0,
                                  std::vector<SweepResult>* sweepLog = nullptr);

struct RateReport {
    double d = 0.0;
    double fittedRate = 0.0;       // prefactor-corrected slope
    double referenceRate = 0.0;    // 2(s*-1/d) or -2(1/d-s_d)
    double relativeDeviation = 0.0;
    bool touching = false;         // 1/d at s*, excluded from rate guarantees
};

/// Compares the prefactor-corrected slope (log h term fitted free) against
/// the theoretical exponential rate for the given s*.
RateReport slope_rate_check(const SweepResult& sweep, double sStarTrue, double epsBand);

struct CarveGrid {
    int nx = 0, ny = 0;
    double x0 = 0.0, y0 = 0.0, dx = 0.0, dy = 0.0;
    std::vector<std::uint8_t> mask;  // 1 = certified outside the inclusions

    Point cell_center(int i, int j) const {
        return {x0 + (i + 0.5) * dx, y0 + (j + 0.5) * dy};
    }
};

struct ReconstructionResult {
    std::vector<DirectionEstimate> directions;
    std::vector<SweepResult> sweeps;  // every sweep, ordered by (direction, d)
    std::vector<std::vector<RateReport>> rateChecks;  // per direction
    CarveGrid carveout;
};

struct ReconstructOptions {
    double dMin = 0.25;
    double dMax = 0.4;
    double bisectionTol = 0.05;
    std::vector<double> hGrid;
    int carveGridN = 400;
    double noiseLevel = 0.0;
    std::uint64_t seed = 0;
    int jobs = 1;
};

/// Per-direction s* estimation (concurrent across directions) plus the
/// aggregated carve-out mask over the domain bounding box.
ReconstructionResult trace_boundary(const IndicatorContext& ctx,
                                    const std::vector<ConeFrame>& directions,
                                    const WaveNumbers& waves, const ProbeParams& base,
                                    const DomainSpec& domain, const ReconstructOptions& opts);

}  // namespace enclosure
