#include "enclosure/reconstruct.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstring>
#include <future>
#include <limits>
#include <stdexcept>

namespace enclosure {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t bits_of(double v) {
    std::uint64_t b;
    std::memcpy(&b, &v, sizeof b);
    return b;
}

// Deterministic multiplicative perturbation in [-level, +level].
double noise_factor(double level, std::uint64_t seed, int frameIndex, double d, double h) {
    if (level <= 0.0) return 1.0;
    std::uint64_t s = seed;
    s = splitmix64(s ^ (0x9e37ULL + std::uint64_t(frameIndex)));
    s = splitmix64(s ^ bits_of(d));
    s = splitmix64(s ^ bits_of(h));
    const double u = double(s >> 11) / 9007199254740992.0;  // [0,1)
    return 1.0 + level * (2.0 * u - 1.0);
}

double fit_slope(const std::vector<double>& xi, const std::vector<double>& y) {
    const std::size_t n = xi.size();
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += xi[i];
        my += y[i];
    }
    mx /= double(n);
    my /= double(n);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        num += (xi[i] - mx) * (y[i] - my);
        den += (xi[i] - mx) * (xi[i] - mx);
    }
    return den > 0.0 ? num / den : 0.0;
}

double safe_log(double v) { return std::log(std::max(v, 1e-300)); }

}  // namespace

const char* to_string(Classification c) {
    switch (c) {
        case Classification::Decay: return "decay";
        case Classification::Growth: return "growth";
        default: return "inconclusive";
    }
}

SweepResult h_sweep(const IndicatorContext& ctx, const ConeFrame& frame,
                    const WaveNumbers& waves, const ProbeParams& base, double d,
                    const std::vector<double>& hGrid, double noiseLevel, std::uint64_t seed,
                    int frameIndex) {
    if (hGrid.size() < 4) throw std::invalid_argument("h_sweep: hGrid needs at least 4 entries");
    for (std::size_t i = 0; i < hGrid.size(); ++i) {
        if (!(hGrid[i] > 0.0) || hGrid[i] > 1.0)
            throw std::invalid_argument("h_sweep: hGrid entries must lie in (0,1]");
        if (i > 0 && !(hGrid[i] < hGrid[i - 1]))
            throw std::invalid_argument("h_sweep: hGrid must be strictly decreasing");
    }
    if (!(d > 0.0)) throw std::invalid_argument("h_sweep: d must be positive");

    SweepResult result;
    result.frame = frame;
    result.d = d;
    result.samples.reserve(hGrid.size());

    int floorCount = 0;
    for (double h : hGrid) {
        IndicatorSample s = ctx.evaluate_probe(frame, waves, base, d, h);
        s.absE *= noise_factor(noiseLevel, seed, frameIndex, d, h);
        if (s.absE < 1e2 * std::numeric_limits<double>::epsilon() * s.energyScale ||
            s.energyScale == 0.0)
            ++floorCount;
        result.samples.push_back(s);
    }

    const int n = int(result.samples.size());
    const int window = std::min(n, kSlopeWindow);
    std::vector<double> xi, y;
    for (int i = n - window; i < n; ++i) {
        xi.push_back(1.0 / result.samples[i].h);
        y.push_back(safe_log(result.samples[i].absE));
    }
    result.slope = fit_slope(xi, y);

    if (floorCount >= 2) {
        result.classification = Classification::Decay;
        result.underflowFloor = true;
    } else if (result.slope > kSlopeThreshold) {
        result.classification = Classification::Growth;
    } else if (result.slope < -kSlopeThreshold) {
        result.classification = Classification::Decay;
    } else {
        result.classification = Classification::Inconclusive;
    }
    return result;
}

DirectionEstimate estimate_s_star(const IndicatorContext& ctx, const ConeFrame& frame,
                                  const WaveNumbers& waves, const ProbeParams& base, double dMin,
                                  double dMax, double tol, const std::vector<double>& hGrid,
                                  double noiseLevel, std::uint64_t seed, int frameIndex,
                                  std::vector<SweepResult>* sweepLog) {
    if (!(dMin < dMax)) throw std::invalid_argument("estimate_s_star: need dMin < dMax");
    if (!(tol > 0.0)) throw std::invalid_argument("estimate_s_star: need tol > 0");

    DirectionEstimate est;
    est.frame = frame;

    auto run = [&](double d) {
        SweepResult s = h_sweep(ctx, frame, waves, base, d, hGrid, noiseLevel, seed, frameIndex);
        est.bisectionTrace.push_back({d, s.classification, s.slope});
        if (sweepLog) sweepLog->push_back(s);
        return s.classification;
    };

    const Classification atMin = run(dMin);
    if (atMin == Classification::Growth)
        throw std::runtime_error("s_star outside configured range");
    const Classification atMax = run(dMax);
    if (atMax != Classification::Growth) {
        est.detected = false;
        est.sStar = 0.0;
        est.dStar = 0.0;
        est.carveThreshold = 1.0 / dMax;  // decay observed down to this level
        est.flag = atMax == Classification::Decay ? "no detection in this cone"
                                                  : "inconclusive at dMax";
        return est;
    }

    // Bisection in 1/d: growth side a, decay side b.
    double a = 1.0 / dMax;
    double b = 1.0 / dMin;
    for (int iter = 0; iter < 60 && (b - a) > tol; ++iter) {
        const double mid = 0.5 * (a + b);
        const Classification c = run(1.0 / mid);
        if (c == Classification::Growth)
            a = mid;
        else
            b = mid;
    }

    est.detected = true;
    est.sStar = 0.5 * (a + b);
    est.dStar = 1.0 / est.sStar;
    est.carveThreshold = est.sStar;
    est.flag = "";

    // Touching level curve over the mesh bounding box.
    Rect bbox{{1e300, 1e300}, {-1e300, -1e300}};
    for (const Point& p : ctx.mesh().nodes) {
        bbox.lo.x1 = std::min(bbox.lo.x1, p.x1);
        bbox.lo.x2 = std::min(bbox.lo.x2, p.x2);
        bbox.hi.x1 = std::max(bbox.hi.x1, p.x1);
        bbox.hi.x2 = std::max(bbox.hi.x2, p.x2);
    }
    est.touchingCurve = level_curve(frame, 1.0 / est.sStar, bbox, 128);
    return est;
}

RateReport slope_rate_check(const SweepResult& sweep, double sStarTrue, double epsBand) {
    RateReport report;
    report.d = sweep.d;
    const double invD = 1.0 / sweep.d;

    // Fit log|E| = c0 + m*(1/h) + c*log h with the prefactor exponent free.
    Eigen::Matrix3d ata = Eigen::Matrix3d::Zero();
    Eigen::Vector3d atb = Eigen::Vector3d::Zero();
    for (const IndicatorSample& s : sweep.samples) {
        const Eigen::Vector3d row(1.0, 1.0 / s.h, std::log(s.h));
        ata += row * row.transpose();
        atb += row * safe_log(s.absE);
    }
    const Eigen::Vector3d sol = ata.ldlt().solve(atb);
    report.fittedRate = sol[1];

    if (std::abs(invD - sStarTrue) < 1e-9) {
        report.touching = true;
        report.referenceRate = 0.0;
        report.relativeDeviation = 0.0;
        return report;
    }
    if (invD < sStarTrue) {
        report.referenceRate = 2.0 * (sStarTrue - invD);
    } else {
        const double sd = std::max(1.0 / (sweep.d + epsBand), sStarTrue);
        report.referenceRate = -2.0 * (invD - sd);
    }
    report.relativeDeviation =
        std::abs(report.fittedRate - report.referenceRate) / std::abs(report.referenceRate);
    return report;
}

ReconstructionResult trace_boundary(const IndicatorContext& ctx,
                                    const std::vector<ConeFrame>& directions,
                                    const WaveNumbers& waves, const ProbeParams& base,
                                    const DomainSpec& domain, const ReconstructOptions& opts) {
    ReconstructionResult result;
    if (directions.empty()) return result;

    struct DirectionOutput {
        DirectionEstimate estimate;
        std::vector<SweepResult> sweeps;
    };

    auto run_direction = [&](int idx) {
        DirectionOutput out;
        try {
            out.estimate = estimate_s_star(ctx, directions[idx], waves, base, opts.dMin,
                                           opts.dMax, opts.bisectionTol, opts.hGrid,
                                           opts.noiseLevel, opts.seed, idx, &out.sweeps);
        } catch (const std::runtime_error& e) {
            out.estimate.frame = directions[idx];
            out.estimate.detected = false;
            out.estimate.sStar = 0.0;
            out.estimate.carveThreshold = 0.0;  // certifies nothing
            out.estimate.flag = e.what();
        }
        return out;
    };

    const int jobs = std::max(1, opts.jobs);
    std::vector<DirectionOutput> outputs(directions.size());
    for (std::size_t begin = 0; begin < directions.size(); begin += std::size_t(jobs)) {
        const std::size_t end = std::min(directions.size(), begin + std::size_t(jobs));
        std::vector<std::future<DirectionOutput>> futures;
        for (std::size_t i = begin; i < end; ++i)
            futures.push_back(std::async(std::launch::async, run_direction, int(i)));
        for (std::size_t i = begin; i < end; ++i) outputs[i] = futures[i - begin].get();
    }

    for (auto& out : outputs) {
        result.directions.push_back(out.estimate);
        std::vector<RateReport> checks;
        if (out.estimate.detected) {
            for (const SweepResult& s : out.sweeps)
                checks.push_back(slope_rate_check(s, out.estimate.sStar, base.epsBand));
        }
        result.rateChecks.push_back(std::move(checks));
        for (SweepResult& s : out.sweeps) result.sweeps.push_back(std::move(s));
    }

    // Carve-out mask: cells certified outside the inclusions by some direction.
    CarveGrid grid;
    grid.nx = grid.ny = std::max(2, opts.carveGridN);
    grid.x0 = domain.center.x1 - domain.radius;
    grid.y0 = domain.center.x2 - domain.radius;
    grid.dx = 2.0 * domain.radius / grid.nx;
    grid.dy = 2.0 * domain.radius / grid.ny;
    grid.mask.assign(std::size_t(grid.nx) * grid.ny, 0);
    for (int j = 0; j < grid.ny; ++j) {
        for (int i = 0; i < grid.nx; ++i) {
            const Point p = grid.cell_center(i, j);
            std::uint8_t outside = 0;
            for (const DirectionEstimate& dir : result.directions) {
                if (dir.carveThreshold <= 0.0) continue;
                if (p.x1 == dir.frame.apex.x1 && p.x2 == dir.frame.apex.x2) continue;
                if (!in_cone(dir.frame, p)) continue;
                if (tau(dir.frame, p) > dir.carveThreshold) {
                    outside = 1;
                    break;
                }
            }
            grid.mask[std::size_t(j) * grid.nx + i] = outside;
        }
    }
    result.carveout = grid;
    return result;
}

}  // namespace enclosure
