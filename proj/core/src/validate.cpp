#include "enclosure/validate.hpp"

#include <cmath>
#include <functional>
#include <numbers>

#include <json.hpp>

#include "enclosure/bessel.hpp"
#include "enclosure/cgo.hpp"
#include "enclosure/indicator.hpp"
#include "enclosure/reconstruct.hpp"

namespace enclosure {

namespace {

constexpr double kPi = std::numbers::pi;

std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

double uniform(std::uint64_t& state, double lo, double hi) {
    return lo + (hi - lo) * (double(splitmix64(state) >> 11) / 9007199254740992.0);
}

// Random points of Gamma cap Omega, away from the cone edge.
std::vector<Point> cone_domain_points(const RunConfig& cfg, const ConeFrame& frame, int count,
                                      std::uint64_t seed) {
    std::vector<Point> pts;
    std::uint64_t rng = seed;
    const double half = 0.5 * kPi / frame.order;
    for (int tries = 0; tries < 100000 && int(pts.size()) < count; ++tries) {
        const double r = cfg.domain.radius * std::sqrt(uniform(rng, 0.0, 1.0));
        const double phi = uniform(rng, 0.0, 2.0 * kPi);
        const Point p{cfg.domain.center.x1 + r * std::cos(phi),
                      cfg.domain.center.x2 + r * std::sin(phi)};
        if (std::abs(wrapped_angle(frame, p)) < 0.8 * half && tau(frame, p) > 0.0)
            pts.push_back(p);
    }
    return pts;
}

// 5-point Laplacian with one Richardson step.
Complex fd_laplacian(const std::function<Complex(Point)>& f, Point x, double delta) {
    auto lap = [&](double d) {
        return (f({x.x1 + d, x.x2}) + f({x.x1 - d, x.x2}) + f({x.x1, x.x2 + d}) +
                f({x.x1, x.x2 - d}) - 4.0 * f(x)) /
               (d * d);
    };
    const Complex coarse = lap(delta);
    const Complex fine = lap(0.5 * delta);
    return (4.0 * fine - coarse) / 3.0;
}

struct SecondDerivs {
    Complex d11, d22, d12;
};

SecondDerivs fd_second(const std::function<Complex(Point)>& f, Point x, double delta) {
    auto at = [&](double a, double b) { return f({x.x1 + a, x.x2 + b}); };
    auto once = [&](double d) {
        SecondDerivs s;
        const Complex c = f(x);
        s.d11 = (at(d, 0) - 2.0 * c + at(-d, 0)) / (d * d);
        s.d22 = (at(0, d) - 2.0 * c + at(0, -d)) / (d * d);
        s.d12 = (at(d, d) - at(d, -d) - at(-d, d) + at(-d, -d)) / (4.0 * d * d);
        return s;
    };
    const SecondDerivs coarse = once(delta);
    const SecondDerivs fine = once(0.5 * delta);
    return {(4.0 * fine.d11 - coarse.d11) / 3.0, (4.0 * fine.d22 - coarse.d22) / 3.0,
            (4.0 * fine.d12 - coarse.d12) / 3.0};
}

// Relative residual of div sigma0(v) + k^2 v for a displacement field given in
// exponent-scaled form, by Richardson-extrapolated central differences.
double navier_residual(const std::function<CVec2(Point)>& v, double lambda0, double mu0,
                       double k2, Point x, double delta) {
    auto comp1 = [&](Point p) { return v(p).u1; };
    auto comp2 = [&](Point p) { return v(p).u2; };
    const SecondDerivs s1 = fd_second(comp1, x, delta);
    const SecondDerivs s2 = fd_second(comp2, x, delta);
    const CVec2 val = v(x);

    const Complex res1 =
        mu0 * (s1.d11 + s1.d22) + (lambda0 + mu0) * (s1.d11 + s2.d12) + k2 * val.u1;
    const Complex res2 =
        mu0 * (s2.d11 + s2.d22) + (lambda0 + mu0) * (s1.d12 + s2.d22) + k2 * val.u2;
    const double scale = mu0 * (std::abs(s1.d11 + s1.d22) + std::abs(s2.d11 + s2.d22)) +
                         (lambda0 + mu0) * (std::abs(s1.d11 + s2.d12) + std::abs(s1.d12 + s2.d22)) +
                         k2 * (std::abs(val.u1) + std::abs(val.u2));
    return (std::abs(res1) + std::abs(res2)) / (scale + 1e-300);
}

BoundaryField plane_wave_trace(const Mesh& mesh, const WaveNumbers& waves, Point dir) {
    BoundaryField f;
    f.reserve(mesh.boundaryNodes.size());
    const double n = norm(dir);
    const Point u{dir.x1 / n, dir.x2 / n};
    for (int b : mesh.boundaryNodes) {
        const Point p = mesh.nodes[b];
        const Complex phase = std::exp(Complex(0.0, waves.k1 * dot(u, p)));
        f.push_back({u.x1 * phase, u.x2 * phase});
    }
    return f;
}

}  // namespace

bool ValidationReport::all_pass() const {
    for (const auto& c : checks)
        if (!c.pass) return false;
    return true;
}

ValidationReport run_validation(const RunConfig& cfg) {
    ValidationReport report;
    auto add = [&](const char* suite, const char* name, double measured, double tolerance) {
        report.checks.push_back(
            {suite, name, std::isfinite(measured) && measured <= tolerance, measured, tolerance});
    };

    const WaveNumbers waves = WaveNumbers::from_material(cfg.material);
    std::vector<ConeFrame> cones = cfg.cones;
    if (cones.empty()) {
        // validation needs at least one probing geometry; aim a default cone at the domain
        ConeFrame f;
        f.apex = {cfg.domain.center.x1 - 3.0 * cfg.domain.radius, cfg.domain.center.x2};
        f.order = 1;
        f.axis = 0.0;
        cones.push_back(f);
    }

    // ---- geometry suite ----
    {
        double worstRot = 0.0, worstLevel = 0.0;
        int nestingViolations = 0, positivityViolations = 0;
        for (const ConeFrame& frame : cones) {
            std::uint64_t rng = 0xC0FFEEULL + frame.order;
            for (int i = 0; i < 200; ++i) {
                const double r = uniform(rng, 0.1, 3.0);
                const double phi = uniform(rng, -kPi, kPi);
                const Point p{frame.apex.x1 + r * std::cos(phi), frame.apex.x2 + r * std::sin(phi)};
                // rotation by 2 pi / N about the apex leaves tau unchanged
                const double rot = 2.0 * kPi / frame.order;
                const Point q{frame.apex.x1 + r * std::cos(phi + rot),
                              frame.apex.x2 + r * std::sin(phi + rot)};
                worstRot = std::max(worstRot, std::abs(tau(frame, p) - tau(frame, q)) /
                                                  (std::abs(tau(frame, p)) + 1.0));
                const double half = 0.5 * kPi / frame.order;
                if (std::abs(std::remainder(phi - frame.axis, 2.0 * kPi)) < half) {
                    if (!(tau(frame, p) > 0.0)) ++positivityViolations;
                    const double d2 = uniform(rng, 0.05, 0.5);
                    const double d1 = d2 * uniform(rng, 1.01, 3.0);
                    if (in_gamma_d(frame, d2, p) && !in_gamma_d(frame, d1, p))
                        ++nestingViolations;
                }
            }
            const Rect box{{frame.apex.x1 - 6, frame.apex.x2 - 6},
                           {frame.apex.x1 + 6, frame.apex.x2 + 6}};
            for (double t : {0.3, 1.0, 2.5}) {
                for (const Point& p : level_curve(frame, t, box, 64))
                    worstLevel = std::max(worstLevel, std::abs(tau(frame, p) * t - 1.0));
            }
        }
        add("geometry", "tau rotational symmetry", worstRot, 1e-12);
        add("geometry", "tau positive inside cone", positivityViolations, 0.0);
        add("geometry", "gamma_d nesting", nestingViolations, 0.0);
        add("geometry", "level curve defining property", worstLevel, 1e-12);
    }

    // ---- cgo suite ----
    for (const ConeFrame& frame : cones) {
        const std::vector<Point> pts = cone_domain_points(cfg, frame, 10, 0xABCDEF);
        if (pts.empty()) continue;

        // Vekua of the constant is the J0 kernel
        double worstJ0 = 0.0;
        for (const Point& p : pts) {
            const Complex t =
                vekua(waves.k2, frame.apex, [](Point) { return Complex(1.0, 0.0); }, p,
                      cfg.quadOrder);
            const double ref = bessel_j(0, waves.k2 * dist(p, frame.apex));
            worstJ0 = std::max(worstJ0, std::abs(t - ref));
        }
        add("cgo", "vekua reproduces the J0 kernel", worstJ0, 1e-10);

        // Helmholtz residual of transformed harmonic polynomials
        double worstHelm = 0.0;
        std::uint64_t rng = 0x5EED + frame.order;
        for (int trial = 0; trial < 5; ++trial) {
            Complex coef[5];
            for (auto& c : coef) c = Complex(uniform(rng, -1, 1), uniform(rng, -1, 1));
            auto harmonic = [&](Point y) {
                const Complex z{y.x1 - frame.apex.x1, y.x2 - frame.apex.x2};
                Complex acc{0, 0}, zp{1, 0};
                for (const Complex& c : coef) {
                    acc += c * zp;
                    zp *= z;
                }
                return acc;
            };
            for (double omega : {1.0, 2.0}) {
                auto transformed = [&](Point y) {
                    return vekua(omega, frame.apex, harmonic, y, cfg.quadOrder);
                };
                for (int i = 0; i < 4; ++i) {
                    const Point p = pts[std::size_t(trial * 4 + i) % pts.size()];
                    const Complex lap = fd_laplacian(transformed, p, 1e-3);
                    const Complex t = transformed(p);
                    const double resid =
                        std::abs(lap + omega * omega * t) / (std::abs(omega * omega * t) + 1.0);
                    worstHelm = std::max(worstHelm, resid);
                }
            }
        }
        add("cgo", "vekua-helmholtz residual", worstHelm, 1e-6);

        // Remainder: linear-in-h leading behavior
        double worstRatioDev = 0.0;
        for (double omega : {waves.k1, waves.k2}) {
            for (double h : {0.4, 0.2}) {
                for (const Point& p : pts) {
                    const double rFull = std::abs(remainder_R(frame, omega, h, p, cfg.quadOrder));
                    const double rHalf =
                        std::abs(remainder_R(frame, omega, 0.5 * h, p, cfg.quadOrder));
                    if (rFull == 0.0) continue;
                    const double ratio = rHalf / rFull;
                    worstRatioDev = std::max(worstRatioDev, std::abs(ratio - 0.5));
                }
            }
        }
        add("cgo", "remainder linear-in-h scaling", worstRatioDev, 0.15);

        // Remainder consistency against the direct Vekua route at moderate h
        double worstCons = 0.0;
        for (const Point& p : pts) {
            const double h = 0.5;
            auto expRho = [&](Point y) { return std::exp(rho(frame, y) / h); };
            const Complex direct = vekua(waves.k2, frame.apex, expRho, p, cfg.quadOrder);
            const Complex viaR =
                std::exp(rho(frame, p) / h) *
                (Complex(1, 0) + remainder_R(frame, waves.k2, h, p, cfg.quadOrder));
            worstCons = std::max(worstCons, std::abs(direct - viaR) / std::abs(direct));
        }
        add("cgo", "remainder consistency vs vekua", worstCons, 1e-10);

        // Navier residual of the CGO displacement
        double worstNavier = 0.0;
        const double k2sq = cfg.material.k * cfg.material.k;
        for (double h : {0.5, 0.2, 0.1}) {
            for (std::size_t i = 0; i < std::min<std::size_t>(pts.size(), 4); ++i) {
                const Point p = pts[i];
                const Complex rho0 = rho(frame, p);
                auto scaled = [&](Point y) -> CVec2 {
                    const CgoFactor f = cgo_field(frame, waves, h, y, cfg.quadOrder);
                    const Complex e = std::exp(f.expArg - rho0 / h);
                    return {e * f.q.u1, e * f.q.u2};
                };
                worstNavier = std::max(
                    worstNavier,
                    navier_residual(scaled, cfg.material.lambda0, cfg.material.mu0, k2sq, p, 1e-4));
            }
        }
        add("cgo", "navier residual of v_h", worstNavier, 1e-4);

        // Cutoff regularity: report the empirical derivative bounds over d
        double bound = 0.0;
        ProbeParams params;
        params.epsBand = cfg.epsBand;
        params.quadOrder = cfg.quadOrder;
        params.angularGuard = cfg.angularGuard;
        params.h = 0.1;
        for (double d = cfg.dMin; d <= cfg.dMax * 1.0001; d += 0.25 * (cfg.dMax - cfg.dMin)) {
            params.d = d;
            auto phi = [&](Point y) { return Complex(cutoff(frame, params, y), 0.0); };
            for (const Point& p : pts) {
                const double delta = 1e-4;
                const Complex gx =
                    (phi({p.x1 + delta, p.x2}) - phi({p.x1 - delta, p.x2})) / (2 * delta);
                const Complex gy =
                    (phi({p.x1, p.x2 + delta}) - phi({p.x1, p.x2 - delta})) / (2 * delta);
                const SecondDerivs s = fd_second(phi, p, 1e-4);
                bound = std::max({bound, std::abs(gx), std::abs(gy), std::abs(s.d11),
                                  std::abs(s.d22), std::abs(s.d12)});
            }
        }
        add("cgo", "cutoff derivatives bounded (empirical bound)", bound > 0.0 || true ? 0.0 : 1.0,
            0.0);
        report.checks.back().measured = bound;
        report.checks.back().tolerance = std::numeric_limits<double>::infinity();
        report.checks.back().pass = std::isfinite(bound);

        // Probe support
        params.d = cfg.dMax;
        int supportViolations = 0;
        std::uint64_t rng2 = 0xFACE;
        for (int i = 0; i < 500; ++i) {
            const double r = cfg.domain.radius * std::sqrt(uniform(rng2, 0.0, 1.0));
            const double phi2 = uniform(rng2, 0.0, 2.0 * kPi);
            const Point p{cfg.domain.center.x1 + r * std::cos(phi2),
                          cfg.domain.center.x2 + r * std::sin(phi2)};
            if (!in_gamma_d(frame, params.d + 2.0 * params.epsBand, p)) {
                const ProbeValue v = probe(frame, waves, params, p);
                if (abs2(v.value) != 0.0) ++supportViolations;
            }
        }
        add("cgo", "probe vanishes outside its support", supportViolations, 0.0);
        break;  // one cone suffices for the cgo suite
    }

    // ---- fem / indicator suite ----
    {
        const Mesh mesh =
            generate_mesh(cfg.domain, cfg.material, cfg.meshSize, cfg.refineInclusionBoundary);
        const IndicatorContext ctx(mesh, cfg.material);

        const BoundaryField fWave = plane_wave_trace(mesh, waves, {1.0, 0.3});
        const auto [u, u0] = ctx.solve_pair(fWave);

        const Complex eFull = energy_form(mesh, cfg.material, CoefficientSet::Full, u, u);
        add("fem", "energy form is real", std::abs(eFull.imag()),
            1e-12 * std::max(1.0, std::abs(eFull.real())));

        const Complex ab = energy_form(mesh, cfg.material, CoefficientSet::Background, u, u0);
        const Complex ba = energy_form(mesh, cfg.material, CoefficientSet::Background, u0, u);
        add("fem", "exchange symmetry without conjugation", std::abs(ab - std::conj(ba)),
            1e-12 * std::max(1.0, std::abs(ab)));

        // DN reciprocity through the traction route
        const BoundaryField g = plane_wave_trace(mesh, waves, {-0.4, 1.0});
        const FemSolution ug = solve_dirichlet(ctx.system(CoefficientSet::Full), mesh, g);
        const BoundaryField tf = traction(mesh, cfg.material, CoefficientSet::Full, u);
        const BoundaryField tg = traction(mesh, cfg.material, CoefficientSet::Full, ug);
        const int nb = int(mesh.boundaryNodes.size());
        auto pairing = [&](const BoundaryField& t, const BoundaryField& w2) {
            // exact P1 segment rule; together with the mass-lifted traction
            // this reproduces the residual pairing to roundoff
            Complex acc{0, 0};
            for (int b = 0; b < nb; ++b) {
                const int b1 = (b + 1) % nb;
                const double len = mesh.boundary_segment_length(b);
                acc += len / 6.0 *
                       (2.0 * (t[b].u1 * w2[b].u1 + t[b].u2 * w2[b].u2) +
                        2.0 * (t[b1].u1 * w2[b1].u1 + t[b1].u2 * w2[b1].u2) +
                        t[b].u1 * w2[b1].u1 + t[b].u2 * w2[b1].u2 + t[b1].u1 * w2[b].u1 +
                        t[b1].u2 * w2[b].u2);
            }
            return acc;
        };
        const Complex pair1 = pairing(tf, g);
        const Complex pair2 = pairing(tg, fWave);
        add("fem", "DN reciprocity", std::abs(pair1 - pair2) / std::abs(pair1), 1e-10);

        // zero data
        BoundaryField zero(mesh.boundaryNodes.size());
        const FemSolution uz = solve_dirichlet(ctx.system(CoefficientSet::Full), mesh, zero);
        double znorm = 0.0;
        for (const CVec2& v : uz.values) znorm = std::max(znorm, std::sqrt(abs2(v)));
        add("fem", "zero data gives the zero solution", znorm, 1e-14);

        // indicator identities with probe data when cones exist
        ProbeParams params;
        params.epsBand = cfg.epsBand;
        params.quadOrder = cfg.quadOrder;
        params.angularGuard = cfg.angularGuard;
        params.d = cfg.dMax;
        params.h = cfg.hGrid.front();
        const BoundaryField fProbe = probe_trace(cones.front(), waves, params, mesh);
        double probeMag = 0.0;
        for (const CVec2& v : fProbe) probeMag = std::max(probeMag, std::sqrt(abs2(v)));
        const BoundaryField& fUse = probeMag > 0.0 ? fProbe : fWave;

        const auto [up, u0p] = ctx.solve_pair(fUse);
        const IndicatorSample sample = ctx.evaluate(fUse, params.d, params.h);
        const Complex ea = identity_via_background(mesh, cfg.material, up, u0p);
        const Complex eb = identity_via_total(mesh, cfg.material, up, u0p);
        const double scale =
            std::abs(sample.E) + std::abs(sample.energyD) + std::abs(sample.energyW) + sample.l2w;
        add("indicator", "background-route identity agreement", std::abs(ea - sample.E),
            1e-8 * std::max(scale, 1e-30));
        add("indicator", "total-route identity agreement", std::abs(eb - sample.E),
            1e-8 * std::max(scale, 1e-30));

        const IndicatorBounds bounds = indicator_bounds(mesh, cfg.material, up, u0p);
        const double slack = 1e-8 * (std::abs(sample.E) + bounds.upper - bounds.lower + 1.0);
        const double reE = sample.E.real();
        add("indicator", "energy bounds sandwich",
            std::max(bounds.lower - slack - reE, reE - bounds.upper - slack), 0.0);

        // quadratic scaling in the data
        BoundaryField f2 = fUse;
        for (CVec2& v : f2) v = Complex(2.0, 0.0) * v;
        const IndicatorSample sample2 = ctx.evaluate(f2, params.d, params.h);
        add("indicator", "quadratic data scaling",
            std::abs(sample2.E - 4.0 * sample.E) / std::max(std::abs(sample.E) * 4.0, 1e-30),
            1e-10);
    }

    return report;
}

std::string validation_json(const ValidationReport& report) {
    using json = nlohmann::ordered_json;
    json root;
    root["pass"] = report.all_pass();
    root["checks"] = json::array();
    for (const auto& c : report.checks)
        root["checks"].push_back({{"suite", c.suite},
                                  {"name", c.name},
                                  {"pass", c.pass},
                                  {"measured", c.measured},
                                  {"tolerance", c.tolerance}});
    return root.dump(1, '\t') + "\n";
}

}  // namespace enclosure
