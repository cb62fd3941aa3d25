#include <doctest.h>

#include <cmath>
#include <numbers>

#include "enclosure/bessel.hpp"
#include "enclosure/cgo.hpp"
#include "enclosure/mesh.hpp"
#include "support/oracles.hpp"

using namespace enclosure;
constexpr double kPi = std::numbers::pi;

namespace {

MaterialConfig reference_material() {
    MaterialConfig mat;
    mat.lambda0 = 2.0;
    mat.mu0 = 1.0;
    mat.k = 1.0;
    return mat;
}

const std::vector<Point>& sample_points() {
    static const std::vector<Point> pts = {{2.5, 0.3},  {3.2, -0.4}, {3.8, 0.1},  {2.2, -0.2},
                                           {3.0, 0.05}, {2.7, 0.55}, {3.45, 0.35}, {2.9, -0.6},
                                           {3.6, -0.25}, {2.35, 0.15}};
    return pts;
}

}  // namespace

TEST_SUITE_BEGIN("cgo");

TEST_CASE("wavenumbers from the background material") {
    const WaveNumbers w = WaveNumbers::from_material(reference_material());
    CHECK(w.k1 == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(w.k2 == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(w.k1 <= w.k2);
}

TEST_CASE("vekua: apex, constant, and omega = 0") {
    const Point apex{0.4, -0.2};
    auto u = [](Point p) { return Complex(p.x1 * p.x1 - p.x2 * p.x2, 2.0 * p.x1 * p.x2); };

    CHECK(vekua(1.3, apex, u, apex) == u(apex));
    CHECK(vekua(0.0, apex, u, {2.0, 1.0}) == u({2.0, 1.0}));

    for (const Point& x : sample_points()) {
        const Complex t = vekua(1.7, apex, [](Point) { return Complex(1.0, 0.0); }, x);
        CHECK(std::abs(t - bessel_j(0, 1.7 * dist(x, apex))) <= 1e-12);
    }
}

TEST_CASE("vekua maps harmonic functions to Helmholtz solutions") {
    const Point apex{0.0, 0.0};
    std::uint64_t rng = 314159;
    for (int trial = 0; trial < 5; ++trial) {
        Complex coef[5];
        for (auto& c : coef) c = Complex(oracle::uniform(rng, -1, 1), oracle::uniform(rng, -1, 1));
        auto harmonic = [&](Point y) {
            const Complex z{y.x1 - apex.x1, y.x2 - apex.x2};
            Complex acc{0, 0}, zp{1, 0};
            for (const Complex& c : coef) {
                acc += c * zp;
                zp *= z;
            }
            return acc;
        };
        for (double omega : {1.0, 2.0}) {
            auto transformed = [&](Point y) { return vekua(omega, apex, harmonic, y); };
            for (int i = 0; i < 4; ++i) {
                const Point p = sample_points()[std::size_t(trial * 4 + i) % 10];
                const Complex lap = oracle::fd_laplacian(transformed, p, 1e-3);
                const Complex t = transformed(p);
                CHECK(std::abs(lap + omega * omega * t) <=
                      1e-6 * (std::abs(omega * omega * t) + 1.0));
            }
        }
    }
}

TEST_CASE("remainder: omega = 0 vanishes identically") {
    const ConeFrame frame{{0, 0}, 1, 0.0};
    const Point x{2.5, 0.3};
    CHECK(remainder_R(frame, 0.0, 0.3, x) == Complex(0, 0));
    const auto g = remainder_R_grad(frame, 0.0, 0.3, x);
    CHECK(std::abs(g[0]) == 0.0);
    CHECK(std::abs(g[1]) == 0.0);
    const auto hmat = remainder_R_hess(frame, 0.0, 0.3, x);
    CHECK(std::abs(hmat[0]) + std::abs(hmat[1]) + std::abs(hmat[2]) == 0.0);
}

TEST_CASE("remainder is rejected outside the cone") {
    const ConeFrame frame{{0, 0}, 2, 0.0};
    CHECK_THROWS_WITH_AS(remainder_R(frame, 1.0, 0.3, {0.0, 2.0}),
                         "remainder defined only in the cone", std::domain_error);
}

TEST_CASE("remainder consistency against the direct Vekua route") {
    const WaveNumbers waves = WaveNumbers::from_material(reference_material());
    const double h = 0.5;
    for (int order : {1, 2}) {
        const ConeFrame frame{{0, 0}, order, 0.0};
        for (const Point& x : sample_points()) {
            auto expRho = [&](Point y) { return std::exp(rho(frame, y) / h); };
            for (double omega : {waves.k1, waves.k2}) {
                const Complex direct = vekua(omega, frame.apex, expRho, x, 96);
                const Complex viaR = std::exp(rho(frame, x) / h) *
                                     (Complex(1, 0) + remainder_R(frame, omega, h, x));
                CHECK(std::abs(direct - viaR) <= 1e-10 * std::abs(direct));
            }
        }
    }
}

TEST_CASE("remainder scales linearly in h") {
    const WaveNumbers waves = WaveNumbers::from_material(reference_material());
    const ConeFrame frame{{0, 0}, 1, 0.0};
    for (double omega : {waves.k1, waves.k2}) {
        for (double h : {0.4, 0.2, 0.1}) {
            for (const Point& x : sample_points()) {
                const double full = std::abs(remainder_R(frame, omega, h, x));
                const double half = std::abs(remainder_R(frame, omega, 0.5 * h, x));
                REQUIRE(full > 0.0);
                const double ratio = half / full;
                CHECK(ratio >= 0.35);
                CHECK(ratio <= 0.65);
            }
        }
    }
}

TEST_CASE("remainder gradient matches finite differences") {
    const WaveNumbers waves = WaveNumbers::from_material(reference_material());
    for (int order : {1, 2}) {
        const ConeFrame frame{{0, 0}, order, 0.0};
        for (double h : {0.5, 0.25}) {
            for (std::size_t i = 0; i < 5; ++i) {
                const Point x = sample_points()[i];
                auto r = [&](Point y) { return remainder_R(frame, waves.k2, h, y); };
                const auto fd = oracle::fd_gradient(r, x, 1e-5);
                const auto an = remainder_R_grad(frame, waves.k2, h, x);
                const double scale = std::abs(an[0]) + std::abs(an[1]);
                CHECK(std::abs(fd[0] - an[0]) <= 1e-6 * scale);
                CHECK(std::abs(fd[1] - an[1]) <= 1e-6 * scale);
            }
        }
    }
}

TEST_CASE("remainder hessian matches finite differences") {
    const WaveNumbers waves = WaveNumbers::from_material(reference_material());
    for (int order : {1, 2}) {
        const ConeFrame frame{{0, 0}, order, 0.0};
        const double h = 0.4;
        for (std::size_t i = 0; i < 4; ++i) {
            const Point x = sample_points()[i];
            auto r = [&](Point y) { return remainder_R(frame, waves.k1, h, y); };
            // Richardson step chosen against the FD roundoff floor: the
            // hessian entries here are O(1e-3), so 1e-4 steps would bottom
            // out near the tolerance.
            const auto fd = oracle::fd_second(r, x, 2e-3, true);
            const auto an = remainder_R_hess(frame, waves.k1, h, x);
            const double scale = std::abs(an[0]) + std::abs(an[1]) + std::abs(an[2]) + 1e-12;
            CHECK(std::abs(fd.d11 - an[0]) <= 1e-6 * scale);
            CHECK(std::abs(fd.d12 - an[1]) <= 1e-6 * scale);
            CHECK(std::abs(fd.d22 - an[2]) <= 1e-6 * scale);
        }
    }
}

TEST_CASE("cgo leading order: h Q approaches the phase gradient combination") {
    const WaveNumbers waves = WaveNumbers::from_material(reference_material());
    for (int order : {1, 2}) {
        const ConeFrame frame{{0, 0}, order, 0.0};
        const Point x{2.8, 0.25};
        const Complex rp = rho_prime(frame, x);
        const Complex target1 = rp * Complex(1.0, -1.0);  // d1 rho - d2 rho
        const Complex target2 = rp * Complex(1.0, 1.0);   // d2 rho + d1 rho (as a pair with i)
        double prev1 = 1e9, prev2 = 1e9;
        for (double h : {0.2, 0.1, 0.05}) {
            const CgoFactor f = cgo_field(frame, waves, h, x);
            const double dev1 = std::abs(h * f.q.u1 / target1 - 1.0);
            const double dev2 = std::abs(h * f.q.u2 / target2 - 1.0);
            CHECK(dev1 < prev1);
            CHECK(dev2 < prev2);
            prev1 = dev1;
            prev2 = dev2;
        }
        CHECK(prev1 <= 0.05);
        CHECK(prev2 <= 0.05);
    }
}

TEST_CASE("cgo leading order for N=1: ((1-i)/h, (1+i)/h)") {
    const WaveNumbers waves = WaveNumbers::from_material(reference_material());
    const ConeFrame frame{{0, 0}, 1, 0.0};
    const Point x{3.0, 0.1};
    const double h = 0.05;
    const CgoFactor f = cgo_field(frame, waves, h, x);
    CHECK(std::abs(f.q.u1 / (Complex(1, -1) / h) - 1.0) <= 0.05);
    CHECK(std::abs(f.q.u2 / (Complex(1, 1) / h) - 1.0) <= 0.05);
}

TEST_CASE("cgo displacement satisfies the Navier equation") {
    const MaterialConfig mat = reference_material();
    const WaveNumbers waves = WaveNumbers::from_material(mat);
    const double k2 = mat.k * mat.k;
    for (int order : {1, 2}) {
        const ConeFrame frame{{0, 0}, order, 0.0};
        for (double h : {0.5, 0.2, 0.1}) {
            for (std::size_t i = 0; i < 4; ++i) {
                const Point x = sample_points()[i];
                const Complex rho0 = rho(frame, x);
                auto scaled = [&](Point y) -> CVec2 {
                    const CgoFactor f = cgo_field(frame, waves, h, y);
                    const Complex e = std::exp(f.expArg - rho0 / h);
                    return {e * f.q.u1, e * f.q.u2};
                };
                const double resid =
                    oracle::navier_residual_fd(scaled, mat.lambda0, mat.mu0, k2, x, 1e-4);
                CHECK(resid <= 1e-4);
            }
        }
    }
}

TEST_CASE("cgo field equals grad(phi) + perp-grad(psi) by finite differences") {
    const WaveNumbers waves = WaveNumbers::from_material(reference_material());
    const ConeFrame frame{{0, 0}, 1, 0.0};
    const double h = 0.5;
    for (std::size_t i = 0; i < 5; ++i) {
        const Point x = sample_points()[i];
        const Complex rho0 = rho(frame, x);
        auto phiScaled = [&](Point y) {
            return std::exp((rho(frame, y) - rho0) / h) *
                   (Complex(1, 0) + remainder_R(frame, waves.k1, h, y));
        };
        auto psiScaled = [&](Point y) {
            return std::exp((rho(frame, y) - rho0) / h) *
                   (Complex(1, 0) + remainder_R(frame, waves.k2, h, y));
        };
        const auto gphi = oracle::fd_gradient(phiScaled, x, 1e-5);
        const auto gpsi = oracle::fd_gradient(psiScaled, x, 1e-5);
        const Complex v1 = gphi[0] - gpsi[1];
        const Complex v2 = gphi[1] + gpsi[0];
        const CgoFactor f = cgo_field(frame, waves, h, x);
        const double scale = std::abs(f.q.u1) + std::abs(f.q.u2);
        CHECK(std::abs(v1 - f.q.u1) <= 1e-6 * scale);
        CHECK(std::abs(v2 - f.q.u2) <= 1e-6 * scale);
    }
}

TEST_CASE("cutoff: plateau, support, and midpoint") {
    const ConeFrame frame{{0, 0}, 1, 0.0};
    ProbeParams params;
    params.d = 0.3;
    params.epsBand = 0.1;

    // tau >= 1/(d+eps) = 2.5 well inside the sector
    CHECK(cutoff(frame, params, {3.0, 0.0}) == 1.0);
    CHECK(cutoff(frame, params, {2.6, 0.2}) == 1.0);

    // outside Gamma_{d+2eps}: tau < 2.0
    CHECK(cutoff(frame, params, {1.9, 0.0}) == 0.0);
    CHECK(cutoff(frame, params, {-1.0, 0.3}) == 0.0);

    const double mid = 0.5 * (1.0 / (params.d + 2.0 * params.epsBand) +
                              1.0 / (params.d + params.epsBand));
    CHECK(cutoff(frame, params, {mid, 0.0}) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("cutoff angular guard kills the other branches") {
    const ConeFrame frame{{0, 0}, 2, 0.0};  // tau > 0 also in the opposite cone
    ProbeParams params;
    params.d = 0.3;
    params.epsBand = 0.1;
    CHECK(tau(frame, {-3.0, 0.0}) > 1.0 / params.d);
    CHECK(cutoff(frame, params, {-3.0, 0.0}) == 0.0);
}

TEST_CASE("probe: support, unit exponent, and magnitude ratios") {
    const WaveNumbers waves = WaveNumbers::from_material(reference_material());
    const ConeFrame frame{{0, 0}, 1, 0.0};
    ProbeParams params;
    params.d = 0.3;
    params.h = 0.15;
    params.epsBand = 0.1;

    const ProbeValue zero = probe(frame, waves, params, {1.9, 0.0});
    CHECK(zero.value.u1 == Complex(0, 0));
    CHECK(zero.value.u2 == Complex(0, 0));

    // at tau = 1/d on the axis the exponential is exactly 1
    const Point xUnit{1.0 / params.d, 0.0};
    const ProbeValue pv = probe(frame, waves, params, xUnit);
    const CgoFactor f = cgo_field(frame, waves, params.h, xUnit);
    CHECK(std::sqrt(abs2(pv.value)) ==
          doctest::Approx(std::sqrt(abs2(f.q))).epsilon(1e-12));
    CHECK(pv.scaledMagnitudeExponent == doctest::Approx(0.0).epsilon(1e-12));

    const Point xa{3.6, 0.0}, xb{3.1, 0.0};
    const ProbeValue pa = probe(frame, waves, params, xa);
    const ProbeValue pb = probe(frame, waves, params, xb);
    const CgoFactor fa = cgo_field(frame, waves, params.h, xa);
    const CgoFactor fb = cgo_field(frame, waves, params.h, xb);
    const double lhs = std::sqrt(abs2(pa.value) / abs2(pb.value));
    const double rhs = std::exp((tau(frame, xa) - tau(frame, xb)) / params.h) *
                       std::sqrt(abs2(fa.q) / abs2(fb.q));
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-8));
}

TEST_CASE("probe gradient matches finite differences of the probe") {
    const WaveNumbers waves = WaveNumbers::from_material(reference_material());
    const ConeFrame frame{{0, 0}, 1, 0.0};
    ProbeParams params;
    params.d = 0.3;
    params.h = 0.2;
    params.epsBand = 0.1;

    // a plateau point, a tau-band point, and an angular-guard band point
    const double mid = 0.5 * (1.0 / (params.d + 2.0 * params.epsBand) +
                              1.0 / (params.d + params.epsBand));
    const std::vector<Point> pts = {{3.1, 0.2},
                                    {mid, 0.1},
                                    {2.0 * std::cos(1.3), 2.0 * std::sin(1.3)}};
    for (const Point& x : pts) {
        const ProbeDeriv pd = probe_with_gradient(frame, waves, params, x);
        if (pd.zero) {
            CHECK(cutoff(frame, params, x) == 0.0);
            continue;
        }
        auto comp = [&](int i) {
            return [&, i](Point y) {
                const CVec2 v = probe(frame, waves, params, y).value;
                return i == 0 ? v.u1 : v.u2;
            };
        };
        const auto g1 = oracle::fd_gradient(comp(0), x, 1e-6);
        const auto g2 = oracle::fd_gradient(comp(1), x, 1e-6);
        const double scale = std::abs(pd.g11) + std::abs(pd.g12) + std::abs(pd.g21) +
                             std::abs(pd.g22) + 1e-30;
        CHECK(std::abs(g1[0] - pd.g11) <= 2e-6 * scale);
        CHECK(std::abs(g1[1] - pd.g12) <= 2e-6 * scale);
        CHECK(std::abs(g2[0] - pd.g21) <= 2e-6 * scale);
        CHECK(std::abs(g2[1] - pd.g22) <= 2e-6 * scale);
        // value agrees with the plain probe exactly (same assembly path)
        const CVec2 v = probe(frame, waves, params, x).value;
        CHECK(std::abs(v.u1 - pd.value.u1) <= 1e-12 * (std::abs(v.u1) + 1e-30));
        CHECK(std::abs(v.u2 - pd.value.u2) <= 1e-12 * (std::abs(v.u2) + 1e-30));
    }
}

TEST_CASE("probe_trace: zero away from the cone, nonzero through it, continuous") {
    const MaterialConfig mat = reference_material();
    const WaveNumbers waves = WaveNumbers::from_material(mat);
    const DomainSpec domain{{3.0, 0.0}, 1.0};
    const Mesh mesh = generate_mesh(domain, mat, 0.2);

    ProbeParams params;
    params.d = 0.3;
    params.h = 0.2;
    params.epsBand = 0.1;

    // aimed away from the domain
    const ConeFrame away{{0, 0}, 1, kPi};
    for (const CVec2& v : probe_trace(away, waves, params, mesh)) CHECK(abs2(v) == 0.0);

    const ConeFrame at{{0, 0}, 1, 0.0};
    const BoundaryField f = probe_trace(at, waves, params, mesh);
    double maxMag = 0.0;
    for (const CVec2& v : f) maxMag = std::max(maxMag, std::sqrt(abs2(v)));
    CHECK(maxMag > 0.0);

    // continuity against a 4x finer boundary sampling of the same probe
    const int nb = int(mesh.boundaryNodes.size());
    for (int b = 0; b < nb; ++b) {
        const Point pa = mesh.nodes[mesh.boundaryNodes[b]];
        const Point pb = mesh.nodes[mesh.boundaryNodes[(b + 1) % nb]];
        const CVec2 va = f[b], vb = f[std::size_t((b + 1) % nb)];
        double localGrad = 0.0;
        CVec2 prev = va;
        for (int s = 1; s <= 4; ++s) {
            const double t = double(s) / 4.0;
            const Point mid{pa.x1 + t * (pb.x1 - pa.x1), pa.x2 + t * (pb.x2 - pa.x2)};
            const CVec2 vm = probe(at, waves, params, mid).value;
            localGrad = std::max(localGrad, 4.0 * std::sqrt(abs2(vm - prev)) / dist(pa, pb));
            prev = vm;
        }
        const double jump = std::sqrt(abs2(vb - va));
        CHECK(jump <= 2.0 * dist(pa, pb) * localGrad + 1e-12);
    }
}

TEST_SUITE_END();
