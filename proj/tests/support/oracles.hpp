// Test-side oracles: finite differences, reference fields and brute-force
// searches kept independent of the library's analytic evaluation paths.
#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include "enclosure/geometry.hpp"
#include "enclosure/types.hpp"

namespace oracle {

using enclosure::Complex;
using enclosure::CVec2;
using enclosure::Point;

inline std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline double uniform(std::uint64_t& state, double lo, double hi) {
    return lo + (hi - lo) * (double(splitmix64(state) >> 11) / 9007199254740992.0);
}

// Central difference gradient of a scalar complex field.
inline std::array<Complex, 2> fd_gradient(const std::function<Complex(Point)>& f, Point x,
                                          double delta) {
    return {(f({x.x1 + delta, x.x2}) - f({x.x1 - delta, x.x2})) / (2.0 * delta),
            (f({x.x1, x.x2 + delta}) - f({x.x1, x.x2 - delta})) / (2.0 * delta)};
}

struct FdSecond {
    Complex d11, d22, d12;
};

inline FdSecond fd_second(const std::function<Complex(Point)>& f, Point x, double delta,
                          bool richardson = false) {
    auto once = [&](double d) {
        FdSecond s;
        const Complex c = f(x);
        s.d11 = (f({x.x1 + d, x.x2}) - 2.0 * c + f({x.x1 - d, x.x2})) / (d * d);
        s.d22 = (f({x.x1, x.x2 + d}) - 2.0 * c + f({x.x1, x.x2 - d})) / (d * d);
        s.d12 = (f({x.x1 + d, x.x2 + d}) - f({x.x1 + d, x.x2 - d}) - f({x.x1 - d, x.x2 + d}) +
                 f({x.x1 - d, x.x2 - d})) /
                (4.0 * d * d);
        return s;
    };
    if (!richardson) return once(delta);
    const FdSecond coarse = once(delta);
    const FdSecond fine = once(0.5 * delta);
    return {(4.0 * fine.d11 - coarse.d11) / 3.0, (4.0 * fine.d22 - coarse.d22) / 3.0,
            (4.0 * fine.d12 - coarse.d12) / 3.0};
}

// Richardson-extrapolated 5-point Laplacian.
inline Complex fd_laplacian(const std::function<Complex(Point)>& f, Point x, double delta) {
    auto lap = [&](double d) {
        return (f({x.x1 + d, x.x2}) + f({x.x1 - d, x.x2}) + f({x.x1, x.x2 + d}) +
                f({x.x1, x.x2 - d}) - 4.0 * f(x)) /
               (d * d);
    };
    return (4.0 * lap(0.5 * delta) - lap(delta)) / 3.0;
}

// Relative residual of div sigma0(v) + k^2 v for a vector field.
inline double navier_residual_fd(const std::function<CVec2(Point)>& v, double lambda0, double mu0,
                                 double k2, Point x, double delta) {
    auto c1 = [&](Point p) { return v(p).u1; };
    auto c2 = [&](Point p) { return v(p).u2; };
    const FdSecond s1 = fd_second(c1, x, delta, true);
    const FdSecond s2 = fd_second(c2, x, delta, true);
    const CVec2 val = v(x);
    const Complex r1 = mu0 * (s1.d11 + s1.d22) + (lambda0 + mu0) * (s1.d11 + s2.d12) + k2 * val.u1;
    const Complex r2 = mu0 * (s2.d11 + s2.d22) + (lambda0 + mu0) * (s1.d12 + s2.d22) + k2 * val.u2;
    const double scale = mu0 * (std::abs(s1.d11 + s1.d22) + std::abs(s2.d11 + s2.d22)) +
                         (lambda0 + mu0) * (std::abs(s1.d11 + s2.d12) + std::abs(s1.d12 + s2.d22)) +
                         k2 * (std::abs(val.u1) + std::abs(val.u2));
    return (std::abs(r1) + std::abs(r2)) / (scale + 1e-300);
}

// Plane pressure wave u_P = dir * exp(i k1 dir.x) and its traction.
inline CVec2 plane_pressure_wave(Point dir, double k1, Point x) {
    const Complex phase = std::exp(Complex(0.0, k1 * (dir.x1 * x.x1 + dir.x2 * x.x2)));
    return {dir.x1 * phase, dir.x2 * phase};
}

// Plane shear wave u_S = dir^perp * exp(i k2 dir.x).
inline CVec2 plane_shear_wave(Point dir, double k2, Point x) {
    const Complex phase = std::exp(Complex(0.0, k2 * (dir.x1 * x.x1 + dir.x2 * x.x2)));
    return {-dir.x2 * phase, dir.x1 * phase};
}

// sigma0(u_P) nu for the plane pressure wave: i k1 (lambda I + 2 mu d d^T) e^{...} nu.
inline CVec2 plane_pressure_traction(Point dir, double k1, double lambda0, double mu0, Point x,
                                     Point nu) {
    const Complex ik = Complex(0.0, k1) *
                       std::exp(Complex(0.0, k1 * (dir.x1 * x.x1 + dir.x2 * x.x2)));
    const double dn = dir.x1 * nu.x1 + dir.x2 * nu.x2;
    return {ik * (lambda0 * nu.x1 + 2.0 * mu0 * dir.x1 * dn),
            ik * (lambda0 * nu.x2 + 2.0 * mu0 * dir.x2 * dn)};
}

// Brute-force sup of tau over a shape: dense boundary sweep (the field is
// harmonic, so the boundary carries the supremum) plus an interior grid.
inline double brute_force_sup_tau(const enclosure::ConeFrame& frame,
                                  const enclosure::InclusionShape& shape, int boundaryN,
                                  int gridN) {
    using namespace enclosure;
    double best = 0.0;
    const double half = 0.5 * M_PI / frame.order;
    auto consider = [&](Point p) {
        if (p.x1 == frame.apex.x1 && p.x2 == frame.apex.x2) return;
        if (std::abs(wrapped_angle(frame, p)) > half) return;
        best = std::max(best, tau(frame, p));
    };
    for (int i = 0; i < boundaryN; ++i) consider(shape.boundary_point(double(i) / boundaryN));
    const auto [lo, hi] = shape.bbox();
    for (int i = 0; i < gridN; ++i)
        for (int j = 0; j < gridN; ++j) {
            const Point p{lo.x1 + (hi.x1 - lo.x1) * (i + 0.5) / gridN,
                          lo.x2 + (hi.x2 - lo.x2) * (j + 0.5) / gridN};
            if (shape.contains(p)) consider(p);
        }
    return best;
}

// 40+ term ascending series for J0 in long double; the independent root oracle.
inline long double j0_series_ld(long double z, int terms = 60) {
    const long double q = 0.25L * z * z;
    long double term = 1.0L, sum = 1.0L;
    for (int m = 1; m <= terms; ++m) {
        term *= -q / (static_cast<long double>(m) * m);
        sum += term;
    }
    return sum;
}

inline double bisect_j0_first_zero() {
    long double a = 2.0L, b = 3.0L;
    for (int i = 0; i < 200; ++i) {
        const long double mid = 0.5L * (a + b);
        if (j0_series_ld(a) * j0_series_ld(mid) <= 0.0L)
            b = mid;
        else
            a = mid;
    }
    return double(0.5L * (a + b));
}

}  // namespace oracle
