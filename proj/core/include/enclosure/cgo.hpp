#pragma once

#include <array>
#include <functional>

#include "enclosure/geometry.hpp"
#include "enclosure/types.hpp"

namespace enclosure {

/// Pressure and shear wavenumbers of the homogeneous background.
struct WaveNumbers {
    double k1 = 0.0;  // k / sqrt(lambda0 + 2 mu0)
    double k2 = 0.0;  // k / sqrt(mu0)

    static WaveNumbers from_material(const MaterialConfig& mat);
};

/// Parameters of the probe family p_{d,h}.
struct ProbeParams {
    double d = 0.3;
    double h = 0.1;
    double epsBand = 0.1;        // the fixed band width between the cutoff levels
    int quadOrder = 48;          // starting Gauss-Legendre order
    double angularGuard = 0.0;   // cutoff sector margin; <= 0 selects pi/(8N)

    double guard_for(const ConeFrame& frame) const;
    void validate() const;
};

struct ProbeValue {
    CVec2 value;
    /// (tau(x) - 1/d)/h, carried separately for overflow-safe diagnostics.
    double scaledMagnitudeExponent = 0.0;
};

/// Vekua transform T_omega(u)(x) about the apex, evaluated in the
/// substituted nonsingular form
///   u(x) - int_0^1 omega*|x-a| * J1(omega*|x-a|*s) * u(a + (1-s^2)(x-a)) ds
/// by Gauss-Legendre quadrature of the given order.
Complex vekua(double omega, Point apex, const std::function<Complex(Point)>& u, Point x,
              int quadOrder = 48);

/// Remainder R_{h,l} of the scalar CGO factor e^{rho/h}(1 + R). Every quadrature
/// exponent has nonpositive real part inside the cone, so the evaluation cannot
/// overflow. Throws outside the closed cone.
Complex remainder_R(const ConeFrame& frame, double omega, double h, Point x, int quadOrder = 48);

/// Gradient of R_{h,l}, differentiated analytically under the integral sign.
std::array<Complex, 2> remainder_R_grad(const ConeFrame& frame, double omega, double h, Point x,
                                        int quadOrder = 48);

/// Hessian of R_{h,l} as {d11, d12, d22}.
std::array<Complex, 3> remainder_R_hess(const ConeFrame& frame, double omega, double h, Point x,
                                        int quadOrder = 48);

/// The CGO displacement factor pair: v_h(x) = e^{expArg} * q.
struct CgoFactor {
    CVec2 q;
    Complex expArg;
};

CgoFactor cgo_field(const ConeFrame& frame, const WaveNumbers& waves, double h, Point x,
                    int quadOrder = 48);

/// Smooth cutoff phi_d: 1 on the tau-region above 1/(d+eps) well inside the
/// sector, 0 outside the tau-region above 1/(d+2 eps), C^2 throughout.
double cutoff(const ConeFrame& frame, const ProbeParams& params, Point x);

/// Probe p_{d,h}(x) = phi_d(x) e^{(rho(x) - 1/d)/h} q(x); exactly zero where
/// the cutoff vanishes.
ProbeValue probe(const ConeFrame& frame, const WaveNumbers& waves, const ProbeParams& params,
                 Point x);

/// Probe value together with its full gradient g[i][j] = d p_i / d x_j,
/// assembled analytically (cutoff ramp derivatives, phase derivatives and the
/// remainder hessians under the integral sign).
struct ProbeDeriv {
    CVec2 value;
    Complex g11{}, g12{}, g21{}, g22{};
    bool zero = true;  // outside the cutoff support
};

ProbeDeriv probe_with_gradient(const ConeFrame& frame, const WaveNumbers& waves,
                               const ProbeParams& params, Point x);

}  // namespace enclosure
