#include "enclosure/cgo.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "enclosure/bessel.hpp"
#include "enclosure/quadrature.hpp"

namespace enclosure {

namespace {

constexpr double kPi = std::numbers::pi;

bool in_closed_cone(const ConeFrame& frame, Point x) {
    if (x.x1 == frame.apex.x1 && x.x2 == frame.apex.x2) return true;  // apex belongs to the closure
    return std::abs(wrapped_angle(frame, x)) <= 0.5 * kPi / double(frame.order) + 1e-14;
}

void require_cone(const ConeFrame& frame, Point x) {
    if (!in_closed_cone(frame, x)) throw std::domain_error("remainder defined only in the cone");
}

// Value, gradient and hessian of R in one pass. The integrand is
//   -omega*r*J1(omega*r*s) * exp(rho(x)*((1-s^2)^N - 1)/h)
// and its x-derivatives; all pieces are written so that r -> 0 stays regular.
struct RemainderResult {
    Complex value{};
    Complex d1{}, d2{};
    Complex d11{}, d12{}, d22{};
};

RemainderResult remainder_pass(const ConeFrame& frame, double omega, double h, Point x,
                               int order, bool wantGrad, bool wantHess) {
    RemainderResult out;
    const double rx = x.x1 - frame.apex.x1;
    const double ry = x.x2 - frame.apex.x2;
    const double r = std::hypot(rx, ry);
    if (omega == 0.0 || r == 0.0) return out;

    const Complex rhoX = rho(frame, x);
    const Complex rp = rho_prime(frame, x);
    const Complex rpp = rho_second(frame, x);
    const Complex g1 = rp;              // d rho / d x1
    const Complex g2 = Complex(0, 1) * rp;
    const int N = frame.order;

    const QuadRule& rule = gauss_legendre(order);
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        const double s = rule.nodes[i];
        const double w = rule.weights[i];
        const double u = omega * r * s;
        const double J1u = bessel_j(1, u);
        const double J0u = bessel_j(0, u);

        double cN = -1.0;  // (1-s^2)^N - 1
        {
            const double base = 1.0 - s * s;
            double p = 1.0;
            for (int n = 0; n < N; ++n) p *= base;
            cN = p - 1.0;
        }
        const Complex gfac = cN / h;  // g = rho * cN / h
        const Complex E = std::exp(rhoX * gfac);

        const double A = omega * r * J1u;
        out.value -= w * A * E;

        if (!wantGrad && !wantHess) continue;

        const double dA1 = omega * omega * s * rx * J0u;
        const double dA2 = omega * omega * s * ry * J0u;
        const Complex dg1 = gfac * g1;
        const Complex dg2 = gfac * g2;
        out.d1 -= w * (dA1 + A * dg1) * E;
        out.d2 -= w * (dA2 + A * dg2) * E;

        if (!wantHess) continue;

        const double j1z = bessel_detail::j1_over_z(u);  // J1(u)/u, regular at 0
        const double w4 = omega * omega * omega * omega * s * s * s * j1z;
        const double ddA11 = omega * omega * s * J0u - w4 * rx * rx;
        const double ddA12 = -w4 * rx * ry;
        const double ddA22 = omega * omega * s * J0u - w4 * ry * ry;
        const Complex ddg11 = gfac * rpp;
        const Complex ddg12 = gfac * Complex(0, 1) * rpp;
        const Complex ddg22 = gfac * (-rpp);
        out.d11 -= w * (ddA11 + dA1 * dg1 + dA1 * dg1 + A * (dg1 * dg1 + ddg11)) * E;
        out.d12 -= w * (ddA12 + dA1 * dg2 + dA2 * dg1 + A * (dg1 * dg2 + ddg12)) * E;
        out.d22 -= w * (ddA22 + dA2 * dg2 + dA2 * dg2 + A * (dg2 * dg2 + ddg22)) * E;
    }
    return out;
}

double result_scale(const RemainderResult& r) {
    return std::abs(r.value) + std::abs(r.d1) + std::abs(r.d2) + std::abs(r.d11) +
           std::abs(r.d12) + std::abs(r.d22);
}

double result_diff(const RemainderResult& a, const RemainderResult& b) {
    return std::abs(a.value - b.value) + std::abs(a.d1 - b.d1) + std::abs(a.d2 - b.d2) +
           std::abs(a.d11 - b.d11) + std::abs(a.d12 - b.d12) + std::abs(a.d22 - b.d22);
}

// Doubles the order until two consecutive rules agree to 1e-10 relative.
RemainderResult remainder_adaptive(const ConeFrame& frame, double omega, double h, Point x,
                                   int quadOrder, bool wantGrad, bool wantHess) {
    require_cone(frame, x);
    if (!(h > 0.0)) throw std::invalid_argument("remainder requires h > 0");
    int order = std::max(quadOrder, 16);
    RemainderResult coarse = remainder_pass(frame, omega, h, x, order, wantGrad, wantHess);
    for (; order <= 384; order *= 2) {
        const RemainderResult fine =
            remainder_pass(frame, omega, h, x, 2 * order, wantGrad, wantHess);
        const double diff = result_diff(coarse, fine);
        const double scale = result_scale(fine);
        if (diff <= 1e-10 * (scale + 1e-30)) return fine;
        coarse = fine;
    }
    return coarse;
}

}  // namespace

WaveNumbers WaveNumbers::from_material(const MaterialConfig& mat) {
    if (!(mat.lambda0 + 2.0 * mat.mu0 > 0.0) || !(mat.mu0 > 0.0))
        throw std::invalid_argument("wavenumbers require lambda0+2mu0 > 0 and mu0 > 0");
    if (!(mat.k > 0.0)) throw std::invalid_argument("wavenumbers require k > 0");
    return {mat.k / std::sqrt(mat.lambda0 + 2.0 * mat.mu0), mat.k / std::sqrt(mat.mu0)};
}

double ProbeParams::guard_for(const ConeFrame& frame) const {
    return angularGuard > 0.0 ? angularGuard : kPi / (8.0 * double(frame.order));
}

void ProbeParams::validate() const {
    if (!(d > 0.0)) throw std::invalid_argument("probe params: d must be positive");
    if (!(h > 0.0) || h > 1.0) throw std::invalid_argument("probe params: h must be in (0,1]");
    if (!(epsBand > 0.0)) throw std::invalid_argument("probe params: epsBand must be positive");
    if (quadOrder < 16) throw std::invalid_argument("probe params: quadOrder must be >= 16");
}

Complex vekua(double omega, Point apex, const std::function<Complex(Point)>& u, Point x,
              int quadOrder) {
    const Complex ux = u(x);
    const double rx = x.x1 - apex.x1;
    const double ry = x.x2 - apex.x2;
    const double r = std::hypot(rx, ry);
    if (omega == 0.0 || r == 0.0) return ux;

    const QuadRule& rule = gauss_legendre(quadOrder);
    Complex integral{0.0, 0.0};
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        const double s = rule.nodes[i];
        const double c = 1.0 - s * s;
        const Point y{apex.x1 + c * rx, apex.x2 + c * ry};
        integral += rule.weights[i] * omega * r * bessel_j(1, omega * r * s) * u(y);
    }
    return ux - integral;
}

Complex remainder_R(const ConeFrame& frame, double omega, double h, Point x, int quadOrder) {
    return remainder_adaptive(frame, omega, h, x, quadOrder, false, false).value;
}

std::array<Complex, 2> remainder_R_grad(const ConeFrame& frame, double omega, double h, Point x,
                                        int quadOrder) {
    const auto r = remainder_adaptive(frame, omega, h, x, quadOrder, true, false);
    return {r.d1, r.d2};
}

std::array<Complex, 3> remainder_R_hess(const ConeFrame& frame, double omega, double h, Point x,
                                        int quadOrder) {
    const auto r = remainder_adaptive(frame, omega, h, x, quadOrder, true, true);
    return {r.d11, r.d12, r.d22};
}

CgoFactor cgo_field(const ConeFrame& frame, const WaveNumbers& waves, double h, Point x,
                    int quadOrder) {
    const auto r1 = remainder_adaptive(frame, waves.k1, h, x, quadOrder, true, false);
    const auto r2 = remainder_adaptive(frame, waves.k2, h, x, quadOrder, true, false);
    const Complex rp = rho_prime(frame, x);
    const Complex g1 = rp;
    const Complex g2 = Complex(0, 1) * rp;
    const Complex one{1.0, 0.0};

    CgoFactor out;
    // v = grad(phi) + perp-grad(psi) with phi = e^{rho/h}(1+R_1), psi = e^{rho/h}(1+R_2)
    out.q.u1 = (g1 / h) * (one + r1.value) + r1.d1 - ((g2 / h) * (one + r2.value) + r2.d2);
    out.q.u2 = (g2 / h) * (one + r1.value) + r1.d2 + ((g1 / h) * (one + r2.value) + r2.d1);
    out.expArg = rho(frame, x) / h;
    return out;
}

namespace {

// C^2 quintic ramp: 0 at u<=0, 1 at u>=1.
double smooth01(double u) {
    if (u <= 0.0) return 0.0;
    if (u >= 1.0) return 1.0;
    return u * u * u * (10.0 + u * (-15.0 + 6.0 * u));
}

double smooth01_deriv(double u) {
    if (u <= 0.0 || u >= 1.0) return 0.0;
    return 30.0 * u * u * (1.0 - u) * (1.0 - u);
}

struct CutoffDeriv {
    double value = 0.0;
    double d1 = 0.0, d2 = 0.0;
};

CutoffDeriv cutoff_with_gradient(const ConeFrame& frame, const ProbeParams& params, Point x) {
    CutoffDeriv out;
    const double lo = 1.0 / (params.d + 2.0 * params.epsBand);
    const double hi = 1.0 / (params.d + params.epsBand);
    const double t = tau(frame, x);
    const double uS = (t - lo) / (hi - lo);
    const double S = smooth01(uS);
    if (S == 0.0) return out;

    const double halfOpen = 0.5 * kPi / double(frame.order);
    const double guard = params.guard_for(frame);
    const double w = wrapped_angle(frame, x);
    const double uA = (halfOpen - std::abs(w)) / guard;
    const double A = smooth01(uA);
    out.value = S * A;
    if (out.value == 0.0) {
        out.value = 0.0;
        return out;
    }

    const Complex rp = rho_prime(frame, x);
    const double tau1 = rp.real();   // d tau / d x1
    const double tau2 = -rp.imag();  // d tau / d x2
    const double dS = smooth01_deriv(uS) / (hi - lo);
    double g1 = dS * tau1 * A;
    double g2 = dS * tau2 * A;

    const double dA = smooth01_deriv(uA);
    if (dA != 0.0) {
        const double rx = x.x1 - frame.apex.x1;
        const double ry = x.x2 - frame.apex.x2;
        const double r2 = rx * rx + ry * ry;
        const double sgn = w >= 0.0 ? 1.0 : -1.0;
        // d|theta|/dx = sign(theta) * (-ry, rx)/r^2
        const double f = -dA / guard * sgn;
        g1 += S * f * (-ry / r2);
        g2 += S * f * (rx / r2);
    }
    out.d1 = g1;
    out.d2 = g2;
    return out;
}

}  // namespace

double cutoff(const ConeFrame& frame, const ProbeParams& params, Point x) {
    return cutoff_with_gradient(frame, params, x).value;
}

ProbeValue probe(const ConeFrame& frame, const WaveNumbers& waves, const ProbeParams& params,
                 Point x) {
    params.validate();
    ProbeValue out;
    out.scaledMagnitudeExponent = (tau(frame, x) - 1.0 / params.d) / params.h;
    const double phi = cutoff(frame, params, x);
    if (phi == 0.0) return out;

    const CgoFactor f = cgo_field(frame, waves, params.h, x, params.quadOrder);
    // combine the exponent before exponentiating: Re part is bounded on the domain
    const Complex scale = phi * std::exp(f.expArg - 1.0 / (params.d * params.h));
    out.value = scale * f.q;
    return out;
}

ProbeDeriv probe_with_gradient(const ConeFrame& frame, const WaveNumbers& waves,
                               const ProbeParams& params, Point x) {
    params.validate();
    ProbeDeriv out;
    const CutoffDeriv phi = cutoff_with_gradient(frame, params, x);
    if (phi.value == 0.0) return out;
    out.zero = false;

    const double h = params.h;
    const auto r1 = remainder_adaptive(frame, waves.k1, h, x, params.quadOrder, true, true);
    const auto r2 = remainder_adaptive(frame, waves.k2, h, x, params.quadOrder, true, true);
    const Complex rp = rho_prime(frame, x);
    const Complex rpp = rho_second(frame, x);
    const Complex I{0.0, 1.0};
    const Complex one{1.0, 0.0};

    const Complex q1 = (rp / h) * (one + r1.value) + r1.d1 -
                       ((I * rp / h) * (one + r2.value) + r2.d2);
    const Complex q2 = (I * rp / h) * (one + r1.value) + r1.d2 +
                       ((rp / h) * (one + r2.value) + r2.d1);

    const Complex dq1_1 = (rpp / h) * (one + r1.value) + (rp / h) * r1.d1 + r1.d11 -
                          ((I * rpp / h) * (one + r2.value) + (I * rp / h) * r2.d1 + r2.d12);
    const Complex dq1_2 = (I * rpp / h) * (one + r1.value) + (rp / h) * r1.d2 + r1.d12 -
                          ((-rpp / h) * (one + r2.value) + (I * rp / h) * r2.d2 + r2.d22);
    const Complex dq2_1 = (I * rpp / h) * (one + r1.value) + (I * rp / h) * r1.d1 + r1.d12 +
                          (rpp / h) * (one + r2.value) + (rp / h) * r2.d1 + r2.d11;
    const Complex dq2_2 = (-rpp / h) * (one + r1.value) + (I * rp / h) * r1.d2 + r1.d22 +
                          (I * rpp / h) * (one + r2.value) + (rp / h) * r2.d2 + r2.d12;

    const Complex expo = std::exp(rho(frame, x) / h - 1.0 / (params.d * h));
    const Complex rho1 = rp / h;       // d/dx1 of the exponent
    const Complex rho2 = I * rp / h;   // d/dx2

    out.value.u1 = phi.value * expo * q1;
    out.value.u2 = phi.value * expo * q2;
    out.g11 = expo * (phi.d1 * q1 + phi.value * (rho1 * q1 + dq1_1));
    out.g12 = expo * (phi.d2 * q1 + phi.value * (rho2 * q1 + dq1_2));
    out.g21 = expo * (phi.d1 * q2 + phi.value * (rho1 * q2 + dq2_1));
    out.g22 = expo * (phi.d2 * q2 + phi.value * (rho2 * q2 + dq2_2));
    return out;
}

}  // namespace enclosure
