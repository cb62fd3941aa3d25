#include "enclosure/bessel.hpp"

#include <cmath>
#include <stdexcept>

namespace enclosure {
namespace bessel_detail {

// Plain double series for small arguments: the terms stay below ~20 there, so
// no meaningful cancellation occurs and the loop is cheap enough for the
// quadrature hot path.
static double series_small(int order, double z) {
    const double q = 0.25 * z * z;
    double term = 1.0, sum = 1.0;
    for (int m = 1; m < 40; ++m) {
        term *= -q / (order == 0 ? double(m) * m : double(m) * (m + 1));
        sum += term;
        if (std::abs(term) < 1e-18 * std::abs(sum)) break;
    }
    return order == 0 ? sum : 0.5 * z * sum;
}

// Ascending power series. The alternating terms reach ~1e6 before the sum
// collapses to O(0.01) near the switch point, so the accumulation runs in
// quad precision to keep the cancellation below 1e-13 relative.
double series(int order, double z) {
    if (z < 6.0) return series_small(order, z);
    const __float128 q = __float128(z) * __float128(z) * __float128(0.25);
    __float128 term = 1;
    __float128 sum = 1;
    for (int m = 1; m < 200; ++m) {
        const __float128 denom =
            order == 0 ? __float128(m) * __float128(m) : __float128(m) * __float128(m + 1);
        term *= -q / denom;
        sum += term;
        const double mag = double(term < 0 ? -term : term);
        if (mag < 1e-36 * (double(sum < 0 ? -sum : sum) + 1e-300)) break;
    }
    const double s = double(sum);
    return order == 0 ? s : 0.5 * z * s;
}

// Stokes (Hankel) expansion J_nu(z) ~ sqrt(2/(pi z)) (P cos w - Q sin w),
// w = z - nu*pi/2 - pi/4, with the usual a_k(nu) coefficients summed to the
// smallest term.
double asymptotic(int order, double z) {
    const long double lz = z;
    const long double nu4 = order == 0 ? 0.0L : 4.0L;
    long double a = 1.0L;        // a_m(nu)
    long double zpow = 1.0L;     // z^{-m}
    long double P = 0.0L, Q = 0.0L;
    long double prevMag = 1e300L;
    for (int m = 0; m < 60; ++m) {
        const long double term = a * zpow;
        const long double mag = term < 0 ? -term : term;
        if (mag > prevMag) break;  // divergence onset
        const int j = m / 2;
        const long double signed_term = (j % 2 == 0) ? term : -term;
        if (m % 2 == 0)
            P += signed_term;
        else
            Q += signed_term;
        if (mag < 1e-20L) break;
        prevMag = mag;
        const long double odd = 2.0L * m + 1.0L;
        a *= (nu4 - odd * odd) / (8.0L * (m + 1.0L));
        zpow /= lz;
    }
    const long double pi = 3.14159265358979323846264338327950288L;
    const long double w = lz - (order == 0 ? 0.25L : 0.75L) * pi;
    const long double val = std::sqrt(2.0L / (pi * lz)) * (P * std::cos(w) - Q * std::sin(w));
    return double(val);
}

double j1_over_z(double z) {
    if (std::abs(z) < 0.5) {
        const double q = 0.25 * z * z;
        // (1/2) sum (-q)^m / (m! (m+1)!)
        double term = 0.5, sum = 0.5;
        for (int m = 1; m <= 8; ++m) {
            term *= -q / (double(m) * double(m + 1));
            sum += term;
        }
        return sum;
    }
    return bessel_j(1, std::abs(z)) / std::abs(z);
}

}  // namespace bessel_detail

double bessel_j(int order, double z) {
    if (order != 0 && order != 1) throw std::domain_error("bessel_j: order must be 0 or 1");
    if (z < 0.0) throw std::domain_error("bessel_j: argument must be nonnegative");
    if (z < bessel_detail::kSwitch) return bessel_detail::series(order, z);
    return bessel_detail::asymptotic(order, z);
}

}  // namespace enclosure
