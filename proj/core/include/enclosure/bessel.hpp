#pragma once

namespace enclosure {

/// Bessel function of the first kind, order 0 or 1, for z >= 0.
/// Power series below the switch point, Stokes-type asymptotic expansion beyond.
/// Throws std::domain_error for z < 0 or order not in {0, 1}.
double bessel_j(int order, double z);

namespace bessel_detail {

// The two evaluation routes, exposed for switchover validation.
double series(int order, double z);
double asymptotic(int order, double z);

// Switch point between the routes.
inline constexpr double kSwitch = 18.0;

/// J1(z)/z, stable at z = 0 (limit 1/2).
double j1_over_z(double z);

}  // namespace bessel_detail

}  // namespace enclosure
