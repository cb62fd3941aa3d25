#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "enclosure/types.hpp"

namespace enclosure {

/// Disc-shaped computational domain.
struct DomainSpec {
    Point center;
    double radius = 1.0;
};

struct DiscShape {
    Point center;
    double radius = 0.0;
};

struct EllipseShape {
    Point center;
    double semiA = 0.0;   // semiaxis along the rotated x-direction
    double semiB = 0.0;
    double angle = 0.0;   // rotation of the semiA axis, radians
};

struct PolygonShape {
    std::vector<Point> vertices;  // counterclockwise
};

/// Star-shaped region r(phi) = base * (1 + sum_j a_j cos(j phi) + b_j sin(j phi)).
struct RadialStarShape {
    Point center;
    double base = 0.0;
    std::vector<double> cosCoef;
    std::vector<double> sinCoef;
};

/// Inclusion with constant coefficient jumps against the background.
struct InclusionShape {
    std::variant<DiscShape, EllipseShape, PolygonShape, RadialStarShape> shape;
    double lambdaD = 0.0;
    double muD = 0.0;

    bool contains(Point x) const;
    /// Axis-aligned bounding box as (min corner, max corner).
    std::pair<Point, Point> bbox() const;
    /// Closed boundary curve, parametrized over [0, 1).
    Point boundary_point(double t) const;
};

/// Background material, frequency, and the inclusion list.
struct MaterialConfig {
    double lambda0 = 2.0;
    double mu0 = 1.0;
    double k = 1.0;
    std::vector<InclusionShape> inclusions;

    /// Returns human-readable violations of the coefficient conditions
    /// (strong convexity, sign condition, jump condition); empty when valid.
    std::vector<std::string> violations() const;
    double lambda_at(Point x) const;
    double mu_at(Point x) const;
    /// Index of the inclusion containing x, or -1 for background.
    int region_of(Point x) const;
};

/// Probing cone: apex a, order N, axis direction theta0.
/// The phase is rho(x) = beta*((x1-a1)+i(x2-a2))^N with beta = exp(-i N theta0),
/// and tau = Re(rho).
struct ConeFrame {
    Point apex;
    int order = 1;
    double axis = 0.0;

    Complex beta() const;
};

/// rho(x) and its holomorphic derivatives with respect to z = (x1-a1)+i(x2-a2).
Complex rho(const ConeFrame& frame, Point x);
Complex rho_prime(const ConeFrame& frame, Point x);
Complex rho_second(const ConeFrame& frame, Point x);

double tau(const ConeFrame& frame, Point x);

/// Angle of x-apex wrapped against the cone axis, in (-pi, pi].
double wrapped_angle(const ConeFrame& frame, Point x);

/// True iff x lies in the open cone (|theta - theta0| < pi/(2N)). Throws for x == apex.
bool in_cone(const ConeFrame& frame, Point x);

/// True iff x is in the closed cone with tau(x) >= 1/d.
bool in_gamma_d(const ConeFrame& frame, double d, Point x);

struct Rect {
    Point lo;
    Point hi;
    bool contains(Point p) const {
        return p.x1 >= lo.x1 && p.x1 <= hi.x1 && p.x2 >= lo.x2 && p.x2 <= hi.x2;
    }
};

/// Points on the branch of {tau = 1/t} inside the cone, clipped to bbox.
/// Empty when the curve misses the box.
std::vector<Point> level_curve(const ConeFrame& frame, double t, const Rect& bbox, int npts);

/// sup of tau over (shape intersect cone); 0 when the intersection is empty.
/// Dense boundary/interior sampling followed by local golden-section refinement;
/// exact support-function fast path for discs and ellipses when N = 1.
double sup_tau(const ConeFrame& frame, const InclusionShape& shape);

}  // namespace enclosure
