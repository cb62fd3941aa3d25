#include "enclosure/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace enclosure {

namespace {

constexpr double kPi = std::numbers::pi;

Point rotate(Point p, double angle) {
    const double c = std::cos(angle), s = std::sin(angle);
    return {c * p.x1 - s * p.x2, s * p.x1 + c * p.x2};
}

double star_radius(const RadialStarShape& s, double phi) {
    double r = 1.0;
    for (std::size_t j = 0; j < s.cosCoef.size(); ++j)
        r += s.cosCoef[j] * std::cos(double(j + 1) * phi);
    for (std::size_t j = 0; j < s.sinCoef.size(); ++j)
        r += s.sinCoef[j] * std::sin(double(j + 1) * phi);
    return s.base * r;
}

double polygon_perimeter(const PolygonShape& poly) {
    double len = 0.0;
    const std::size_t n = poly.vertices.size();
    for (std::size_t i = 0; i < n; ++i) len += dist(poly.vertices[i], poly.vertices[(i + 1) % n]);
    return len;
}

bool polygon_contains(const PolygonShape& poly, Point x) {
    // Even-odd crossing rule.
    bool inside = false;
    const std::size_t n = poly.vertices.size();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        const Point& pi = poly.vertices[i];
        const Point& pj = poly.vertices[j];
        const bool cross = (pi.x2 > x.x2) != (pj.x2 > x.x2);
        if (cross) {
            const double xint = pj.x1 + (x.x2 - pj.x2) / (pi.x2 - pj.x2) * (pi.x1 - pj.x1);
            if (x.x1 < xint) inside = !inside;
        }
    }
    return inside;
}

}  // namespace

bool InclusionShape::contains(Point x) const {
    return std::visit(
        [&](const auto& s) -> bool {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, DiscShape>) {
                return dist(x, s.center) < s.radius;
            } else if constexpr (std::is_same_v<T, EllipseShape>) {
                const Point q = rotate(x - s.center, -s.angle);
                const double a = q.x1 / s.semiA, b = q.x2 / s.semiB;
                return a * a + b * b < 1.0;
            } else if constexpr (std::is_same_v<T, PolygonShape>) {
                return polygon_contains(s, x);
            } else {
                const Point q = x - s.center;
                const double r = norm(q);
                if (r == 0.0) return true;
                return r < star_radius(s, std::atan2(q.x2, q.x1));
            }
        },
        shape);
}

std::pair<Point, Point> InclusionShape::bbox() const {
    return std::visit(
        [&](const auto& s) -> std::pair<Point, Point> {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, DiscShape>) {
                return {{s.center.x1 - s.radius, s.center.x2 - s.radius},
                        {s.center.x1 + s.radius, s.center.x2 + s.radius}};
            } else if constexpr (std::is_same_v<T, EllipseShape>) {
                // Extent of a rotated ellipse along each axis.
                const double c = std::cos(s.angle), si = std::sin(s.angle);
                const double ex = std::hypot(s.semiA * c, s.semiB * si);
                const double ey = std::hypot(s.semiA * si, s.semiB * c);
                return {{s.center.x1 - ex, s.center.x2 - ey}, {s.center.x1 + ex, s.center.x2 + ey}};
            } else if constexpr (std::is_same_v<T, PolygonShape>) {
                Point lo = s.vertices.front(), hi = s.vertices.front();
                for (const Point& v : s.vertices) {
                    lo.x1 = std::min(lo.x1, v.x1);
                    lo.x2 = std::min(lo.x2, v.x2);
                    hi.x1 = std::max(hi.x1, v.x1);
                    hi.x2 = std::max(hi.x2, v.x2);
                }
                return {lo, hi};
            } else {
                double rmax = 1.0;
                for (double a : s.cosCoef) rmax += std::abs(a);
                for (double b : s.sinCoef) rmax += std::abs(b);
                rmax *= s.base;
                return {{s.center.x1 - rmax, s.center.x2 - rmax},
                        {s.center.x1 + rmax, s.center.x2 + rmax}};
            }
        },
        shape);
}

Point InclusionShape::boundary_point(double t) const {
    t -= std::floor(t);
    return std::visit(
        [&](const auto& s) -> Point {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, DiscShape>) {
                const double phi = 2.0 * kPi * t;
                return {s.center.x1 + s.radius * std::cos(phi),
                        s.center.x2 + s.radius * std::sin(phi)};
            } else if constexpr (std::is_same_v<T, EllipseShape>) {
                const double phi = 2.0 * kPi * t;
                const Point q{s.semiA * std::cos(phi), s.semiB * std::sin(phi)};
                return s.center + rotate(q, s.angle);
            } else if constexpr (std::is_same_v<T, PolygonShape>) {
                const std::size_t n = s.vertices.size();
                const double perim = polygon_perimeter(s);
                double target = t * perim;
                for (std::size_t i = 0; i < n; ++i) {
                    const Point a = s.vertices[i], b = s.vertices[(i + 1) % n];
                    const double len = dist(a, b);
                    if (target <= len || i + 1 == n) {
                        const double u = len > 0.0 ? target / len : 0.0;
                        return a + u * (b - a);
                    }
                    target -= len;
                }
                return s.vertices.front();
            } else {
                const double phi = 2.0 * kPi * t;
                const double r = star_radius(s, phi);
                return {s.center.x1 + r * std::cos(phi), s.center.x2 + r * std::sin(phi)};
            }
        },
        shape);
}

std::vector<std::string> MaterialConfig::violations() const {
    std::vector<std::string> out;
    if (!(lambda0 + mu0 > 0.0) || !(mu0 > 0.0))
        out.push_back("background violates strong convexity: need lambda0+mu0 > 0 and mu0 > 0");
    if (!(k > 0.0)) out.push_back("frequency k must be positive");
    for (std::size_t i = 0; i < inclusions.size(); ++i) {
        const auto& inc = inclusions[i];
        const std::string tag = "inclusion[" + std::to_string(i) + "]";
        const double lam = lambda0 + inc.lambdaD;
        const double mu = mu0 + inc.muD;
        if (!(lam + mu > 0.0) || !(mu > 0.0))
            out.push_back(tag + " violates strong convexity of the total coefficients");
        if ((inc.lambdaD + inc.muD) * inc.muD < 0.0)
            out.push_back(tag + " violates the sign condition (lambdaD+muD)*muD >= 0");
        const bool jcPos = inc.muD > 0.0 && inc.lambdaD + inc.muD >= 0.0;
        const bool jcNeg = inc.muD < 0.0 && inc.lambdaD + inc.muD <= 0.0;
        if (!jcPos && !jcNeg) {
            if (inc.muD > 0.0)
                out.push_back(tag + " jump condition violated: lambdaD+muD < 0 with muD > 0");
            else if (inc.muD < 0.0)
                out.push_back(tag + " jump condition violated: lambdaD+muD > 0 with muD < 0");
            else
                out.push_back(tag + " jump condition violated: muD == 0");
        }
    }
    return out;
}

int MaterialConfig::region_of(Point x) const {
    for (std::size_t i = 0; i < inclusions.size(); ++i)
        if (inclusions[i].contains(x)) return int(i);
    return -1;
}

double MaterialConfig::lambda_at(Point x) const {
    const int r = region_of(x);
    return r < 0 ? lambda0 : lambda0 + inclusions[r].lambdaD;
}

double MaterialConfig::mu_at(Point x) const {
    const int r = region_of(x);
    return r < 0 ? mu0 : mu0 + inclusions[r].muD;
}

Complex ConeFrame::beta() const {
    return std::exp(Complex(0.0, -double(order) * axis));
}

namespace {

Complex zpow(Complex z, int n) {
    Complex w{1.0, 0.0};
    for (int i = 0; i < n; ++i) w *= z;
    return w;
}

}  // namespace

Complex rho(const ConeFrame& frame, Point x) {
    const Complex z{x.x1 - frame.apex.x1, x.x2 - frame.apex.x2};
    return frame.beta() * zpow(z, frame.order);
}

Complex rho_prime(const ConeFrame& frame, Point x) {
    const Complex z{x.x1 - frame.apex.x1, x.x2 - frame.apex.x2};
    return double(frame.order) * frame.beta() * zpow(z, frame.order - 1);
}

Complex rho_second(const ConeFrame& frame, Point x) {
    if (frame.order < 2) return {0.0, 0.0};
    const Complex z{x.x1 - frame.apex.x1, x.x2 - frame.apex.x2};
    return double(frame.order) * double(frame.order - 1) * frame.beta() *
           zpow(z, frame.order - 2);
}

double tau(const ConeFrame& frame, Point x) { return rho(frame, x).real(); }

double wrapped_angle(const ConeFrame& frame, Point x) {
    const Point q = x - frame.apex;
    const double theta = std::atan2(q.x2, q.x1);
    return std::remainder(theta - frame.axis, 2.0 * kPi);
}

bool in_cone(const ConeFrame& frame, Point x) {
    if (x.x1 == frame.apex.x1 && x.x2 == frame.apex.x2)
        throw std::domain_error("apex has no polar angle");
    return std::abs(wrapped_angle(frame, x)) < 0.5 * kPi / double(frame.order);
}

bool in_gamma_d(const ConeFrame& frame, double d, Point x) {
    if (!(d > 0.0)) throw std::invalid_argument("in_gamma_d requires d > 0");
    if (x.x1 == frame.apex.x1 && x.x2 == frame.apex.x2) return false;
    if (std::abs(wrapped_angle(frame, x)) > 0.5 * kPi / double(frame.order)) return false;
    return tau(frame, x) >= 1.0 / d;
}

std::vector<Point> level_curve(const ConeFrame& frame, double t, const Rect& bbox, int npts) {
    if (!(t > 0.0)) throw std::invalid_argument("level_curve requires t > 0");
    if (npts < 2) throw std::invalid_argument("level_curve requires npts >= 2");

    const int N = frame.order;
    const double halfOpen = 0.5 * kPi / double(N);
    const auto curve_point = [&](double delta) -> Point {
        const double cosN = std::cos(double(N) * delta);
        const double r = std::pow(1.0 / (t * cosN), 1.0 / double(N));
        const double theta = frame.axis + delta;
        return {frame.apex.x1 + r * std::cos(theta), frame.apex.x2 + r * std::sin(theta)};
    };

    // Scan for the angular range whose curve points land in the box.
    const int scan = std::max(4096, 8 * npts);
    int first = -1, last = -1;
    for (int i = 0; i < scan; ++i) {
        const double delta = halfOpen * (-1.0 + 2.0 * (i + 0.5) / scan);
        if (bbox.contains(curve_point(delta))) {
            if (first < 0) first = i;
            last = i;
        }
    }
    if (first < 0) return {};

    const double da = halfOpen * (-1.0 + 2.0 * (first + 0.5) / scan);
    const double db = halfOpen * (-1.0 + 2.0 * (last + 0.5) / scan);
    std::vector<Point> pts;
    pts.reserve(npts);
    for (int i = 0; i < npts; ++i) {
        const double delta = npts == 1 ? da : da + (db - da) * double(i) / double(npts - 1);
        const Point p = curve_point(delta);
        if (bbox.contains(p)) pts.push_back(p);
    }
    return pts;
}

namespace {

// Support-function fast path for N = 1: tau is linear, sup over a disc or
// ellipse is the support point. Returns nullopt when the argmax leaves the cone.
std::optional<double> sup_tau_linear(const ConeFrame& frame, const InclusionShape& inc) {
    if (frame.order != 1) return std::nullopt;
    const Point omega{std::cos(frame.axis), std::sin(frame.axis)};
    Point argmax;
    double value = 0.0;
    if (const auto* d = std::get_if<DiscShape>(&inc.shape)) {
        argmax = d->center + d->radius * omega;
        value = dot(d->center - frame.apex, omega) + d->radius;
    } else if (const auto* e = std::get_if<EllipseShape>(&inc.shape)) {
        const Point w = rotate(omega, -e->angle);
        const Point g{e->semiA * w.x1, e->semiB * w.x2};
        const double support = norm(g);
        if (support == 0.0) return std::nullopt;
        const Point q{e->semiA * g.x1 / support, e->semiB * g.x2 / support};
        argmax = e->center + rotate(q, e->angle);
        value = dot(e->center - frame.apex, omega) + support;
    } else {
        return std::nullopt;
    }
    const double halfOpen = 0.5 * kPi;
    if (std::abs(wrapped_angle(frame, argmax)) > halfOpen) return std::nullopt;
    return std::max(value, 0.0);
}

}  // namespace

double sup_tau(const ConeFrame& frame, const InclusionShape& shape) {
    if (auto fast = sup_tau_linear(frame, shape)) return *fast;

    const int N = frame.order;
    const double halfOpen = 0.5 * kPi / double(N);
    const auto in_closed_cone = [&](Point p) {
        if (p.x1 == frame.apex.x1 && p.x2 == frame.apex.x2) return false;
        return std::abs(wrapped_angle(frame, p)) <= halfOpen;
    };
    const auto value_at = [&](Point p) -> double {
        return in_closed_cone(p) ? tau(frame, p) : -1.0;
    };

    double best = -1.0;
    double bestT = -1.0;

    const int nb = 8192;
    for (int i = 0; i < nb; ++i) {
        const double t = double(i) / nb;
        const double v = value_at(shape.boundary_point(t));
        if (v > best) {
            best = v;
            bestT = t;
        }
    }

    const auto [lo, hi] = shape.bbox();
    const int ng = 512;
    for (int i = 0; i < ng; ++i) {
        for (int j = 0; j < ng; ++j) {
            const Point p{lo.x1 + (hi.x1 - lo.x1) * (i + 0.5) / ng,
                          lo.x2 + (hi.x2 - lo.x2) * (j + 0.5) / ng};
            if (!shape.contains(p)) continue;
            const double v = value_at(p);
            if (v > best) best = v;  // interior never refined: tau is harmonic
        }
    }

    if (best < 0.0) return 0.0;

    if (bestT >= 0.0) {
        // Golden-section refinement of tau along the boundary curve.
        const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
        double a = bestT - 2.0 / nb, b = bestT + 2.0 / nb;
        double c = b - gr * (b - a), d = a + gr * (b - a);
        double fc = value_at(shape.boundary_point(c));
        double fd = value_at(shape.boundary_point(d));
        for (int iter = 0; iter < 80; ++iter) {
            if (fc > fd) {
                b = d;
                d = c;
                fd = fc;
                c = b - gr * (b - a);
                fc = value_at(shape.boundary_point(c));
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + gr * (b - a);
                fd = value_at(shape.boundary_point(d));
            }
        }
        best = std::max(best, std::max(fc, fd));
    }
    return std::max(best, 0.0);
}

}  // namespace enclosure
