#pragma once

#include <complex>
#include <cmath>

namespace enclosure {

using Complex = std::complex<double>;

/// Point in the plane.
struct Point {
    double x1 = 0.0;
    double x2 = 0.0;
};

inline Point operator+(Point a, Point b) { return {a.x1 + b.x1, a.x2 + b.x2}; }
inline Point operator-(Point a, Point b) { return {a.x1 - b.x1, a.x2 - b.x2}; }
inline Point operator*(double s, Point p) { return {s * p.x1, s * p.x2}; }
inline double dot(Point a, Point b) { return a.x1 * b.x1 + a.x2 * b.x2; }
inline double norm(Point p) { return std::hypot(p.x1, p.x2); }
inline double dist(Point a, Point b) { return norm(a - b); }

/// Complex-valued displacement (two components).
struct CVec2 {
    Complex u1{0.0, 0.0};
    Complex u2{0.0, 0.0};
};

inline CVec2 operator+(const CVec2& a, const CVec2& b) { return {a.u1 + b.u1, a.u2 + b.u2}; }
inline CVec2 operator-(const CVec2& a, const CVec2& b) { return {a.u1 - b.u1, a.u2 - b.u2}; }
inline CVec2 operator*(Complex s, const CVec2& v) { return {s * v.u1, s * v.u2}; }
inline double abs2(const CVec2& v) { return std::norm(v.u1) + std::norm(v.u2); }

}  // namespace enclosure
