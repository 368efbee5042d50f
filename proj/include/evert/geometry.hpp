#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace evert {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2() = default;
    constexpr Vec2(double x_, double y_) : x(x_), y(y_) {}

    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    Vec2 operator-() const { return {-x, -y}; }
    Vec2& operator+=(const Vec2& o) { x += o.x; y += o.y; return *this; }
    Vec2& operator-=(const Vec2& o) { x -= o.x; y -= o.y; return *this; }
    Vec2& operator*=(double s) { x *= s; y *= s; return *this; }

    double norm2() const { return x * x + y * y; }
    double norm() const { return std::sqrt(norm2()); }

    Vec2 normalized() const {
        double n = norm();
        if (n == 0.0) throw std::domain_error("cannot normalize zero vector");
        return {x / n, y / n};
    }
};

inline Vec2 operator*(double s, const Vec2& v) { return v * s; }

inline double dot(const Vec2& a, const Vec2& b) { return a.x * b.x + a.y * b.y; }
inline double cross(const Vec2& a, const Vec2& b) { return a.x * b.y - a.y * b.x; }
inline double dist(const Vec2& a, const Vec2& b) { return (a - b).norm(); }

// 90-degree counterclockwise rotation.
inline Vec2 perp(const Vec2& v) { return {-v.y, v.x}; }

// Right-hand normal of a direction of travel; the co-orientation convention
// used for all strands in this library.
inline Vec2 right_normal(const Vec2& tangent) { return {tangent.y, -tangent.x}; }

using Point2 = Vec2;

struct Rect {
    double xmin = 0.0, xmax = 0.0, ymin = 0.0, ymax = 0.0;

    double width() const { return xmax - xmin; }
    double height() const { return ymax - ymin; }

    bool contains(const Point2& p, double tol = 0.0) const {
        return p.x >= xmin - tol && p.x <= xmax + tol && p.y >= ymin - tol && p.y <= ymax + tol;
    }
    bool on_boundary(const Point2& p, double tol) const {
        if (!contains(p, tol)) return false;
        return std::abs(p.x - xmin) <= tol || std::abs(p.x - xmax) <= tol ||
               std::abs(p.y - ymin) <= tol || std::abs(p.y - ymax) <= tol;
    }
};

// The slice rectangle of the support box W = [0,2] x [-6,6] x [-6,6]:
// every horizontal plane meets W in this rectangle.
inline Rect slice_rect() { return Rect{0.0, 2.0, -6.0, 6.0}; }

constexpr double kBoxZMin = -6.0;
constexpr double kBoxZMax = 6.0;

// Wall abscissae: the two near-flat sheets sit at these x positions.
constexpr double kWallLeftX = 0.25;
constexpr double kWallRightX = 1.75;

inline bool finite(const Point2& p) { return std::isfinite(p.x) && std::isfinite(p.y); }

// --- small smooth-shape helpers used throughout the slice builders ---

// Quintic smoothstep: C^2, s(0)=0, s(1)=1, s'(0)=s'(1)=s''(0)=s''(1)=0.
inline double smoothstep(double u) {
    if (u <= 0.0) return 0.0;
    if (u >= 1.0) return 1.0;
    return u * u * u * (u * (u * 6.0 - 15.0) + 10.0);
}

// Smoothstep over [a, b].
inline double smoothstep(double u, double a, double b) {
    return smoothstep((u - a) / (b - a));
}

// C-infinity bump, value 1 at u=0, support |u|<1.
inline double bump(double u) {
    double a = std::abs(u);
    if (a >= 1.0) return 0.0;
    return std::exp(1.0 - 1.0 / (1.0 - a * a));
}

// Smooth plateau: 1 on |u| <= inner, 0 for |u| >= outer, monotone in between.
inline double plateau(double u, double inner, double outer) {
    double a = std::abs(u);
    if (a <= inner) return 1.0;
    if (a >= outer) return 0.0;
    return 1.0 - smoothstep((a - inner) / (outer - inner));
}

inline double clamp01(double u) { return std::clamp(u, 0.0, 1.0); }

inline double lerp(double a, double b, double u) { return a + (b - a) * u; }
inline Vec2 lerp(const Vec2& a, const Vec2& b, double u) { return a + (b - a) * u; }

}  // namespace evert
