#pragma once

#include <cmath>
#include <numbers>

namespace nodalheat {

inline constexpr double pi = std::numbers::pi;

/// A point or displacement in the plane.
struct Point {
    double x = 0.0;
    double y = 0.0;

    constexpr Point& operator+=(Point o) { x += o.x; y += o.y; return *this; }
    constexpr Point& operator-=(Point o) { x -= o.x; y -= o.y; return *this; }
    friend constexpr Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
    friend constexpr Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
    friend constexpr Point operator*(double s, Point a) { return {s * a.x, s * a.y}; }
    friend constexpr bool operator==(Point a, Point b) = default;
};

inline constexpr double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }
inline constexpr double cross(Point a, Point b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point a) { return std::hypot(a.x, a.y); }
inline double distance(Point a, Point b) { return norm(a - b); }

/// Axis-aligned box [lo.x, hi.x] x [lo.y, hi.y].
struct Box {
    Point lo;
    Point hi;

    double width() const { return hi.x - lo.x; }
    double height() const { return hi.y - lo.y; }
    bool contains(Point p) const { return p.x >= lo.x && p.x <= hi.x && p.y >= lo.y && p.y <= hi.y; }
};

} // namespace nodalheat
