#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace msqg {

inline constexpr double pi = 3.14159265358979323846;

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
    friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
    friend Vec2 operator*(double s, Vec2 v) { return {s * v.x, s * v.y}; }
    friend Vec2 operator*(Vec2 v, double s) { return {s * v.x, s * v.y}; }
    friend Vec2 operator/(Vec2 v, double s) { return {v.x / s, v.y / s}; }
    Vec2& operator+=(Vec2 o) { x += o.x; y += o.y; return *this; }
    Vec2& operator-=(Vec2 o) { x -= o.x; y -= o.y; return *this; }
    Vec2& operator*=(double s) { x *= s; y *= s; return *this; }
};

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double norm2(Vec2 v) { return v.x * v.x + v.y * v.y; }
inline double norm(Vec2 v) { return std::hypot(v.x, v.y); }
// Perpendicular convention used by the velocity kernel: (v1, v2) -> (v2, -v1).
inline Vec2 perp(Vec2 v) { return {v.y, -v.x}; }
// Mirror image across the horizontal axis: (v1, v2) -> (v1, -v2).
inline Vec2 reflect(Vec2 v) { return {v.x, -v.y}; }

enum class Domain { WholePlane, HalfPlane };

struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
// Malformed inputs: bad grid sizes, invariants broken, mismatched shapes.
struct validation_error : error {
    using error::error;
};
// Geometric degeneracy: self-intersection, leaving the half-plane, collapsed nodes.
struct geometry_error : error {
    using error::error;
};
// Two boundary points closer than the kernel can resolve at grid precision.
struct collision_error : error {
    using error::error;
};
// NaN/Inf propagation, failed iteration, violated stability guard.
struct numeric_error : error {
    using error::error;
};

} // namespace msqg
