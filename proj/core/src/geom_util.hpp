#pragma once

// Small planar geometry helpers shared across the library internals.

#include <algorithm>
#include <cmath>
#include <vector>

#include "msqg/types.hpp"

namespace msqg::detail {

inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }

inline double clamp01(double t) { return t < 0.0 ? 0.0 : (t > 1.0 ? 1.0 : t); }

inline double point_segment_dist2(Vec2 p, Vec2 a, Vec2 b) {
    const Vec2 ab = b - a;
    const double len2 = norm2(ab);
    const double t = len2 > 0.0 ? clamp01(dot(p - a, ab) / len2) : 0.0;
    return norm2(p - (a + t * ab));
}

inline double seg_seg_dist2(Vec2 p1, Vec2 p2, Vec2 q1, Vec2 q2) {
    // Closest-approach parameters of the two segments, clamped to [0,1].
    const Vec2 d1 = p2 - p1, d2 = q2 - q1, r = p1 - q1;
    const double a = norm2(d1), e = norm2(d2), f = dot(d2, r);
    double s = 0.0, t = 0.0;
    if (a <= 0.0 && e <= 0.0) return norm2(r);
    if (a <= 0.0) {
        t = clamp01(f / e);
    } else {
        const double c = dot(d1, r);
        if (e <= 0.0) {
            s = clamp01(-c / a);
        } else {
            const double b = dot(d1, d2);
            const double denom = a * e - b * b;
            s = denom > 0.0 ? clamp01((b * f - c * e) / denom) : 0.0;
            t = (b * s + f) / e;
            if (t < 0.0) {
                t = 0.0;
                s = clamp01(-c / a);
            } else if (t > 1.0) {
                t = 1.0;
                s = clamp01((b - c) / a);
            }
        }
    }
    return norm2((p1 + s * d1) - (q1 + t * d2));
}

// Distance from p to the closed polygon through the given vertices.
inline double point_polygon_distance(Vec2 p, const std::vector<Vec2>& poly) {
    const int n = static_cast<int>(poly.size());
    double best = 1e300;
    for (int i = 0; i < n; ++i) {
        best = std::min(best, point_segment_dist2(p, poly[i], poly[(i + 1) % n]));
    }
    return std::sqrt(best);
}

// Even-odd rule.
inline bool point_in_polygon(Vec2 p, const std::vector<Vec2>& poly) {
    const int n = static_cast<int>(poly.size());
    bool inside = false;
    for (int i = 0, j = n - 1; i < n; j = i++) {
        const Vec2 a = poly[i], b = poly[j];
        if ((a.y > p.y) != (b.y > p.y)) {
            const double xint = a.x + (p.y - a.y) / (b.y - a.y) * (b.x - a.x);
            if (p.x < xint) inside = !inside;
        }
    }
    return inside;
}

// Proper or touching intersection of closed segments.
inline bool segments_intersect(Vec2 p1, Vec2 p2, Vec2 q1, Vec2 q2) {
    const double d1 = cross(q2 - q1, p1 - q1);
    const double d2 = cross(q2 - q1, p2 - q1);
    const double d3 = cross(p2 - p1, q1 - p1);
    const double d4 = cross(p2 - p1, q2 - p1);
    if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) &&
        ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0)))
        return true;
    auto on_segment = [](Vec2 a, Vec2 b, Vec2 c) {
        return std::min(a.x, b.x) <= c.x && c.x <= std::max(a.x, b.x) &&
               std::min(a.y, b.y) <= c.y && c.y <= std::max(a.y, b.y);
    };
    if (d1 == 0 && on_segment(q1, q2, p1)) return true;
    if (d2 == 0 && on_segment(q1, q2, p2)) return true;
    if (d3 == 0 && on_segment(p1, p2, q1)) return true;
    if (d4 == 0 && on_segment(p1, p2, q2)) return true;
    return false;
}

// Minimum over vertices of the segment length, and the mean segment length.
inline double min_segment_length(const std::vector<Vec2>& poly) {
    const int n = static_cast<int>(poly.size());
    double best = 1e300;
    for (int i = 0; i < n; ++i) best = std::min(best, norm2(poly[(i + 1) % n] - poly[i]));
    return std::sqrt(best);
}

inline double mean_segment_length(const std::vector<Vec2>& poly) {
    const int n = static_cast<int>(poly.size());
    double total = 0.0;
    for (int i = 0; i < n; ++i) total += norm(poly[(i + 1) % n] - poly[i]);
    return total / n;
}

} // namespace msqg::detail
