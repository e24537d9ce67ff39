#include "msqg/curvekit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "geom_util.hpp"
#include "msqg/spectral.hpp"

namespace msqg {

double polygon_area(const Curve& curve) {
    const int m = curve.grid_size();
    check_grid_size(m);
    const auto dz = spectral_derivative(curve, 1);
    double total = 0.0;
    for (int j = 0; j < m; ++j)
        total += curve.samples[j].x * dz[j].y - curve.samples[j].y * dz[j].x;
    return 0.5 * total * (2.0 * pi / m);
}

double arclength(const Curve& curve) {
    const int m = curve.grid_size();
    check_grid_size(m);
    const auto dz = spectral_derivative(curve, 1);
    double total = 0.0;
    for (int j = 0; j < m; ++j) total += norm(dz[j]);
    return total * (2.0 * pi / m);
}

double h3_norm(const ContourState& state) {
    state.check();
    double total = 0.0;
    for (const Curve& c : state.curves) {
        const int m = c.grid_size();
        double sup2 = 0.0;
        for (const Vec2& p : c.samples) sup2 = std::max(sup2, norm2(p));
        const auto d3 = spectral_derivative(c, 3);
        double l2 = 0.0;
        for (const Vec2& d : d3) l2 += norm2(d);
        total += sup2 + l2 * (2.0 * pi / m);
    }
    return std::sqrt(total);
}

double c2_norm(const ContourState& state) {
    state.check();
    double sup = 0.0;
    for (const Curve& c : state.curves) {
        for (const Vec2& p : c.samples) sup = std::max(sup, norm2(p));
        for (int order = 1; order <= 2; ++order) {
            for (const Vec2& d : spectral_derivative(c, order)) sup = std::max(sup, norm2(d));
        }
    }
    return std::sqrt(sup);
}

double f_functional(const ContourState& state) {
    state.check();
    double worst_ratio2 = 1.0;
    for (const Curve& c : state.curves) {
        const int m = c.grid_size();
        const double h = 2.0 * pi / m;
        for (int j = 0; j < m; ++j) {
            for (int l = j + 1; l < m; ++l) {
                const int steps = std::min(l - j, m - (l - j));
                const double dxi = h * steps;
                const double d2 = norm2(c.samples[j] - c.samples[l]);
                if (d2 == 0.0)
                    throw geometry_error("degenerate curve: two samples coincide");
                const double r2 = dxi * dxi / d2;
                worst_ratio2 = std::max(worst_ratio2, r2);
            }
        }
    }
    return std::sqrt(worst_ratio2);
}

double min_gap(const ContourState& state) {
    state.check();
    const int n = static_cast<int>(state.curves.size());
    if (n <= 1) return std::numeric_limits<double>::infinity();
    double best2 = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
        for (int k = i + 1; k < n; ++k) {
            const auto& a = state.curves[i].samples;
            const auto& b = state.curves[k].samples;
            const int ma = static_cast<int>(a.size()), mb = static_cast<int>(b.size());
            for (int p = 0; p < ma; ++p) {
                const Vec2 a1 = a[p], a2 = a[(p + 1) % ma];
                for (int q = 0; q < mb; ++q) {
                    const double d2 =
                        detail::seg_seg_dist2(a1, a2, b[q], b[(q + 1) % mb]);
                    best2 = std::min(best2, d2);
                }
            }
        }
    }
    return std::sqrt(best2);
}

double delta_functional(const ContourState& state) {
    if (state.curves.size() <= 1) return 1.0;
    return std::min(min_gap(state), 1.0);
}

NormReport triple_norm(const ContourState& state) {
    NormReport report;
    report.h3 = h3_norm(state);
    report.c2 = c2_norm(state);
    report.delta_inv = 1.0 / delta_functional(state);
    report.f_functional = f_functional(state);
    report.triple = report.h3 + report.delta_inv + report.f_functional;
    return report;
}

namespace {

bool curve_self_intersects(const std::vector<Vec2>& poly) {
    const int m = static_cast<int>(poly.size());
    for (int j = 0; j < m; ++j) {
        for (int l = j + 2; l < m; ++l) {
            if (j == 0 && l == m - 1) continue; // wrap-adjacent
            if (detail::segments_intersect(poly[j], poly[(j + 1) % m], poly[l],
                                           poly[(l + 1) % m]))
                return true;
        }
    }
    return false;
}

} // namespace

Curve constant_speed_reparametrize(const Curve& curve) {
    const int m = curve.grid_size();
    check_grid_size(m);
    if (curve_self_intersects(curve.samples))
        throw geometry_error("cannot reparametrize a self-intersecting curve");

    const auto dz = spectral_derivative(curve, 1);
    std::vector<double> speed(static_cast<size_t>(m));
    double max_speed = 0.0, min_speed = 1e300;
    for (int j = 0; j < m; ++j) {
        speed[j] = norm(dz[j]);
        max_speed = std::max(max_speed, speed[j]);
        min_speed = std::min(min_speed, speed[j]);
    }
    if (!(min_speed > 1e-12 * max_speed))
        throw geometry_error("degenerate parametrization: speed vanishes");

    // Cumulative arc length from the anchor xi = 0 through the spectral
    // antiderivative of the speed: ell(xi) = mean*xi + P(xi) - P(0), P periodic.
    const double mean = periodic_mean(speed);
    TrigInterp speed_interp(speed);
    TrigInterp osc_anti(spectral_antiderivative(speed));
    const double p0 = osc_anti(0.0);
    auto ell = [&](double xi) { return mean * xi + osc_anti(xi) - p0; };

    CurveInterp interp(curve);
    Curve out;
    out.samples.resize(static_cast<size_t>(m));
    const double tol = 1e-13 * std::max(1.0, mean * 2.0 * pi);
    for (int j = 0; j < m; ++j) {
        const double xi = -pi + 2.0 * pi * j / m;
        const double target = mean * xi; // constant-speed arc length from the anchor
        double g = xi;
        for (int it = 0; it < 50; ++it) {
            const double r = ell(g) - target;
            if (std::abs(r) < tol) break;
            g -= r / speed_interp(g);
        }
        out.samples[j] = interp(g);
    }
    return out;
}

ValidationVerdict validate_patch_family(const ContourState& state, const PatchFamily& family) {
    ValidationVerdict verdict;
    auto add = [&](ValidationIssue::Kind kind, int a, int b, std::string detail) {
        verdict.issues.push_back({kind, a, b, std::move(detail)});
    };

    const int n = static_cast<int>(state.curves.size());
    if (n != family.size() || state.domain != family.domain) {
        add(ValidationIssue::Kind::FamilyMismatch, -1, -1,
            "patch family does not match the state (size or domain)");
        return verdict;
    }
    for (int i = 0; i < family.size(); ++i) {
        if (!std::isfinite(family.strengths[i]) || family.strengths[i] == 0.0)
            add(ValidationIssue::Kind::ZeroStrength, i, -1, "strength must be nonzero");
    }

    const int m0 = state.grid_size();
    for (int i = 0; i < n; ++i) {
        const Curve& c = state.curves[i];
        const int m = c.grid_size();
        if (m < 16 || (m & (m - 1)) != 0 || m != m0) {
            add(ValidationIssue::Kind::GridSize, i, -1,
                "grid size must be a shared power of two >= 16");
            return verdict; // geometry checks below assume sane grids
        }
    }

    for (int i = 0; i < n; ++i) {
        const Curve& c = state.curves[i];
        if (!c.ccw())
            add(ValidationIssue::Kind::Orientation, i, -1,
                "curve must run counter-clockwise");
        if (curve_self_intersects(c.samples))
            add(ValidationIssue::Kind::SelfIntersection, i, -1, "sample polygon self-intersects");
        if (state.domain == Domain::HalfPlane) {
            for (const Vec2& p : c.samples) {
                if (!(p.y > 0.0)) {
                    add(ValidationIssue::Kind::HalfPlaneExit, i, -1,
                        "sample with x2 <= 0 in half-plane mode");
                    break;
                }
            }
        }
    }

    for (int i = 0; i < n; ++i) {
        for (int k = i + 1; k < n; ++k) {
            const auto& a = state.curves[i].samples;
            const auto& b = state.curves[k].samples;
            const int ma = static_cast<int>(a.size()), mb = static_cast<int>(b.size());
            bool crossing = false;
            for (int p = 0; p < ma && !crossing; ++p) {
                for (int q = 0; q < mb; ++q) {
                    if (detail::segments_intersect(a[p], a[(p + 1) % ma], b[q],
                                                   b[(q + 1) % mb])) {
                        crossing = true;
                        break;
                    }
                }
            }
            if (crossing) {
                add(ValidationIssue::Kind::BoundaryIntersection, i, k, "boundaries intersect");
            } else if (detail::point_in_polygon(a[0], b) || detail::point_in_polygon(b[0], a)) {
                add(ValidationIssue::Kind::BoundaryIntersection, i, k,
                    "one patch is nested inside another");
            }
        }
    }
    return verdict;
}

} // namespace msqg
