#include <algorithm>
#include <cmath>
#include <vector>

#include "geom_util.hpp"
#include "msqg/fields.hpp"
#include "msqg/spectral.hpp"

// Ground-truth velocity: the kernel integrated over each patch as an area
// integral.  In polar coordinates around the evaluation point the radial
// integral has a closed form per ray/polygon chord, so the 2-D quadrature
// reduces to an adaptive 1-D sweep over the ray angle.

namespace msqg {

namespace {

struct WeightedPolygon {
    std::vector<Vec2> vertices;
    double strength; // theta, negated for half-plane mirror copies
    bool contains_x; // precomputed point-in-polygon for the evaluation point
};

// Radial integral of the kernel weight along one inside-chord [a, b]:
//   beta == 0:  int_a^b r^{-2 alpha} dr
//   beta  > 0:  int_a^b r (r^2 + beta^2)^{-1-alpha} dr
double chord_weight(double a, double b, double alpha, double beta) {
    if (beta == 0.0)
        return (std::pow(b, 1.0 - 2.0 * alpha) - std::pow(a, 1.0 - 2.0 * alpha)) /
               (1.0 - 2.0 * alpha);
    const double b2 = beta * beta;
    return (std::pow(a * a + b2, -alpha) - std::pow(b * b + b2, -alpha)) / (2.0 * alpha);
}

// Crossing radii of the ray x + r (cos phi, sin phi), r > 0, with the polygon.
// Segments are half-open in t so shared vertices count once.  Returns false on
// a parity mismatch (ray grazing a vertex); the caller retries a nudged phi.
bool ray_crossings(const WeightedPolygon& poly, Vec2 x, double phi, std::vector<double>& out) {
    out.clear();
    const Vec2 d{std::cos(phi), std::sin(phi)};
    const size_t n = poly.vertices.size();
    for (size_t j = 0; j < n; ++j) {
        const Vec2 p = poly.vertices[j];
        const Vec2 s = poly.vertices[(j + 1) % n] - p;
        const double denom = detail::cross(d, s);
        if (denom == 0.0) continue;
        const Vec2 b = p - x;
        const double t = detail::cross(b, d) / denom;
        if (t < 0.0 || t >= 1.0) continue;
        const double r = detail::cross(b, s) / denom;
        if (r > 1e-14) out.push_back(r);
    }
    std::sort(out.begin(), out.end());
    const bool odd = out.size() % 2 != 0;
    return odd == poly.contains_x;
}

double chord_sum(const WeightedPolygon& poly, Vec2 x, double phi, double alpha, double beta,
                 std::vector<double>& scratch) {
    for (int attempt = 0; attempt < 4; ++attempt) {
        if (!ray_crossings(poly, x, phi + attempt * 1e-9, scratch)) continue;
        if (poly.contains_x) scratch.insert(scratch.begin(), 0.0);
        double sum = 0.0;
        for (size_t j = 0; j + 1 < scratch.size(); j += 2)
            sum += chord_weight(scratch[j], scratch[j + 1], alpha, beta);
        return sum;
    }
    throw numeric_error("oracle ray repeatedly grazed a polygon vertex");
}

struct RaySweep {
    const std::vector<WeightedPolygon>& polys;
    Vec2 x;
    double alpha, beta;
    mutable std::vector<double> scratch;

    Vec2 operator()(double phi) const {
        double r_total = 0.0;
        for (const WeightedPolygon& poly : polys)
            r_total += poly.strength * chord_sum(poly, x, phi, alpha, beta, scratch);
        return Vec2{-std::sin(phi), std::cos(phi)} * r_total;
    }
};

Vec2 simpson(double a, double b, Vec2 fa, Vec2 fm, Vec2 fb) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

Vec2 adaptive_simpson(const RaySweep& f, double a, double b, Vec2 fa, Vec2 fm, Vec2 fb, Vec2 whole,
                      double tol, int depth) {
    const double m = 0.5 * (a + b);
    const Vec2 flm = f(0.5 * (a + m));
    const Vec2 frm = f(0.5 * (m + b));
    const Vec2 left = simpson(a, m, fa, flm, fm);
    const Vec2 right = simpson(m, b, fm, frm, fb);
    const Vec2 delta = left + right - whole;
    if (depth <= 0 || std::max(std::abs(delta.x), std::abs(delta.y)) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

} // namespace

Vec2 velocity_at_oracle(Vec2 x, const ContourState& state, const PatchFamily& family,
                        const KernelSpec& kernel, double tol, int supersample) {
    check_state_family(state, family);
    kernel.check();
    if (kernel.domain != state.domain)
        throw validation_error("kernel and state disagree on the domain");
    if (state.domain == Domain::HalfPlane && !(x.y >= 0.0))
        throw validation_error("evaluation point must lie in the closed half-plane");
    if (!(tol > 0.0)) throw validation_error("oracle tolerance must be positive");
    if (supersample < 1) throw validation_error("oracle supersample factor must be >= 1");

    std::vector<WeightedPolygon> polys;
    for (size_t i = 0; i < state.curves.size(); ++i) {
        const Curve& c = state.curves[i];
        CurveInterp interp(c);
        const int fine = supersample * c.grid_size();
        WeightedPolygon poly;
        poly.vertices.resize(fine);
        for (int j = 0; j < fine; ++j) poly.vertices[j] = interp(-pi + 2.0 * pi * j / fine);
        poly.strength = family.strengths[i];
        if (detail::point_polygon_distance(x, poly.vertices) < 1e-12 * (1.0 + norm(x)))
            throw validation_error("oracle evaluation point lies on a patch boundary");
        poly.contains_x = detail::point_in_polygon(x, poly.vertices);
        polys.push_back(std::move(poly));
        if (state.domain == Domain::HalfPlane) {
            WeightedPolygon mirror;
            mirror.vertices.resize(fine);
            for (int j = 0; j < fine; ++j) mirror.vertices[j] = reflect(polys.back().vertices[j]);
            mirror.strength = -family.strengths[i];
            mirror.contains_x = detail::point_in_polygon(x, mirror.vertices);
            polys.push_back(std::move(mirror));
        }
    }

    const RaySweep sweep{polys, x, kernel.alpha, kernel.beta, {}};
    const int panels = 64;
    Vec2 total{0.0, 0.0};
    Vec2 f_left = sweep(0.0);
    for (int p = 0; p < panels; ++p) {
        const double a = 2.0 * pi * p / panels;
        const double b = 2.0 * pi * (p + 1) / panels;
        const Vec2 fm = sweep(0.5 * (a + b));
        const Vec2 fb = sweep(b);
        const Vec2 whole = simpson(a, b, f_left, fm, fb);
        total += adaptive_simpson(sweep, a, b, f_left, fm, fb, whole, tol / panels, 24);
        f_left = fb;
    }
    return total;
}

} // namespace msqg
