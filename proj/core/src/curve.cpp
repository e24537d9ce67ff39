#include "msqg/curve.hpp"

#include <cmath>

namespace msqg {

double Curve::shoelace() const {
    const int m = grid_size();
    double twice_area = 0.0;
    for (int j = 0; j < m; ++j) {
        const Vec2 a = samples[j];
        const Vec2 b = samples[(j + 1) % m];
        twice_area += a.x * b.y - a.y * b.x;
    }
    return 0.5 * twice_area;
}

void check_grid_size(int grid_size) {
    if (grid_size < 16 || (grid_size & (grid_size - 1)) != 0)
        throw validation_error("grid size must be a power of two >= 16, got " +
                               std::to_string(grid_size));
}

Curve make_circle(Vec2 center, double radius, int grid_size) {
    check_grid_size(grid_size);
    if (!(radius > 0.0)) throw validation_error("circle radius must be positive");
    Curve c;
    c.samples.resize(static_cast<size_t>(grid_size));
    for (int j = 0; j < grid_size; ++j) {
        const double xi = -pi + 2.0 * pi * j / grid_size;
        c.samples[j] = center + radius * Vec2{std::cos(xi), std::sin(xi)};
    }
    return c;
}

Curve make_ellipse(Vec2 center, double a, double b, double rotation, int grid_size) {
    check_grid_size(grid_size);
    if (!(a > 0.0) || !(b > 0.0)) throw validation_error("ellipse axes must be positive");
    const double cr = std::cos(rotation), sr = std::sin(rotation);
    Curve c;
    c.samples.resize(static_cast<size_t>(grid_size));
    for (int j = 0; j < grid_size; ++j) {
        const double xi = -pi + 2.0 * pi * j / grid_size;
        const Vec2 p{a * std::cos(xi), b * std::sin(xi)};
        c.samples[j] = center + Vec2{cr * p.x - sr * p.y, sr * p.x + cr * p.y};
    }
    return c;
}

void ContourState::check() const {
    if (!std::isfinite(time)) throw validation_error("state time is not finite");
    const int m = grid_size();
    for (const Curve& c : curves) {
        check_grid_size(c.grid_size());
        if (c.grid_size() != m)
            throw validation_error("all curves must share one grid size");
        for (const Vec2& p : c.samples) {
            if (!std::isfinite(p.x) || !std::isfinite(p.y))
                throw validation_error("curve sample is not finite");
            if (domain == Domain::HalfPlane && !(p.y > 0.0))
                throw geometry_error("half-plane state has a sample with x2 <= 0");
        }
    }
}

double PatchFamily::theta_total() const {
    double total = 0.0;
    for (double s : strengths) total += std::abs(s);
    return total;
}

void PatchFamily::check() const {
    if (strengths.empty()) throw validation_error("patch family must have N >= 1");
    for (double s : strengths) {
        if (!std::isfinite(s) || s == 0.0)
            throw validation_error("patch strengths must be finite and nonzero");
    }
}

void check_state_family(const ContourState& state, const PatchFamily& family) {
    state.check();
    family.check();
    if (static_cast<int>(state.curves.size()) != family.size())
        throw validation_error("state and family disagree on the number of patches");
    if (state.domain != family.domain)
        throw validation_error("state and family disagree on the domain");
}

} // namespace msqg
