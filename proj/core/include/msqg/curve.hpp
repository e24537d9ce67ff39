#pragma once

#include <vector>

#include "msqg/types.hpp"

namespace msqg {

// Closed curve sampled at the uniform periodic grid xi_j = -pi + 2*pi*j/M,
// j = 0..M-1, with no duplicated endpoint.  M must be a power of two >= 16.
struct Curve {
    std::vector<Vec2> samples;

    int grid_size() const { return static_cast<int>(samples.size()); }
    // Signed area of the sample polygon (shoelace); positive when the samples
    // run counter-clockwise.
    double shoelace() const;
    bool ccw() const { return shoelace() > 0.0; }
};

// Throws validation_error unless M is a power of two >= 16.
void check_grid_size(int grid_size);

Curve make_circle(Vec2 center, double radius, int grid_size);
// Axis lengths a (horizontal) and b (vertical) before rotating by `rotation`
// radians about the center.
Curve make_ellipse(Vec2 center, double a, double b, double rotation, int grid_size);

struct ContourState {
    std::vector<Curve> curves;
    double time = 0.0;
    Domain domain = Domain::WholePlane;

    int grid_size() const { return curves.empty() ? 0 : curves.front().grid_size(); }
    // Structural checks only (shared power-of-two grid, half-plane positivity);
    // throws validation_error / geometry_error.
    void check() const;
};

struct PatchFamily {
    std::vector<double> strengths;
    Domain domain = Domain::WholePlane;

    int size() const { return static_cast<int>(strengths.size()); }
    // Sum of |theta_k|.
    double theta_total() const;
    // N >= 1 and every strength nonzero; throws validation_error.
    void check() const;
};

// Throws validation_error unless the family matches the state (size, domain)
// and both pass their structural checks.
void check_state_family(const ContourState& state, const PatchFamily& family);

struct NormReport {
    double h3 = 0.0;
    double c2 = 0.0;
    double delta_inv = 1.0;
    double f_functional = 1.0;
    double triple = 0.0; // h3 + delta_inv + f_functional
};

} // namespace msqg
