#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "msqg/curve.hpp"

namespace msqg::test {

// All random draws in the suite go through this map so corpora are pinned to
// the engine's 32-bit output stream, not to distribution internals.
inline double u01(std::mt19937& rng) { return rng() / 4294967296.0; }

inline double uniform(std::mt19937& rng, double lo, double hi) {
    return lo + (hi - lo) * u01(rng);
}

// Band-limited star-shaped perturbation of a circle: smooth, counter-
// clockwise, and comfortably simple for amplitudes below ~0.15.
inline Curve random_smooth_curve(std::mt19937& rng, int grid_size, Vec2 center,
                                 double base_radius, double amplitude = 0.1) {
    std::vector<double> ac(5), bc(5);
    for (int m = 1; m <= 4; ++m) {
        ac[m] = amplitude * (2.0 * u01(rng) - 1.0) / (1.0 + m * m);
        bc[m] = amplitude * (2.0 * u01(rng) - 1.0) / (1.0 + m * m);
    }
    Curve curve;
    curve.samples.resize(grid_size);
    for (int j = 0; j < grid_size; ++j) {
        const double xi = -pi + 2.0 * pi * j / grid_size;
        double r = 1.0;
        for (int m = 1; m <= 4; ++m)
            r += ac[m] * std::cos(m * xi) + bc[m] * std::sin(m * xi);
        curve.samples[j] = center + base_radius * r * Vec2{std::cos(xi), std::sin(xi)};
    }
    return curve;
}

// Disjoint perturbed disks with O(1) strengths of either sign.  Centers sit
// on a coarse lattice so boundaries stay separated for any draw; half-plane
// states keep a clearance of at least ~0.8 above the axis.
inline void random_state(std::mt19937& rng, int n_patches, int grid_size, Domain domain,
                         ContourState& state, PatchFamily& family) {
    state = ContourState{};
    family = PatchFamily{};
    state.domain = domain;
    family.domain = domain;
    for (int k = 0; k < n_patches; ++k) {
        const double radius = uniform(rng, 0.6, 0.9);
        const Vec2 center{-1.6 + 3.2 * k + uniform(rng, -0.2, 0.2),
                          (domain == Domain::HalfPlane ? 2.0 : 0.0) + uniform(rng, -0.2, 0.2)};
        state.curves.push_back(random_smooth_curve(rng, grid_size, center, radius));
        double theta = uniform(rng, 0.5, 1.5);
        if (u01(rng) < 0.5) theta = -theta;
        family.strengths.push_back(theta);
    }
}

} // namespace msqg::test
