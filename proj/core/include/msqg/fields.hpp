#pragma once

#include <array>
#include <vector>

#include "msqg/curve.hpp"

namespace msqg {

struct KernelSpec {
    double alpha = 0.25;           // in (0, 1/2)
    Domain domain = Domain::WholePlane;
    double beta = 0.0;             // >= 0; 0 means the unregularized kernel

    void check() const;            // throws validation_error
};

struct VelocityProbe {
    Vec2 point;
    Vec2 value;
    std::array<std::array<double, 2>, 2> gradient{}; // row i = d u_i / d(x,y)
    bool has_gradient = false;
};

struct VelocityEvalInfo {
    bool near_singular_fallback = false; // graded quadrature was used
    double min_node_distance = 0.0;      // distance from x to the nearest sample
};

// Velocity induced by the patch family at x, evaluated through the boundary
// form of the area integral: u(x) = -(1/2a) sum_{i,m} theta_i
// trapezoid_eta( y_i^m'(eta) / |x - y_i^m(eta)|^{2a} ), where m runs over the
// curve and (half-plane only) its mirror image.  When x sits within a couple
// of grid cells of a boundary and beta == 0, the integrand is steep and the
// affected curve is re-integrated with graded Gauss panels (reported in info).
Vec2 velocity_at(Vec2 x, const ContourState& state, const PatchFamily& family,
                 const KernelSpec& kernel, VelocityEvalInfo* info = nullptr);

// Ground-truth evaluator: adaptive 2-D area quadrature of the kernel over each
// patch (and mirror patches), done in polar chords around x on a densely
// resampled polygon.  Orders of magnitude slower than velocity_at; used by
// tests and the --oracle flag.
Vec2 velocity_at_oracle(Vec2 x, const ContourState& state, const PatchFamily& family,
                        const KernelSpec& kernel, double tol = 1e-8, int supersample = 16);

// u·n at every sample of every curve, n the outward unit normal.  Uses the
// same kernel-weighted tangent integrals as the evolution right-hand side;
// the vanishing eta = 0 term of a curve against itself is skipped.
std::vector<std::vector<double>> normal_velocity_on_boundary(const ContourState& state,
                                                             const PatchFamily& family,
                                                             const KernelSpec& kernel);

// Closed-form a priori bound (2*pi/(1-2a)) max|theta| + 2 sum |theta_k| area_k
// for the sampled velocity magnitude.
double uinf_bound(const PatchFamily& family, const ContourState& state, const KernelSpec& kernel);

// Companion Holder-quotient bound (8*pi/(a(1-2a))) max|theta| + 2 sum |theta_k| area_k:
// |u(x)-u(z)| <= uhold_bound * |x-z|^{1-2a} for |x-z| <= 1.
double uhold_bound(const PatchFamily& family, const ContourState& state, const KernelSpec& kernel);

// Central finite-difference velocity gradient with step 1e-5*(1+|x|).
VelocityProbe velocity_gradient(Vec2 x, const ContourState& state, const PatchFamily& family,
                                const KernelSpec& kernel);

struct ProbeFit {
    std::vector<double> abscissae;
    std::vector<double> values;
    double slope = 0.0; // least-squares log-log slope
};

// |u2(x1, h)| over the given heights above the half-plane axis; the expected
// log-log slope is 1 (velocity tangent to the axis).  Probe points inside a
// patch or that cross a boundary are rejected with validation_error.
ProbeFit vertical_velocity_probe(const ContourState& state, const PatchFamily& family,
                                 const KernelSpec& kernel, double x1,
                                 const std::vector<double>& heights);

// |grad u| sampled at x = far_direction * d over distances d from the patch
// cluster; expected log-log slope is -2*alpha for d large compared to the
// patch diameter.
ProbeFit gradient_decay_probe(const ContourState& state, const PatchFamily& family,
                              const KernelSpec& kernel, Vec2 far_direction,
                              const std::vector<double>& distances);

// max over r of |(u(P + r n) - u(P))·n| / r: the normal difference quotient
// at clearance from the boundary stays bounded.
double normal_difference_probe(const ContourState& state, const PatchFamily& family,
                               const KernelSpec& kernel, Vec2 point, Vec2 unit_normal,
                               const std::vector<double>& radii);

// Least-squares slope of log|y| vs log|x|; helper shared by the probes and
// the convergence studies.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

} // namespace msqg
