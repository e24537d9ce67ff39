#pragma once

#include <vector>

#include "msqg/curve.hpp"

namespace msqg {

struct RegularizationSpec {
    enum class Kind { Plain, BetaKernel, Mollified };

    Kind kind = Kind::Plain;
    double beta = 0.0;        // BetaKernel: > 0
    double epsilon = 0.0;     // Mollified: > 0
    double drift_const = 10.0; // Mollified upward drift coefficient (half-plane only)
    double ref_norm_M = 2.0;   // Mollified reference norm bound, >= 2
    double c0 = 1.0;           // Mollified epsilon guard scale: eps < c0/(4 ref_norm_M)^2

    static RegularizationSpec plain();
    static RegularizationSpec beta_kernel(double beta);
    static RegularizationSpec mollified(double epsilon, double drift_const = 10.0,
                                        double ref_norm_M = 2.0, double c0 = 1.0);

    void check() const; // throws validation_error
};

struct RhsField {
    // values[k][j] = d/dt z_k(xi_j)
    std::vector<std::vector<Vec2>> values;
    // which (target curve, source curve, image) blocks contributed
    struct Block {
        int target = 0;
        int source = 0;
        bool image = false;
    };
    std::vector<Block> blocks;

    double linf() const;
    bool finite() const;
};

struct RhsOptions {
    // Replace the trapezoid cells around the vanishing eta = 0 term of each
    // self block with graded Gauss panels on the trig interpolant.
    bool refine_core = false;
};

// Tangent-difference form of the evolution right-hand side:
// d/dt z_k(xi) = (1/2a) sum_{i,m} theta_i trapezoid_eta(
//   [z_k'(xi) - y_i^m'(xi-eta)] / |z_k(xi) - y_i^m(xi-eta)|^{2a} ),
// m running over each curve and (half-plane) its mirror image; the eta = 0
// term of a curve against itself is 0 (removable).  Throws collision_error
// when a denominator falls below 1e-14 away from eta = 0.
RhsField contour_rhs(const ContourState& state, const PatchFamily& family, double alpha,
                     const RhsOptions& options = {});

// Same assembly with |.|^{2a} replaced by (|.|^2 + beta^2)^a; no singularity,
// no collision error.
RhsField contour_rhs_beta(const ContourState& state, const PatchFamily& family, double alpha,
                          double beta, const RhsOptions& options = {});

// Periodic convolution of the samples with the bump mollifier phi_eps.
Curve mollify_curve(const Curve& curve, double epsilon);

// Mollified scheme: phi_eps * [ plain rhs of the mollified state ] plus, in
// the half-plane, the constant upward drift drift_const * Theta * eps *
// ref_norm_M^{3+2a} e2 that keeps curves away from the axis.
RhsField contour_rhs_mollified(const ContourState& state, const PatchFamily& family,
                               double alpha, const RegularizationSpec& spec,
                               const RhsOptions& options = {});

// Dispatch on spec.kind.
RhsField contour_rhs_for(const ContourState& state, const PatchFamily& family, double alpha,
                         const RegularizationSpec& spec, const RhsOptions& options = {});

// Optional invariant check wired into every rhs assembly (enabled by test
// builds): ||rhs||_inf <= (4*pi*Theta/(a(1-2a))) (1/delta + F)^{2a} ||Z||_C2.
// A violation throws numeric_error; the worst observed ratio is recorded.
struct RhsBoundCheck {
    bool enabled = false;
    double worst_ratio = 0.0;
    long evaluations = 0;

    void reset() { worst_ratio = 0.0; evaluations = 0; }
};
RhsBoundCheck& rhs_bound_check();

} // namespace msqg
