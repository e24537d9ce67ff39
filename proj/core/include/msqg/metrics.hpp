#pragma once

#include <functional>
#include <vector>

#include "msqg/contour.hpp"
#include "msqg/curve.hpp"
#include "msqg/evolve.hpp"
#include "msqg/fields.hpp"

namespace msqg {

struct ComparisonReport {
    double hausdorff = 0.0;
    double sym_diff_area = 0.0;
    double l2_distance = 0.0;
    std::vector<double> per_patch_hausdorff;
    std::vector<double> per_patch_sym_diff;
    std::vector<double> per_patch_l2;
};

// Discrete symmetric Hausdorff distance between index-matched boundaries
// (point-to-segment distances over the sample polygons), maximized over k.
double hausdorff_distance(const ContourState& a, const ContourState& b);

struct SymDiffInfo {
    bool monte_carlo_fallback = false;
    double standard_error = 0.0;
    unsigned int rng_seed = 0;
};

// sum_k area(Omega_k triangle Omega~_k) by polygon boolean clipping of the
// sample polygons (coordinates snapped to a 1e-12 grid); falls back to Monte
// Carlo sampling with a fixed seed when clipping rejects the input.
double symmetric_difference_area(const ContourState& a, const ContourState& b,
                                 SymDiffInfo* info = nullptr);

// sqrt( sum_k trapezoid |z_k - z~_k|^2 ); grids must match.
double l2_curve_distance(const ContourState& a, const ContourState& b);

ComparisonReport compare_states(const ContourState& a, const ContourState& b);

// Scalar test function with analytic gradient; when antideriv_x1 (a function
// A with dA/dx = f) is supplied, area integrals of f reduce to a boundary
// quadrature, otherwise the polygon is triangulated.
struct ScalarTestFn {
    std::function<double(Vec2)> f;
    std::function<Vec2(Vec2)> grad;
    std::function<double(Vec2)> antideriv_x1; // optional
};

// Integral of f over the region enclosed by the curve.
double integrate_over_patch(const Curve& curve, const ScalarTestFn& fn);

// Integral of g(x) over the patch by triangulated quadrature (ear clipping +
// subdivision + degree-5 triangle rule).
double integrate_over_patch_raw(const Curve& curve, const std::function<double(Vec2)>& g,
                                int subdivision = 2);

// Transport consistency: central difference in t of sum_k theta_k
// integral_{Omega_k} f versus sum_k theta_k integral_{Omega_k} u . grad f,
// returned as |lhs - rhs| per interior snapshot time.
struct WeakFormReport {
    std::vector<double> times;
    std::vector<double> lhs;
    std::vector<double> rhs;
    std::vector<double> residual;
    double scale = 0.0; // max(|lhs|, |rhs|, theta * max patch area * max |grad f|)
};
WeakFormReport weak_form_residual(const std::vector<ContourState>& trajectory,
                                  const PatchFamily& family, const KernelSpec& kernel,
                                  const ScalarTestFn& testfn);

struct ExistenceEstimate {
    double t_est = 0.0;
    double alpha = 0.0;
    double n_patches = 0.0;
    double theta = 0.0;
    double m_norm = 0.0;
    double cbar = 0.0;
};

// T = (cbar * N * theta)^-1 * m_norm^{-(6+2a)}: guaranteed-existence horizon
// for data controlled by m_norm.
ExistenceEstimate existence_time_estimate(double alpha, double n_patches, double theta,
                                          double m_norm, double cbar);

enum class SweepKind { BetaSweep, EpsilonSweep, GridRefine, SplitStepHausdorff };

struct ConvergenceTable {
    SweepKind kind;
    std::vector<double> parameters;
    std::vector<double> distances;
    double fitted_slope = 0.0;
    double target_slope = 0.0;
    std::vector<int> excluded; // parameter indices whose run tripped a monitor
};

struct StudyConfig {
    ContourState initial;
    PatchFamily family;
    double alpha = 0.25;
    EvolveConfig evolve;
    // BetaSweep: beta values.  EpsilonSweep: epsilon values.  GridRefine:
    // grid sizes.  SplitStepHausdorff: sample times (multiples of the first).
    std::vector<double> parameters;
    // Template for the mollified spec in EpsilonSweep (epsilon overwritten).
    RegularizationSpec mollified_template = RegularizationSpec::mollified(0.1);
    // GridRefine builds the initial state per grid size.
    std::function<ContourState(int)> initial_for_grid;
    // SplitStepHausdorff integrates at evolve.dt and evolve.dt/2.
};

// Matched runs over >= 3 parameter values with a log-log slope fit:
//   BetaSweep  — final-time L2 distance to the plain run, target slope 1;
//   EpsilonSweep — final-time L2 distance to the plain run, slope reported;
//   GridRefine — Hausdorff between successive resolutions, target slope > 1;
//   SplitStepHausdorff — Hausdorff between the two step sizes vs time; the
//   theory gives an upper envelope ~ t^{1/(2a)}, reported not asserted.
ConvergenceTable convergence_study(SweepKind kind, const StudyConfig& config);

} // namespace msqg
