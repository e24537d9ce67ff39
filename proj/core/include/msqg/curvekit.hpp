#pragma once

#include <limits>
#include <string>
#include <vector>

#include "msqg/curve.hpp"

namespace msqg {

// Area enclosed by the curve via the Green identity (1/2)∮(z1 z2' - z2 z1') dxi
// with a spectral derivative; converges spectrally in M for smooth curves and
// is signed (positive for counter-clockwise orientation).
double polygon_area(const Curve& curve);

// Arc length by trapezoid quadrature of the spectral speed |z'|.
double arclength(const Curve& curve);

// sqrt( sum_k ( sup_j |z_k(xi_j)|^2 + trapezoid(|z_k'''|^2) ) ).
double h3_norm(const ContourState& state);

// max over curves and derivative orders 0..2 of the grid sup of |d^j z|.
double c2_norm(const ContourState& state);

// max{ sup over single-curve grid pairs of geodesic |xi - eta| / |z(xi) - z(eta)|, 1 }.
// Throws geometry_error if two samples of one curve coincide exactly.
double f_functional(const ContourState& state);

// 1 if N == 1, else min{ min cross-curve segment distance, 1 }.
double delta_functional(const ContourState& state);

// Uncapped minimum distance between distinct boundaries; +inf when N == 1.
double min_gap(const ContourState& state);

NormReport triple_norm(const ContourState& state);

// Same point set, |y'| constant to ~1e-10 relative, anchored at y(0) = z(0).
Curve constant_speed_reparametrize(const Curve& curve);

struct ValidationIssue {
    enum class Kind {
        GridSize,
        FamilyMismatch,
        ZeroStrength,
        Orientation,
        SelfIntersection,
        BoundaryIntersection,
        HalfPlaneExit,
    };
    Kind kind;
    int curve_a = -1;
    int curve_b = -1;
    std::string detail;
};

struct ValidationVerdict {
    std::vector<ValidationIssue> issues;
    bool ok() const { return issues.empty(); }
};

// Full geometric validation: grid shape, nonzero strengths, counter-clockwise
// orientation, per-curve simplicity, pairwise disjoint boundaries, and (in the
// half-plane) strictly positive second coordinates.
ValidationVerdict validate_patch_family(const ContourState& state, const PatchFamily& family);

} // namespace msqg
