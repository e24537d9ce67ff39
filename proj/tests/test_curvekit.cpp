#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "msqg/curvekit.hpp"
#include "msqg/spectral.hpp"

#include "helpers.hpp"

using namespace msqg;
using msqg::test::random_smooth_curve;

namespace {

ContourState single(const Curve& curve, Domain domain = Domain::WholePlane) {
    ContourState state;
    state.curves.push_back(curve);
    state.domain = domain;
    return state;
}

double sup_point_norm(const ContourState& state) {
    double sup = 0.0;
    for (const Curve& curve : state.curves)
        for (Vec2 v : curve.samples) sup = std::max(sup, norm(v));
    return sup;
}

// The position contribution to h3^2: one squared sup per curve.
double position_part(const ContourState& state) {
    double total = 0.0;
    for (const Curve& curve : state.curves) {
        double sup = 0.0;
        for (Vec2 v : curve.samples) sup = std::max(sup, norm(v));
        total += sup * sup;
    }
    return total;
}

ContourState translate(const ContourState& state, Vec2 shift) {
    ContourState out = state;
    for (Curve& curve : out.curves)
        for (Vec2& v : curve.samples) v += shift;
    return out;
}

ContourState scale(const ContourState& state, double lambda) {
    ContourState out = state;
    for (Curve& curve : out.curves)
        for (Vec2& v : curve.samples) v = lambda * v;
    return out;
}

} // namespace

TEST_SUITE_BEGIN("curvekit");

TEST_CASE("spectral derivative of band-limited samples is exact") {
    const int m = 64;
    std::vector<double> samples(m), expected(m);
    for (int j = 0; j < m; ++j) {
        const double xi = -pi + 2.0 * pi * j / m;
        samples[j] = 0.3 + std::sin(3.0 * xi) - 2.0 * std::cos(7.0 * xi);
        expected[j] = 3.0 * std::cos(3.0 * xi) + 14.0 * std::sin(7.0 * xi);
    }
    const std::vector<double> deriv = spectral_derivative(samples, 1);
    for (int j = 0; j < m; ++j) CHECK(deriv[j] == doctest::Approx(expected[j]).epsilon(1e-10));
}

TEST_CASE("polygon area: circle, orientation, ellipse") {
    CHECK(polygon_area(make_circle({0, 0}, 1.0, 256)) == doctest::Approx(pi).epsilon(1e-6));
    Curve cw = make_circle({0, 0}, 1.0, 256);
    std::reverse(cw.samples.begin(), cw.samples.end());
    CHECK(polygon_area(cw) == doctest::Approx(-pi).epsilon(1e-6));
    CHECK(polygon_area(make_ellipse({0, 0}, 2.0, 1.0, 0.0, 256)) ==
          doctest::Approx(2.0 * pi).epsilon(1e-6));
}

TEST_CASE("arclength of the 2:1 ellipse matches adaptive quadrature") {
    CHECK(arclength(make_ellipse({0, 0}, 2.0, 1.0, 0.0, 256)) ==
          doctest::Approx(9.688448220547676).epsilon(1e-8));
}

TEST_CASE("h3 norm of the unit circle and its homogeneity") {
    const ContourState circle = single(make_circle({0, 0}, 1.0, 256));
    CHECK(h3_norm(circle) == doctest::Approx(std::sqrt(1.0 + 2.0 * pi)).epsilon(1e-8));
    CHECK(h3_norm(scale(circle, 2.0)) ==
          doctest::Approx(2.0 * std::sqrt(1.0 + 2.0 * pi)).epsilon(1e-8));
}

TEST_CASE("chord-arc functional on circles") {
    const ContourState circle = single(make_circle({0, 0}, 1.0, 512));
    CHECK(f_functional(circle) == doctest::Approx(pi / 2.0).epsilon(1e-6));
    // Scaling divides F until the floor at 1 bites.
    CHECK(f_functional(scale(circle, 4.0)) == doctest::Approx(1.0));
    CHECK(f_functional(scale(circle, 0.5)) == doctest::Approx(pi).epsilon(1e-6));

    ContourState pair = circle;
    pair.curves.push_back(make_circle({10, 0}, 1.0, 512));
    CHECK(f_functional(pair) == doctest::Approx(pi / 2.0).epsilon(1e-6));
}

TEST_CASE("chord-arc functional rejects coincident samples") {
    Curve bad = make_circle({0, 0}, 1.0, 32);
    bad.samples[10] = bad.samples[3];
    CHECK_THROWS_AS(f_functional(single(bad)), geometry_error);
}

TEST_CASE("boundary-gap functional") {
    CHECK(delta_functional(single(make_circle({0, 0}, 1.0, 256))) == doctest::Approx(1.0));

    ContourState far;
    far.curves.push_back(make_circle({0, 0}, 1.0, 256));
    far.curves.push_back(make_circle({4, 0}, 1.0, 256));
    CHECK(delta_functional(far) == doctest::Approx(1.0)); // capped at 1

    ContourState close;
    close.curves.push_back(make_circle({0, 0}, 1.0, 256));
    close.curves.push_back(make_circle({2.5, 0}, 1.0, 256));
    CHECK(delta_functional(close) == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(min_gap(close) == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(std::isinf(min_gap(single(make_circle({0, 0}, 1.0, 256)))));

    // delta(lambda Z) = min{lambda * gap, 1}
    CHECK(delta_functional(scale(close, 0.5)) == doctest::Approx(0.25).epsilon(1e-6));
    CHECK(delta_functional(scale(close, 3.0)) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("triple norm composes the three functionals") {
    const NormReport one = triple_norm(single(make_circle({0, 0}, 1.0, 256)));
    CHECK(one.h3 == doctest::Approx(std::sqrt(1.0 + 2.0 * pi)).epsilon(1e-8));
    CHECK(one.delta_inv == doctest::Approx(1.0));
    CHECK(one.f_functional == doctest::Approx(pi / 2.0).epsilon(1e-6));
    CHECK(one.c2 == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(one.triple == doctest::Approx(std::sqrt(1.0 + 2.0 * pi) + 1.0 + pi / 2.0)
                            .epsilon(1e-6));

    ContourState pair;
    pair.curves.push_back(make_circle({0, 0}, 1.0, 256));
    pair.curves.push_back(make_circle({2.5, 0}, 1.0, 256));
    const NormReport two = triple_norm(pair);
    // Each curve contributes its own squared position sup: 1 for the centered
    // circle, 3.5^2 for the one reaching x = 3.5, plus 2*pi of z''' energy each.
    const double expected_h3 = std::sqrt(1.0 + 3.5 * 3.5 + 4.0 * pi);
    CHECK(two.h3 == doctest::Approx(expected_h3).epsilon(1e-8));
    CHECK(two.delta_inv == doctest::Approx(2.0).epsilon(1e-6));
    CHECK(two.triple == doctest::Approx(expected_h3 + 2.0 + pi / 2.0).epsilon(1e-6));
}

TEST_CASE("functionals under rigid translation") {
    std::mt19937 rng(7u);
    ContourState state;
    state.curves.push_back(random_smooth_curve(rng, 128, {0.2, -0.1}, 1.0));
    state.curves.push_back(random_smooth_curve(rng, 128, {3.0, 0.4}, 0.8));
    const ContourState moved = translate(state, {1.75, -0.6});

    CHECK(f_functional(moved) == doctest::Approx(f_functional(state)).epsilon(1e-12));
    CHECK(delta_functional(moved) == doctest::Approx(delta_functional(state)).epsilon(1e-12));
    // Only the per-curve position sups move; the third-derivative energy is
    // translation invariant.
    const double energy = h3_norm(state) * h3_norm(state) - position_part(state);
    const double energy_moved = h3_norm(moved) * h3_norm(moved) - position_part(moved);
    CHECK(energy_moved == doctest::Approx(energy).epsilon(1e-8));
}

TEST_CASE("constant-speed reparametrization") {
    // Already uniform: identity up to the anchor.
    const Curve circle = make_circle({0, 0}, 1.0, 128);
    const Curve again = constant_speed_reparametrize(circle);
    for (int j = 0; j < 128; ++j) {
        CHECK(again.samples[j].x == doctest::Approx(circle.samples[j].x).epsilon(1e-10));
        CHECK(again.samples[j].y == doctest::Approx(circle.samples[j].y).epsilon(1e-10));
    }

    // 2:1 ellipse: uniform speed = perimeter / 2 pi.
    const Curve ellipse = constant_speed_reparametrize(make_ellipse({0, 0}, 2, 1, 0, 256));
    const std::vector<Vec2> speed = spectral_derivative(ellipse, 1);
    const double target = 9.688448220547676 / (2.0 * pi);
    for (Vec2 v : speed) CHECK(norm(v) == doctest::Approx(target).epsilon(1e-6));

    // Unevenly traversed circle comes back as the uniform circle: the anchor
    // z(0) = (cos(-pi), sin(-pi)) pins the output to the uniform grid.
    Curve warped;
    warped.samples.resize(256);
    for (int j = 0; j < 256; ++j) {
        const double xi = -pi + 2.0 * pi * j / 256;
        warped.samples[j] = {std::cos(xi + 0.5 * std::sin(xi)),
                             std::sin(xi + 0.5 * std::sin(xi))};
    }
    const Curve uniform = constant_speed_reparametrize(warped);
    const Curve reference = make_circle({0, 0}, 1.0, 256);
    for (int j = 0; j < 256; ++j)
        CHECK(norm(uniform.samples[j] - reference.samples[j]) < 1e-8);

    // Idempotence.
    const Curve twice = constant_speed_reparametrize(ellipse);
    for (int j = 0; j < 256; ++j)
        CHECK(norm(twice.samples[j] - ellipse.samples[j]) < 1e-10);

    // Area is a property of the point set.
    CHECK(polygon_area(ellipse) ==
          doctest::Approx(polygon_area(make_ellipse({0, 0}, 2, 1, 0, 256))).epsilon(1e-8));
}

TEST_CASE("reparametrization keeps the norm ratio bounded over a corpus") {
    // Surrogate for the arc-length lemma: |||Y||| stays controlled by a power
    // of |||Z|||.  The bound must not degrade when the grid is refined.
    double worst[2] = {0.0, 0.0};
    for (int pass = 0; pass < 2; ++pass) {
        const int m = pass == 0 ? 128 : 256;
        std::mt19937 rng(42u);
        for (int i = 0; i < 200; ++i) {
            ContourState state;
            state.curves.push_back(random_smooth_curve(rng, m, {0, 0}, 1.0, 0.12));
            const NormReport before = triple_norm(state);
            if (before.triple > 10.0) continue;
            ContourState after = state;
            after.curves[0] = constant_speed_reparametrize(state.curves[0]);
            const double ratio = triple_norm(after).triple / std::pow(before.triple, 8.0);
            worst[pass] = std::max(worst[pass], ratio);
        }
        CHECK(std::isfinite(worst[pass]));
    }
    MESSAGE("norm-ratio bound: M=128 -> ", worst[0], ", M=256 -> ", worst[1]);
    CHECK(worst[1] <= worst[0] * 1.05);
}

TEST_CASE("patch family validation verdicts") {
    PatchFamily family;
    family.strengths = {1.0, -0.5};
    family.domain = Domain::HalfPlane;

    ContourState good;
    good.domain = Domain::HalfPlane;
    good.curves.push_back(make_circle({0, 3}, 1.0, 64));
    good.curves.push_back(make_circle({3, 3}, 1.0, 64));
    CHECK(validate_patch_family(good, family).ok());

    // Figure-eight: adjacent sample segments cross.
    Curve eight;
    eight.samples.resize(64);
    for (int j = 0; j < 64; ++j) {
        const double xi = -pi + 2.0 * pi * j / 64 + 0.29;
        eight.samples[j] = {std::sin(xi), std::sin(2.0 * xi) + 2.0};
    }
    ContourState crossed = good;
    crossed.curves[0] = eight;
    const ValidationVerdict self = validate_patch_family(crossed, family);
    CHECK_FALSE(self.ok());
    bool found_self = false;
    for (const ValidationIssue& issue : self.issues)
        found_self |= issue.kind == ValidationIssue::Kind::SelfIntersection;
    CHECK(found_self);

    // Dips below the axis.
    ContourState low = good;
    low.curves[1] = make_circle({3, 0.5}, 1.0, 64);
    const ValidationVerdict exit = validate_patch_family(low, family);
    CHECK_FALSE(exit.ok());
    bool found_exit = false;
    for (const ValidationIssue& issue : exit.issues)
        found_exit |= issue.kind == ValidationIssue::Kind::HalfPlaneExit;
    CHECK(found_exit);

    // Clockwise orientation.
    ContourState cw = good;
    std::reverse(cw.curves[0].samples.begin(), cw.curves[0].samples.end());
    const ValidationVerdict orient = validate_patch_family(cw, family);
    bool found_orient = false;
    for (const ValidationIssue& issue : orient.issues)
        found_orient |= issue.kind == ValidationIssue::Kind::Orientation;
    CHECK(found_orient);

    // Overlapping boundaries.
    ContourState overlap = good;
    overlap.curves[1] = make_circle({1.2, 3}, 1.0, 64);
    const ValidationVerdict touching = validate_patch_family(overlap, family);
    bool found_pair = false;
    for (const ValidationIssue& issue : touching.issues)
        found_pair |= issue.kind == ValidationIssue::Kind::BoundaryIntersection;
    CHECK(found_pair);

    // Zero strength.
    PatchFamily zero = family;
    zero.strengths[0] = 0.0;
    const ValidationVerdict weightless = validate_patch_family(good, zero);
    bool found_zero = false;
    for (const ValidationIssue& issue : weightless.issues)
        found_zero |= issue.kind == ValidationIssue::Kind::ZeroStrength;
    CHECK(found_zero);
}

TEST_CASE("grid size gate") {
    CHECK_THROWS_AS(check_grid_size(24), validation_error);
    CHECK_THROWS_AS(check_grid_size(8), validation_error);
    CHECK_NOTHROW(check_grid_size(16));
    CHECK_NOTHROW(check_grid_size(1024));
}

TEST_SUITE_END();
