#include <doctest.h>

#include <cmath>
#include <cstring>
#include <random>
#include <vector>

#include "msqg/curvekit.hpp"
#include "msqg/evolve.hpp"
#include "msqg/metrics.hpp"
#include "msqg/spectral.hpp"

#include "helpers.hpp"

using namespace msqg;

namespace {

double state_diff(const ContourState& a, const ContourState& b) {
    double worst = 0.0;
    for (std::size_t k = 0; k < a.curves.size(); ++k)
        for (std::size_t j = 0; j < a.curves[k].samples.size(); ++j)
            worst = std::max(worst, norm(a.curves[k].samples[j] - b.curves[k].samples[j]));
    return worst;
}

ContourState smooth_pair(int grid_size) {
    ContourState state;
    state.curves.push_back(make_ellipse({-1.4, 0.0}, 1.0, 0.7, 0.3, grid_size));
    state.curves.push_back(make_circle({1.5, 0.2}, 0.8, grid_size));
    return state;
}

PatchFamily family_for(const ContourState& state, std::vector<double> strengths) {
    PatchFamily family;
    family.domain = state.domain;
    family.strengths = std::move(strengths);
    return family;
}

} // namespace

TEST_SUITE_BEGIN("evolve");

TEST_CASE("threshold validation and verdict names") {
    MonitorThresholds thresholds;
    CHECK_NOTHROW(thresholds.check());
    thresholds.delta_min = 0.0;
    CHECK_THROWS_AS(thresholds.check(), validation_error);

    CHECK(std::strcmp(to_string(BlowupKind::None), "None") == 0);
    CHECK(std::strcmp(to_string(BlowupKind::BoundariesTouch), "BoundariesTouch") == 0);
    CHECK(std::strcmp(to_string(BlowupKind::SelfTouch), "SelfTouch") == 0);
    CHECK(std::strcmp(to_string(BlowupKind::H3Blowup), "H3Blowup") == 0);
    CHECK(std::strcmp(to_string(BlowupKind::NodeDegeneracy), "NodeDegeneracy") == 0);
}

TEST_CASE("monitor maps threshold breaches to the right verdict") {
    const MonitorThresholds defaults;

    ContourState healthy;
    healthy.curves.push_back(make_circle({0, 0}, 1.0, 64));
    CHECK(monitor(healthy, defaults).kind == BlowupKind::None);

    // Boundaries separated by half the gap threshold.
    ContourState touching;
    touching.curves.push_back(make_circle({0, 0}, 1.0, 64));
    touching.curves.push_back(make_circle({2.0 + defaults.delta_min / 2.0, 0}, 1.0, 64));
    const BlowupVerdict near = monitor(touching, defaults);
    CHECK(near.kind == BlowupKind::BoundariesTouch);
    CHECK(!near.detail.empty());

    // One node dragged to the far side: huge chord-arc ratio, healthy segments.
    ContourState cusp;
    cusp.curves.push_back(make_circle({0, 0}, 1.0, 64));
    cusp.curves[0].samples[16] = cusp.curves[0].samples[48] + Vec2{1e-3, 0.0};
    CHECK(monitor(cusp, defaults).kind == BlowupKind::SelfTouch);

    // One segment collapsed to 0.003 (ratio ~0.03) while the chord-arc ratio
    // stays below the default 50.
    ContourState pinch;
    pinch.curves.push_back(make_circle({0, 0}, 1.0, 64));
    pinch.curves[0].samples[1] = {std::cos(-pi + 0.003), std::sin(-pi + 0.003)};
    CHECK(monitor(pinch, defaults).kind == BlowupKind::NodeDegeneracy);

    // A healthy circle against an impossible H3 budget.
    MonitorThresholds tight = defaults;
    tight.h3_max = 1.0;
    CHECK(monitor(healthy, tight).kind == BlowupKind::H3Blowup);
}

TEST_CASE("dt = 0 leaves the state untouched") {
    const ContourState state = smooth_pair(64);
    const PatchFamily family = family_for(state, {1.0, -0.8});
    const ContourState next =
        step(state, family, 0.25, RegularizationSpec::plain(), 0.0, Scheme::RK4);
    CHECK(state_diff(state, next) == 0.0);
    CHECK(next.time == state.time);
}

TEST_CASE("a disk stays a disk through one RK4 step") {
    ContourState state;
    state.curves.push_back(make_circle({0, 0}, 1.0, 256));
    const PatchFamily family = family_for(state, {1.0});
    const double area0 = polygon_area(state.curves[0]);
    const ContourState next =
        step(state, family, 0.25, RegularizationSpec::plain(), 1e-3, Scheme::RK4);
    CHECK(next.time == doctest::Approx(1e-3));
    const double area1 = polygon_area(next.curves[0]);
    CHECK(std::abs(area1 - area0) / area0 < 1e-8);
    for (const Vec2& v : next.curves[0].samples)
        CHECK(std::abs(norm(v) - 1.0) < 1e-6);
}

TEST_CASE("one step vs two half steps shows order >= 4") {
    const ContourState state = smooth_pair(128);
    const PatchFamily family = family_for(state, {1.0, -0.8});
    const RegularizationSpec reg = RegularizationSpec::plain();
    const double alpha = 0.2;

    auto richardson_gap = [&](double dt) {
        const ContourState one = step(state, family, alpha, reg, dt, Scheme::RK4);
        const ContourState half = step(state, family, alpha, reg, dt / 2, Scheme::RK4);
        const ContourState two = step(half, family, alpha, reg, dt / 2, Scheme::RK4);
        return state_diff(one, two);
    };
    const double coarse = richardson_gap(2e-3);
    const double fine = richardson_gap(1e-3);
    CHECK(coarse > 0.0);
    const double order = std::log2(coarse / fine);
    CHECK(order >= 4.0);
}

TEST_CASE("forward then backward step cancels to high order") {
    const ContourState state = smooth_pair(128);
    const PatchFamily family = family_for(state, {1.0, -0.8});
    const RegularizationSpec reg = RegularizationSpec::plain();
    const double alpha = 0.2;

    auto round_trip = [&](double dt) {
        const ContourState fwd = step(state, family, alpha, reg, dt, Scheme::RK4);
        const ContourState back = step(fwd, family, alpha, reg, -dt, Scheme::RK4);
        return state_diff(state, back);
    };
    const double coarse = round_trip(2e-3);
    const double fine = round_trip(1e-3);
    CHECK(coarse < 1e-10);
    // O(dt^5) local error: halving dt shrinks the defect ~32x.
    CHECK(fine < coarse / 8.0);
}

TEST_CASE("the step guard rejects dt beyond the stability limit") {
    const ContourState state = smooth_pair(64);
    const PatchFamily family = family_for(state, {1.0, -0.8});
    CHECK_THROWS_AS(step(state, family, 0.25, RegularizationSpec::plain(), 10.0, Scheme::RK4),
                    numeric_error);
}

TEST_CASE("disk run conserves area and finishes clean; tracers ride the rotation") {
    ContourState state;
    state.curves.push_back(make_circle({0, 0}, 1.0, 256));
    const PatchFamily family = family_for(state, {1.0});
    EvolveConfig config;
    config.t_end = 1.0;
    config.cadence = 0.05;
    const RunResult result = run(state, family, 0.1, RegularizationSpec::plain(), config);

    CHECK(result.verdict.kind == BlowupKind::None);
    CHECK(result.steps_taken > 0);
    REQUIRE(result.snapshots.size() == 21);
    CHECK(result.diagnostics.size() == 21);
    CHECK(result.snapshots.front().time == doctest::Approx(0.0));
    CHECK(result.snapshots.back().time == doctest::Approx(1.0));

    const double area0 = polygon_area(state.curves[0]);
    const double area1 = polygon_area(result.snapshots.back().curves[0]);
    CHECK(std::abs(area1 - area0) / area0 < 1e-4);
    for (const Vec2& v : result.snapshots.back().curves[0].samples)
        CHECK(std::abs(norm(v) - 1.0) < 1e-5);

    // A tracer seeded at radius 2 rides a pure rotation: radius preserved,
    // cluster Jacobian stays at 1, distance to the boundary stays near 1.
    TracerOptions options;
    options.jacobian = true;
    const std::vector<TracerPath> paths =
        advect_tracers({{2.0, 0.0}}, result.snapshots, family, 0.1, options);
    REQUIRE(paths.size() == 1);
    const TracerPath& path = paths[0];
    CHECK(path.seed.x == 2.0);
    CHECK(path.positions.front().x == 2.0);
    CHECK(path.positions.front().y == 0.0);
    REQUIRE(path.positions.size() == path.times.size());
    CHECK(path.times.back() == doctest::Approx(1.0));
    for (const Vec2& p : path.positions) CHECK(std::abs(norm(p) - 2.0) < 1e-4);
    // It actually moved along the circle.
    CHECK(norm(path.positions.back() - path.positions.front()) > 0.05);
    for (double j : path.jacobian_estimate) CHECK(std::abs(j - 1.0) < 1e-3);
    for (double d : path.dist_to_boundary) CHECK(d == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(!path.crossed_boundary);
    for (const Vec2& u : path.velocities) CHECK(norm(u) > 0.0);
}

TEST_CASE("two like-signed disks produce a full diagnostics series") {
    ContourState state;
    state.curves.push_back(make_circle({-1.15, 0}, 1.0, 128));
    state.curves.push_back(make_circle({1.15, 0}, 1.0, 128));
    const PatchFamily family = family_for(state, {1.0, 1.0});
    EvolveConfig config;
    config.t_end = 0.2;
    config.cadence = 0.05;
    // At alpha = 0.1 the self-induced tangential drift slides nodes along the
    // boundary quickly; periodic resampling keeps the spacing healthy.
    config.resample_every = 4;
    const RunResult result = run(state, family, 0.1, RegularizationSpec::plain(), config);

    REQUIRE(result.diagnostics.size() == 5);
    for (std::size_t i = 0; i < result.diagnostics.size(); ++i) {
        const DiagnosticsRecord& record = result.diagnostics[i];
        CHECK(record.t == doctest::Approx(0.05 * static_cast<double>(i)));
        CHECK(std::isfinite(record.norms.triple));
        CHECK(record.norms.triple > 0.0);
        CHECK(record.areas.size() == 2);
        CHECK(record.arclens.size() == 2);
        CHECK(std::isfinite(record.min_gap));
        CHECK(record.min_gap > 0.0);
    }
    CHECK(result.verdict.time <= config.t_end);
}

TEST_CASE("a run with uneven final interval records the extra endpoint") {
    ContourState state;
    state.curves.push_back(make_circle({0, 0}, 1.0, 64));
    const PatchFamily family = family_for(state, {1.0});
    EvolveConfig config;
    config.t_end = 0.22;
    config.cadence = 0.05;
    const RunResult result = run(state, family, 0.2, RegularizationSpec::plain(), config);
    REQUIRE(result.diagnostics.size() == 6);
    CHECK(result.diagnostics.back().t == doctest::Approx(0.22));
    CHECK(result.diagnostics[4].t == doctest::Approx(0.20));

    // Single patch: the inter-boundary gap column is +inf.
    CHECK(std::isinf(result.diagnostics.front().min_gap));
}

TEST_CASE("nearly touching boundaries trip the monitor before any step") {
    ContourState state;
    state.curves.push_back(make_circle({0, 0}, 1.0, 64));
    state.curves.push_back(make_circle({2.02, 0}, 1.0, 64));
    const PatchFamily family = family_for(state, {1.0, 1.0});
    EvolveConfig config;
    config.t_end = 1.0;
    config.monitors.delta_min = 0.05;
    const RunResult result = run(state, family, 0.1, RegularizationSpec::plain(), config);
    CHECK(result.verdict.kind == BlowupKind::BoundariesTouch);
    CHECK(result.verdict.time == 0.0);
    CHECK(result.steps_taken == 0);
    REQUIRE(!result.snapshots.empty());
    CHECK(result.snapshots.size() == 1);
    CHECK(result.verdict.time <= config.t_end);
}

TEST_CASE("mirror-paired strengths stay mirror symmetric along the run") {
    const int m = 64;
    ContourState state;
    state.domain = Domain::HalfPlane;
    state.curves.push_back(make_circle({-1.5, 2.0}, 0.8, m));
    state.curves.push_back(make_circle({1.5, 2.0}, 0.8, m));
    const PatchFamily family = family_for(state, {1.0, -1.0});
    EvolveConfig config;
    config.t_end = 0.1;
    config.dt = 2e-3;
    const RunResult result = run(state, family, 0.15, RegularizationSpec::plain(), config);
    CHECK(result.verdict.kind == BlowupKind::None);
    const ContourState& last = result.snapshots.back();
    for (int j = 0; j < m; ++j) {
        const int jm = ((m / 2 - j) % m + m) % m;
        const Vec2 a = last.curves[0].samples[j];
        const Vec2 b = last.curves[1].samples[jm];
        CHECK(std::abs(a.x + b.x) < 1e-8);
        CHECK(std::abs(a.y - b.y) < 1e-8);
    }
    // Half-plane runs never cross the axis.
    for (const ContourState& snapshot : result.snapshots)
        for (const Curve& curve : snapshot.curves)
            for (const Vec2& v : curve.samples) CHECK(v.y > 0.0);
}

TEST_CASE("hausdorff drift between snapshots is bounded by speed times time") {
    const ContourState state = smooth_pair(128);
    const PatchFamily family = family_for(state, {1.0, -0.8});
    EvolveConfig config;
    config.t_end = 0.2;
    config.cadence = 0.05;
    const double alpha = 0.2;
    const RunResult result = run(state, family, alpha, RegularizationSpec::plain(), config);
    REQUIRE(result.snapshots.size() == 5);
    const KernelSpec kernel{alpha, Domain::WholePlane, 0.0};
    for (std::size_t i = 0; i + 1 < result.snapshots.size(); ++i) {
        const ContourState& a = result.snapshots[i];
        const ContourState& b = result.snapshots[i + 1];
        const double cap = std::max(uinf_bound(family, a, kernel),
                                    uinf_bound(family, b, kernel)) *
                           (b.time - a.time);
        CHECK(hausdorff_distance(a, b) <= cap);
    }
}

TEST_CASE("constant-speed resampling evens out the nodes") {
    ContourState state;
    state.curves.push_back(make_ellipse({0, 0}, 1.6, 0.6, 0.0, 128));
    const PatchFamily family = family_for(state, {1.0});
    EvolveConfig config;
    config.t_end = 3e-4;
    config.dt = 1e-4;
    config.resample_every = 1;
    const RunResult result = run(state, family, 0.25, RegularizationSpec::plain(), config);
    const Curve& final_curve = result.snapshots.back().curves[0];
    double lo = 1e300, hi = 0.0;
    const int m = final_curve.grid_size();
    for (int j = 0; j < m; ++j) {
        const double seg = norm(final_curve.samples[(j + 1) % m] - final_curve.samples[j]);
        lo = std::min(lo, seg);
        hi = std::max(hi, seg);
    }
    // The raw ellipse has segment spread ~2.6x; resampled, chords vary only
    // through curvature (~ seg^2 kappa^2 / 24, a few 1e-3 here).
    CHECK(hi / lo < 1.01);
    // The parametrization speed itself is what resampling equalizes.
    const auto dz = spectral_derivative(final_curve, 1);
    double slo = 1e300, shi = 0.0;
    for (const Vec2& v : dz) {
        slo = std::min(slo, norm(v));
        shi = std::max(shi, norm(v));
    }
    CHECK(shi / slo < 1.0 + 1e-4);
    const double area0 = polygon_area(state.curves[0]);
    const double area1 = polygon_area(final_curve);
    CHECK(std::abs(area1 - area0) / area0 < 1e-5);
}

TEST_CASE("rk45 honours its tolerance and refuses to stand still") {
    const ContourState state = smooth_pair(64);
    const PatchFamily family = family_for(state, {1.0, -0.8});
    const double alpha = 0.2;

    EvolveConfig reference;
    reference.t_end = 0.1;
    reference.dt = 5e-4;
    const RunResult exact = run(state, family, alpha, RegularizationSpec::plain(), reference);
    REQUIRE(exact.verdict.kind == BlowupKind::None);

    EvolveConfig loose;
    loose.scheme = Scheme::RK45;
    loose.t_end = 0.1;
    loose.dt = 1e-4; // relative error tolerance per step
    const RunResult coarse = run(state, family, alpha, RegularizationSpec::plain(), loose);
    CHECK(coarse.verdict.kind == BlowupKind::None);

    EvolveConfig strict = loose;
    strict.dt = 1e-8;
    const RunResult fine = run(state, family, alpha, RegularizationSpec::plain(), strict);
    CHECK(fine.verdict.kind == BlowupKind::None);

    const double err_coarse = state_diff(coarse.snapshots.back(), exact.snapshots.back());
    const double err_fine = state_diff(fine.snapshots.back(), exact.snapshots.back());
    CHECK(err_fine <= err_coarse + 1e-12);
    CHECK(err_fine < 1e-6);
    CHECK(fine.steps_taken >= coarse.steps_taken);
}

TEST_CASE("a stagnation-point tracer never moves") {
    ContourState state;
    state.curves.push_back(make_circle({-1.5, 0}, 0.6, 64));
    state.curves.push_back(make_circle({1.5, 0}, 0.6, 64));
    const PatchFamily family = family_for(state, {1.0, 1.0});
    // Two stored snapshots of the same state: velocity constant in time.
    std::vector<ContourState> trajectory(2, state);
    trajectory[1].time = 0.2;
    const std::vector<TracerPath> paths =
        advect_tracers({{0.0, 0.0}}, trajectory, family, 0.25, {});
    REQUIRE(paths.size() == 1);
    for (const Vec2& p : paths[0].positions) CHECK(norm(p) < 1e-10);
}

TEST_CASE("tracer seeds on a boundary are rejected") {
    ContourState state;
    state.curves.push_back(make_circle({0, 0}, 1.0, 64));
    const PatchFamily family = family_for(state, {1.0});
    std::vector<ContourState> trajectory(2, state);
    trajectory[1].time = 0.1;
    CHECK_THROWS_AS(advect_tracers({state.curves[0].samples[3]}, trajectory, family, 0.25, {}),
                    validation_error);
}

TEST_CASE("oracle-quadrature advection lands where the boundary form does") {
    ContourState state;
    state.curves.push_back(make_circle({0, 0}, 1.0, 128));
    const PatchFamily family = family_for(state, {1.0});
    std::vector<ContourState> trajectory(2, state);
    trajectory[1].time = 0.05;
    TracerOptions fast;
    fast.substeps_per_interval = 2;
    TracerOptions slow = fast;
    slow.use_oracle = true;
    const Vec2 seed{1.7, 0.3};
    const auto a = advect_tracers({seed}, trajectory, family, 0.2, fast);
    const auto b = advect_tracers({seed}, trajectory, family, 0.2, slow);
    REQUIRE(a.size() == 1);
    REQUIRE(b.size() == 1);
    CHECK(norm(a[0].positions.back() - b[0].positions.back()) < 1e-4);
    CHECK(norm(a[0].positions.back() - seed) > 1e-4);
}

TEST_SUITE_END();
