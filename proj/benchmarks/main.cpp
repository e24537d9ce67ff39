#include <benchmark/benchmark.h>

#include "msqg/contour.hpp"
#include "msqg/curvekit.hpp"
#include "msqg/fields.hpp"
#include "msqg/metrics.hpp"

using namespace msqg;

namespace {

ContourState two_patch_state(int grid_size) {
    ContourState state;
    state.curves.push_back(make_ellipse({-1.3, 0.0}, 1.0, 0.7, 0.4, grid_size));
    state.curves.push_back(make_circle({1.4, 0.1}, 0.8, grid_size));
    return state;
}

PatchFamily two_patch_family() {
    PatchFamily family;
    family.strengths = {1.0, -0.8};
    return family;
}

} // namespace

static void BM_ContourRhs(benchmark::State& state) {
    const int m = static_cast<int>(state.range(0));
    const ContourState contour = two_patch_state(m);
    const PatchFamily family = two_patch_family();
    for (auto _ : state)
        benchmark::DoNotOptimize(contour_rhs(contour, family, 0.25));
    state.SetComplexityN(m);
}
BENCHMARK(BM_ContourRhs)->Arg(128)->Arg(256)->Arg(512)->Complexity(benchmark::oNSquared);

static void BM_ContourRhsBeta(benchmark::State& state) {
    const int m = static_cast<int>(state.range(0));
    const ContourState contour = two_patch_state(m);
    const PatchFamily family = two_patch_family();
    for (auto _ : state)
        benchmark::DoNotOptimize(contour_rhs_beta(contour, family, 0.25, 0.05));
}
BENCHMARK(BM_ContourRhsBeta)->Arg(128)->Arg(256)->Arg(512);

static void BM_MollifiedRhs(benchmark::State& state) {
    const int m = static_cast<int>(state.range(0));
    const ContourState contour = two_patch_state(m);
    const PatchFamily family = two_patch_family();
    const RegularizationSpec spec = RegularizationSpec::mollified(0.01);
    for (auto _ : state)
        benchmark::DoNotOptimize(contour_rhs_mollified(contour, family, 0.25, spec));
}
BENCHMARK(BM_MollifiedRhs)->Arg(128)->Arg(256);

static void BM_VelocityAt(benchmark::State& state) {
    const int m = static_cast<int>(state.range(0));
    const ContourState contour = two_patch_state(m);
    const PatchFamily family = two_patch_family();
    const KernelSpec kernel{0.25, Domain::WholePlane, 0.0};
    for (auto _ : state)
        benchmark::DoNotOptimize(velocity_at({0.05, 2.1}, contour, family, kernel));
}
BENCHMARK(BM_VelocityAt)->Arg(128)->Arg(256)->Arg(512);

static void BM_NormalVelocity(benchmark::State& state) {
    const int m = static_cast<int>(state.range(0));
    const ContourState contour = two_patch_state(m);
    const PatchFamily family = two_patch_family();
    const KernelSpec kernel{0.25, Domain::WholePlane, 0.0};
    for (auto _ : state)
        benchmark::DoNotOptimize(normal_velocity_on_boundary(contour, family, kernel));
}
BENCHMARK(BM_NormalVelocity)->Arg(128)->Arg(256);

static void BM_TripleNorm(benchmark::State& state) {
    const int m = static_cast<int>(state.range(0));
    const ContourState contour = two_patch_state(m);
    for (auto _ : state)
        benchmark::DoNotOptimize(triple_norm(contour));
}
BENCHMARK(BM_TripleNorm)->Arg(128)->Arg(256)->Arg(512);

static void BM_MollifyCurve(benchmark::State& state) {
    const int m = static_cast<int>(state.range(0));
    const Curve curve = make_ellipse({0.0, 0.0}, 1.0, 0.6, 0.2, m);
    for (auto _ : state)
        benchmark::DoNotOptimize(mollify_curve(curve, 0.05));
}
BENCHMARK(BM_MollifyCurve)->Arg(128)->Arg(256)->Arg(512);

static void BM_ConstantSpeed(benchmark::State& state) {
    const int m = static_cast<int>(state.range(0));
    const Curve curve = make_ellipse({0.0, 0.0}, 1.0, 0.6, 0.2, m);
    for (auto _ : state)
        benchmark::DoNotOptimize(constant_speed_reparametrize(curve));
}
BENCHMARK(BM_ConstantSpeed)->Arg(128)->Arg(256)->Arg(512);

static void BM_Hausdorff(benchmark::State& state) {
    const int m = static_cast<int>(state.range(0));
    const ContourState a = two_patch_state(m);
    ContourState b = a;
    for (Curve& curve : b.curves)
        for (Vec2& v : curve.samples) v += {0.01, -0.005};
    for (auto _ : state)
        benchmark::DoNotOptimize(hausdorff_distance(a, b));
}
BENCHMARK(BM_Hausdorff)->Arg(128)->Arg(256)->Arg(512);

static void BM_SymmetricDifference(benchmark::State& state) {
    const int m = static_cast<int>(state.range(0));
    const ContourState a = two_patch_state(m);
    ContourState b = a;
    for (Curve& curve : b.curves)
        for (Vec2& v : curve.samples) v += {0.01, -0.005};
    for (auto _ : state)
        benchmark::DoNotOptimize(symmetric_difference_area(a, b));
}
BENCHMARK(BM_SymmetricDifference)->Arg(128)->Arg(256);

BENCHMARK_MAIN();
