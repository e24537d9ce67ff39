#include "msqg/metrics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <random>

#include <boost/geometry.hpp>
#include <boost/geometry/geometries/point_xy.hpp>
#include <boost/geometry/geometries/polygon.hpp>

#include "geom_util.hpp"
#include "msqg/curvekit.hpp"
#include "msqg/spectral.hpp"

namespace msqg {

namespace {

void check_matched(const ContourState& a, const ContourState& b) {
    if (a.curves.size() != b.curves.size())
        throw validation_error("states must have index-matched patches to compare");
}

double directed_hausdorff(const std::vector<Vec2>& from, const std::vector<Vec2>& to) {
    double worst = 0.0;
    for (const Vec2& p : from) worst = std::max(worst, detail::point_polygon_distance(p, to));
    return worst;
}

double pair_hausdorff(const Curve& a, const Curve& b) {
    return std::max(directed_hausdorff(a.samples, b.samples),
                    directed_hausdorff(b.samples, a.samples));
}

namespace bg = boost::geometry;
using BoostPoint = bg::model::d2::point_xy<double>;
using BoostPolygon = bg::model::polygon<BoostPoint>;

double snap(double v) { return std::llround(v * 1e12) * 1e-12; }

BoostPolygon to_boost_polygon(const Curve& curve) {
    BoostPolygon poly;
    for (const Vec2& p : curve.samples) bg::append(poly.outer(), BoostPoint(snap(p.x), snap(p.y)));
    bg::correct(poly);
    return poly;
}

double monte_carlo_symdiff(const Curve& a, const Curve& b, SymDiffInfo* info) {
    double lo_x = 1e300, lo_y = 1e300, hi_x = -1e300, hi_y = -1e300;
    for (const Curve* c : {&a, &b}) {
        for (const Vec2& p : c->samples) {
            lo_x = std::min(lo_x, p.x);
            lo_y = std::min(lo_y, p.y);
            hi_x = std::max(hi_x, p.x);
            hi_y = std::max(hi_y, p.y);
        }
    }
    const double box_area = (hi_x - lo_x) * (hi_y - lo_y);
    const unsigned int seed = 20240801u;
    std::mt19937 rng(seed);
    auto u01 = [&]() { return rng() / 4294967296.0; };
    const int n = 200000;
    long hits = 0;
    for (int i = 0; i < n; ++i) {
        const Vec2 p{lo_x + (hi_x - lo_x) * u01(), lo_y + (hi_y - lo_y) * u01()};
        if (detail::point_in_polygon(p, a.samples) != detail::point_in_polygon(p, b.samples))
            ++hits;
    }
    const double frac = static_cast<double>(hits) / n;
    if (info) {
        info->monte_carlo_fallback = true;
        info->rng_seed = seed;
        const double se = box_area * std::sqrt(frac * (1.0 - frac) / n);
        info->standard_error = std::hypot(info->standard_error, se);
    }
    return frac * box_area;
}

double pair_symdiff(const Curve& a, const Curve& b, SymDiffInfo* info) {
    const BoostPolygon pa = to_boost_polygon(a);
    const BoostPolygon pb = to_boost_polygon(b);
    if (!bg::is_valid(pa) || !bg::is_valid(pb)) return monte_carlo_symdiff(a, b, info);
    bg::model::multi_polygon<BoostPolygon> out;
    bg::sym_difference(pa, pb, out);
    return bg::area(out);
}

double pair_l2(const Curve& a, const Curve& b) {
    if (a.grid_size() != b.grid_size())
        throw validation_error("L2 curve distance needs matching grid sizes");
    const double h = 2.0 * pi / a.grid_size();
    double sum = 0.0;
    for (size_t j = 0; j < a.samples.size(); ++j) sum += h * norm2(a.samples[j] - b.samples[j]);
    return sum;
}

} // namespace

double hausdorff_distance(const ContourState& a, const ContourState& b) {
    check_matched(a, b);
    double worst = 0.0;
    for (size_t k = 0; k < a.curves.size(); ++k)
        worst = std::max(worst, pair_hausdorff(a.curves[k], b.curves[k]));
    return worst;
}

double symmetric_difference_area(const ContourState& a, const ContourState& b,
                                 SymDiffInfo* info) {
    check_matched(a, b);
    double total = 0.0;
    for (size_t k = 0; k < a.curves.size(); ++k)
        total += pair_symdiff(a.curves[k], b.curves[k], info);
    return total;
}

double l2_curve_distance(const ContourState& a, const ContourState& b) {
    check_matched(a, b);
    double sum = 0.0;
    for (size_t k = 0; k < a.curves.size(); ++k) sum += pair_l2(a.curves[k], b.curves[k]);
    return std::sqrt(sum);
}

ComparisonReport compare_states(const ContourState& a, const ContourState& b) {
    check_matched(a, b);
    ComparisonReport report;
    double l2_sum = 0.0;
    SymDiffInfo info;
    for (size_t k = 0; k < a.curves.size(); ++k) {
        report.per_patch_hausdorff.push_back(pair_hausdorff(a.curves[k], b.curves[k]));
        report.per_patch_sym_diff.push_back(pair_symdiff(a.curves[k], b.curves[k], &info));
        const double l2sq = pair_l2(a.curves[k], b.curves[k]);
        report.per_patch_l2.push_back(std::sqrt(l2sq));
        l2_sum += l2sq;
        report.hausdorff = std::max(report.hausdorff, report.per_patch_hausdorff.back());
        report.sym_diff_area += report.per_patch_sym_diff.back();
    }
    report.l2_distance = std::sqrt(l2_sum);
    return report;
}

namespace {

// Ear-clip triangulation of a simple polygon given counterclockwise.
std::vector<std::array<Vec2, 3>> triangulate(const std::vector<Vec2>& poly) {
    const int n = static_cast<int>(poly.size());
    std::vector<int> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::vector<std::array<Vec2, 3>> tris;
    tris.reserve(n - 2);

    auto strictly_inside = [&](Vec2 p, Vec2 a, Vec2 b, Vec2 c) {
        return detail::cross(b - a, p - a) > 0.0 && detail::cross(c - b, p - b) > 0.0 &&
               detail::cross(a - c, p - c) > 0.0;
    };

    while (idx.size() > 3) {
        bool clipped = false;
        for (size_t i = 0; i < idx.size(); ++i) {
            const Vec2 prev = poly[idx[(i + idx.size() - 1) % idx.size()]];
            const Vec2 cur = poly[idx[i]];
            const Vec2 next = poly[idx[(i + 1) % idx.size()]];
            if (detail::cross(cur - prev, next - cur) <= 0.0) continue;
            bool blocked = false;
            for (size_t j = 0; j < idx.size() && !blocked; ++j) {
                if (j == i || j == (i + idx.size() - 1) % idx.size() ||
                    j == (i + 1) % idx.size())
                    continue;
                blocked = strictly_inside(poly[idx[j]], prev, cur, next);
            }
            if (blocked) continue;
            tris.push_back({prev, cur, next});
            idx.erase(idx.begin() + i);
            clipped = true;
            break;
        }
        if (!clipped)
            throw geometry_error("polygon triangulation found no ear (non-simple boundary?)");
    }
    tris.push_back({poly[idx[0]], poly[idx[1]], poly[idx[2]]});
    return tris;
}

// Degree-5 rule on the unit triangle, weights normalized to sum 1.
struct TrianglePoint {
    double b0, b1, b2, w;
};

const std::array<TrianglePoint, 7>& degree5_rule() {
    static const double s15 = std::sqrt(15.0);
    static const double p = (6.0 + s15) / 21.0, q = (6.0 - s15) / 21.0;
    static const double wp = (155.0 + s15) / 1200.0, wq = (155.0 - s15) / 1200.0;
    static const std::array<TrianglePoint, 7> rule = {{
        {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0, 9.0 / 40.0},
        {1.0 - 2.0 * p, p, p, wp},
        {p, 1.0 - 2.0 * p, p, wp},
        {p, p, 1.0 - 2.0 * p, wp},
        {1.0 - 2.0 * q, q, q, wq},
        {q, 1.0 - 2.0 * q, q, wq},
        {q, q, 1.0 - 2.0 * q, wq},
    }};
    return rule;
}

double triangle_quadrature(Vec2 a, Vec2 b, Vec2 c, const std::function<double(Vec2)>& g) {
    const double area = 0.5 * detail::cross(b - a, c - a);
    double sum = 0.0;
    for (const TrianglePoint& tp : degree5_rule())
        sum += tp.w * g(tp.b0 * a + tp.b1 * b + tp.b2 * c);
    return area * sum;
}

} // namespace

double integrate_over_patch_raw(const Curve& curve, const std::function<double(Vec2)>& g,
                                int subdivision) {
    if (!g) throw validation_error("patch integration needs a scalar integrand");
    if (subdivision < 1) throw validation_error("triangle subdivision must be >= 1");
    std::vector<Vec2> poly = curve.samples;
    const double sign = curve.ccw() ? 1.0 : -1.0;
    if (sign < 0.0) std::reverse(poly.begin(), poly.end());

    double total = 0.0;
    const int s = subdivision;
    for (const auto& tri : triangulate(poly)) {
        const Vec2 e1 = (tri[1] - tri[0]) / s;
        const Vec2 e2 = (tri[2] - tri[0]) / s;
        for (int i = 0; i < s; ++i) {
            for (int j = 0; j < s - i; ++j) {
                const Vec2 base = tri[0] + static_cast<double>(i) * e1 +
                                  static_cast<double>(j) * e2;
                total += triangle_quadrature(base, base + e1, base + e2, g);
                if (j < s - i - 1)
                    total += triangle_quadrature(base + e1, base + e1 + e2, base + e2, g);
            }
        }
    }
    return sign * total;
}

double integrate_over_patch(const Curve& curve, const ScalarTestFn& fn) {
    if (fn.antideriv_x1) {
        // Green reduction: integral of f = contour integral of A dx2 with
        // dA/dx1 = f, evaluated by the spectral trapezoid.
        std::vector<double> y(curve.samples.size());
        for (size_t j = 0; j < curve.samples.size(); ++j) y[j] = curve.samples[j].y;
        const std::vector<double> dy = spectral_derivative(y, 1);
        const double h = 2.0 * pi / curve.grid_size();
        double total = 0.0;
        for (size_t j = 0; j < curve.samples.size(); ++j)
            total += h * fn.antideriv_x1(curve.samples[j]) * dy[j];
        return total;
    }
    if (!fn.f) throw validation_error("patch integration needs a scalar integrand");
    return integrate_over_patch_raw(curve, fn.f);
}

WeakFormReport weak_form_residual(const std::vector<ContourState>& trajectory,
                                  const PatchFamily& family, const KernelSpec& kernel,
                                  const ScalarTestFn& testfn) {
    if (trajectory.size() < 3)
        throw validation_error("weak-form residual needs at least three snapshots");
    if (!testfn.f || !testfn.grad)
        throw validation_error("weak-form residual needs f and its gradient");

    // I(t) = sum_k theta_k integral_{Omega_k(t)} f at every snapshot.
    std::vector<double> moments(trajectory.size());
    for (size_t s = 0; s < trajectory.size(); ++s) {
        double total = 0.0;
        for (size_t k = 0; k < trajectory[s].curves.size(); ++k)
            total += family.strengths[k] * integrate_over_patch(trajectory[s].curves[k], testfn);
        moments[s] = total;
    }

    WeakFormReport report;
    double max_area = 0.0, max_grad = 0.0;
    for (size_t s = 1; s + 1 < trajectory.size(); ++s) {
        const ContourState& mid = trajectory[s];
        const double lhs =
            (moments[s + 1] - moments[s - 1]) / (trajectory[s + 1].time - trajectory[s - 1].time);
        double rhs = 0.0;
        for (size_t k = 0; k < mid.curves.size(); ++k) {
            auto integrand = [&](Vec2 x) {
                return dot(velocity_at(x, mid, family, kernel), testfn.grad(x));
            };
            rhs += family.strengths[k] * integrate_over_patch_raw(mid.curves[k], integrand);
        }
        report.times.push_back(mid.time);
        report.lhs.push_back(lhs);
        report.rhs.push_back(rhs);
        report.residual.push_back(std::abs(lhs - rhs));
        for (size_t k = 0; k < mid.curves.size(); ++k) {
            max_area = std::max(max_area, std::abs(polygon_area(mid.curves[k])));
            for (const Vec2& p : mid.curves[k].samples)
                max_grad = std::max(max_grad, norm(testfn.grad(p)));
        }
    }
    double max_lhs = 0.0, max_rhs = 0.0;
    for (double v : report.lhs) max_lhs = std::max(max_lhs, std::abs(v));
    for (double v : report.rhs) max_rhs = std::max(max_rhs, std::abs(v));
    report.scale = std::max({max_lhs, max_rhs, family.theta_total() * max_area * max_grad});
    return report;
}

ExistenceEstimate existence_time_estimate(double alpha, double n_patches, double theta,
                                          double m_norm, double cbar) {
    if (!(alpha > 0.0) || !(alpha < 0.5))
        throw validation_error("existence estimate needs alpha in (0, 1/2)");
    if (!(n_patches >= 1.0) || !(theta > 0.0) || !(m_norm > 0.0) || !(cbar > 0.0))
        throw validation_error("existence estimate needs positive inputs");
    ExistenceEstimate est;
    est.alpha = alpha;
    est.n_patches = n_patches;
    est.theta = theta;
    est.m_norm = m_norm;
    est.cbar = cbar;
    est.t_est = 1.0 / (cbar * n_patches * theta) * std::pow(m_norm, -(6.0 + 2.0 * alpha));
    return est;
}

namespace {

const ContourState* snapshot_at(const RunResult& run, double t) {
    for (const ContourState& s : run.snapshots)
        if (std::abs(s.time - t) <= 1e-9 * std::max(1.0, std::abs(t))) return &s;
    return nullptr;
}

double fit_over_valid(const std::vector<double>& x, const std::vector<double>& d) {
    std::vector<double> fx, fd;
    for (size_t i = 0; i < d.size(); ++i) {
        if (std::isfinite(d[i]) && d[i] > 0.0 && std::isfinite(x[i]) && x[i] > 0.0) {
            fx.push_back(x[i]);
            fd.push_back(d[i]);
        }
    }
    if (fx.size() < 2)
        throw numeric_error("too few completed runs to fit a convergence slope");
    return loglog_slope(fx, fd);
}

} // namespace

ConvergenceTable convergence_study(SweepKind kind, const StudyConfig& config) {
    if (config.parameters.size() < 3)
        throw validation_error("a convergence study needs at least three parameter values");
    ConvergenceTable table;
    table.kind = kind;
    table.parameters = config.parameters;
    const double nan = std::nan("");

    switch (kind) {
        case SweepKind::BetaSweep:
        case SweepKind::EpsilonSweep: {
            const RunResult base = run(config.initial, config.family, config.alpha,
                                       RegularizationSpec::plain(), config.evolve);
            if (base.verdict.kind != BlowupKind::None)
                throw numeric_error("regularization sweep: the reference run tripped a monitor (" +
                                    base.verdict.detail + ")");
            const ContourState& reference = base.snapshots.back();
            for (size_t i = 0; i < config.parameters.size(); ++i) {
                RegularizationSpec spec;
                if (kind == SweepKind::BetaSweep) {
                    spec = RegularizationSpec::beta_kernel(config.parameters[i]);
                } else {
                    spec = config.mollified_template;
                    spec.epsilon = config.parameters[i];
                }
                const RunResult trial =
                    run(config.initial, config.family, config.alpha, spec, config.evolve);
                if (trial.verdict.kind != BlowupKind::None) {
                    table.excluded.push_back(static_cast<int>(i));
                    table.distances.push_back(nan);
                    continue;
                }
                table.distances.push_back(l2_curve_distance(trial.snapshots.back(), reference));
            }
            table.target_slope = kind == SweepKind::BetaSweep ? 1.0 : 0.0;
            table.fitted_slope = fit_over_valid(table.parameters, table.distances);
            break;
        }
        case SweepKind::GridRefine: {
            if (!config.initial_for_grid)
                throw validation_error("grid refinement needs an initial_for_grid builder");
            std::vector<RunResult> runs;
            for (size_t i = 0; i < config.parameters.size(); ++i) {
                const int m = static_cast<int>(config.parameters[i]);
                check_grid_size(m);
                const ContourState start = config.initial_for_grid(m);
                runs.push_back(run(start, config.family, config.alpha,
                                   RegularizationSpec::plain(), config.evolve));
                if (runs.back().verdict.kind != BlowupKind::None)
                    table.excluded.push_back(static_cast<int>(i));
            }
            std::vector<double> pair_h; // abscissa 1/M of the coarser run
            for (size_t i = 0; i + 1 < runs.size(); ++i) {
                const bool ok =
                    runs[i].verdict.kind == BlowupKind::None &&
                    runs[i + 1].verdict.kind == BlowupKind::None;
                table.distances.push_back(ok ? hausdorff_distance(runs[i].snapshots.back(),
                                                                  runs[i + 1].snapshots.back())
                                             : nan);
                pair_h.push_back(1.0 / config.parameters[i]);
            }
            table.target_slope = 1.0;
            table.fitted_slope = fit_over_valid(pair_h, table.distances);
            break;
        }
        case SweepKind::SplitStepHausdorff: {
            if (!(config.evolve.dt > 0.0))
                throw validation_error("split-step study needs a fixed positive dt");
            const double base_t = config.parameters.front();
            if (!(base_t > 0.0))
                throw validation_error("split-step sample times must be positive");
            for (double t : config.parameters) {
                const double k = t / base_t;
                if (std::abs(k - std::llround(k)) > 1e-9)
                    throw validation_error(
                        "split-step sample times must be multiples of the first");
            }
            EvolveConfig coarse = config.evolve;
            coarse.cadence = base_t;
            coarse.t_end = config.initial.time + config.parameters.back();
            EvolveConfig fine = coarse;
            fine.dt = coarse.dt / 2.0;
            const RunResult run_a = run(config.initial, config.family, config.alpha,
                                        RegularizationSpec::plain(), coarse);
            const RunResult run_b = run(config.initial, config.family, config.alpha,
                                        RegularizationSpec::plain(), fine);
            for (size_t i = 0; i < config.parameters.size(); ++i) {
                const double t = config.initial.time + config.parameters[i];
                const ContourState* sa = snapshot_at(run_a, t);
                const ContourState* sb = snapshot_at(run_b, t);
                if (!sa || !sb) {
                    table.excluded.push_back(static_cast<int>(i));
                    table.distances.push_back(nan);
                    continue;
                }
                table.distances.push_back(hausdorff_distance(*sa, *sb));
            }
            table.target_slope = 1.0 / (2.0 * config.alpha);
            table.fitted_slope = fit_over_valid(table.parameters, table.distances);
            break;
        }
    }
    return table;
}

} // namespace msqg
