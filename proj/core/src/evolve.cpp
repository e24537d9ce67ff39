#include "msqg/evolve.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "geom_util.hpp"
#include "msqg/curvekit.hpp"
#include "msqg/fields.hpp"

namespace msqg {

void MonitorThresholds::check() const {
    if (!(f_max > 0.0) || !(delta_min > 0.0) || !(h3_max > 0.0) || !(min_seg_frac > 0.0))
        throw validation_error("monitor thresholds must be positive");
}

const char* to_string(BlowupKind kind) {
    switch (kind) {
        case BlowupKind::None: return "None";
        case BlowupKind::BoundariesTouch: return "BoundariesTouch";
        case BlowupKind::SelfTouch: return "SelfTouch";
        case BlowupKind::H3Blowup: return "H3Blowup";
        case BlowupKind::NodeDegeneracy: return "NodeDegeneracy";
    }
    return "unknown";
}

BlowupVerdict monitor(const ContourState& state, const MonitorThresholds& thresholds) {
    thresholds.check();
    BlowupVerdict verdict;
    verdict.time = state.time;

    const double delta = delta_functional(state);
    if (delta < thresholds.delta_min) {
        verdict.kind = BlowupKind::BoundariesTouch;
        verdict.detail = "inter-boundary gap " + std::to_string(delta) + " < " +
                         std::to_string(thresholds.delta_min);
        return verdict;
    }
    const double f = f_functional(state);
    if (f > thresholds.f_max) {
        verdict.kind = BlowupKind::SelfTouch;
        verdict.detail =
            "chord-arc ratio " + std::to_string(f) + " > " + std::to_string(thresholds.f_max);
        return verdict;
    }
    for (size_t k = 0; k < state.curves.size(); ++k) {
        const auto& poly = state.curves[k].samples;
        const double ratio =
            detail::min_segment_length(poly) / detail::mean_segment_length(poly);
        if (ratio < thresholds.min_seg_frac) {
            verdict.kind = BlowupKind::NodeDegeneracy;
            verdict.detail = "curve " + std::to_string(k) + " segment ratio " +
                             std::to_string(ratio) + " < " +
                             std::to_string(thresholds.min_seg_frac);
            return verdict;
        }
    }
    const double h3 = h3_norm(state);
    if (h3 > thresholds.h3_max) {
        verdict.kind = BlowupKind::H3Blowup;
        verdict.detail =
            "H3 norm " + std::to_string(h3) + " > " + std::to_string(thresholds.h3_max);
        return verdict;
    }
    return verdict;
}

DiagnosticsRecord diagnostics_for(const ContourState& state) {
    DiagnosticsRecord record;
    record.t = state.time;
    record.norms = triple_norm(state);
    for (const Curve& c : state.curves) {
        record.areas.push_back(polygon_area(c));
        record.arclens.push_back(arclength(c));
    }
    record.min_gap = min_gap(state);
    return record;
}

namespace {

double state_linf(const ContourState& state) {
    double worst = 0.0;
    for (const Curve& c : state.curves)
        for (const Vec2& p : c.samples) worst = std::max({worst, std::abs(p.x), std::abs(p.y)});
    return worst;
}

double min_segment_over_curves(const ContourState& state) {
    double worst = 1e300;
    for (const Curve& c : state.curves)
        worst = std::min(worst, detail::min_segment_length(c.samples));
    return worst;
}

ContourState axpy(const ContourState& base, const RhsField& k, double c) {
    ContourState out = base;
    for (size_t i = 0; i < out.curves.size(); ++i)
        for (size_t j = 0; j < out.curves[i].samples.size(); ++j)
            out.curves[i].samples[j] += c * k.values[i][j];
    return out;
}

void axpy_into(ContourState& out, const RhsField& k, double c) {
    for (size_t i = 0; i < out.curves.size(); ++i)
        for (size_t j = 0; j < out.curves[i].samples.size(); ++j)
            out.curves[i].samples[j] += c * k.values[i][j];
}

double rhs_combo_linf(const std::vector<const RhsField*>& ks, const std::vector<double>& cs) {
    double worst = 0.0;
    const size_t n = ks.front()->values.size();
    for (size_t i = 0; i < n; ++i) {
        const size_t m = ks.front()->values[i].size();
        for (size_t j = 0; j < m; ++j) {
            Vec2 v{0.0, 0.0};
            for (size_t s = 0; s < ks.size(); ++s) v += cs[s] * ks[s]->values[i][j];
            worst = std::max({worst, std::abs(v.x), std::abs(v.y)});
        }
    }
    return worst;
}

struct Stepper {
    const PatchFamily& family;
    double alpha;
    const RegularizationSpec& reg;
    const RhsOptions& options;

    RhsField eval(const ContourState& state, int stage) const {
        RhsField k = contour_rhs_for(state, family, alpha, reg, options);
        if (!k.finite())
            throw numeric_error("right-hand side is not finite at t=" +
                                std::to_string(state.time) + " (stage " + std::to_string(stage) +
                                ", |state|=" + std::to_string(state_linf(state)) + ")");
        return k;
    }

    void enforce_cfl(double dt, double k1_linf, const ContourState& state) const {
        const double limit = 0.5 * min_segment_over_curves(state);
        if (std::abs(dt) * k1_linf > limit * (1.0 + 1e-12))
            throw numeric_error("step size violates dt*||rhs|| <= 0.5*min segment (dt=" +
                                std::to_string(dt) + ", ||rhs||=" + std::to_string(k1_linf) +
                                ", limit=" + std::to_string(limit) + ")");
    }

    void enforce_half_plane(const ContourState& state) const {
        if (state.domain != Domain::HalfPlane) return;
        double low = 1e300;
        for (const Curve& c : state.curves)
            for (const Vec2& p : c.samples) low = std::min(low, p.y);
        if (!(low > 0.0))
            throw geometry_error("curve left the half-plane (min x2 = " + std::to_string(low) +
                                 ")");
    }

    ContourState rk4(const ContourState& state, double dt, const RhsField& k1) const {
        const RhsField k2 = eval(axpy(state, k1, 0.5 * dt), 2);
        const RhsField k3 = eval(axpy(state, k2, 0.5 * dt), 3);
        const RhsField k4 = eval(axpy(state, k3, dt), 4);
        ContourState out = state;
        axpy_into(out, k1, dt / 6.0);
        axpy_into(out, k2, dt / 3.0);
        axpy_into(out, k3, dt / 3.0);
        axpy_into(out, k4, dt / 6.0);
        out.time = state.time + dt;
        enforce_half_plane(out);
        return out;
    }

    // Dormand-Prince 5(4).  Returns the 5th-order solution; err_out (when
    // non-null) receives ||y5 - y4||_inf.
    ContourState dp54(const ContourState& state, double dt, const RhsField& k1,
                      double* err_out) const {
        const RhsField k2 = eval(axpy(state, k1, dt / 5.0), 2);
        ContourState s3 = axpy(state, k1, 3.0 / 40.0 * dt);
        axpy_into(s3, k2, 9.0 / 40.0 * dt);
        const RhsField k3 = eval(s3, 3);
        ContourState s4 = axpy(state, k1, 44.0 / 45.0 * dt);
        axpy_into(s4, k2, -56.0 / 15.0 * dt);
        axpy_into(s4, k3, 32.0 / 9.0 * dt);
        const RhsField k4 = eval(s4, 4);
        ContourState s5 = axpy(state, k1, 19372.0 / 6561.0 * dt);
        axpy_into(s5, k2, -25360.0 / 2187.0 * dt);
        axpy_into(s5, k3, 64448.0 / 6561.0 * dt);
        axpy_into(s5, k4, -212.0 / 729.0 * dt);
        const RhsField k5 = eval(s5, 5);
        ContourState s6 = axpy(state, k1, 9017.0 / 3168.0 * dt);
        axpy_into(s6, k2, -355.0 / 33.0 * dt);
        axpy_into(s6, k3, 46732.0 / 5247.0 * dt);
        axpy_into(s6, k4, 49.0 / 176.0 * dt);
        axpy_into(s6, k5, -5103.0 / 18656.0 * dt);
        const RhsField k6 = eval(s6, 6);

        ContourState out = state;
        axpy_into(out, k1, 35.0 / 384.0 * dt);
        axpy_into(out, k3, 500.0 / 1113.0 * dt);
        axpy_into(out, k4, 125.0 / 192.0 * dt);
        axpy_into(out, k5, -2187.0 / 6784.0 * dt);
        axpy_into(out, k6, 11.0 / 84.0 * dt);
        out.time = state.time + dt;

        if (err_out) {
            const RhsField k7 = eval(out, 7);
            const std::vector<const RhsField*> ks{&k1, &k3, &k4, &k5, &k6, &k7};
            const std::vector<double> es{71.0 / 57600.0,    -71.0 / 16695.0, 71.0 / 1920.0,
                                         -17253.0 / 339200.0, 22.0 / 525.0,  -1.0 / 40.0};
            *err_out = std::abs(dt) * rhs_combo_linf(ks, es);
        }
        enforce_half_plane(out);
        return out;
    }
};

} // namespace

ContourState step(const ContourState& state, const PatchFamily& family, double alpha,
                  const RegularizationSpec& reg, double dt, Scheme scheme,
                  const RhsOptions& options) {
    if (dt == 0.0) return state;
    const Stepper stepper{family, alpha, reg, options};
    const RhsField k1 = stepper.eval(state, 1);
    stepper.enforce_cfl(dt, k1.linf(), state);
    return scheme == Scheme::RK4 ? stepper.rk4(state, dt, k1)
                                 : stepper.dp54(state, dt, k1, nullptr);
}

RunResult run(const ContourState& initial, const PatchFamily& family, double alpha,
              const RegularizationSpec& reg, const EvolveConfig& config) {
    config.monitors.check();
    if (!(config.t_end >= initial.time))
        throw validation_error("t_end must not precede the initial time");
    if (config.cadence < 0.0) throw validation_error("cadence must be nonnegative");
    if (config.scheme == Scheme::RK45 && !(config.dt > 0.0))
        throw validation_error("RK45 interprets dt as a relative tolerance; it must be > 0");
    const ValidationVerdict vv = validate_patch_family(initial, family);
    if (!vv.ok()) {
        std::string detail = "initial state failed validation:";
        for (const auto& issue : vv.issues) detail += " [" + issue.detail + "]";
        throw validation_error(detail);
    }

    const Stepper stepper{family, alpha, reg, config.rhs_options};
    RunResult result;
    ContourState state = initial;

    auto record = [&](const ContourState& s) {
        if (!result.diagnostics.empty() &&
            std::abs(result.diagnostics.back().t - s.time) <= 1e-12 * std::max(1.0, s.time))
            return;
        result.snapshots.push_back(s);
        result.diagnostics.push_back(diagnostics_for(s));
    };

    record(state);
    result.verdict = monitor(state, config.monitors);
    if (result.verdict.kind != BlowupKind::None) return result;

    long cadence_index = 1;
    const double t0 = initial.time;
    auto next_target = [&]() {
        if (config.cadence <= 0.0) return config.t_end;
        return std::min(t0 + cadence_index * config.cadence, config.t_end);
    };

    const double time_scale = std::max(1.0, std::abs(config.t_end));
    double dt_hint = 0.0; // RK45 carries its accepted step size forward
    while (config.t_end - state.time > 1e-12 * time_scale) {
        const double target = next_target();
        const double remaining = target - state.time;

        const RhsField k1 = stepper.eval(state, 1);
        double dt;
        if (config.scheme == Scheme::RK4) {
            const double guard =
                0.5 * min_segment_over_curves(state) / std::max(k1.linf(), 1e-30);
            dt = config.dt > 0.0 ? std::min(config.dt, remaining) : std::min(guard, remaining);
            stepper.enforce_cfl(dt, k1.linf(), state);
            state = stepper.rk4(state, dt, k1);
        } else {
            const double guard =
                0.5 * min_segment_over_curves(state) / std::max(k1.linf(), 1e-30);
            dt = dt_hint > 0.0 ? std::min({dt_hint, guard, remaining})
                               : std::min(guard, remaining);
            for (;;) {
                if (dt < 1e-12)
                    throw numeric_error("RK45 step size collapsed below 1e-12 at t=" +
                                        std::to_string(state.time));
                double err = 0.0;
                ContourState candidate = stepper.dp54(state, dt, k1, &err);
                const double tol = config.dt * (1.0 + state_linf(state));
                const double ratio = err / tol;
                const double factor =
                    std::clamp(0.9 * std::pow(ratio > 0.0 ? 1.0 / ratio : 1e10, 0.2), 0.2, 5.0);
                if (ratio <= 1.0) {
                    state = std::move(candidate);
                    dt_hint = std::min(dt * factor, guard);
                    break;
                }
                dt = std::min(dt * factor, remaining);
            }
        }

        ++result.steps_taken;
        if (config.resample_every > 0 && result.steps_taken % config.resample_every == 0)
            for (Curve& c : state.curves) c = constant_speed_reparametrize(c);

        result.verdict = monitor(state, config.monitors);
        if (result.verdict.kind != BlowupKind::None) {
            record(state);
            return result;
        }
        if (std::abs(state.time - target) <= 1e-12 * time_scale) {
            record(state);
            if (config.cadence > 0.0 && target < config.t_end) ++cadence_index;
        }
    }
    record(state);
    return result;
}

std::vector<TracerPath> advect_tracers(const std::vector<Vec2>& seeds,
                                       const std::vector<ContourState>& trajectory,
                                       const PatchFamily& family, double alpha,
                                       const TracerOptions& options) {
    if (trajectory.size() < 2)
        throw validation_error("tracer advection needs at least two stored snapshots");
    for (size_t s = 0; s + 1 < trajectory.size(); ++s)
        if (!(trajectory[s + 1].time > trajectory[s].time))
            throw validation_error("trajectory snapshot times must increase");
    if (options.substeps_per_interval < 1)
        throw validation_error("tracer substeps per interval must be >= 1");
    if (options.jacobian && !(options.jacobian_delta > 0.0))
        throw validation_error("tracer jacobian delta must be positive");

    KernelSpec kernel;
    kernel.alpha = alpha;
    kernel.domain = trajectory.front().domain;
    kernel.check();

    auto dist_to_curves = [&](Vec2 p, const ContourState& s) {
        double d = 1e300;
        for (const Curve& c : s.curves)
            d = std::min(d, detail::point_polygon_distance(p, c.samples));
        return d;
    };
    for (Vec2 seed : seeds)
        if (dist_to_curves(seed, trajectory.front()) < 1e-12)
            throw validation_error("tracer seed lies on a patch boundary");

    auto velocity = [&](Vec2 p, const ContourState& a, const ContourState& b, double t) {
        const Vec2 ua = options.use_oracle ? velocity_at_oracle(p, a, family, kernel)
                                           : velocity_at(p, a, family, kernel);
        const Vec2 ub = options.use_oracle ? velocity_at_oracle(p, b, family, kernel)
                                           : velocity_at(p, b, family, kernel);
        const double w = (t - a.time) / (b.time - a.time);
        return (1.0 - w) * ua + w * ub;
    };

    std::vector<TracerPath> paths(seeds.size());
    for (size_t s = 0; s < seeds.size(); ++s) {
        TracerPath& path = paths[s];
        path.seed = seeds[s];

        // Cluster order: tracked point, +x, -x, +y, -y for the Jacobian.
        std::vector<Vec2> cluster{seeds[s]};
        if (options.jacobian) {
            const double d = options.jacobian_delta;
            cluster.push_back(seeds[s] + Vec2{d, 0.0});
            cluster.push_back(seeds[s] - Vec2{d, 0.0});
            cluster.push_back(seeds[s] + Vec2{0.0, d});
            cluster.push_back(seeds[s] - Vec2{0.0, d});
        }

        auto record = [&](const ContourState& snap) {
            path.times.push_back(snap.time);
            path.positions.push_back(cluster[0]);
            path.velocities.push_back(options.use_oracle
                                          ? velocity_at_oracle(cluster[0], snap, family, kernel)
                                          : velocity_at(cluster[0], snap, family, kernel));
            const double dist = dist_to_curves(cluster[0], snap);
            path.dist_to_boundary.push_back(dist);
            double min_seg = 1e300;
            for (const Curve& c : snap.curves)
                min_seg = std::min(min_seg, detail::min_segment_length(c.samples));
            if (dist < 0.5 * min_seg) path.crossed_boundary = true;
            if (options.jacobian) {
                const double dd = 2.0 * options.jacobian_delta;
                const Vec2 col_x = (cluster[1] - cluster[2]) / dd;
                const Vec2 col_y = (cluster[3] - cluster[4]) / dd;
                path.jacobian_estimate.push_back(col_x.x * col_y.y - col_x.y * col_y.x);
            }
        };

        record(trajectory.front());
        for (size_t iv = 0; iv + 1 < trajectory.size(); ++iv) {
            const ContourState& a = trajectory[iv];
            const ContourState& b = trajectory[iv + 1];
            const double h = (b.time - a.time) / options.substeps_per_interval;
            double t = a.time;
            for (int sub = 0; sub < options.substeps_per_interval; ++sub) {
                for (Vec2& p : cluster) {
                    const Vec2 k1 = velocity(p, a, b, t);
                    const Vec2 k2 = velocity(p + 0.5 * h * k1, a, b, t + 0.5 * h);
                    const Vec2 k3 = velocity(p + 0.5 * h * k2, a, b, t + 0.5 * h);
                    const Vec2 k4 = velocity(p + h * k3, a, b, t + h);
                    p += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
                }
                t += h;
            }
            record(b);
        }
    }
    return paths;
}

} // namespace msqg
