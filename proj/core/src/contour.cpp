#include "msqg/contour.hpp"

#include <algorithm>
#include <cmath>

#include "assembly_util.hpp"
#include "kernel_loops.hpp"
#include "msqg/curvekit.hpp"
#include "msqg/spectral.hpp"

namespace msqg {

RegularizationSpec RegularizationSpec::plain() { return {}; }

RegularizationSpec RegularizationSpec::beta_kernel(double beta) {
    RegularizationSpec spec;
    spec.kind = Kind::BetaKernel;
    spec.beta = beta;
    return spec;
}

RegularizationSpec RegularizationSpec::mollified(double epsilon, double drift_const,
                                                 double ref_norm_M, double c0) {
    RegularizationSpec spec;
    spec.kind = Kind::Mollified;
    spec.epsilon = epsilon;
    spec.drift_const = drift_const;
    spec.ref_norm_M = ref_norm_M;
    spec.c0 = c0;
    return spec;
}

void RegularizationSpec::check() const {
    switch (kind) {
        case Kind::Plain:
            break;
        case Kind::BetaKernel:
            if (!(beta > 0.0)) throw validation_error("beta regularization needs beta > 0");
            break;
        case Kind::Mollified:
            if (!(epsilon > 0.0)) throw validation_error("mollified scheme needs epsilon > 0");
            if (!(drift_const >= 0.0))
                throw validation_error("mollified drift constant must be nonnegative");
            if (!(ref_norm_M >= 2.0))
                throw validation_error("mollified reference norm bound must be >= 2");
            if (!(c0 > 0.0)) throw validation_error("mollified epsilon guard scale must be > 0");
            if (!(epsilon < c0 / (16.0 * ref_norm_M * ref_norm_M)))
                throw validation_error("mollified epsilon fails the guard eps < c0/(4 M)^2");
            break;
    }
}

double RhsField::linf() const {
    double worst = 0.0;
    for (const auto& row : values)
        for (const Vec2& v : row) worst = std::max({worst, std::abs(v.x), std::abs(v.y)});
    return worst;
}

bool RhsField::finite() const {
    for (const auto& row : values)
        for (const Vec2& v : row)
            if (!std::isfinite(v.x) || !std::isfinite(v.y)) return false;
    return true;
}

RhsBoundCheck& rhs_bound_check() {
    static RhsBoundCheck instance;
    return instance;
}

namespace {

// Replace the two trapezoid cells hugging the removable eta = 0 term of a
// self block with graded Gauss panels on the trig interpolant.  Returns the
// integral over [-h, h] minus the trapezoid portion being replaced.
Vec2 core_correction(const CurveInterp& interp, double xi, double h, double alpha, double beta2) {
    const Vec2 z = interp(xi);
    const Vec2 dz = interp.derivative(xi, 1);
    auto g = [&](double eta) {
        const Vec2 w = z - interp(xi - eta);
        return std::pow(norm2(w) + beta2, -alpha) * (dz - interp.derivative(xi - eta, 1));
    };
    static const double gx[4] = {0.1834346424956498, 0.5255324099163290, 0.7966664774136267,
                                 0.9602898564975363};
    static const double gw[4] = {0.3626837833783620, 0.3137066458778873, 0.2223810344533745,
                                 0.1012285362903763};
    Vec2 window{0.0, 0.0};
    for (int side = -1; side <= 1; side += 2) {
        double outer = h;
        for (int p = 0; p < 8; ++p) {
            const double inner = outer / 3.0;
            const double mid = 0.5 * (inner + outer), half = 0.5 * (outer - inner);
            Vec2 s{0.0, 0.0};
            for (int q = 0; q < 4; ++q)
                s += gw[q] * (g(side * (mid + half * gx[q])) + g(side * (mid - half * gx[q])));
            window += half * s;
            outer = inner;
        }
        // Innermost stub: g ~ eta^{1-2a} when beta = 0, smooth otherwise.
        const Vec2 edge = g(side * outer);
        window += beta2 == 0.0 ? outer / (2.0 - 2.0 * alpha) * edge : 0.5 * outer * edge;
    }
    return window - 0.5 * h * (g(-h) + g(h));
}

RhsField assemble(const ContourState& state, const PatchFamily& family, double alpha,
                  double beta, const RhsOptions& options) {
    check_state_family(state, family);
    if (!(alpha > 0.0) || !(alpha < 0.5))
        throw validation_error("kernel alpha must lie in (0, 1/2)");
    if (!(beta >= 0.0)) throw validation_error("kernel beta must be nonnegative");

    const bool mirror = state.domain == Domain::HalfPlane;
    const auto arrays = detail::prepare_arrays(state, mirror);
    const int n = static_cast<int>(state.curves.size());
    const int m = state.grid_size();
    const double h = 2.0 * pi / m;
    const double neg_alpha = -alpha;
    const double beta2 = beta * beta;
    // |z - y|^{2a} < 1e-14 away from the removable term means boundaries have
    // effectively merged.
    const double collision_r2 = std::pow(1e-14, 1.0 / alpha) - beta2;

    RhsField rhs;
    rhs.values.assign(n, std::vector<Vec2>(m, Vec2{0.0, 0.0}));
    std::vector<double> s1(m), svx(m), svy(m);
    for (int k = 0; k < n; ++k) {
        const auto& target = arrays[k];
        auto& out = rhs.values[k];
        for (int i = 0; i < n; ++i) {
            const auto& src = arrays[i];
            const double coef = family.strengths[i] / (2.0 * alpha) * h;
            double mr2 = 0.0;
            detail::block_sums(target.x.data(), target.y.data(), m, src.x.data(), src.y.data(),
                               src.dx.data(), src.dy.data(), m, neg_alpha, beta2, i == k,
                               s1.data(), svx.data(), svy.data(), &mr2);
            if (mr2 < collision_r2)
                throw collision_error("curve boundaries have collided (target " +
                                      std::to_string(k) + ", source " + std::to_string(i) + ")");
            for (int j = 0; j < m; ++j) {
                out[j] += coef * Vec2{target.dx[j] * s1[j] - svx[j], target.dy[j] * s1[j] - svy[j]};
            }
            rhs.blocks.push_back({k, i, false});
            if (mirror) {
                detail::block_sums(target.x.data(), target.y.data(), m, src.mx.data(),
                                   src.my.data(), src.mdx.data(), src.mdy.data(), m, neg_alpha,
                                   beta2, false, s1.data(), svx.data(), svy.data(), &mr2);
                if (mr2 < collision_r2)
                    throw collision_error("curve collided with a mirror image (target " +
                                          std::to_string(k) + ", source " + std::to_string(i) +
                                          ")");
                for (int j = 0; j < m; ++j) {
                    out[j] +=
                        coef * Vec2{target.dx[j] * s1[j] - svx[j], target.dy[j] * s1[j] - svy[j]};
                }
                rhs.blocks.push_back({k, i, true});
            }
        }
        if (options.refine_core) {
            const CurveInterp interp(state.curves[k]);
            const double coef = family.strengths[k] / (2.0 * alpha);
            for (int j = 0; j < m; ++j)
                out[j] += coef * core_correction(interp, -pi + h * j, h, alpha, beta2);
        }
    }

    RhsBoundCheck& check = rhs_bound_check();
    if (check.enabled) {
        const double c2 = c2_norm(state);
        const double bound = 4.0 * pi * family.theta_total() / (alpha * (1.0 - 2.0 * alpha)) *
                             std::pow(1.0 / delta_functional(state) + f_functional(state),
                                      2.0 * alpha) *
                             c2;
        const double ratio = rhs.linf() / bound;
        ++check.evaluations;
        check.worst_ratio = std::max(check.worst_ratio, ratio);
        if (ratio > 1.0)
            throw numeric_error("rhs magnitude exceeded its a priori bound (ratio " +
                                std::to_string(ratio) + ")");
    }
    return rhs;
}

} // namespace

RhsField contour_rhs(const ContourState& state, const PatchFamily& family, double alpha,
                     const RhsOptions& options) {
    return assemble(state, family, alpha, 0.0, options);
}

RhsField contour_rhs_beta(const ContourState& state, const PatchFamily& family, double alpha,
                          double beta, const RhsOptions& options) {
    if (!(beta > 0.0)) throw validation_error("beta regularization needs beta > 0");
    return assemble(state, family, alpha, beta, options);
}

Curve mollify_curve(const Curve& curve, double epsilon) {
    std::vector<double> xs(curve.samples.size()), ys(curve.samples.size());
    for (size_t j = 0; j < curve.samples.size(); ++j) {
        xs[j] = curve.samples[j].x;
        ys[j] = curve.samples[j].y;
    }
    xs = mollify_samples(xs, epsilon);
    ys = mollify_samples(ys, epsilon);
    Curve out = curve;
    for (size_t j = 0; j < out.samples.size(); ++j) out.samples[j] = {xs[j], ys[j]};
    return out;
}

RhsField contour_rhs_mollified(const ContourState& state, const PatchFamily& family, double alpha,
                               const RegularizationSpec& spec, const RhsOptions& options) {
    if (spec.kind != RegularizationSpec::Kind::Mollified)
        throw validation_error("contour_rhs_mollified needs a mollified spec");
    spec.check();

    ContourState smoothed = state;
    for (Curve& c : smoothed.curves) c = mollify_curve(c, spec.epsilon);
    RhsField rhs = contour_rhs(smoothed, family, alpha, options);

    for (auto& row : rhs.values) {
        std::vector<double> xs(row.size()), ys(row.size());
        for (size_t j = 0; j < row.size(); ++j) {
            xs[j] = row[j].x;
            ys[j] = row[j].y;
        }
        xs = mollify_samples(xs, spec.epsilon);
        ys = mollify_samples(ys, spec.epsilon);
        for (size_t j = 0; j < row.size(); ++j) row[j] = {xs[j], ys[j]};
    }

    if (state.domain == Domain::HalfPlane) {
        const double drift = spec.drift_const * family.theta_total() * spec.epsilon *
                             std::pow(spec.ref_norm_M, 3.0 + 2.0 * alpha);
        for (auto& row : rhs.values)
            for (Vec2& v : row) v.y += drift;
    }
    return rhs;
}

RhsField contour_rhs_for(const ContourState& state, const PatchFamily& family, double alpha,
                         const RegularizationSpec& spec, const RhsOptions& options) {
    spec.check();
    switch (spec.kind) {
        case RegularizationSpec::Kind::Plain:
            return contour_rhs(state, family, alpha, options);
        case RegularizationSpec::Kind::BetaKernel:
            return contour_rhs_beta(state, family, alpha, spec.beta, options);
        case RegularizationSpec::Kind::Mollified:
            return contour_rhs_mollified(state, family, alpha, spec, options);
    }
    throw validation_error("unknown regularization kind");
}

} // namespace msqg
