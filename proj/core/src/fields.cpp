#include "msqg/fields.hpp"

#include <algorithm>
#include <cmath>

#include "assembly_util.hpp"
#include "geom_util.hpp"
#include "kernel_loops.hpp"
#include "msqg/curvekit.hpp"
#include "msqg/spectral.hpp"

namespace msqg {

void KernelSpec::check() const {
    if (!(alpha > 0.0) || !(alpha < 0.5))
        throw validation_error("kernel alpha must lie in (0, 1/2)");
    if (!(beta >= 0.0)) throw validation_error("kernel beta must be nonnegative");
}

namespace {

void check_inputs(const ContourState& state, const PatchFamily& family,
                  const KernelSpec& kernel) {
    check_state_family(state, family);
    kernel.check();
    if (kernel.domain != state.domain)
        throw validation_error("kernel and state disagree on the domain");
}

// 16-point Gauss-Legendre rule, stored as the positive half of the symmetric
// node set with matching weights.
constexpr double kGL16X[8] = {0.0950125098376375, 0.2816035507792589, 0.4580167776572274,
                              0.6178762444026438, 0.7554044083550030, 0.8656312023878318,
                              0.9445750230732326, 0.9894009349916499};
constexpr double kGL16W[8] = {0.1894506104550686, 0.1826034150449236, 0.1691565193950026,
                              0.1495959888165768, 0.1246289712555340, 0.0951585116824926,
                              0.0622535239386477, 0.0271524594117540};

// int_0^delta (d^2 + s^2 t^2)^(-alpha) dt, accurate in every regime of d
// versus s * delta, including d = 0 where the integrand degenerates to the
// integrable power |s t|^(-2 alpha).
double near_singular_tail(double d, double s, double delta, double alpha) {
    const double sd = s * delta;
    if (!(d > sd * 1e-8)) return std::pow(sd, -2.0 * alpha) * delta / (1.0 - 2.0 * alpha);
    const double r = sd / d;
    if (r <= 0.3) {
        // Binomial series of (1 + (s t / d)^2)^(-alpha), integrated termwise.
        double coef = 1.0, sum = 0.0, pw = 1.0;
        const double r2 = r * r;
        for (int k = 0; k < 12; ++k) {
            sum += coef * pw / (2.0 * k + 1.0);
            coef *= (-alpha - k) / (k + 1.0);
            pw *= r2;
        }
        return std::pow(d, -2.0 * alpha) * delta * sum;
    }
    // Quadrature over [0, min(3 d / s, delta)] where the integrand is flat,
    // then a binomial series in (d / (s t))^2 <= 1/9 for the power-law rest.
    const double t0 = std::min(3.0 * d / s, delta);
    double total = 0.0;
    const double mid = 0.5 * t0;
    for (int g = 0; g < 8; ++g) {
        const double tp = mid * (1.0 + kGL16X[g]), tm = mid * (1.0 - kGL16X[g]);
        total += kGL16W[g] * mid *
                 (std::pow(d * d + s * s * tp * tp, -alpha) +
                  std::pow(d * d + s * s * tm * tm, -alpha));
    }
    if (t0 < delta) {
        // Here t0 = 3 d / s, so d / (s t) <= 1/3 on [t0, delta]; keep every
        // power bounded by factoring t^p = t^{1-2a} (d/(s t))^{2k}.
        const double head_d = std::pow(delta, 1.0 - 2.0 * alpha);
        const double head_t = std::pow(t0, 1.0 - 2.0 * alpha);
        const double qd = (d / (s * delta)) * (d / (s * delta));
        const double qt = 1.0 / 9.0;
        double coef = 1.0, sum = 0.0, pwd = 1.0, pwt = 1.0;
        for (int k = 0; k < 12; ++k) {
            const double p = 1.0 - 2.0 * alpha - 2.0 * k;
            sum += coef * (head_d * pwd - head_t * pwt) / p;
            coef *= (-alpha - k) / (k + 1.0);
            pwd *= qd;
            pwt *= qt;
        }
        total += std::pow(s, -2.0 * alpha) * sum;
    }
    return total;
}

// Boundary-form contribution of one source curve (possibly mirrored) at x,
// integrated with graded Gauss panels around the parameter nearest to x.
// Used when x is too close to the curve for the uniform trapezoid.
Vec2 graded_curve_integral(Vec2 x, const Curve& source, bool mirrored, double alpha,
                           int nearest_node) {
    Curve src = source;
    if (mirrored) {
        for (Vec2& p : src.samples) p = reflect(p);
    }
    const int m = src.grid_size();
    const double h = 2.0 * pi / m;
    CurveInterp interp(src);

    // Parameter of the closest curve point by Newton on |x - y(eta)|^2.
    double eta_hat = -pi + h * nearest_node;
    for (int it = 0; it < 30; ++it) {
        const Vec2 d = interp(eta_hat) - x;
        const Vec2 dy = interp.derivative(eta_hat, 1);
        const Vec2 ddy = interp.derivative(eta_hat, 2);
        const double grad = 2.0 * dot(d, dy);
        const double hess = 2.0 * (dot(dy, dy) + dot(d, ddy));
        if (hess <= 0.0) break;
        const double delta = grad / hess;
        eta_hat -= delta;
        if (std::abs(delta) < 1e-14) break;
    }
    const double dist = norm(interp(eta_hat) - x);

    auto integrand = [&](double eta) {
        const Vec2 dy = interp.derivative(eta, 1);
        const Vec2 w = x - interp(eta);
        return std::pow(norm2(w), -alpha) * dy;
    };
    // d/d eta of the integrand, for the edge correction below.
    auto integrand_deriv = [&](double eta) {
        const Vec2 dy = interp.derivative(eta, 1);
        const Vec2 ddy = interp.derivative(eta, 2);
        const Vec2 w = x - interp(eta);
        const double r2 = norm2(w);
        return std::pow(r2, -alpha) * ddy +
               2.0 * alpha * dot(w, dy) * std::pow(r2, -alpha - 1.0) * dy;
    };

    // Midpoint sum over nodes outside a window around the near point.  Node j
    // covers the cell [eta_j - h/2, eta_j + h/2], so the kept cells tile the
    // complement of [a, b] below exactly; the leading Euler-Maclaurin term at
    // the two window edges restores accuracy lost to the hard cutoff.
    const int wing = 8;
    const int center = static_cast<int>(std::llround((eta_hat + pi) / h));
    const auto tangents = spectral_derivative(src, 1);
    Vec2 total{0.0, 0.0};
    for (int j = 0; j < m; ++j) {
        int offset = std::abs(j - center) % m;
        offset = std::min(offset, m - offset);
        if (offset <= wing) continue;
        total += h * std::pow(norm2(x - src.samples[j]), -alpha) * tangents[j];
    }
    const double eta_c = -pi + h * center;
    const double a = eta_c - (wing + 0.5) * h;
    const double b = eta_c + (wing + 0.5) * h;
    total += (h * h / 24.0) * (integrand_deriv(a) - integrand_deriv(b));

    // Dyadic Gauss panels from each window edge toward eta_hat, stopping at a
    // cutoff below which |x - y(eta_hat + t)|^2 = dist^2 + speed^2 t^2 holds
    // to rounding; that innermost piece is integrated in closed form.
    static const double gx[4] = {0.1834346424956498, 0.5255324099163290, 0.7966664774136267,
                                 0.9602898564975363};
    static const double gw[4] = {0.3626837833783620, 0.3137066458778873, 0.2223810344533745,
                                 0.1012285362903763};
    auto gauss_panel = [&](double lo, double hi) {
        const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
        Vec2 s{0.0, 0.0};
        for (int g = 0; g < 4; ++g)
            s += gw[g] * (integrand(mid + half * gx[g]) + integrand(mid - half * gx[g]));
        return half * s;
    };
    const double speed = std::max(norm(interp.derivative(eta_hat, 1)), 1e-12);
    const double cut = std::max(1e-3 * dist / speed, 1e-9);
    const double tail = near_singular_tail(dist, speed, cut, alpha);
    for (int side = -1; side <= 1; side += 2) {
        double edge = side < 0 ? eta_hat - a : b - eta_hat;
        while (edge > cut) {
            const double inner = std::max(0.5 * edge, cut);
            total += side < 0 ? gauss_panel(eta_hat - edge, eta_hat - inner)
                              : gauss_panel(eta_hat + inner, eta_hat + edge);
            edge = inner;
        }
        total += tail * interp.derivative(eta_hat + side * 0.5 * cut, 1);
    }
    return total;
}

} // namespace

Vec2 velocity_at(Vec2 x, const ContourState& state, const PatchFamily& family,
                 const KernelSpec& kernel, VelocityEvalInfo* info) {
    check_inputs(state, family, kernel);
    if (state.domain == Domain::HalfPlane && !(x.y >= 0.0))
        throw validation_error("evaluation point must lie in the closed half-plane");

    const bool mirror = state.domain == Domain::HalfPlane;
    const auto arrays = detail::prepare_arrays(state, mirror);
    const int m = state.grid_size();
    const double h = 2.0 * pi / m;
    const double neg_alpha = -kernel.alpha;
    const double beta2 = kernel.beta * kernel.beta;

    if (info) {
        info->near_singular_fallback = false;
        info->min_node_distance = 1e300;
    }

    Vec2 u{0.0, 0.0};
    for (size_t i = 0; i < arrays.size(); ++i) {
        const auto& a = arrays[i];
        const double coef = -family.strengths[i] / (2.0 * kernel.alpha) * h;
        double svx = 0.0, svy = 0.0, mr2 = 0.0;
        detail::point_sums(x.x, x.y, a.x.data(), a.y.data(), a.dx.data(), a.dy.data(), m,
                           neg_alpha, beta2, &svx, &svy, &mr2);
        Vec2 contrib{svx, svy};

        const double local_seg = detail::mean_segment_length(state.curves[i].samples);
        if (info) info->min_node_distance = std::min(info->min_node_distance, std::sqrt(mr2));
        if (kernel.beta == 0.0 && mr2 < 4.0 * local_seg * local_seg) {
            // Too close for the uniform rule: re-integrate this curve with
            // graded panels around the near point.
            int nearest = 0;
            double best = 1e300;
            for (int j = 0; j < m; ++j) {
                const double d2 = norm2(x - state.curves[i].samples[j]);
                if (d2 < best) {
                    best = d2;
                    nearest = j;
                }
            }
            contrib = (1.0 / h) * graded_curve_integral(x, state.curves[i], false, kernel.alpha,
                                                        nearest);
            if (info) info->near_singular_fallback = true;
        }
        u += coef * contrib;

        if (mirror) {
            double mvx = 0.0, mvy = 0.0, mmr2 = 0.0;
            detail::point_sums(x.x, x.y, a.mx.data(), a.my.data(), a.mdx.data(), a.mdy.data(), m,
                               neg_alpha, beta2, &mvx, &mvy, &mmr2);
            Vec2 mcontrib{mvx, mvy};
            if (info) info->min_node_distance = std::min(info->min_node_distance, std::sqrt(mmr2));
            if (kernel.beta == 0.0 && mmr2 < 4.0 * local_seg * local_seg) {
                int nearest = 0;
                double best = 1e300;
                for (int j = 0; j < m; ++j) {
                    const double d2 = norm2(x - reflect(state.curves[i].samples[j]));
                    if (d2 < best) {
                        best = d2;
                        nearest = j;
                    }
                }
                mcontrib = (1.0 / h) * graded_curve_integral(x, state.curves[i], true,
                                                             kernel.alpha, nearest);
                if (info) info->near_singular_fallback = true;
            }
            u += coef * mcontrib;
        }
    }
    return u;
}

std::vector<std::vector<double>> normal_velocity_on_boundary(const ContourState& state,
                                                             const PatchFamily& family,
                                                             const KernelSpec& kernel) {
    check_inputs(state, family, kernel);
    const bool mirror = state.domain == Domain::HalfPlane;
    const auto arrays = detail::prepare_arrays(state, mirror);
    const int m = state.grid_size();
    const double h = 2.0 * pi / m;
    const double neg_alpha = -kernel.alpha;
    const double beta2 = kernel.beta * kernel.beta;
    const int n = static_cast<int>(state.curves.size());

    std::vector<std::vector<double>> result(n, std::vector<double>(m, 0.0));
    std::vector<double> s1(m), svx(m), svy(m);
    for (int k = 0; k < n; ++k) {
        const auto& target = arrays[k];
        std::vector<Vec2> sums(m, Vec2{0.0, 0.0});
        for (int i = 0; i < n; ++i) {
            const auto& src = arrays[i];
            const double coef = -family.strengths[i] / (2.0 * kernel.alpha) * h;
            double mr2 = 0.0;
            detail::block_sums(target.x.data(), target.y.data(), m, src.x.data(), src.y.data(),
                               src.dx.data(), src.dy.data(), m, neg_alpha, beta2, i == k,
                               s1.data(), svx.data(), svy.data(), &mr2);
            for (int j = 0; j < m; ++j) sums[j] += coef * Vec2{svx[j], svy[j]};
            if (mirror) {
                detail::block_sums(target.x.data(), target.y.data(), m, src.mx.data(),
                                   src.my.data(), src.mdx.data(), src.mdy.data(), m, neg_alpha,
                                   beta2, false, s1.data(), svx.data(), svy.data(), &mr2);
                for (int j = 0; j < m; ++j) sums[j] += coef * Vec2{svx[j], svy[j]};
            }
        }
        for (int j = 0; j < m; ++j) {
            const Vec2 tangent{target.dx[j], target.dy[j]};
            const Vec2 n_out = perp(tangent) / norm(tangent);
            result[k][j] = dot(sums[j], n_out);
        }
    }
    return result;
}

double uinf_bound(const PatchFamily& family, const ContourState& state,
                  const KernelSpec& kernel) {
    check_inputs(state, family, kernel);
    double max_theta = 0.0, l1 = 0.0;
    for (size_t i = 0; i < family.strengths.size(); ++i) {
        max_theta = std::max(max_theta, std::abs(family.strengths[i]));
        l1 += std::abs(family.strengths[i]) * std::abs(polygon_area(state.curves[i]));
    }
    return 2.0 * pi / (1.0 - 2.0 * kernel.alpha) * max_theta + 2.0 * l1;
}

double uhold_bound(const PatchFamily& family, const ContourState& state,
                   const KernelSpec& kernel) {
    check_inputs(state, family, kernel);
    double max_theta = 0.0, l1 = 0.0;
    for (size_t i = 0; i < family.strengths.size(); ++i) {
        max_theta = std::max(max_theta, std::abs(family.strengths[i]));
        l1 += std::abs(family.strengths[i]) * std::abs(polygon_area(state.curves[i]));
    }
    return 8.0 * pi / (kernel.alpha * (1.0 - 2.0 * kernel.alpha)) * max_theta + 2.0 * l1;
}

VelocityProbe velocity_gradient(Vec2 x, const ContourState& state, const PatchFamily& family,
                                const KernelSpec& kernel) {
    const double h = 1e-5 * (1.0 + norm(x));
    const Vec2 ux_p = velocity_at(x + Vec2{h, 0}, state, family, kernel);
    const Vec2 ux_m = velocity_at(x - Vec2{h, 0}, state, family, kernel);
    const Vec2 uy_p = velocity_at(x + Vec2{0, h}, state, family, kernel);
    const Vec2 uy_m = velocity_at(x - Vec2{0, h}, state, family, kernel);
    VelocityProbe probe;
    probe.point = x;
    probe.value = velocity_at(x, state, family, kernel);
    probe.gradient[0][0] = (ux_p.x - ux_m.x) / (2.0 * h);
    probe.gradient[0][1] = (uy_p.x - uy_m.x) / (2.0 * h);
    probe.gradient[1][0] = (ux_p.y - ux_m.y) / (2.0 * h);
    probe.gradient[1][1] = (uy_p.y - uy_m.y) / (2.0 * h);
    probe.has_gradient = true;
    return probe;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw validation_error("loglog_slope needs matched arrays with >= 2 points");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const int n = static_cast<int>(x.size());
    for (int i = 0; i < n; ++i) {
        if (!(x[i] > 0.0) || !(y[i] > 0.0))
            throw validation_error("loglog_slope needs positive data");
        const double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    const double denom = n * sxx - sx * sx;
    if (denom == 0.0) throw validation_error("loglog_slope: degenerate abscissae");
    return (n * sxy - sx * sy) / denom;
}

namespace {

void reject_probe_point(Vec2 p, const ContourState& state) {
    for (const Curve& c : state.curves) {
        if (detail::point_in_polygon(p, c.samples))
            throw validation_error("probe point lies inside a patch");
        const double d = detail::point_polygon_distance(p, c.samples);
        if (d < detail::min_segment_length(c.samples))
            throw validation_error("probe point reaches a patch boundary");
    }
}

} // namespace

ProbeFit vertical_velocity_probe(const ContourState& state, const PatchFamily& family,
                                 const KernelSpec& kernel, double x1,
                                 const std::vector<double>& heights) {
    if (kernel.domain != Domain::HalfPlane)
        throw validation_error("vertical velocity probe requires the half-plane");
    ProbeFit fit;
    for (double h : heights) {
        if (!(h > 0.0)) throw validation_error("probe heights must be positive");
        const Vec2 p{x1, h};
        reject_probe_point(p, state);
        const Vec2 u = velocity_at(p, state, family, kernel);
        fit.abscissae.push_back(h);
        fit.values.push_back(std::abs(u.y));
    }
    fit.slope = loglog_slope(fit.abscissae, fit.values);
    return fit;
}

ProbeFit gradient_decay_probe(const ContourState& state, const PatchFamily& family,
                              const KernelSpec& kernel, Vec2 far_direction,
                              const std::vector<double>& distances) {
    const double len = norm(far_direction);
    if (!(len > 0.0)) throw validation_error("far direction must be nonzero");
    const Vec2 dir = far_direction / len;
    ProbeFit fit;
    for (double d : distances) {
        const Vec2 p = d * dir;
        double clearance = 1e300;
        for (const Curve& c : state.curves) {
            if (detail::point_in_polygon(p, c.samples))
                throw validation_error("gradient probe point lies inside a patch");
            clearance = std::min(clearance, detail::point_polygon_distance(p, c.samples));
        }
        const VelocityProbe probe = velocity_gradient(p, state, family, kernel);
        double frob = 0.0;
        for (int r = 0; r < 2; ++r)
            for (int s = 0; s < 2; ++s) frob += probe.gradient[r][s] * probe.gradient[r][s];
        fit.abscissae.push_back(clearance);
        fit.values.push_back(std::sqrt(frob));
    }
    fit.slope = loglog_slope(fit.abscissae, fit.values);
    return fit;
}

double normal_difference_probe(const ContourState& state, const PatchFamily& family,
                               const KernelSpec& kernel, Vec2 point, Vec2 unit_normal,
                               const std::vector<double>& radii) {
    const double len = norm(unit_normal);
    if (!(len > 0.0)) throw validation_error("probe normal must be nonzero");
    const Vec2 n = unit_normal / len;
    // The curve nearest to the base point is the one being probed.  Points on
    // its normal ray may sit arbitrarily close to it; they must not enter any
    // patch or reach one of the other boundaries.
    std::size_t home = 0;
    double best = 1e300;
    for (std::size_t i = 0; i < state.curves.size(); ++i) {
        const double d = detail::point_polygon_distance(point, state.curves[i].samples);
        if (d < best) {
            best = d;
            home = i;
        }
    }
    const Vec2 u0 = velocity_at(point, state, family, kernel);
    double worst = 0.0;
    for (double r : radii) {
        if (!(r > 0.0)) throw validation_error("probe radii must be positive");
        const Vec2 p = point + r * n;
        for (std::size_t i = 0; i < state.curves.size(); ++i) {
            if (detail::point_in_polygon(p, state.curves[i].samples))
                throw validation_error("probe point lies inside a patch");
            if (i != home && detail::point_polygon_distance(p, state.curves[i].samples) <
                                 detail::min_segment_length(state.curves[i].samples))
                throw validation_error("probe point reaches a patch boundary");
        }
        const Vec2 u = velocity_at(p, state, family, kernel);
        worst = std::max(worst, std::abs(dot(u - u0, n)) / r);
    }
    return worst;
}

} // namespace msqg
