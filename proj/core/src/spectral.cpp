#include "msqg/spectral.hpp"

#include <fftw3.h>

#include <boost/math/quadrature/gauss.hpp>

#include <complex>
#include <map>
#include <memory>
#include <mutex>
#include <utility>

namespace msqg {

namespace {

// One cached plan pair per grid size.  FFTW planning and the shared buffers
// are not thread-safe, so every transform holds the module mutex.
struct FftPlan {
    int size;
    double* real_buf;
    fftw_complex* cplx_buf;
    fftw_plan fwd;
    fftw_plan inv;

    explicit FftPlan(int m) : size(m) {
        real_buf = fftw_alloc_real(static_cast<size_t>(m));
        cplx_buf = fftw_alloc_complex(static_cast<size_t>(m / 2 + 1));
        fwd = fftw_plan_dft_r2c_1d(m, real_buf, cplx_buf, FFTW_ESTIMATE);
        inv = fftw_plan_dft_c2r_1d(m, cplx_buf, real_buf, FFTW_ESTIMATE);
    }
    ~FftPlan() {
        fftw_destroy_plan(fwd);
        fftw_destroy_plan(inv);
        fftw_free(real_buf);
        fftw_free(cplx_buf);
    }
    FftPlan(const FftPlan&) = delete;
    FftPlan& operator=(const FftPlan&) = delete;
};

std::mutex& fft_mutex() {
    static std::mutex m;
    return m;
}

FftPlan& plan_for(int m) {
    static std::map<int, std::unique_ptr<FftPlan>> cache;
    auto it = cache.find(m);
    if (it == cache.end()) it = cache.emplace(m, std::make_unique<FftPlan>(m)).first;
    return *it->second;
}

void require_grid(const std::vector<double>& samples) {
    check_grid_size(static_cast<int>(samples.size()));
}

// C_m = sum_j f_j exp(-2*pi*i*j*m/M), m = 0..M/2.
std::vector<std::complex<double>> half_spectrum_locked(const std::vector<double>& samples,
                                                       FftPlan& plan) {
    const int m = plan.size;
    for (int j = 0; j < m; ++j) plan.real_buf[j] = samples[j];
    fftw_execute(plan.fwd);
    std::vector<std::complex<double>> spec(static_cast<size_t>(m / 2 + 1));
    for (int k = 0; k <= m / 2; ++k) spec[k] = {plan.cplx_buf[k][0], plan.cplx_buf[k][1]};
    return spec;
}

std::vector<double> inverse_locked(const std::vector<std::complex<double>>& spec, FftPlan& plan) {
    const int m = plan.size;
    for (int k = 0; k <= m / 2; ++k) {
        plan.cplx_buf[k][0] = spec[k].real();
        plan.cplx_buf[k][1] = spec[k].imag();
    }
    fftw_execute(plan.inv);
    std::vector<double> out(static_cast<size_t>(m));
    for (int j = 0; j < m; ++j) out[j] = plan.real_buf[j] / m;
    return out;
}

} // namespace

std::vector<double> spectral_derivative(const std::vector<double>& samples, int order) {
    require_grid(samples);
    if (order < 1 || order > 4) throw validation_error("spectral_derivative: order must be 1..4");
    const int m = static_cast<int>(samples.size());
    std::lock_guard<std::mutex> lock(fft_mutex());
    FftPlan& plan = plan_for(m);
    auto spec = half_spectrum_locked(samples, plan);
    for (int k = 0; k <= m / 2; ++k) {
        // (i*k)^order; the grid offset of -pi cancels in the round trip.
        double mag = 1.0;
        for (int p = 0; p < order; ++p) mag *= k;
        std::complex<double> factor;
        switch (order % 4) {
            case 0: factor = {mag, 0.0}; break;
            case 1: factor = {0.0, mag}; break;
            case 2: factor = {-mag, 0.0}; break;
            default: factor = {0.0, -mag}; break;
        }
        spec[k] *= factor;
    }
    // The Nyquist mode has no faithful odd-order derivative on the grid.
    if (order % 2 == 1) spec[m / 2] = 0.0;
    return inverse_locked(spec, plan);
}

std::vector<Vec2> spectral_derivative(const Curve& curve, int order) {
    const int m = curve.grid_size();
    std::vector<double> x(static_cast<size_t>(m)), y(static_cast<size_t>(m));
    for (int j = 0; j < m; ++j) {
        x[j] = curve.samples[j].x;
        y[j] = curve.samples[j].y;
    }
    const auto dx = spectral_derivative(x, order);
    const auto dy = spectral_derivative(y, order);
    std::vector<Vec2> out(static_cast<size_t>(m));
    for (int j = 0; j < m; ++j) out[j] = {dx[j], dy[j]};
    return out;
}

TrigInterp::TrigInterp(const std::vector<double>& samples) {
    require_grid(samples);
    const int m = static_cast<int>(samples.size());
    grid_size_ = m;
    std::lock_guard<std::mutex> lock(fft_mutex());
    FftPlan& plan = plan_for(m);
    const auto spec = half_spectrum_locked(samples, plan);
    cos_coef_.assign(static_cast<size_t>(m / 2 + 1), 0.0);
    sin_coef_.assign(static_cast<size_t>(m / 2 + 1), 0.0);
    // Coefficients against cos(k*u), sin(k*u) with u = xi + pi (grid origin).
    cos_coef_[0] = spec[0].real() / m;
    for (int k = 1; k < m / 2; ++k) {
        cos_coef_[k] = 2.0 * spec[k].real() / m;
        sin_coef_[k] = -2.0 * spec[k].imag() / m;
    }
    cos_coef_[m / 2] = spec[m / 2].real() / m;
}

double TrigInterp::operator()(double xi) const { return derivative(xi, 0); }

double TrigInterp::derivative(double xi, int order) const {
    if (order < 0 || order > 4) throw validation_error("TrigInterp: order must be 0..4");
    const double u = xi + pi;
    const int half = grid_size_ / 2;
    // cos/sin recurrences over modes; differentiation rotates (a_k, b_k) by
    // k * d/du: a cos + b sin -> (k b) cos + (-k a) sin.
    const double c1 = std::cos(u), s1 = std::sin(u);
    double ck = 1.0, sk = 0.0; // cos(0u), sin(0u)
    double total = 0.0;
    for (int k = 0; k <= half; ++k) {
        double a = cos_coef_[k], b = sin_coef_[k];
        for (int p = 0; p < order; ++p) {
            const double an = k * b, bn = -k * a;
            a = an;
            b = bn;
        }
        total += a * ck + b * sk;
        const double cn = ck * c1 - sk * s1;
        const double sn = sk * c1 + ck * s1;
        ck = cn;
        sk = sn;
    }
    return total;
}

CurveInterp::CurveInterp(const Curve& curve)
    : fx_([&] {
          std::vector<double> x(curve.samples.size());
          for (size_t j = 0; j < x.size(); ++j) x[j] = curve.samples[j].x;
          return TrigInterp(x);
      }()),
      fy_([&] {
          std::vector<double> y(curve.samples.size());
          for (size_t j = 0; j < y.size(); ++j) y[j] = curve.samples[j].y;
          return TrigInterp(y);
      }()) {}

namespace {

double bump_raw(double s) {
    const double d = 1.0 - s * s;
    return d > 0.0 ? std::exp(-1.0 / d) : 0.0;
}

// 2 * integral over [0,1] of bump_raw(s) * cos(w s) ds by panels short enough
// for the Gauss rule to resolve the oscillation.
double bump_cos_integral(double w) {
    using gauss = boost::math::quadrature::gauss<double, 16>;
    const int panels = 8 + static_cast<int>(std::abs(w) / 2.0);
    double total = 0.0;
    for (int p = 0; p < panels; ++p) {
        const double a = static_cast<double>(p) / panels;
        const double b = static_cast<double>(p + 1) / panels;
        total += gauss::integrate([w](double s) { return bump_raw(s) * std::cos(w * s); }, a, b);
    }
    return 2.0 * total;
}

double bump_mass() {
    static const double mass = bump_cos_integral(0.0);
    return mass;
}

} // namespace

double mollifier_symbol(int mode, double epsilon) {
    if (!(epsilon > 0.0) || !(epsilon < pi))
        throw validation_error("mollifier_symbol: epsilon must lie in (0, pi)");
    return bump_cos_integral(mode * epsilon) / bump_mass();
}

std::vector<double> mollify_samples(const std::vector<double>& samples, double epsilon) {
    require_grid(samples);
    if (!(epsilon > 0.0) || !(epsilon < pi))
        throw validation_error("mollify_samples: epsilon must lie in (0, pi)");
    const int m = static_cast<int>(samples.size());

    // The symbol table is deterministic per (M, epsilon); cache it.
    static std::map<std::pair<int, double>, std::vector<double>> symbol_cache;
    std::lock_guard<std::mutex> lock(fft_mutex());
    auto key = std::make_pair(m, epsilon);
    auto it = symbol_cache.find(key);
    if (it == symbol_cache.end()) {
        std::vector<double> table(static_cast<size_t>(m / 2 + 1));
        for (int k = 0; k <= m / 2; ++k) table[k] = mollifier_symbol(k, epsilon);
        it = symbol_cache.emplace(std::move(key), std::move(table)).first;
    }
    const auto& symbol = it->second;

    FftPlan& plan = plan_for(m);
    auto spec = half_spectrum_locked(samples, plan);
    for (int k = 0; k <= m / 2; ++k) spec[k] *= symbol[k];
    return inverse_locked(spec, plan);
}

std::vector<double> spectral_antiderivative(const std::vector<double>& samples) {
    require_grid(samples);
    const int m = static_cast<int>(samples.size());
    std::lock_guard<std::mutex> lock(fft_mutex());
    FftPlan& plan = plan_for(m);
    auto spec = half_spectrum_locked(samples, plan);
    spec[0] = 0.0;
    for (int k = 1; k <= m / 2; ++k) spec[k] /= std::complex<double>(0.0, k);
    // The Nyquist cosine has no periodic antiderivative representable on the
    // half spectrum; its contribution at grid points is a pure sine there.
    spec[m / 2] = 0.0;
    return inverse_locked(spec, plan);
}

double periodic_mean(const std::vector<double>& samples) {
    if (samples.empty()) throw validation_error("periodic_mean: empty samples");
    double total = 0.0;
    for (double v : samples) total += v;
    return total / static_cast<double>(samples.size());
}

double periodic_integral(const std::vector<double>& samples) {
    return periodic_mean(samples) * 2.0 * pi;
}

} // namespace msqg
