#include "msqg/lembench.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include <json.hpp>

#include "msqg/curve.hpp"
#include "msqg/spectral.hpp"

namespace msqg {

namespace {

void check_field(const ScalarField& f) {
    if (f.samples.size() < 16)
        throw validation_error("scalar field needs at least 16 samples");
}

void check_positive(const ScalarField& f) {
    check_field(f);
    for (double v : f.samples)
        if (!(v > 0.0)) throw validation_error("this check needs a strictly positive field");
}

double sup_abs(const std::vector<double>& v) {
    double worst = 0.0;
    for (double x : v) worst = std::max(worst, std::abs(x));
    return worst;
}

double trapezoid(const std::vector<double>& v) {
    double sum = 0.0;
    for (double x : v) sum += x;
    return 2.0 * pi / static_cast<double>(v.size()) * sum;
}

double geodesic(double a, double b) {
    double d = std::abs(a - b);
    return std::min(d, 2.0 * pi - d);
}

} // namespace

double scalar_h3_norm(const ScalarField& f) {
    check_field(f);
    const std::vector<double> f3 = spectral_derivative(f.samples, 3);
    double sq = 0.0;
    for (double v : f3) sq += v * v;
    const double s = sup_abs(f.samples);
    return std::sqrt(s * s + 2.0 * pi / f.grid_size() * sq);
}

double holder_c1gamma_norm(const ScalarField& f, double gamma) {
    check_field(f);
    if (!(gamma > 0.0) || !(gamma <= 1.0))
        throw validation_error("Holder exponent must lie in (0, 1]");
    const std::vector<double> fp = spectral_derivative(f.samples, 1);
    const int m = f.grid_size();
    const double h = 2.0 * pi / m;
    double semi = 0.0;
    for (int j = 0; j < m; ++j) {
        for (int l = j + 1; l < m; ++l) {
            const double d = geodesic(h * j, h * l);
            semi = std::max(semi, std::abs(fp[j] - fp[l]) / std::pow(d, gamma));
        }
    }
    return sup_abs(f.samples) + sup_abs(fp) + semi;
}

double check_derivative_bound(const ScalarField& f, double gamma) {
    check_field(f);
    for (double v : f.samples)
        if (!(v >= 0.0)) throw validation_error("derivative bound needs a nonnegative field");
    const double c1g = holder_c1gamma_norm(f, gamma);
    const std::vector<double> fp = spectral_derivative(f.samples, 1);
    // Spectral derivatives of a smooth field that merely touches zero carry
    // O(eps * sup|f'|) noise at the zero, which must not read as a violation.
    double sup_fp = 0.0;
    for (double v : fp) sup_fp = std::max(sup_fp, std::abs(v));
    const double noise_floor = 1e-12 * (1.0 + sup_fp);
    const double e = 1.0 / (1.0 + gamma);
    double worst = 0.0;
    for (size_t j = 0; j < f.samples.size(); ++j) {
        if (f.samples[j] == 0.0) {
            if (std::abs(fp[j]) > noise_floor)
                return std::numeric_limits<double>::infinity();
            continue;
        }
        const double denom =
            2.0 * std::pow(c1g, e) * std::pow(f.samples[j], gamma * e);
        worst = std::max(worst, std::abs(fp[j]) / denom);
    }
    return worst;
}

double check_bv_bound(const ScalarField& f, double beta) {
    check_positive(f);
    if (!(beta >= 0.0) || !(beta <= 1.0 / 6.0))
        throw validation_error("bv bound needs beta in [0, 1/6]");
    const std::vector<double> fp = spectral_derivative(f.samples, 1);
    std::vector<double> integrand(f.samples.size());
    for (size_t j = 0; j < f.samples.size(); ++j)
        integrand[j] = std::abs(fp[j]) / std::pow(f.samples[j], beta + 0.5);
    const double h3 = scalar_h3_norm(f);
    return trapezoid(integrand) / (10.0 * std::pow(h3, 0.5 - beta));
}

std::pair<double, double> check_sobolev_ratios(const ScalarField& f, int n, double beta) {
    check_positive(f);
    if (n < 1) throw validation_error("sobolev ratio needs n >= 1");
    if (!(beta >= 0.0) || !(beta <= 1.0 / 6.0))
        throw validation_error("sobolev ratio needs beta in [0, 1/6]");
    const std::vector<double> fp = spectral_derivative(f.samples, 1);
    const std::vector<double> fpp = spectral_derivative(f.samples, 2);
    const double h3 = scalar_h3_norm(f);
    std::vector<double> first(f.samples.size()), second(f.samples.size());
    for (size_t j = 0; j < f.samples.size(); ++j) {
        first[j] = std::pow(std::abs(fp[j]), n) / std::pow(f.samples[j], beta + 0.5 * n);
        second[j] = fpp[j] * fpp[j] / std::pow(f.samples[j], beta);
    }
    return {trapezoid(first) / std::pow(h3, 0.5 * n - beta),
            trapezoid(second) / std::pow(h3, 2.0 - beta)};
}

ScalarField random_positive_field(std::mt19937& rng, int grid_size) {
    if (grid_size < 64)
        throw validation_error("random field needs grid size >= 64 (degree-5 square)");
    check_grid_size(grid_size);
    auto u01 = [&]() { return rng() / 4294967296.0; };
    std::array<double, 6> am, bm;
    for (int m = 0; m <= 5; ++m) am[m] = (2.0 * u01() - 1.0) / (1.0 + m * m);
    for (int m = 0; m <= 5; ++m) bm[m] = (2.0 * u01() - 1.0) / (1.0 + m * m);
    const double shift = 0.02 + 0.98 * u01();

    ScalarField field;
    field.samples.resize(grid_size);
    field.enforced_min = shift;
    for (int j = 0; j < grid_size; ++j) {
        const double xi = -pi + 2.0 * pi * j / grid_size;
        double g = 0.0;
        for (int m = 0; m <= 5; ++m) g += am[m] * std::cos(m * xi) + bm[m] * std::sin(m * xi);
        field.samples[j] = g * g + shift;
    }
    return field;
}

BenchReport run_bench(std::uint32_t seed, int corpus_size, int grid_size) {
    if (corpus_size < 1) throw validation_error("bench corpus must have at least one field");
    BenchReport report;
    report.seed = seed;
    report.corpus_size = corpus_size;
    report.grid_size = grid_size;
    report.entries = {
        {"derivative_bound_gamma1", 0.0, -1}, {"bv_bound_beta0", 0.0, -1},
        {"bv_bound_beta16", 0.0, -1},         {"sobolev_first_n1_beta16", 0.0, -1},
        {"sobolev_second_beta16", 0.0, -1},
    };

    std::mt19937 rng(seed);
    for (int idx = 0; idx < corpus_size; ++idx) {
        const ScalarField f = random_positive_field(rng, grid_size);
        const double beta = 1.0 / 6.0;
        const auto sobolev = check_sobolev_ratios(f, 1, beta);
        const std::array<double, 5> ratios = {
            check_derivative_bound(f, 1.0), check_bv_bound(f, 0.0), check_bv_bound(f, beta),
            sobolev.first,                  sobolev.second,
        };
        for (size_t e = 0; e < ratios.size(); ++e) {
            if (ratios[e] > report.entries[e].max_ratio) {
                report.entries[e].max_ratio = ratios[e];
                report.entries[e].argmax_index = idx;
            }
        }
    }
    return report;
}

std::string bench_report_json(const BenchReport& report) {
    nlohmann::json j;
    j["seed"] = report.seed;
    j["corpus_size"] = report.corpus_size;
    j["grid_size"] = report.grid_size;
    j["entries"] = nlohmann::json::array();
    for (const auto& entry : report.entries) {
        j["entries"].push_back({{"check", entry.check},
                                {"max_ratio", entry.max_ratio},
                                {"argmax_index", entry.argmax_index}});
    }
    return j.dump(2);
}

} // namespace msqg
