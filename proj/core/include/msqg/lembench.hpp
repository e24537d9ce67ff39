#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace msqg {

// Nonnegative scalar field sampled on the periodic grid xi_j = -pi + 2*pi*j/M,
// band-limited below M/4 so spectral derivatives are exact.
struct ScalarField {
    std::vector<double> samples;
    double enforced_min = 0.0; // positive lower bound guaranteed by construction

    int grid_size() const { return static_cast<int>(samples.size()); }
};

// sqrt( sup|f|^2 + trapezoid(f'''^2) ).
double scalar_h3_norm(const ScalarField& f);

// sup|f| + sup|f'| + discrete Holder seminorm of f' with exponent gamma over
// grid pairs at geodesic xi-distance.
double holder_c1gamma_norm(const ScalarField& f, double gamma);

// max over the grid of |f'| / ( 2 ||f||_{C^{1,gamma}}^{1/(1+gamma)} f^{gamma/(1+gamma)} )
// for f >= 0; a value above 1 is a violation of the derivative bound.  Points
// with f = 0 contribute 0 when f' vanishes there and +inf otherwise.
double check_derivative_bound(const ScalarField& f, double gamma);

// trapezoid( |f'| / f^{beta+1/2} ) / ( 10 ||f||_H3^{1/2-beta} ) for f > 0 and
// beta in [0, 1/6]; the constant 10 makes values <= 1 a hard expectation.
double check_bv_bound(const ScalarField& f, double beta);

// ( trapezoid(|f'|^n / f^{beta+n/2}) / ||f||_H3^{n/2-beta},
//   trapezoid(f''^2 / f^beta)      / ||f||_H3^{2-beta} ).
// The constants are not explicit, so callers check scale invariance and
// stability under refinement rather than a threshold.
std::pair<double, double> check_sobolev_ratios(const ScalarField& f, int n, double beta);

// Random positive field g^2 + shift with g a band-limited trig polynomial of
// degree 5 (coefficients a_m, b_m ~ (2u-1)/(1+m^2), shift = 0.02 + 0.98u, all
// draws u = next()/2^32 from the supplied engine in a fixed order).
ScalarField random_positive_field(std::mt19937& rng, int grid_size);

struct BenchReport {
    struct Entry {
        std::string check;
        double max_ratio = 0.0;
        int argmax_index = -1; // corpus position of the worst field
    };
    std::uint32_t seed = 0;
    int corpus_size = 0;
    int grid_size = 0;
    std::vector<Entry> entries;
};

// Evaluate every check over a seeded corpus; the same seed yields the same
// continuum fields at any grid size (draws are grid-independent), so reports
// at M and 2M are directly comparable.
BenchReport run_bench(std::uint32_t seed, int corpus_size, int grid_size);

std::string bench_report_json(const BenchReport& report);

} // namespace msqg
