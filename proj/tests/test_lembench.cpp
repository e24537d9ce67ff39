#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include <json.hpp>

#include "msqg/lembench.hpp"
#include "msqg/types.hpp"

using namespace msqg;

namespace {

ScalarField cosine_field(double offset, int m) {
    ScalarField f;
    f.samples.resize(m);
    for (int j = 0; j < m; ++j) f.samples[j] = offset + std::cos(-pi + 2.0 * pi * j / m);
    f.enforced_min = offset - 1.0;
    return f;
}

} // namespace

TEST_SUITE_BEGIN("lembench");

TEST_CASE("h3 norm of an offset cosine is exact") {
    // sup = offset + 1, f''' = sin, trapezoid(sin^2) = pi at any grid.
    const double expected = std::sqrt(2.01 * 2.01 + pi);
    CHECK(scalar_h3_norm(cosine_field(1.01, 256)) ==
          doctest::Approx(expected).epsilon(1e-12));
    CHECK(scalar_h3_norm(cosine_field(1.01, 4096)) ==
          doctest::Approx(2.679868029136844).epsilon(1e-12));

    ScalarField stub;
    stub.samples.assign(8, 1.0);
    CHECK_THROWS_AS(scalar_h3_norm(stub), validation_error);
}

TEST_CASE("holder norm of 1 + cos approaches 4 from below") {
    const double c1g = holder_c1gamma_norm(cosine_field(1.0, 4096), 1.0);
    CHECK(c1g == doctest::Approx(3.999999607817363).epsilon(1e-9));
    CHECK(c1g < 4.0);
    CHECK_THROWS_AS(holder_c1gamma_norm(cosine_field(1.0, 256), 0.0), validation_error);
    CHECK_THROWS_AS(holder_c1gamma_norm(cosine_field(1.0, 256), 1.5), validation_error);
}

TEST_CASE("derivative bound ratio on 1 + cos") {
    // Analytic sup of |f'| / (2 sqrt(C^{1,1} f)) is sqrt(2)/4, attained only in
    // the f -> 0 limit; the grid value approaches it from below.
    const double ratio = check_derivative_bound(cosine_field(1.0, 4096), 1.0);
    CHECK(ratio == doctest::Approx(3.535533039277382e-01).epsilon(1e-9));
    CHECK(ratio < std::sqrt(2.0) / 4.0);
    CHECK(ratio < 1.0);
}

TEST_CASE("a zero sample with nonzero slope sends the ratio to infinity") {
    ScalarField f = cosine_field(2.0, 256);
    for (int j = 0; j < 256; ++j)
        f.samples[j] = 1.0 + 0.5 * std::sin(-pi + 2.0 * pi * j / 256);
    f.samples[0] = 0.0; // slope -0.5 survives at the pinned node
    CHECK(std::isinf(check_derivative_bound(f, 1.0)));

    ScalarField negative = cosine_field(2.0, 256);
    negative.samples[3] = -0.1;
    CHECK_THROWS_AS(check_derivative_bound(negative, 1.0), validation_error);
}

TEST_CASE("bv ratios on 1.01 + cos sit well under the hard cap") {
    const ScalarField f = cosine_field(1.01, 4096);
    const double beta0 = check_bv_bound(f, 0.0);
    const double beta16 = check_bv_bound(f, 1.0 / 6.0);
    CHECK(beta0 == doctest::Approx(3.219839439824051e-01).epsilon(1e-9));
    CHECK(beta16 == doctest::Approx(4.520808431143469e-01).epsilon(1e-9));
    CHECK(beta0 < 1.0);
    CHECK(beta16 < 1.0);

    CHECK_THROWS_AS(check_bv_bound(f, 0.2), validation_error);
    CHECK_THROWS_AS(check_bv_bound(f, -0.01), validation_error);
    // 1 + cos touches zero at the xi = -pi node: not strictly positive.
    CHECK_THROWS_AS(check_bv_bound(cosine_field(1.0, 256), 0.0), validation_error);
}

TEST_CASE("sobolev ratios are invariant under f -> lambda f") {
    std::mt19937 rng(11u);
    const ScalarField f = random_positive_field(rng, 256);
    const auto base = check_sobolev_ratios(f, 1, 1.0 / 6.0);
    for (double lambda : {0.5, 2.0, 10.0}) {
        ScalarField g = f;
        for (double& v : g.samples) v *= lambda;
        g.enforced_min *= lambda;
        const auto scaled = check_sobolev_ratios(g, 1, 1.0 / 6.0);
        CHECK(scaled.first == doctest::Approx(base.first).epsilon(1e-10));
        CHECK(scaled.second == doctest::Approx(base.second).epsilon(1e-10));
    }
    CHECK_THROWS_AS(check_sobolev_ratios(f, 0, 0.0), validation_error);
    CHECK_THROWS_AS(check_sobolev_ratios(f, 1, 0.3), validation_error);
}

TEST_CASE("the n = 1 sobolev ratio is ten times the bv ratio") {
    std::mt19937 rng(29u);
    const ScalarField f = random_positive_field(rng, 256);
    const double bv = check_bv_bound(f, 1.0 / 6.0);
    const auto sob = check_sobolev_ratios(f, 1, 1.0 / 6.0);
    CHECK(sob.first == doctest::Approx(10.0 * bv).epsilon(1e-12));
}

TEST_CASE("random field draws do not depend on the grid size") {
    std::mt19937 a(7u), b(7u);
    const ScalarField coarse = random_positive_field(a, 256);
    const ScalarField fine = random_positive_field(b, 512);
    CHECK(coarse.enforced_min == fine.enforced_min);
    for (int j = 0; j < 256; ++j) CHECK(coarse.samples[j] == fine.samples[2 * j]);
    for (double v : coarse.samples) CHECK(v >= coarse.enforced_min);
    CHECK(coarse.enforced_min >= 0.02);

    std::mt19937 c(7u);
    CHECK_THROWS_AS(random_positive_field(c, 32), validation_error);
}

TEST_CASE("the seeded corpus reproduces its frozen maxima") {
    const BenchReport report = run_bench(20240801u, 100, 256);
    CHECK(report.seed == 20240801u);
    CHECK(report.corpus_size == 100);
    CHECK(report.grid_size == 256);
    REQUIRE(report.entries.size() == 5);

    CHECK(report.entries[0].check == "derivative_bound_gamma1");
    CHECK(report.entries[0].max_ratio == doctest::Approx(3.884847680026696e-01).epsilon(1e-9));
    CHECK(report.entries[0].argmax_index == 15);

    CHECK(report.entries[1].check == "bv_bound_beta0");
    CHECK(report.entries[1].max_ratio == doctest::Approx(1.147522688301684e-01).epsilon(1e-9));
    CHECK(report.entries[1].argmax_index == 13);

    CHECK(report.entries[2].check == "bv_bound_beta16");
    CHECK(report.entries[2].max_ratio == doctest::Approx(1.840621960735081e-01).epsilon(1e-9));
    CHECK(report.entries[2].argmax_index == 29);

    CHECK(report.entries[3].check == "sobolev_first_n1_beta16");
    CHECK(report.entries[3].max_ratio == doctest::Approx(1.840621960735081).epsilon(1e-9));
    CHECK(report.entries[3].argmax_index == 29);

    CHECK(report.entries[4].check == "sobolev_second_beta16");
    CHECK(report.entries[4].max_ratio == doctest::Approx(1.768440183976935e-01).epsilon(1e-9));
    CHECK(report.entries[4].argmax_index == 84);

    // Both closed-form constants hold with margin across the whole corpus.
    CHECK(report.entries[0].max_ratio < 1.0);
    CHECK(report.entries[1].max_ratio < 1.0);
    CHECK(report.entries[2].max_ratio < 1.0);

    // Doubling the grid moves the maxima by well under a percent.
    const BenchReport finer = run_bench(20240801u, 100, 512);
    for (std::size_t i = 0; i < report.entries.size(); ++i) {
        CHECK(finer.entries[i].check == report.entries[i].check);
        CHECK(finer.entries[i].max_ratio ==
              doctest::Approx(report.entries[i].max_ratio).epsilon(0.01));
    }

    CHECK_THROWS_AS(run_bench(1u, 0, 256), validation_error);
}

TEST_CASE("the bench report serializes to well-formed json") {
    const BenchReport report = run_bench(42u, 3, 128);
    const nlohmann::json doc = nlohmann::json::parse(bench_report_json(report));
    CHECK(doc.at("seed").get<std::uint32_t>() == 42u);
    CHECK(doc.at("corpus_size").get<int>() == 3);
    CHECK(doc.at("grid_size").get<int>() == 128);
    REQUIRE(doc.at("entries").size() == 5);
    for (const auto& entry : doc.at("entries")) {
        CHECK(entry.contains("check"));
        CHECK(entry.contains("max_ratio"));
        CHECK(entry.contains("argmax_index"));
        CHECK(entry.at("argmax_index").get<int>() >= 0);
        CHECK(entry.at("argmax_index").get<int>() < 3);
    }
}

TEST_SUITE_END();
