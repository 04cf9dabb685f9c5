#include <doctest.h>

#include <cmath>

#include "gazebio/dissimilarity.hpp"
#include "gazebio/rng.hpp"

using namespace gazebio;

namespace {

FeatureGrid grid(std::vector<double> cells, TrialLabel label = {}) {
    return {std::move(cells), std::move(label)};
}

FeatureGrid random_unit_grid(std::size_t size, Rng& rng, double floor = 0.0) {
    FeatureGrid g;
    g.cells.resize(size);
    double total = 0.0;
    for (double& c : g.cells) {
        c = floor + rng.uniform(0.0, 1.0);
        total += c;
    }
    for (double& c : g.cells) c /= total;
    return g;
}

}  // namespace

TEST_SUITE("dissimilarity") {

TEST_CASE("d_mse worked values") {
    CHECK(d_mse(grid({0.5, 0.5}), grid({0.5, 0.5})) == 0.0);
    CHECK(d_mse(grid({1, 0}), grid({0, 1})) == 2.0);
    CHECK(d_mse(grid({0.75, 0.25}), grid({0.25, 0.75})) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("d_min worked values") {
    CHECK(d_min(grid({0.25, 0.75}), grid({0.25, 0.75})) == doctest::Approx(0.0));
    CHECK(d_min(grid({1, 0}), grid({0, 1})) == 1.0);
    CHECK(d_min(grid({0.5, 0.5, 0}), grid({0, 0.5, 0.5})) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("d_kld_sym worked values") {
    CHECK(d_kld_sym(grid({0.5, 0.5}), grid({0.5, 0.5})) == 0.0);
    CHECK(d_kld_sym(grid({0.75, 0.25}), grid({0.25, 0.75})) ==
          doctest::Approx(0.5 * std::log(3.0)).epsilon(1e-6));
    // direct evaluation: D1 ~ 0.3681, D2 ~ 0.5108, harmonic mean ~ 0.4279
    const double d1 = 0.9 * std::log(0.9 / 0.5) + 0.1 * std::log(0.1 / 0.5);
    const double d2 = 0.5 * std::log(0.5 / 0.9) + 0.5 * std::log(0.5 / 0.1);
    const double expected = 2.0 * d1 * d2 / (d1 + d2);
    CHECK(expected == doctest::Approx(0.4279).epsilon(1e-3));
    CHECK(d_kld_sym(grid({0.9, 0.1}), grid({0.5, 0.5})) ==
          doctest::Approx(expected).epsilon(1e-9));
}

TEST_CASE("shape mismatches are rejected") {
    CHECK_THROWS_AS(d_mse(grid({1.0}), grid({0.5, 0.5})), ShapeError);
    CHECK_THROWS_AS(d_min(grid({1.0}), grid({0.5, 0.5})), ShapeError);
    CHECK_THROWS_AS(d_kld_sym(grid({1.0}), grid({0.5, 0.5})), ShapeError);
}

TEST_CASE("metric axioms on random unit-mass grids") {
    Rng rng(2024);
    for (int trial = 0; trial < 50; ++trial) {
        const FeatureGrid p = random_unit_grid(64, rng);
        const FeatureGrid r = random_unit_grid(64, rng);
        for (auto metric : {d_mse, d_min}) {
            CHECK(metric(p, p) <= 1e-9);
            CHECK(metric(p, r) >= 0.0);
            CHECK(metric(p, r) == doctest::Approx(metric(r, p)).epsilon(1e-9));
        }
        CHECK(d_kld_sym(p, p) == 0.0);
        CHECK(d_kld_sym(p, r) >= 0.0);
        CHECK(d_kld_sym(p, r) == doctest::Approx(d_kld_sym(r, p)).epsilon(1e-9));
        CHECK(d_min(p, r) <= 1.0);
        CHECK(d_mse(p, r) <= 2.0);
    }
}

TEST_CASE("kld is stable in epsilon on strictly positive grids") {
    Rng rng(2025);
    for (int trial = 0; trial < 20; ++trial) {
        const FeatureGrid p = random_unit_grid(128, rng, 1e-4);
        const FeatureGrid r = random_unit_grid(128, rng, 1e-4);
        const double base = d_kld_sym(p, r, 1e-10);
        for (double eps : {1e-12, 1e-8})
            CHECK(d_kld_sym(p, r, eps) == doctest::Approx(base).epsilon(0.01));
    }
}

TEST_CASE("build_matrix is symmetric with a zero diagonal") {
    Rng rng(2026);
    std::vector<FeatureGrid> features;
    for (int i = 0; i < 5; ++i) {
        FeatureGrid f = random_unit_grid(32, rng);
        f.label = {"S" + std::to_string(i % 2), "w1", i};
        features.push_back(std::move(f));
    }
    for (MetricTag metric : {MetricTag::MSE, MetricTag::MIN, MetricTag::KLD}) {
        const DissimilarityMatrix m = build_matrix(features, metric);
        REQUIRE(m.size() == 5);
        for (std::size_t i = 0; i < 5; ++i) {
            CHECK(m.at(i, i) == 0.0);
            for (std::size_t j = 0; j < 5; ++j) CHECK(m.at(i, j) == m.at(j, i));
        }
    }
}

TEST_CASE("two identical features give a zero 2x2 matrix") {
    const FeatureGrid f = grid({0.25, 0.25, 0.25, 0.25}, {"A", "w1", 0});
    FeatureGrid g2 = f;
    g2.label = {"A", "w1", 1};
    const DissimilarityMatrix m = build_matrix({f, g2}, MetricTag::MSE);
    CHECK(m.values == std::vector<double>{0, 0, 0, 0});
}

TEST_CASE("build_matrix rejects bad input") {
    CHECK_THROWS_AS(build_matrix({grid({1.0})}, MetricTag::MSE), ShapeError);
    CHECK_THROWS_AS(build_matrix({grid({1.0}), grid({0.5, 0.5})}, MetricTag::MSE), ShapeError);
}

TEST_CASE("the 34-trial grouping reproduces the four-block layout") {
    // 16 subject-A and 18 subject-B trials, grouped week-first then subject
    Rng rng(2027);
    std::vector<FeatureGrid> features;
    for (const std::string& week : {"w1", "w2"}) {
        for (int i = 0; i < 8; ++i) {
            FeatureGrid f = random_unit_grid(16, rng);
            f.label = {"A", week, i};
            features.push_back(std::move(f));
        }
        const int b_count = week == "w1" ? 9 : 9;
        for (int i = 0; i < b_count; ++i) {
            FeatureGrid f = random_unit_grid(16, rng);
            f.label = {"B", week, i};
            features.push_back(std::move(f));
        }
    }
    REQUIRE(features.size() == 34);
    const DissimilarityMatrix m = build_matrix(features, MetricTag::KLD);
    // labels preserve the block order: w1/A, w1/B, w2/A, w2/B
    CHECK(m.labels[0].str() == "A:w1:0");
    CHECK(m.labels[8].str() == "B:w1:0");
    CHECK(m.labels[17].str() == "A:w2:0");
    CHECK(m.labels[25].str() == "B:w2:0");
    std::size_t mated = 0;
    for (std::size_t i = 0; i < 34; ++i)
        for (std::size_t j = i + 1; j < 34; ++j)
            mated += m.labels[i].subject_id == m.labels[j].subject_id;
    CHECK(mated == 273);  // 16*15/2 + 18*17/2
}

TEST_CASE("d_eucl_from_kld hand-computed 3x3 case") {
    DissimilarityMatrix kld;
    kld.metric_tag = MetricTag::KLD;
    kld.labels = {{"A", "w", 0}, {"A", "w", 1}, {"B", "w", 0}};
    kld.values = {0, 1, 2, 1, 0, 1, 2, 1, 0};
    const DissimilarityMatrix e = d_eucl_from_kld(kld);
    const double expected01 = std::sqrt(3.0) / std::sqrt(8.0);
    CHECK(e.at(0, 1) == doctest::Approx(expected01).epsilon(1e-12));
    CHECK(e.at(1, 2) == doctest::Approx(expected01).epsilon(1e-12));
    CHECK(e.at(0, 2) == 1.0);  // the max norms to exactly 1
    CHECK(e.at(0, 0) == 0.0);
    CHECK(e.metric_tag == MetricTag::EUCL);
}

TEST_CASE("identical rows give zero Eucl entries") {
    DissimilarityMatrix kld;
    kld.labels = {{"A", "w", 0}, {"A", "w", 1}, {"B", "w", 0}};
    kld.values = {0, 0, 1, 0, 0, 1, 1, 1, 0};
    const DissimilarityMatrix e = d_eucl_from_kld(kld);
    CHECK(e.at(0, 1) == 0.0);
}

TEST_CASE("K=2 Eucl norms the single off-diagonal to 1") {
    DissimilarityMatrix kld;
    kld.labels = {{"A", "w", 0}, {"B", "w", 0}};
    kld.values = {0, 0.37, 0.37, 0};
    const DissimilarityMatrix e = d_eucl_from_kld(kld);
    CHECK(e.at(0, 1) == 1.0);
    CHECK(e.at(1, 0) == 1.0);
}

TEST_CASE("all-zero KLD matrix is degenerate") {
    DissimilarityMatrix kld;
    kld.labels = {{"A", "w", 0}, {"A", "w", 1}};
    kld.values = {0, 0, 0, 0};
    CHECK_THROWS_AS(d_eucl_from_kld(kld), DegenerateMatrix);
}

TEST_CASE("Eucl entries depend on the whole matrix") {
    Rng rng(2028);
    std::vector<FeatureGrid> features;
    for (int i = 0; i < 4; ++i) {
        FeatureGrid f = random_unit_grid(16, rng);
        f.label = {"S", "w", i};
        features.push_back(std::move(f));
    }
    const DissimilarityMatrix small = matrix_for_metric(features, MetricTag::EUCL);
    features.push_back(random_unit_grid(16, rng));
    features.back().label = {"T", "w", 0};
    const DissimilarityMatrix big = matrix_for_metric(features, MetricTag::EUCL);
    // the same pair scores differently once a trial is added
    bool changed = false;
    for (std::size_t i = 0; i < 4 && !changed; ++i)
        for (std::size_t j = i + 1; j < 4 && !changed; ++j)
            changed = small.at(i, j) != big.at(i, j);
    CHECK(changed);
}

TEST_CASE("metric names round-trip") {
    for (MetricTag m : {MetricTag::MSE, MetricTag::MIN, MetricTag::KLD, MetricTag::EUCL})
        CHECK(metric_from_name(metric_name(m)) == m);
    CHECK_THROWS_AS(metric_from_name("cosine"), ConfigError);
}

}  // TEST_SUITE
