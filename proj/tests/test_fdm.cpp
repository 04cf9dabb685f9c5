#include <doctest.h>

#include <cmath>

#include "gazebio/fdm.hpp"
#include "gazebio/rng.hpp"

using namespace gazebio;

namespace {

const ScreenGeometry kGeom{1280, 720, 40};

}  // namespace

TEST_SUITE("fdm") {

TEST_CASE("one central fixation fills one cell with its duration") {
    const std::vector<Fixation> f{{640, 360, 1.0, 1.0, 60}};
    const FixationDensityMap m = build_fdm(f, kGeom, 64);
    CHECK(m.total_mass() == 1.0);
    CHECK(m.at(32, 32) == 1.0);  // floor(360*64/720)=32, floor(640*64/1280)=32
    std::size_t nonzero = 0;
    for (double c : m.cells) nonzero += c != 0.0;
    CHECK(nonzero == 1);
}

TEST_CASE("durations norm to their mass fractions") {
    const std::vector<Fixation> f{{100, 100, 1.0, 1.0, 60}, {1000, 600, 3.0, 3.0, 180}};
    const FixationDensityMap m = build_fdm(f, kGeom, 64);
    // summation oracle: total mass is the sum of input durations
    CHECK(m.total_mass() == 4.0);
    const FixationDensityMap normed = norm_unit_mass(m);
    double lo = 0.0, hi = 0.0;
    for (double c : normed.cells) {
        if (c > 0.0 && c < 0.5) lo = c;
        if (c >= 0.5) hi = c;
    }
    CHECK(lo == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(hi == doctest::Approx(0.75).epsilon(1e-12));
}

TEST_CASE("edge centroids clamp into the grid") {
    const std::vector<Fixation> f{{1280, 720, 0.0, 1.0, 60}, {-5, -5, 1.5, 1.0, 60}};
    const FixationDensityMap m = build_fdm(f, kGeom, 64);
    CHECK(m.at(63, 63) == 1.0);
    CHECK(m.at(0, 0) == 1.0);
}

TEST_CASE("grid size does not change total mass") {
    Rng rng(21);
    std::vector<Fixation> f;
    double expected = 0.0;
    for (int i = 0; i < 40; ++i) {
        const double d = rng.uniform(0.1, 1.0);
        f.push_back({rng.uniform(0.0, 1280.0), rng.uniform(0.0, 720.0), i * 1.0, d, 30});
        expected += d;
    }
    for (int n : {8, 16, 64, 100})
        CHECK(build_fdm(f, kGeom, n).total_mass() == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("no fixations give an all-zero map and norming rejects it") {
    const FixationDensityMap m = build_fdm({}, kGeom, 64);
    CHECK(m.total_mass() == 0.0);
    CHECK_THROWS_AS(norm_unit_mass(m), EmptyMap);
}

TEST_CASE("build_fdm rejects a too-small grid") {
    CHECK_THROWS_AS(build_fdm({}, kGeom, 4), ConfigError);
}

TEST_CASE("sigma zero smoothing is the identity") {
    const std::vector<Fixation> f{{640, 360, 1.0, 2.0, 60}};
    const FixationDensityMap m = build_fdm(f, kGeom, 32);
    const FixationDensityMap s = smooth_gaussian(m, 0.0);
    CHECK(s.cells == m.cells);
}

TEST_CASE("an interior impulse smooths to the evaluated kernel") {
    FixationDensityMap m;
    m.n = 33;
    m.cells.assign(33 * 33, 0.0);
    m.at(16, 16) = 1.0;
    m.geometry = kGeom;
    const double sigma = 2.0;
    const FixationDensityMap s = smooth_gaussian(m, sigma);

    // direct kernel evaluation, normalized over the truncated square support
    const int radius = static_cast<int>(std::ceil(3.0 * sigma));
    double norm = 0.0;
    for (int dy = -radius; dy <= radius; ++dy)
        for (int dx = -radius; dx <= radius; ++dx)
            norm += std::exp(-(dx * dx + dy * dy) / (2.0 * sigma * sigma));
    CHECK(s.at(16, 16) == doctest::Approx(1.0 / norm).epsilon(1e-12));
    CHECK(s.at(16 + 2, 16 - 1) ==
          doctest::Approx(std::exp(-5.0 / (2.0 * sigma * sigma)) / norm).epsilon(1e-12));
    // symmetric bell
    CHECK(s.at(16 + 3, 16) == doctest::Approx(s.at(16 - 3, 16)).epsilon(1e-12));
    CHECK(s.at(16, 16 + 3) == doctest::Approx(s.at(16 + 3, 16)).epsilon(1e-12));

    // mass conservation for an interior impulse (kernel fully inside)
    CHECK(s.total_mass() == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("smoothing is linear") {
    Rng rng(31);
    FixationDensityMap m1, m2;
    m1.n = m2.n = 24;
    m1.geometry = m2.geometry = kGeom;
    m1.cells.resize(24 * 24);
    m2.cells.resize(24 * 24);
    for (std::size_t i = 0; i < m1.cells.size(); ++i) {
        m1.cells[i] = rng.uniform(0.0, 1.0);
        m2.cells[i] = rng.uniform(0.0, 1.0);
    }
    const double a = 0.7, b = 2.5;
    FixationDensityMap combo = m1;
    for (std::size_t i = 0; i < combo.cells.size(); ++i)
        combo.cells[i] = a * m1.cells[i] + b * m2.cells[i];
    const FixationDensityMap lhs = smooth_gaussian(combo, 1.5);
    const FixationDensityMap s1 = smooth_gaussian(m1, 1.5);
    const FixationDensityMap s2 = smooth_gaussian(m2, 1.5);
    for (std::size_t i = 0; i < lhs.cells.size(); ++i)
        CHECK(lhs.cells[i] == doctest::Approx(a * s1.cells[i] + b * s2.cells[i]).epsilon(1e-9));
}

TEST_CASE("norming is idempotent and preserves already-normed maps") {
    Rng rng(41);
    FixationDensityMap m;
    m.n = 16;
    m.geometry = kGeom;
    m.cells.resize(256);
    for (double& c : m.cells) c = rng.uniform(0.0, 3.0);
    const FixationDensityMap once = norm_unit_mass(m);
    const FixationDensityMap twice = norm_unit_mass(once);
    CHECK(once.total_mass() == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(twice.cells == once.cells);
}

TEST_CASE("2x2 worked example") {
    FixationDensityMap m;
    m.n = 8;  // min grid; use only the top-left 2x2
    m.geometry = kGeom;
    m.cells.assign(64, 0.0);
    m.at(0, 0) = 2.0;
    m.at(0, 1) = 2.0;
    const FixationDensityMap n = norm_unit_mass(m);
    CHECK(n.at(0, 0) == 0.5);
    CHECK(n.at(0, 1) == 0.5);
    CHECK(n.at(1, 0) == 0.0);
}

}  // TEST_SUITE
