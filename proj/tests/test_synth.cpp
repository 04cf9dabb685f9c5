#include <doctest.h>

#include <cmath>
#include <set>

#include "gazebio/fdm.hpp"
#include "gazebio/fixation.hpp"
#include "gazebio/rng.hpp"
#include "gazebio/synth.hpp"
#include "gazebio/ttt.hpp"

using namespace gazebio;

namespace {

const ScreenGeometry kGeom{1920, 1200, 45};

double normal_cdf(double z) { return 0.5 * (1.0 + std::erf(z / std::sqrt(2.0))); }

}  // namespace

TEST_SUITE("synth") {

TEST_CASE("schedule matches the standard protocol") {
    const StimulusSchedule s = make_schedule(kGeom, 42);
    std::size_t targets = 0, blanks = 0;
    for (const StimulusEvent& e : s.events)
        (e.kind == EventKind::Target ? targets : blanks)++;
    CHECK(targets == 192);
    CHECK(blanks == 24);
    CHECK(s.events.size() == 216);
    CHECK(s.total_duration == 480.0);
    CHECK(s.events.back().t_offset == 480.0);
    CHECK(s.target_width_px == degrees_to_pixels(3.0, kGeom));

    // colors cycle blue, yellow, green, yellow, white, black per sequence
    CHECK(s.events[0].color_tag == "blue");
    CHECK(s.events[9].color_tag == "yellow");   // second sequence
    CHECK(s.events[18].color_tag == "green");
    CHECK(s.events[27].color_tag == "yellow");
    CHECK(s.events[36].color_tag == "white");
    CHECK(s.events[45].color_tag == "black");
    CHECK(s.events[54].color_tag == "blue");

    // each sequence visits all 8 ring positions once
    std::set<std::pair<double, double>> positions;
    for (int k = 0; k < 8; ++k)
        positions.insert({s.events[static_cast<std::size_t>(k)].center.x,
                          s.events[static_cast<std::size_t>(k)].center.y});
    CHECK(positions.size() == 8);
}

TEST_CASE("schedule is deterministic in the seed") {
    const StimulusSchedule a = make_schedule(kGeom, 7);
    const StimulusSchedule b = make_schedule(kGeom, 7);
    const StimulusSchedule c = make_schedule(kGeom, 8);
    REQUIRE(a.events.size() == b.events.size());
    bool all_equal = true, any_diff = false;
    for (std::size_t i = 0; i < a.events.size(); ++i) {
        all_equal = all_equal && a.events[i].center.x == b.events[i].center.x &&
                    a.events[i].center.y == b.events[i].center.y;
        any_diff = any_diff || a.events[i].center.x != c.events[i].center.x;
    }
    CHECK(all_equal);
    CHECK(any_diff);
}

TEST_CASE("simulated trials are byte-deterministic") {
    const StimulusSchedule s = make_schedule(kGeom, 3);
    const SubjectProfile profile = subject_presets().profile_a;
    const SimulatedTrial a = simulate_trial(profile, s, kGeom, 11);
    const SimulatedTrial b = simulate_trial(profile, s, kGeom, 11);
    REQUIRE(a.trace.samples.size() == b.trace.samples.size());
    CHECK(a.trace.samples.size() == 480 * 60);
    for (std::size_t i = 0; i < a.trace.samples.size(); ++i) {
        CHECK(a.trace.samples[i].x == b.trace.samples[i].x);
        CHECK(a.trace.samples[i].y == b.trace.samples[i].y);
    }
    const SimulatedTrial c = simulate_trial(profile, s, kGeom, 12);
    bool differs = false;
    for (std::size_t i = 0; i < a.trace.samples.size() && !differs; ++i)
        differs = a.trace.samples[i].x != c.trace.samples[i].x;
    CHECK(differs);
}

TEST_CASE("zero noise and a point mixture concentrate blank mass in one cell") {
    SubjectProfile profile = subject_presets().profile_b;
    profile.noise_sigma = 0.0;
    profile.drift = 0.0;
    // slightly off-center mean: the exact screen center sits on a 4-cell corner
    profile.fdm_mixture = {{{0.2, 0.2}, {1e-12, 0.0, 0.0, 1e-12}, 1.0}};
    const StimulusSchedule s = make_schedule(kGeom, 5);
    const SimulatedTrial trial = simulate_trial(profile, s, kGeom, 6);
    const auto fixations = detect_fixations(trial.trace, ClusterParams::defaults_for(kGeom));
    const auto blanks = fixations_in_epochs(fixations, build_epochs(trial.events), EventKind::Blank);
    REQUIRE(!blanks.empty());
    const FixationDensityMap m = build_fdm(blanks, kGeom, 64);
    std::size_t nonzero = 0;
    for (double c : m.cells) nonzero += c != 0.0;
    CHECK(nonzero == 1);
    CHECK(m.at(32, 32) == m.total_mass());
}

TEST_CASE("extraction yield stays above three quarters of the targets") {
    const StimulusSchedule s = make_schedule(kGeom, 17);
    const SubjectProfile profile = subject_presets().profile_a;
    const SimulatedTrial trial = simulate_trial(profile, s, kGeom, 18);
    const auto fixations = detect_fixations(trial.trace, ClusterParams::defaults_for(kGeom));
    const auto records = extract_ttt(fixations, trial.events, kGeom,
                                     degrees_to_pixels(3.0, kGeom), {}, {"A", "w1", 0});
    CHECK(records.size() >= 144);  // 75% of 192
    CHECK(records.size() <= 192);
    // all four directions appear
    std::set<std::string> dirs;
    for (const TttRecord& r : records) dirs.insert(direction_name(r.direction));
    CHECK(dirs.size() == 4);
}

TEST_CASE("mixture sampling converges to the analytic marginals") {
    const SubjectProfile profile = subject_presets().profile_a;
    Rng rng(2718);
    const std::size_t n = 10000;
    std::vector<double> xs, ys;
    xs.reserve(n);
    ys.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const Point p = sample_mixture_point(profile, kGeom, rng);
        xs.push_back(p.x);
        ys.push_back(p.y);
    }
    std::sort(xs.begin(), xs.end());
    std::sort(ys.begin(), ys.end());

    const Point center = kGeom.center();
    auto marginal_cdf = [&](double v, bool x_axis) {
        double acc = 0.0;
        for (const MixtureComponent& c : profile.fdm_mixture) {
            const double mean_px = (x_axis ? center.x : center.y) +
                                   degrees_to_pixels(x_axis ? c.mean_deg.x : c.mean_deg.y, kGeom);
            const double sigma_px =
                degrees_to_pixels(std::sqrt(x_axis ? c.cov_deg2[0] : c.cov_deg2[3]), kGeom);
            acc += c.weight * normal_cdf((v - mean_px) / sigma_px);
        }
        return acc;
    };
    auto ks_distance = [&](const std::vector<double>& sorted, bool x_axis) {
        double d = 0.0;
        for (std::size_t i = 0; i < sorted.size(); ++i) {
            const double f = marginal_cdf(sorted[i], x_axis);
            d = std::max(d, std::abs(f - static_cast<double>(i) / n));
            d = std::max(d, std::abs(f - static_cast<double>(i + 1) / n));
        }
        return d;
    };
    CHECK(ks_distance(xs, true) < 0.05);
    CHECK(ks_distance(ys, false) < 0.05);
}

TEST_CASE("profile validation rejects bad parameters") {
    SubjectProfile p = subject_presets().profile_a;
    p.ttt_median = 0.5;
    CHECK_THROWS_AS(p.validate(), ConfigError);
    p = subject_presets().profile_a;
    p.fdm_mixture[0].weight = 0.9;
    CHECK_THROWS_AS(p.validate(), ConfigError);
    p = subject_presets().profile_a;
    p.fdm_mixture[0].cov_deg2 = {1.0, 2.0, 2.0, 1.0};  // not positive definite
    CHECK_THROWS_AS(p.validate(), ConfigError);
}

TEST_CASE("drift perturbs trials but events stay ideal") {
    SubjectProfile profile = subject_presets().profile_a;
    profile.drift = 40.0;
    const StimulusSchedule s = make_schedule(kGeom, 9);
    const SimulatedTrial a = simulate_trial(profile, s, kGeom, 100);
    const SimulatedTrial b = simulate_trial(profile, s, kGeom, 101);
    CHECK(a.events.size() == s.events.size());
    CHECK(a.events[0].center.x == s.events[0].center.x);
    // different seeds produce different drifts and thus different traces
    bool differs = false;
    for (std::size_t i = 0; i < a.trace.samples.size() && !differs; ++i)
        differs = a.trace.samples[i].x != b.trace.samples[i].x;
    CHECK(differs);
}

}  // TEST_SUITE
