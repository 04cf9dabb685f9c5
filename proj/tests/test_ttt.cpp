#include <doctest.h>

#include <cmath>

#include "gazebio/ttt.hpp"

using namespace gazebio;

namespace {

const ScreenGeometry kGeom{1280, 720, 40};

StimulusEvent target_at(double onset, Point center) {
    StimulusEvent e;
    e.t_onset = onset;
    e.t_offset = onset + 2.0;
    e.kind = EventKind::Target;
    e.center = center;
    return e;
}

Fixation fix_at(Point p, double t_start) { return {p.x, p.y, t_start, 0.5, 30}; }

}  // namespace

TEST_SUITE("ttt") {

TEST_CASE("latency is measured to the first nearby fixation onset") {
    const Point target{800, 360};
    const std::vector<StimulusEvent> events{target_at(10.0, target)};
    // a far fixation first (6 degrees = 240 px away), then the landing one
    const std::vector<Fixation> fixations{fix_at({800, 600}, 10.12),
                                          fix_at({805, 362}, 10.25)};
    const auto records = extract_ttt(fixations, events, kGeom, 120.0);
    REQUIRE(records.size() == 1);
    CHECK(records[0].latency == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(records[0].event_index == 0);
}

TEST_CASE("the outlier window discards early and late arrivals") {
    const Point target{800, 360};
    const std::vector<StimulusEvent> events{target_at(0.0, target)};
    CHECK(extract_ttt({fix_at(target, 0.05)}, events, kGeom, 120.0).empty());
    CHECK(extract_ttt({fix_at(target, 0.45)}, events, kGeom, 120.0).empty());
    // window boundaries are inclusive
    CHECK(extract_ttt({fix_at(target, 0.1)}, events, kGeom, 120.0).size() == 1);
    CHECK(extract_ttt({fix_at(target, 0.4)}, events, kGeom, 120.0).size() == 1);
}

TEST_CASE("events with no qualifying fixation produce no record") {
    const std::vector<StimulusEvent> events{target_at(10.0, {800, 360})};
    CHECK(extract_ttt({}, events, kGeom, 120.0).empty());
    CHECK(extract_ttt({fix_at({100, 100}, 10.2)}, events, kGeom, 120.0).empty());
}

TEST_CASE("direction classification") {
    CHECK(classify_direction({0, 0}, {100, 0}) == Direction::Right);
    CHECK(classify_direction({0, 0}, {0, -100}) == Direction::Up);  // y grows downward
    CHECK(classify_direction({0, 0}, {0, 100}) == Direction::Down);
    CHECK(classify_direction({0, 0}, {-100, 0}) == Direction::Left);
    // exact diagonals resolve clockwise
    CHECK(classify_direction({0, 0}, {100, -100}) == Direction::Right);
    CHECK(classify_direction({0, 0}, {-100, -100}) == Direction::Up);
    CHECK(classify_direction({0, 0}, {-100, 100}) == Direction::Left);
    CHECK(classify_direction({0, 0}, {100, 100}) == Direction::Down);
    CHECK_THROWS_AS(classify_direction({5, 5}, {5, 5}), UndefinedDirection);
}

TEST_CASE("direction reference chains through targets and resets at blanks") {
    const Point center = kGeom.center();  // (640, 360)
    std::vector<StimulusEvent> events;
    events.push_back(target_at(0.0, {640, 100}));   // up from screen center
    events.push_back(target_at(2.0, {900, 100}));   // right of previous target
    StimulusEvent blank;
    blank.t_onset = 4.0;
    blank.t_offset = 8.0;
    blank.kind = EventKind::Blank;
    events.push_back(blank);
    events.push_back(target_at(8.0, {640, 600}));   // down from screen center again

    const std::vector<Fixation> fixations{fix_at({640, 100}, 0.2), fix_at({900, 100}, 2.2),
                                          fix_at({640, 600}, 8.2)};
    const auto records = extract_ttt(fixations, events, kGeom, 120.0);
    REQUIRE(records.size() == 3);
    CHECK(records[0].direction == Direction::Up);
    CHECK(records[1].direction == Direction::Right);
    CHECK(records[2].direction == Direction::Down);
    (void)center;
}

TEST_CASE("record count per trial never exceeds the target count") {
    std::vector<StimulusEvent> events;
    std::vector<Fixation> fixations;
    for (int i = 0; i < 10; ++i) {
        const Point p{200.0 + 80.0 * i, 360.0};
        events.push_back(target_at(4.0 * i, p));
        fixations.push_back(fix_at(p, 4.0 * i + 0.2));
        fixations.push_back(fix_at(p, 4.0 * i + 0.9));  // second nearby fixation, ignored
    }
    const auto records = extract_ttt(fixations, events, kGeom, 120.0);
    CHECK(records.size() <= 10);
    CHECK(records.size() == 10);
}

TEST_CASE("latencies are invariant to a constant time shift") {
    const Point target{800, 360};
    std::vector<StimulusEvent> events{target_at(10.0, target)};
    std::vector<Fixation> fixations{fix_at(target, 10.22)};
    const auto base = extract_ttt(fixations, events, kGeom, 120.0);
    events[0].t_onset += 37.0;
    events[0].t_offset += 37.0;
    fixations[0].t_start += 37.0;
    const auto shifted = extract_ttt(fixations, events, kGeom, 120.0);
    REQUIRE(base.size() == 1);
    REQUIRE(shifted.size() == 1);
    CHECK(base[0].latency == doctest::Approx(shifted[0].latency).epsilon(1e-12));
}

TEST_CASE("stats worked example") {
    std::vector<TttRecord> records;
    for (double v : {0.2, 0.25, 0.3}) records.push_back({v, Direction::Right, 0, {"A", "w", 0}});
    const auto stats = ttt_stats(records, TttGroupBy::All);
    REQUIRE(stats.size() == 1);
    CHECK(stats[0].n == 3);
    CHECK(stats[0].mean == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(stats[0].median == 0.25);
    // population sigma of {0.2, 0.25, 0.3}
    CHECK(stats[0].sigma == doctest::Approx(std::sqrt(0.0025 / 1.5)).epsilon(1e-9));
}

TEST_CASE("stats group by trial and direction") {
    std::vector<TttRecord> records;
    records.push_back({0.2, Direction::Up, 0, {"A", "w", 0}});
    records.push_back({0.3, Direction::Up, 1, {"A", "w", 1}});
    records.push_back({0.4, Direction::Down, 2, {"A", "w", 1}});
    const auto by_trial = ttt_stats(records, TttGroupBy::Trial);
    CHECK(by_trial.size() == 2);
    const auto by_dir = ttt_stats(records, TttGroupBy::Direction);
    CHECK(by_dir.size() == 2);
    CHECK(ttt_stats({}, TttGroupBy::All).empty());

    // even-count median averages the middle pair
    std::vector<TttRecord> four;
    for (double v : {0.1, 0.2, 0.3, 0.4}) four.push_back({v, Direction::Up, 0, {"A", "w", 0}});
    CHECK(ttt_stats(four, TttGroupBy::All)[0].median == doctest::Approx(0.25));
}

}  // TEST_SUITE
