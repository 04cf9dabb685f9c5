#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gazebio/fixation.hpp"
#include "gazebio/types.hpp"

namespace gazebio {

enum class Direction { Up, Right, Down, Left };

std::string direction_name(Direction d);

struct TttWindow {
    double min_s = 0.1;
    double max_s = 0.4;
};

/// One accepted time-to-target measurement.
struct TttRecord {
    double latency = 0.0;  // seconds from stimulus onset to fixation onset
    Direction direction = Direction::Right;
    int event_index = 0;   // index into the event list
    TrialLabel trial;
};

struct TttStats {
    std::string group;
    std::size_t n = 0;
    double mean = 0.0;
    double median = 0.0;
    double sigma = 0.0;  // population standard deviation
};

/// Saccade direction from the displacement prev -> cur, binned into four 90
/// degree sectors centered on the screen axes (screen-up = Up; y grows
/// downward). Exact diagonal ties resolve clockwise, so +45 degrees is Right.
/// Throws UndefinedDirection for coincident centers.
Direction classify_direction(const Point& prev_center, const Point& cur_center);

/// For each Target event, the latency to the onset of the first fixation
/// starting at or after the event onset whose centroid lies within radius_px
/// of the target center. Latencies outside the window are discarded. The
/// direction reference is the previous target center, or the screen center
/// for the first target after a blank (or at the start).
std::vector<TttRecord> extract_ttt(const std::vector<Fixation>& fixations,
                                   const std::vector<StimulusEvent>& events,
                                   const ScreenGeometry& geometry, double radius_px,
                                   TttWindow window = {}, const TrialLabel& label = {});

enum class TttGroupBy { Trial, Direction, All };

/// Mean / median / population sigma per group; empty groups are omitted.
std::vector<TttStats> ttt_stats(const std::vector<TttRecord>& records, TttGroupBy group_by);

}  // namespace gazebio
