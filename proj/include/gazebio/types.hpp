#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "gazebio/errors.hpp"

namespace gazebio {

struct Point {
    double x = 0.0;
    double y = 0.0;
};

inline double distance(const Point& a, const Point& b) {
    return std::hypot(a.x - b.x, a.y - b.y);
}

/// Screen extent and the degree<->pixel relation for one recording setup.
struct ScreenGeometry {
    double width_px = 0.0;
    double height_px = 0.0;
    double px_per_degree = 0.0;

    double diagonal_px() const { return std::hypot(width_px, height_px); }
    Point center() const { return {width_px / 2.0, height_px / 2.0}; }

    void validate() const {
        if (!(width_px > 0.0) || !(height_px > 0.0) || !(px_per_degree > 0.0))
            throw ConfigError("screen geometry fields must be positive");
    }
};

inline double degrees_to_pixels(double degrees, const ScreenGeometry& g) {
    return degrees * g.px_per_degree;
}

/// One tracker sample. Invalid samples keep their slot so gap structure is visible
/// downstream; their coordinates are never used.
struct GazeSample {
    double t = 0.0;  // seconds since trial start
    double x = 0.0;  // pixels, origin top-left
    double y = 0.0;  // pixels, y grows downward
    bool valid = true;
};

struct GazeTrace {
    std::vector<GazeSample> samples;
    double nominal_rate = 60.0;  // Hz; metadata only, timestamps are authoritative

    double span() const {
        return samples.empty() ? 0.0 : samples.back().t - samples.front().t;
    }
};

enum class EventKind { Target, Blank };

struct StimulusEvent {
    double t_onset = 0.0;
    double t_offset = 0.0;
    EventKind kind = EventKind::Target;
    Point center;  // Target only; ignored for Blank
    std::string color_tag;
};

/// (subject, week, trial) identity used to group matrix rows and name outputs.
struct TrialLabel {
    std::string subject_id;
    std::string week_id;
    int trial_index = 0;

    std::string str() const {
        return subject_id + ":" + week_id + ":" + std::to_string(trial_index);
    }
    bool operator==(const TrialLabel&) const = default;
};

struct TrialManifest {
    std::string subject_id;
    std::string week_id;
    int trial_index = 0;
    ScreenGeometry geometry;
    std::string trace_path;
    std::string events_path;

    TrialLabel label() const { return {subject_id, week_id, trial_index}; }
};

}  // namespace gazebio
