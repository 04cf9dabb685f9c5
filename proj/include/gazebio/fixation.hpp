#pragma once

#include <vector>

#include "gazebio/types.hpp"

namespace gazebio {

/// A gaze dwell: centroid of its member samples, onset and duration.
struct Fixation {
    double cx = 0.0;
    double cy = 0.0;
    double t_start = 0.0;
    double duration = 0.0;
    int n_samples = 0;

    double t_mid() const { return t_start + duration / 2.0; }
    Point centroid() const { return {cx, cy}; }
};

struct ClusterParams {
    double eps = 40.0;         // spatial neighborhood radius, pixels
    int min_points = 5;        // minimum samples per fixation
    double min_duration = 0.1; // seconds
    double max_gap = 0.1;      // maximum time gap inside one fixation, seconds

    static ClusterParams defaults_for(const ScreenGeometry& g) {
        return {degrees_to_pixels(1.0, g), 5, 0.1, 0.1};
    }

    void validate() const {
        if (!(eps > 0.0) || min_points < 2 || min_duration < 0.0 || !(max_gap > 0.0))
            throw ConfigError("cluster params out of range");
    }
};

struct Epoch {
    EventKind kind = EventKind::Target;
    double t_start = 0.0;
    double t_end = 0.0;
    StimulusEvent source_event;
};

/// Density-based fixation detection over time-ordered samples: a candidate
/// cluster grows while each new valid sample stays within `eps` of the running
/// centroid and within `max_gap` of the previous member; candidates below
/// `min_points` or `min_duration` are dropped as noise/saccade samples.
std::vector<Fixation> detect_fixations(const GazeTrace& trace, const ClusterParams& p);

/// One epoch per event, spanning [t_onset, t_offset).
std::vector<Epoch> build_epochs(const std::vector<StimulusEvent>& events);

/// Fixations whose midpoint time falls inside any epoch of the requested kind.
std::vector<Fixation> fixations_in_epochs(const std::vector<Fixation>& fixations,
                                          const std::vector<Epoch>& epochs,
                                          EventKind kind);

}  // namespace gazebio
