#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "gazebio/types.hpp"

namespace gazebio {

struct StimulusSchedule {
    std::vector<StimulusEvent> events;
    double total_duration = 0.0;   // seconds
    double target_width_px = 0.0;  // 3 degrees under the standard preset
};

struct MixtureComponent {
    Point mean_deg;                       // degrees relative to screen center
    std::array<double, 4> cov_deg2{};     // row-major 2x2 covariance, degrees^2
    double weight = 0.0;
};

/// Generative description of one subject: latency behavior for targets and a
/// gaussian-mixture spatial habit for blank periods.
struct SubjectProfile {
    std::string name;
    double ttt_median = 0.25;    // seconds, median of the log-normal latency
    double ttt_spread = 0.19;    // sigma of the underlying normal
    double down_offset = 0.05;   // seconds added to downward saccade latencies
    std::vector<MixtureComponent> fdm_mixture;
    double drift = 0.0;          // pixels; per-trial calibration perturbation scale
    double noise_sigma = 8.0;    // pixels of per-sample gaze noise

    void validate() const;
};

/// 24 sequences of 8 targets (2 s each, ring of 8 compass positions in seeded
/// random order) followed by a 4 s blank; colors cycle blue, yellow, green,
/// yellow, white, black across sequences. 480 s total.
StimulusSchedule make_schedule(const ScreenGeometry& geometry, std::uint64_t seed);

struct SimulatedTrial {
    GazeTrace trace;
    std::vector<StimulusEvent> events;
};

/// 60 Hz gaze for one run of the schedule: dwell at the previous point for a
/// drawn latency after each target onset, 1-2 in-flight samples, dwell on the
/// target; gaussian-mixture wandering with 0.3-1.0 s dwells during blanks;
/// a seeded per-trial affine perturbation of scale <= profile.drift applied
/// to every sample. Byte-identical for identical (profile, schedule, seed).
SimulatedTrial simulate_trial(const SubjectProfile& profile, const StimulusSchedule& schedule,
                              const ScreenGeometry& geometry, std::uint64_t seed);

/// Draw one point (pixels) from the profile's blank-period mixture.
Point sample_mixture_point(const SubjectProfile& profile, const ScreenGeometry& geometry,
                           class Rng& rng);

struct SubjectPresets {
    SubjectProfile profile_a;
    SubjectProfile profile_b;
};

/// Two fixed profiles: A with slower latencies and a left-skewed diffuse
/// spatial habit (3 components), B faster and compactly central (2
/// components). Both with ~50 ms downward latency excess.
SubjectPresets subject_presets();

}  // namespace gazebio
