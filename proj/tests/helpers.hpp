#pragma once

// shared scaffolding for the pipeline/acceptance tests: writes a synthetic
// two-subject dataset in the documented file formats

#include <filesystem>
#include <string>
#include <vector>

#include "gazebio/io.hpp"
#include "gazebio/synth.hpp"

namespace gazebio::testing {

struct DatasetSpec {
    ScreenGeometry geometry{1920, 1200, 45};
    int trials_per_week = 2;
    std::vector<std::string> weeks{"w1", "w2"};
    double drift_px = 0.0;
    double noise_sigma = 8.0;
    std::uint64_t seed = 1;
};

inline std::vector<std::string> write_synthetic_dataset(const std::filesystem::path& dir,
                                                        const DatasetSpec& spec) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    SubjectPresets presets = subject_presets();
    presets.profile_a.drift = spec.drift_px;
    presets.profile_b.drift = spec.drift_px;
    presets.profile_a.noise_sigma = spec.noise_sigma;
    presets.profile_b.noise_sigma = spec.noise_sigma;

    std::vector<std::string> manifests;
    std::uint64_t counter = 0;
    for (std::size_t w = 0; w < spec.weeks.size(); ++w) {
        for (const SubjectProfile& profile : {presets.profile_a, presets.profile_b}) {
            for (int t = 0; t < spec.trials_per_week; ++t) {
                const std::uint64_t schedule_seed = spec.seed * 7919 + counter;
                const std::uint64_t trial_seed = spec.seed * 104729 + counter;
                ++counter;
                const StimulusSchedule schedule = make_schedule(spec.geometry, schedule_seed);
                const SimulatedTrial trial =
                    simulate_trial(profile, schedule, spec.geometry, trial_seed);

                const std::string stem = profile.name + "-" + spec.weeks[w] + "-" +
                                         std::to_string(t);
                write_file((dir / (stem + ".trace.csv")).string(), serialize_trace(trial.trace));
                write_file((dir / (stem + ".events.csv")).string(),
                           serialize_events(trial.events));
                TrialManifest m;
                m.subject_id = profile.name;
                m.week_id = spec.weeks[w];
                m.trial_index = t;
                m.geometry = spec.geometry;
                m.trace_path = stem + ".trace.csv";
                m.events_path = stem + ".events.csv";
                const std::string manifest_path = (dir / (stem + ".manifest.json")).string();
                write_file(manifest_path, serialize_manifest(m));
                manifests.push_back(manifest_path);
            }
        }
    }
    return manifests;
}

}  // namespace gazebio::testing
