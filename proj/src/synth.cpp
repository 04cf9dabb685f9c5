#include "gazebio/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "gazebio/calibration.hpp"
#include "gazebio/rng.hpp"
#include "gazebio/ttt.hpp"

namespace gazebio {

void SubjectProfile::validate() const {
    if (!(ttt_median > 0.1) || !(ttt_median < 0.4))
        throw ConfigError("ttt_median must lie inside (0.1, 0.4)");
    if (!(ttt_spread > 0.0)) throw ConfigError("ttt_spread must be positive");
    if (down_offset < 0.0 || noise_sigma < 0.0 || drift < 0.0)
        throw ConfigError("profile scales must be non-negative");
    if (fdm_mixture.empty()) throw ConfigError("fdm_mixture must not be empty");
    double wsum = 0.0;
    for (const MixtureComponent& c : fdm_mixture) {
        if (!(c.weight > 0.0)) throw ConfigError("mixture weights must be positive");
        wsum += c.weight;
        const double det = c.cov_deg2[0] * c.cov_deg2[3] - c.cov_deg2[1] * c.cov_deg2[2];
        if (!(c.cov_deg2[0] > 0.0) || !(det > 0.0) || c.cov_deg2[1] != c.cov_deg2[2])
            throw ConfigError("mixture covariance must be symmetric positive-definite");
    }
    if (std::abs(wsum - 1.0) > 1e-9) throw ConfigError("mixture weights must sum to 1");
}

StimulusSchedule make_schedule(const ScreenGeometry& geometry, std::uint64_t seed) {
    geometry.validate();
    static const char* kColors[6] = {"blue", "yellow", "green", "yellow", "white", "black"};
    constexpr int kSequences = 24;
    constexpr int kTargetsPerSequence = 8;
    constexpr double kTargetSeconds = 2.0;
    constexpr double kBlankSeconds = 4.0;
    constexpr double kTargetWidthDeg = 3.0;

    const Point center = geometry.center();
    const double half_extent_deg =
        std::min(geometry.width_px, geometry.height_px) / (2.0 * geometry.px_per_degree);
    const double radius_deg = std::min(10.0, half_extent_deg - 2.0);
    if (!(radius_deg > 0.0)) throw ConfigError("screen too small for the stimulus ring");
    const double radius_px = degrees_to_pixels(radius_deg, geometry);

    std::vector<Point> ring(kTargetsPerSequence);
    for (int k = 0; k < kTargetsPerSequence; ++k) {
        const double angle = 2.0 * M_PI * k / kTargetsPerSequence;
        ring[static_cast<std::size_t>(k)] = {center.x + radius_px * std::cos(angle),
                                             center.y - radius_px * std::sin(angle)};
    }

    Rng rng(seed);
    StimulusSchedule schedule;
    schedule.target_width_px = degrees_to_pixels(kTargetWidthDeg, geometry);
    double t = 0.0;
    for (int seq = 0; seq < kSequences; ++seq) {
        std::vector<int> order(kTargetsPerSequence);
        std::iota(order.begin(), order.end(), 0);
        rng.shuffle(order);
        const std::string color = kColors[seq % 6];
        for (int k = 0; k < kTargetsPerSequence; ++k) {
            StimulusEvent e;
            e.t_onset = t;
            e.t_offset = t + kTargetSeconds;
            e.kind = EventKind::Target;
            e.center = ring[static_cast<std::size_t>(order[static_cast<std::size_t>(k)])];
            e.color_tag = color;
            schedule.events.push_back(e);
            t += kTargetSeconds;
        }
        StimulusEvent blank;
        blank.t_onset = t;
        blank.t_offset = t + kBlankSeconds;
        blank.kind = EventKind::Blank;
        blank.color_tag = color;
        schedule.events.push_back(blank);
        t += kBlankSeconds;
    }
    schedule.total_duration = t;
    return schedule;
}

Point sample_mixture_point(const SubjectProfile& profile, const ScreenGeometry& geometry,
                           Rng& rng) {
    const double u = rng.uniform01();
    double cum = 0.0;
    const MixtureComponent* picked = &profile.fdm_mixture.back();
    for (const MixtureComponent& c : profile.fdm_mixture) {
        cum += c.weight;
        if (u < cum) {
            picked = &c;
            break;
        }
    }
    // Cholesky factor of the 2x2 covariance
    const double l11 = std::sqrt(picked->cov_deg2[0]);
    const double l21 = picked->cov_deg2[1] / l11;
    const double l22 = std::sqrt(picked->cov_deg2[3] - l21 * l21);
    const double z1 = rng.normal();
    const double z2 = rng.normal();
    const double dx_deg = picked->mean_deg.x + l11 * z1;
    const double dy_deg = picked->mean_deg.y + l21 * z1 + l22 * z2;
    const Point center = geometry.center();
    return {center.x + degrees_to_pixels(dx_deg, geometry),
            center.y + degrees_to_pixels(dy_deg, geometry)};
}

namespace {

struct Waypoint {
    double arrival = 0.0;
    Point pos;
    int n_flight = 0;  // in-flight samples immediately before arrival
};

constexpr double kSampleRate = 60.0;
constexpr double kDwellMin = 0.3;
constexpr double kDwellMax = 1.0;

}  // namespace

SimulatedTrial simulate_trial(const SubjectProfile& profile, const StimulusSchedule& schedule,
                              const ScreenGeometry& geometry, std::uint64_t seed) {
    profile.validate();
    geometry.validate();
    Rng rng(seed);

    const Point center = geometry.center();
    std::vector<Waypoint> waypoints;
    waypoints.push_back({0.0, center, 0});

    auto draw_latency = [&](Direction dir) {
        double lat = rng.lognormal(profile.ttt_median, profile.ttt_spread);
        if (dir == Direction::Down) lat += profile.down_offset;
        return std::min(lat, 1.5);
    };

    Point reference = center;
    for (const StimulusEvent& e : schedule.events) {
        if (e.kind == EventKind::Target) {
            const Direction dir = classify_direction(reference, e.center);
            const double arrival = e.t_onset + draw_latency(dir);
            waypoints.push_back({arrival, e.center, 1 + static_cast<int>(rng.u64() & 1)});
            reference = e.center;
        } else {
            reference = center;
            double t = e.t_onset + draw_latency(Direction::Right);
            while (t < e.t_offset) {
                const Point p = sample_mixture_point(profile, geometry, rng);
                waypoints.push_back({t, p, 1 + static_cast<int>(rng.u64() & 1)});
                t += rng.uniform(kDwellMin, kDwellMax);
            }
        }
    }

    // per-trial miscalibration: a small linear perturbation about the screen
    // center plus a shift, both scaled by profile.drift
    AffineTransform drift;
    {
        const double rel = profile.drift / geometry.diagonal_px();
        drift.a11 = 1.0 + rng.uniform(-rel, rel);
        drift.a12 = rng.uniform(-rel, rel);
        drift.a21 = rng.uniform(-rel, rel);
        drift.a22 = 1.0 + rng.uniform(-rel, rel);
        const double tx = rng.uniform(-profile.drift, profile.drift);
        const double ty = rng.uniform(-profile.drift, profile.drift);
        drift.tx = tx + center.x - (drift.a11 * center.x + drift.a12 * center.y);
        drift.ty = ty + center.y - (drift.a21 * center.x + drift.a22 * center.y);
    }

    SimulatedTrial trial;
    trial.events = schedule.events;
    trial.trace.nominal_rate = kSampleRate;
    const auto n_samples = static_cast<std::size_t>(std::llround(schedule.total_duration * kSampleRate));
    trial.trace.samples.reserve(n_samples);

    // the tracker clock is not phase-locked to the stimulus clock
    const double phase = rng.uniform01();

    std::size_t wp = 0;
    for (std::size_t k = 0; k < n_samples; ++k) {
        const double t = (static_cast<double>(k) + phase) / kSampleRate;
        while (wp + 1 < waypoints.size() && waypoints[wp + 1].arrival <= t) ++wp;
        Point pos = waypoints[wp].pos;
        if (wp + 1 < waypoints.size()) {
            const Waypoint& next = waypoints[wp + 1];
            const double flight_span = next.n_flight / kSampleRate;
            if (t > next.arrival - flight_span) {
                const double frac = 1.0 - (next.arrival - t) / flight_span;
                pos = {pos.x + (next.pos.x - pos.x) * frac, pos.y + (next.pos.y - pos.y) * frac};
            }
        }
        if (profile.noise_sigma > 0.0) {
            pos.x += profile.noise_sigma * rng.normal();
            pos.y += profile.noise_sigma * rng.normal();
        }
        pos = drift.apply(pos);
        trial.trace.samples.push_back({t, pos.x, pos.y, true});
    }
    return trial;
}

SubjectPresets subject_presets() {
    SubjectProfile a;
    a.name = "A";
    a.ttt_median = 0.2372;
    a.ttt_spread = 0.19;
    a.down_offset = 0.046;
    a.fdm_mixture = {
        {{-1.2, -0.2}, {9.0, 1.0, 1.0, 6.0}, 0.45},
        {{0.0, 0.9}, {6.0, -1.0, -1.0, 5.0}, 0.35},
        {{1.0, -1.0}, {5.0, 0.0, 0.0, 4.0}, 0.20},
    };
    a.drift = 0.0;
    a.noise_sigma = 8.0;

    SubjectProfile b;
    b.name = "B";
    b.ttt_median = 0.1885;
    b.ttt_spread = 0.20;
    b.down_offset = 0.046;
    b.fdm_mixture = {
        {{0.0, 0.0}, {1.44, 0.0, 0.0, 1.0}, 0.70},
        {{0.9, 0.6}, {0.81, 0.2, 0.2, 0.81}, 0.30},
    };
    b.drift = 0.0;
    b.noise_sigma = 8.0;

    return {a, b};
}

}  // namespace gazebio
