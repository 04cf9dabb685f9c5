#include "gazebio/ttt.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace gazebio {

std::string direction_name(Direction d) {
    switch (d) {
        case Direction::Up: return "up";
        case Direction::Right: return "right";
        case Direction::Down: return "down";
        case Direction::Left: return "left";
    }
    return "right";
}

Direction classify_direction(const Point& prev_center, const Point& cur_center) {
    const double dx = cur_center.x - prev_center.x;
    const double dy = cur_center.y - prev_center.y;
    if (dx == 0.0 && dy == 0.0) throw UndefinedDirection("coincident centers");
    // screen y grows downward; flip so positive angles point up
    const double deg = std::atan2(-dy, dx) * 180.0 / M_PI;
    // sectors are lower-exclusive/upper-inclusive, which resolves exact
    // diagonals clockwise: +45 degrees is Right, +135 Up, -45 Down, -135 Left
    if (deg > 45.0 && deg <= 135.0) return Direction::Up;
    if (deg > -45.0 && deg <= 45.0) return Direction::Right;
    if (deg > -135.0 && deg <= -45.0) return Direction::Down;
    return Direction::Left;
}

std::vector<TttRecord> extract_ttt(const std::vector<Fixation>& fixations,
                                   const std::vector<StimulusEvent>& events,
                                   const ScreenGeometry& geometry, double radius_px,
                                   TttWindow window, const TrialLabel& label) {
    std::vector<TttRecord> out;
    Point reference = geometry.center();
    for (std::size_t i = 0; i < events.size(); ++i) {
        const StimulusEvent& e = events[i];
        if (e.kind == EventKind::Blank) {
            reference = geometry.center();  // next target starts a new sequence
            continue;
        }
        for (const Fixation& f : fixations) {
            if (f.t_start < e.t_onset) continue;
            if (distance(f.centroid(), e.center) > radius_px) continue;
            const double latency = f.t_start - e.t_onset;
            if (latency >= window.min_s && latency <= window.max_s) {
                TttRecord rec;
                rec.latency = latency;
                rec.direction = classify_direction(reference, e.center);
                rec.event_index = static_cast<int>(i);
                rec.trial = label;
                out.push_back(rec);
            }
            break;  // first qualifying fixation decides, in or out of window
        }
        reference = e.center;
    }
    return out;
}

namespace {

TttStats stats_of(const std::string& group, std::vector<double> values) {
    TttStats s;
    s.group = group;
    s.n = values.size();
    if (values.empty()) return s;
    std::sort(values.begin(), values.end());
    double sum = 0.0;
    for (double v : values) sum += v;
    s.mean = sum / static_cast<double>(values.size());
    const std::size_t mid = values.size() / 2;
    s.median = values.size() % 2 == 1 ? values[mid] : (values[mid - 1] + values[mid]) / 2.0;
    double var = 0.0;
    for (double v : values) var += (v - s.mean) * (v - s.mean);
    s.sigma = std::sqrt(var / static_cast<double>(values.size()));
    return s;
}

}  // namespace

std::vector<TttStats> ttt_stats(const std::vector<TttRecord>& records, TttGroupBy group_by) {
    std::map<std::string, std::vector<double>> groups;
    for (const TttRecord& r : records) {
        std::string key;
        switch (group_by) {
            case TttGroupBy::Trial: key = r.trial.str(); break;
            case TttGroupBy::Direction: key = direction_name(r.direction); break;
            case TttGroupBy::All: key = "all"; break;
        }
        groups[key].push_back(r.latency);
    }
    std::vector<TttStats> out;
    out.reserve(groups.size());
    for (auto& [key, values] : groups) out.push_back(stats_of(key, std::move(values)));
    return out;
}

}  // namespace gazebio
