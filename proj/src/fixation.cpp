#include "gazebio/fixation.hpp"

#include <cmath>

namespace gazebio {

namespace {

struct Candidate {
    double sum_x = 0.0;
    double sum_y = 0.0;
    int n = 0;
    double t_first = 0.0;
    double t_last = 0.0;

    void add(const GazeSample& s) {
        sum_x += s.x;
        sum_y += s.y;
        ++n;
        if (n == 1) t_first = s.t;
        t_last = s.t;
    }
    double cx() const { return sum_x / n; }
    double cy() const { return sum_y / n; }
};

}  // namespace

std::vector<Fixation> detect_fixations(const GazeTrace& trace, const ClusterParams& p) {
    p.validate();
    std::vector<Fixation> out;
    Candidate cur;

    auto flush = [&] {
        if (cur.n >= p.min_points) {
            const double duration = cur.t_last - cur.t_first;
            if (duration >= p.min_duration && duration > 0.0)
                out.push_back({cur.cx(), cur.cy(), cur.t_first, duration, cur.n});
        }
        cur = Candidate{};
    };

    for (const GazeSample& s : trace.samples) {
        if (!s.valid) continue;
        if (cur.n > 0) {
            const double gap = s.t - cur.t_last;
            const double dist = std::hypot(s.x - cur.cx(), s.y - cur.cy());
            if (gap > p.max_gap || dist > p.eps) flush();
        }
        cur.add(s);
    }
    flush();
    return out;
}

std::vector<Epoch> build_epochs(const std::vector<StimulusEvent>& events) {
    std::vector<Epoch> out;
    out.reserve(events.size());
    for (const StimulusEvent& e : events) out.push_back({e.kind, e.t_onset, e.t_offset, e});
    return out;
}

std::vector<Fixation> fixations_in_epochs(const std::vector<Fixation>& fixations,
                                          const std::vector<Epoch>& epochs, EventKind kind) {
    std::vector<Fixation> out;
    for (const Fixation& f : fixations) {
        const double mid = f.t_mid();
        for (const Epoch& e : epochs) {
            if (e.kind != kind) continue;
            if (mid >= e.t_start && mid < e.t_end) {
                out.push_back(f);
                break;
            }
        }
    }
    return out;
}

}  // namespace gazebio
