#include "gazebio/fdm.hpp"

#include <algorithm>
#include <cmath>

namespace gazebio {

double FixationDensityMap::total_mass() const {
    double s = 0.0;
    for (double c : cells) s += c;
    return s;
}

FixationDensityMap build_fdm(const std::vector<Fixation>& fixations, const ScreenGeometry& g,
                             int n, const TrialLabel& label) {
    g.validate();
    if (n < 8) throw ConfigError("FDM grid size must be at least 8");

    FixationDensityMap m;
    m.n = n;
    m.cells.assign(static_cast<std::size_t>(n) * n, 0.0);
    m.geometry = g;
    m.label = label;

    auto cell_index = [n](double coord, double extent) {
        const int i = static_cast<int>(std::floor(coord * n / extent));
        return std::clamp(i, 0, n - 1);
    };
    for (const Fixation& f : fixations) {
        const int col = cell_index(f.cx, g.width_px);
        const int row = cell_index(f.cy, g.height_px);
        m.at(row, col) += f.duration;
    }
    return m;
}

FixationDensityMap smooth_gaussian(const FixationDensityMap& m, double sigma) {
    if (sigma < 0.0) throw ConfigError("sigma must be non-negative");
    if (sigma == 0.0) return m;

    const int radius = static_cast<int>(std::ceil(3.0 * sigma));
    const int k = 2 * radius + 1;
    std::vector<double> kernel(static_cast<std::size_t>(k) * k);
    double ksum = 0.0;
    for (int dy = -radius; dy <= radius; ++dy) {
        for (int dx = -radius; dx <= radius; ++dx) {
            const double w = std::exp(-(dx * dx + dy * dy) / (2.0 * sigma * sigma));
            kernel[static_cast<std::size_t>(dy + radius) * k + (dx + radius)] = w;
            ksum += w;
        }
    }
    for (double& w : kernel) w /= ksum;

    const int n = m.n;
    FixationDensityMap out = m;
    std::fill(out.cells.begin(), out.cells.end(), 0.0);
    for (int row = 0; row < n; ++row) {
        for (int col = 0; col < n; ++col) {
            const double mass = m.at(row, col);
            if (mass == 0.0) continue;
            const int r0 = std::max(0, row - radius);
            const int r1 = std::min(n - 1, row + radius);
            const int c0 = std::max(0, col - radius);
            const int c1 = std::min(n - 1, col + radius);
            for (int r = r0; r <= r1; ++r) {
                const double* krow = &kernel[static_cast<std::size_t>(r - row + radius) * k];
                for (int c = c0; c <= c1; ++c) out.at(r, c) += mass * krow[c - col + radius];
            }
        }
    }
    return out;
}

FixationDensityMap norm_unit_mass(const FixationDensityMap& m) {
    const double total = m.total_mass();
    if (!(total > 0.0)) throw EmptyMap("map has no mass; trial has no usable fixations");
    // already-normed maps pass through untouched, which makes norming
    // exactly idempotent
    if (std::abs(total - 1.0) <= 1e-9) return m;
    FixationDensityMap out = m;
    for (double& c : out.cells) c /= total;
    return out;
}

}  // namespace gazebio
