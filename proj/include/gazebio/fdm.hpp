#pragma once

#include <vector>

#include "gazebio/fixation.hpp"
#include "gazebio/types.hpp"

namespace gazebio {

/// Duration-weighted fixation mass on an n x n grid. Row index follows y,
/// column index follows x; the screen rectangle is stretched onto the square
/// grid.
struct FixationDensityMap {
    int n = 0;
    std::vector<double> cells;  // row-major, n*n
    ScreenGeometry geometry;
    TrialLabel label;

    double& at(int row, int col) { return cells[static_cast<std::size_t>(row) * n + col]; }
    double at(int row, int col) const { return cells[static_cast<std::size_t>(row) * n + col]; }
    double total_mass() const;
};

/// Each fixation deposits its duration into the cell containing its centroid
/// (cell = floor(coord * n / screen dim), clamped into the grid). Un-normed.
FixationDensityMap build_fdm(const std::vector<Fixation>& fixations, const ScreenGeometry& g,
                             int n, const TrialLabel& label = {});

/// Convolution with a gaussian kernel truncated at radius ceil(3*sigma) and
/// normalized to unit sum, zero-padded at the borders. sigma == 0 is the
/// identity.
FixationDensityMap smooth_gaussian(const FixationDensityMap& m, double sigma);

/// Cells divided by total mass so they sum to 1. Throws EmptyMap on an
/// all-zero map (a trial with no usable fixations).
FixationDensityMap norm_unit_mass(const FixationDensityMap& m);

}  // namespace gazebio
