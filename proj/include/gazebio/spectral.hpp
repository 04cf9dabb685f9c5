#pragma once

#include <vector>

#include "gazebio/fdm.hpp"

namespace gazebio {

/// Phase-discarded 2D DFT magnitudes |F[a][b]| of an n x n map, stored in
/// natural DFT order: index i carries the signed frequency i for i < n/2 and
/// i - n otherwise, so DC sits at (0,0).
struct MagnitudeSpectrum {
    int n = 0;
    std::vector<double> cells;  // row-major, n*n
    int box_limit = 0;          // l; n/2 means unfiltered
    TrialLabel label;

    double& at(int row, int col) { return cells[static_cast<std::size_t>(row) * n + col]; }
    double at(int row, int col) const { return cells[static_cast<std::size_t>(row) * n + col]; }

    /// signed frequency of a natural-order index, in {-n/2 .. n/2-1}
    int signed_freq(int index) const { return index < n - n / 2 ? index : index - n; }
    /// natural-order index of a signed frequency
    int index_of(int signed_frequency) const { return ((signed_frequency % n) + n) % n; }
};

/// |F[a][b]| for all a,b; no filtering. Row-column decomposition of the
/// definitional double sum; tests bind it to the O(n^4) direct evaluation.
MagnitudeSpectrum dft2_magnitude(const FixationDensityMap& m);

/// Zeroes every cell whose signed frequency exceeds l in either axis;
/// retained cells unchanged. Requires 0 <= l <= n/2.
MagnitudeSpectrum box_filter(const MagnitudeSpectrum& s, int box_limit);

/// floor(0.05 * n): the box limit used when none is given explicitly.
int default_box_limit(int n);

/// dft2_magnitude -> box_filter -> norm to unit sum over the retained cells.
MagnitudeSpectrum spectral_feature(const FixationDensityMap& m, int box_limit);

}  // namespace gazebio
