#pragma once

#include <utility>
#include <vector>

#include "gazebio/fixation.hpp"
#include "gazebio/types.hpp"

namespace gazebio {

/// q = A*p + t with A = [[a11,a12],[a21,a22]], t = (tx,ty).
struct AffineTransform {
    double a11 = 1.0, a12 = 0.0;
    double a21 = 0.0, a22 = 1.0;
    double tx = 0.0, ty = 0.0;

    Point apply(const Point& p) const {
        return {a11 * p.x + a12 * p.y + tx, a21 * p.x + a22 * p.y + ty};
    }

    double det() const { return a11 * a22 - a12 * a21; }

    static AffineTransform identity() { return {}; }
};

struct PointPair {
    Point measured;
    Point target;
};

/// Least-squares minimizer of sum ||A*measured + t - target||^2.
/// Throws DegenerateFit for fewer than 3 pairs or (near-)collinear measured
/// points (scatter-matrix condition number above 1e10).
AffineTransform fit_affine(const std::vector<PointPair>& pairs);

/// Centroids mapped through the transform; temporal fields untouched.
std::vector<Fixation> apply_affine(const AffineTransform& t, const std::vector<Fixation>& fixations);

/// Valid samples mapped through the transform (used to inject or undo
/// trace-level miscalibration).
GazeTrace apply_affine_to_trace(const AffineTransform& t, const GazeTrace& trace);

/// For each Target event, pairs the first fixation starting inside the event
/// span whose centroid lies within `radius_px` of the target center with that
/// center. Events with no qualifying fixation contribute nothing.
std::vector<PointPair> collect_pairs(const std::vector<Fixation>& fixations,
                                     const std::vector<StimulusEvent>& events,
                                     double radius_px);

/// Mean squared residual of the fit over the given pairs.
double affine_residual(const AffineTransform& t, const std::vector<PointPair>& pairs);

}  // namespace gazebio
