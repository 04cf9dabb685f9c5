#include "gazebio/calibration.hpp"

#include <cmath>

namespace gazebio {

namespace {

constexpr double kConditionLimit = 1e10;

}  // namespace

AffineTransform fit_affine(const std::vector<PointPair>& pairs) {
    const std::size_t n = pairs.size();
    if (n < 3) throw DegenerateFit("affine fit needs at least 3 point pairs");

    // Centering decouples the translation: solve the 2x2 normal equations of
    // the centered system, then recover t from the means.
    double mx = 0.0, my = 0.0, qx = 0.0, qy = 0.0;
    for (const PointPair& p : pairs) {
        mx += p.measured.x;
        my += p.measured.y;
        qx += p.target.x;
        qy += p.target.y;
    }
    mx /= n;
    my /= n;
    qx /= n;
    qy /= n;

    // scatter S = sum c*c^T and cross moments B = sum d*c^T, c = measured -
    // mean, d = target - mean
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    double bxx = 0.0, bxy = 0.0, byx = 0.0, byy = 0.0;
    for (const PointPair& p : pairs) {
        const double cx = p.measured.x - mx;
        const double cy = p.measured.y - my;
        const double dx = p.target.x - qx;
        const double dy = p.target.y - qy;
        sxx += cx * cx;
        sxy += cx * cy;
        syy += cy * cy;
        bxx += dx * cx;
        bxy += dx * cy;
        byx += dy * cx;
        byy += dy * cy;
    }

    // closed-form eigenvalues of the symmetric 2x2 scatter
    const double tr = sxx + syy;
    const double disc = std::sqrt(std::max(0.0, (sxx - syy) * (sxx - syy) + 4.0 * sxy * sxy));
    const double lmax = (tr + disc) / 2.0;
    const double lmin = (tr - disc) / 2.0;
    if (!(lmax > 0.0) || lmin <= lmax / kConditionLimit)
        throw DegenerateFit("measured points are collinear or coincident");

    const double det = sxx * syy - sxy * sxy;
    AffineTransform t;
    t.a11 = (bxx * syy - bxy * sxy) / det;
    t.a12 = (bxy * sxx - bxx * sxy) / det;
    t.a21 = (byx * syy - byy * sxy) / det;
    t.a22 = (byy * sxx - byx * sxy) / det;
    t.tx = qx - (t.a11 * mx + t.a12 * my);
    t.ty = qy - (t.a21 * mx + t.a22 * my);
    return t;
}

std::vector<Fixation> apply_affine(const AffineTransform& t,
                                   const std::vector<Fixation>& fixations) {
    std::vector<Fixation> out;
    out.reserve(fixations.size());
    for (Fixation f : fixations) {
        const Point c = t.apply({f.cx, f.cy});
        f.cx = c.x;
        f.cy = c.y;
        out.push_back(f);
    }
    return out;
}

GazeTrace apply_affine_to_trace(const AffineTransform& t, const GazeTrace& trace) {
    GazeTrace out = trace;
    for (GazeSample& s : out.samples) {
        if (!s.valid) continue;
        const Point p = t.apply({s.x, s.y});
        s.x = p.x;
        s.y = p.y;
    }
    return out;
}

std::vector<PointPair> collect_pairs(const std::vector<Fixation>& fixations,
                                     const std::vector<StimulusEvent>& events, double radius_px) {
    std::vector<PointPair> pairs;
    for (const StimulusEvent& e : events) {
        if (e.kind != EventKind::Target) continue;
        for (const Fixation& f : fixations) {
            if (f.t_start < e.t_onset || f.t_start >= e.t_offset) continue;
            if (distance(f.centroid(), e.center) <= radius_px) {
                pairs.push_back({f.centroid(), e.center});
                break;  // first qualifying fixation only
            }
        }
    }
    return pairs;
}

double affine_residual(const AffineTransform& t, const std::vector<PointPair>& pairs) {
    if (pairs.empty()) return 0.0;
    double acc = 0.0;
    for (const PointPair& p : pairs) {
        const Point q = t.apply(p.measured);
        const double dx = q.x - p.target.x;
        const double dy = q.y - p.target.y;
        acc += dx * dx + dy * dy;
    }
    return acc / static_cast<double>(pairs.size());
}

}  // namespace gazebio
