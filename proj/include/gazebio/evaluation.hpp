#pragma once

#include <vector>

#include "gazebio/dissimilarity.hpp"

namespace gazebio {

struct Comparison {
    double score = 0.0;
    bool mated = false;  // same subject_id
};

/// One entry per unordered off-diagonal pair of a labeled matrix.
struct ComparisonSet {
    std::vector<Comparison> scores;

    std::size_t mated_count() const;
    std::size_t nonmated_count() const;
};

struct SweepPoint {
    double threshold = 0.0;
    double tpr = 0.0;
    double fpr = 0.0;
    double fnr = 0.0;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    double acc = 0.0;
    bool f1_defined = false;  // false when no comparison is accepted at this threshold
};

struct RocPoint {
    double fpr = 0.0;
    double tpr = 0.0;
};

struct DetPoint {
    double fpr = 0.0;
    double fnr = 0.0;
};

struct EvalReport {
    double acc_at_max_f1 = 0.0;
    double auc = 0.0;
    double eer = 0.0;
    double best_threshold = 0.0;
    std::vector<RocPoint> roc_points;
    std::vector<DetPoint> det_points;
    std::size_t n_comparisons = 0;
    std::size_t n_mated = 0;
    std::size_t n_nonmated = 0;
};

/// K(K-1)/2 comparisons, mated iff the subject ids match. Throws
/// DegenerateGroundTruth when either class is empty.
ComparisonSet comparisons_from_matrix(const DissimilarityMatrix& m);

/// One point per candidate threshold (every distinct score plus -inf/+inf
/// sentinels), ascending. Classification rule: match <=> score <= threshold.
std::vector<SweepPoint> sweep(const ComparisonSet& c);

/// Reduce a sweep to the ROC operating curve: one point per distinct fpr,
/// keeping the best (largest) tpr reached there.
std::vector<RocPoint> roc_points(const std::vector<SweepPoint>& sweep_points);
std::vector<DetPoint> det_points(const std::vector<SweepPoint>& sweep_points);

/// Trapezoidal integral of tpr over fpr; points must be sorted by fpr.
double auc(const std::vector<RocPoint>& points);

/// fpr == fnr crossing by linear interpolation along the DET polyline;
/// points must be in sweep (threshold-ascending) order.
double eer(const std::vector<DetPoint>& points);

/// Accuracy at the threshold maximizing F1 (ties resolved to the lowest
/// threshold). Throws DegenerateGroundTruth if F1 is defined nowhere.
struct AccAtMaxF1 {
    double acc = 0.0;
    double threshold = 0.0;
};
AccAtMaxF1 acc_at_max_f1(const std::vector<SweepPoint>& sweep_points);

struct ErrorLevelPoint {
    double threshold = 0.0;
    double error_level = 0.0;  // 1 - acc
};
std::vector<ErrorLevelPoint> error_level_curve(const ComparisonSet& c);

/// Full evaluation of one comparison set.
EvalReport evaluate(const ComparisonSet& c);
EvalReport evaluate_matrix(const DissimilarityMatrix& m);

}  // namespace gazebio
