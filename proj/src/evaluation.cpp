#include "gazebio/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gazebio/errors.hpp"

namespace gazebio {

std::size_t ComparisonSet::mated_count() const {
    std::size_t n = 0;
    for (const Comparison& c : scores) n += c.mated ? 1 : 0;
    return n;
}

std::size_t ComparisonSet::nonmated_count() const {
    return scores.size() - mated_count();
}

ComparisonSet comparisons_from_matrix(const DissimilarityMatrix& m) {
    const std::size_t k = m.size();
    ComparisonSet set;
    set.scores.reserve(k * (k - 1) / 2);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = i + 1; j < k; ++j)
            set.scores.push_back({m.at(i, j), m.labels[i].subject_id == m.labels[j].subject_id});
    if (set.mated_count() == 0 || set.nonmated_count() == 0)
        throw DegenerateGroundTruth("need both mated and non-mated comparisons");
    return set;
}

std::vector<SweepPoint> sweep(const ComparisonSet& c) {
    if (c.scores.empty() || c.mated_count() == 0 || c.nonmated_count() == 0)
        throw DegenerateGroundTruth("need both mated and non-mated comparisons");

    std::vector<double> mated, nonmated;
    for (const Comparison& s : c.scores) (s.mated ? mated : nonmated).push_back(s.score);
    std::sort(mated.begin(), mated.end());
    std::sort(nonmated.begin(), nonmated.end());

    std::vector<double> thresholds;
    thresholds.reserve(c.scores.size() + 2);
    thresholds.push_back(-std::numeric_limits<double>::infinity());
    for (const Comparison& s : c.scores) thresholds.push_back(s.score);
    std::sort(thresholds.begin(), thresholds.end());
    thresholds.erase(std::unique(thresholds.begin(), thresholds.end()), thresholds.end());
    thresholds.push_back(std::numeric_limits<double>::infinity());

    const double n_mated = static_cast<double>(mated.size());
    const double n_nonmated = static_cast<double>(nonmated.size());
    const double total = n_mated + n_nonmated;

    std::vector<SweepPoint> points;
    points.reserve(thresholds.size());
    for (const double t : thresholds) {
        // match <=> score <= threshold; ties at the threshold accept
        const auto tp = static_cast<double>(
            std::upper_bound(mated.begin(), mated.end(), t) - mated.begin());
        const auto fp = static_cast<double>(
            std::upper_bound(nonmated.begin(), nonmated.end(), t) - nonmated.begin());
        SweepPoint p;
        p.threshold = t;
        p.tpr = tp / n_mated;
        p.fpr = fp / n_nonmated;
        p.fnr = 1.0 - p.tpr;
        p.recall = p.tpr;
        p.acc = (tp + (n_nonmated - fp)) / total;
        p.f1_defined = tp + fp > 0.0;
        if (p.f1_defined) {
            p.precision = tp / (tp + fp);
            p.f1 = p.precision + p.recall > 0.0
                       ? 2.0 * p.precision * p.recall / (p.precision + p.recall)
                       : 0.0;
        }
        points.push_back(p);
    }
    return points;
}

std::vector<RocPoint> roc_points(const std::vector<SweepPoint>& sweep_points) {
    std::vector<RocPoint> out;
    for (const SweepPoint& p : sweep_points) {
        if (!out.empty() && out.back().fpr == p.fpr)
            out.back().tpr = std::max(out.back().tpr, p.tpr);
        else
            out.push_back({p.fpr, p.tpr});
    }
    return out;
}

std::vector<DetPoint> det_points(const std::vector<SweepPoint>& sweep_points) {
    std::vector<DetPoint> out;
    for (const RocPoint& p : roc_points(sweep_points)) out.push_back({p.fpr, 1.0 - p.tpr});
    return out;
}

double auc(const std::vector<RocPoint>& points) {
    double area = 0.0;
    for (std::size_t i = 1; i < points.size(); ++i)
        area += (points[i].fpr - points[i - 1].fpr) * (points[i].tpr + points[i - 1].tpr) / 2.0;
    return area;
}

double eer(const std::vector<DetPoint>& points) {
    if (points.empty()) throw DegenerateGroundTruth("empty DET curve");
    double prev_diff = points.front().fpr - points.front().fnr;
    if (prev_diff == 0.0) return points.front().fpr;
    for (std::size_t i = 1; i < points.size(); ++i) {
        const double diff = points[i].fpr - points[i].fnr;
        if (diff == 0.0) return points[i].fpr;
        if (prev_diff < 0.0 && diff > 0.0) {
            const DetPoint& a = points[i - 1];
            const DetPoint& b = points[i];
            const double denom = (b.fpr - a.fpr) - (b.fnr - a.fnr);
            const double alpha = (a.fnr - a.fpr) / denom;
            return a.fpr + alpha * (b.fpr - a.fpr);
        }
        prev_diff = diff;
    }
    // fpr stays below fnr throughout (cannot happen with the +inf sentinel)
    return points.back().fpr;
}

AccAtMaxF1 acc_at_max_f1(const std::vector<SweepPoint>& sweep_points) {
    const SweepPoint* best = nullptr;
    for (const SweepPoint& p : sweep_points) {
        if (!p.f1_defined) continue;
        if (best == nullptr || p.f1 > best->f1) best = &p;
    }
    if (best == nullptr) throw DegenerateGroundTruth("F1 undefined at every threshold");
    return {best->acc, best->threshold};
}

std::vector<ErrorLevelPoint> error_level_curve(const ComparisonSet& c) {
    std::vector<ErrorLevelPoint> out;
    for (const SweepPoint& p : sweep(c)) out.push_back({p.threshold, 1.0 - p.acc});
    return out;
}

EvalReport evaluate(const ComparisonSet& c) {
    const auto points = sweep(c);
    EvalReport r;
    r.roc_points = roc_points(points);
    r.det_points = det_points(points);
    r.auc = auc(r.roc_points);
    r.eer = eer(r.det_points);
    const AccAtMaxF1 best = acc_at_max_f1(points);
    r.acc_at_max_f1 = best.acc;
    r.best_threshold = best.threshold;
    r.n_comparisons = c.scores.size();
    r.n_mated = c.mated_count();
    r.n_nonmated = c.nonmated_count();
    return r;
}

EvalReport evaluate_matrix(const DissimilarityMatrix& m) {
    return evaluate(comparisons_from_matrix(m));
}

}  // namespace gazebio
