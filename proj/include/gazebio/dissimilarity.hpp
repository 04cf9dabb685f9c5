#pragma once

#include <string>
#include <vector>

#include "gazebio/fdm.hpp"
#include "gazebio/spectral.hpp"

namespace gazebio {

/// A unit-mass non-negative feature vector: the flattened grid of an FDM, or
/// the retained low-frequency box of a filtered spectrum.
struct FeatureGrid {
    std::vector<double> cells;
    TrialLabel label;
};

/// Full grid of a (normed) FDM as a feature vector.
FeatureGrid feature_from_fdm(const FixationDensityMap& m);

/// Only the retained (2l+1)^2 box of a filtered spectrum; zeros outside the
/// box carry no information and would poison the KLD score.
FeatureGrid feature_from_spectrum(const MagnitudeSpectrum& s);

enum class MetricTag { MSE, MIN, KLD, EUCL };

std::string metric_name(MetricTag m);
MetricTag metric_from_name(const std::string& name);

/// sum (P-R)^2
double d_mse(const FeatureGrid& p, const FeatureGrid& r);

/// 1 - sum min(P,R): 0 for identical unit-mass grids, 1 for disjoint support.
double d_min(const FeatureGrid& p, const FeatureGrid& r);

/// Harmonic mean of the two directed KL divergences, with both grids floored
/// at epsilon and re-normed first. 0 in the identical-distribution limit.
double d_kld_sym(const FeatureGrid& p, const FeatureGrid& r, double epsilon = 1e-10);

struct DissimilarityMatrix {
    std::vector<double> values;  // row-major, k*k
    std::vector<TrialLabel> labels;
    MetricTag metric_tag = MetricTag::MSE;

    std::size_t size() const { return labels.size(); }
    double& at(std::size_t i, std::size_t j) { return values[i * labels.size() + j]; }
    double at(std::size_t i, std::size_t j) const { return values[i * labels.size() + j]; }
};

/// All pairwise scores of a feature family; symmetric with zero diagonal.
/// metric must be one of the pointwise scores (MSE, MIN, KLD).
DissimilarityMatrix build_matrix(const std::vector<FeatureGrid>& features, MetricTag metric,
                                 double epsilon = 1e-10);

/// Euclidean distances between rows of a KLD matrix, max-normed to 1. The
/// result depends on the whole input matrix: adding a trial changes existing
/// entries, so thresholds do not transfer between matrices of different
/// composition.
DissimilarityMatrix d_eucl_from_kld(const DissimilarityMatrix& kld);

/// Convenience for CLI/pipeline: pointwise metrics directly, EUCL via the
/// intermediate KLD matrix.
DissimilarityMatrix matrix_for_metric(const std::vector<FeatureGrid>& features, MetricTag metric,
                                      double epsilon = 1e-10);

}  // namespace gazebio
