#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gazebio/calibration.hpp"
#include "gazebio/dissimilarity.hpp"
#include "gazebio/evaluation.hpp"
#include "gazebio/fdm.hpp"
#include "gazebio/fixation.hpp"
#include "gazebio/types.hpp"

namespace gazebio {

/// Feature families compared in the summary: plain FDMs, recalibrated FDMs,
/// their filtered spectra, and the spectra of the recalibrated maps.
enum class Domain { FDM, FDMRecal, DFT, DFTRecal };

std::string domain_name(Domain d);
Domain domain_from_name(const std::string& name);
bool domain_is_recalibrated(Domain d);
bool domain_is_spectral(Domain d);

struct PipelineConfig {
    std::vector<std::string> dataset;  // manifest paths
    int grid_n = 64;
    double sigma = 2.0;                // gaussian smoothing, grid cells
    int box_limit = -1;                // -1: floor(0.05 * grid_n)
    double epsilon = 1e-10;            // KLD floor
    double cluster_eps_deg = 1.0;
    int cluster_min_points = 5;
    double cluster_min_duration = 0.1;
    double cluster_max_gap = 0.1;
    double pair_radius_deg = 3.0;      // recalibration pairing radius
    double ttt_radius_deg = 3.0;
    double ttt_window_min = 0.1;
    double ttt_window_max = 0.4;
    double sample_rate = 60.0;
    bool recalibrate = true;
    std::vector<Domain> domains = {Domain::FDM, Domain::FDMRecal, Domain::DFT, Domain::DFTRecal};
    std::vector<MetricTag> metrics = {MetricTag::MSE, MetricTag::MIN, MetricTag::KLD,
                                      MetricTag::EUCL};
    std::string output_dir;
    std::uint64_t seed = 0;

    void validate() const;
};

PipelineConfig config_from_json(const std::string& text, const std::string& base_dir);
std::string config_to_json(const PipelineConfig& c);

/// Per-trial intermediate products, kept so subcommand composition and the
/// pipeline write identical files.
struct TrialFeatures {
    TrialLabel label;
    std::vector<Fixation> fixations;
    std::vector<Fixation> fixations_recal;
    std::optional<AffineTransform> transform;  // absent when fitting failed
    std::map<Domain, FeatureGrid> features;    // only usable domains present
    bool fdm_empty = false;                    // no blank-period fixations
};

struct GroupResult {
    std::string grouping;  // week id or "all"
    Domain domain;
    MetricTag metric;
    EvalReport report;
    std::size_t n_trials = 0;
};

struct PipelineResult {
    std::vector<GroupResult> results;
    std::vector<TrialLabel> excluded;                 // empty-FDM trials
    std::vector<TrialLabel> recalibration_failures;   // kept un-recalibrated
    std::size_t n_trials = 0;
};

/// Full run: load every manifest, detect fixations, recalibrate when primed
/// domains are requested, build features, then one matrix + evaluation per
/// (domain, metric, week grouping). Writes all artifacts under output_dir
/// when it is non-empty. Deterministic for a fixed config.
PipelineResult run_pipeline(const PipelineConfig& config);

std::string summary_csv(const PipelineResult& r);
std::string summary_json(const PipelineResult& r);

}  // namespace gazebio
