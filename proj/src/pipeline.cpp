#include "gazebio/pipeline.hpp"

#include <algorithm>
#include <filesystem>
#include <set>

#include <json.hpp>

#include "gazebio/io.hpp"
#include "gazebio/numfmt.hpp"
#include "gazebio/spectral.hpp"
#include "gazebio/ttt.hpp"

namespace gazebio {

namespace fs = std::filesystem;
using nlohmann::json;

std::string domain_name(Domain d) {
    switch (d) {
        case Domain::FDM: return "fdm";
        case Domain::FDMRecal: return "fdm_recal";
        case Domain::DFT: return "dft";
        case Domain::DFTRecal: return "dft_recal";
    }
    return "fdm";
}

Domain domain_from_name(const std::string& name) {
    if (name == "fdm") return Domain::FDM;
    if (name == "fdm_recal" || name == "fdm'") return Domain::FDMRecal;
    if (name == "dft") return Domain::DFT;
    if (name == "dft_recal" || name == "dft'") return Domain::DFTRecal;
    throw ConfigError("unknown domain: " + name);
}

bool domain_is_recalibrated(Domain d) {
    return d == Domain::FDMRecal || d == Domain::DFTRecal;
}

bool domain_is_spectral(Domain d) {
    return d == Domain::DFT || d == Domain::DFTRecal;
}

void PipelineConfig::validate() const {
    if (dataset.empty()) throw ConfigError("dataset must list at least one manifest");
    if (grid_n < 8) throw ConfigError("grid_n must be at least 8");
    if (sigma < 0.0) throw ConfigError("sigma must be non-negative");
    if (box_limit != -1 && (box_limit < 0 || box_limit > grid_n / 2))
        throw ConfigError("box_limit out of range");
    if (!(epsilon > 0.0)) throw ConfigError("epsilon must be positive");
    if (!(cluster_eps_deg > 0.0) || cluster_min_points < 2 || cluster_min_duration < 0.0 ||
        !(cluster_max_gap > 0.0))
        throw ConfigError("cluster parameters out of range");
    if (!(pair_radius_deg > 0.0) || !(ttt_radius_deg > 0.0))
        throw ConfigError("radii must be positive");
    if (ttt_window_min < 0.0 || !(ttt_window_max > ttt_window_min))
        throw ConfigError("ttt window out of range");
    if (!(sample_rate > 0.0)) throw ConfigError("sample_rate must be positive");
    if (domains.empty() || metrics.empty()) throw ConfigError("domains and metrics must be non-empty");
    if (!recalibrate)
        for (Domain d : domains)
            if (domain_is_recalibrated(d))
                throw ConfigError("recalibrated domain requested with recalibrate=false");
    for (const std::string& path : dataset)
        if (!fs::exists(path)) throw ConfigError("manifest does not exist: " + path);
}

namespace {

std::string resolve(const std::string& base_dir, const std::string& path) {
    if (base_dir.empty() || fs::path(path).is_absolute()) return path;
    return (fs::path(base_dir) / path).string();
}

}  // namespace

PipelineConfig config_from_json(const std::string& text, const std::string& base_dir) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    PipelineConfig c;
    try {
        if (j.contains("dataset"))
            for (const auto& p : j.at("dataset"))
                c.dataset.push_back(resolve(base_dir, p.get<std::string>()));
        if (j.contains("dataset_dir")) {
            const std::string dir = resolve(base_dir, j.at("dataset_dir").get<std::string>());
            if (!fs::is_directory(dir)) throw ConfigError("dataset_dir is not a directory: " + dir);
            std::vector<std::string> found;
            for (const auto& entry : fs::directory_iterator(dir))
                if (entry.is_regular_file() &&
                    entry.path().filename().string().ends_with(".manifest.json"))
                    found.push_back(entry.path().string());
            std::sort(found.begin(), found.end());
            c.dataset.insert(c.dataset.end(), found.begin(), found.end());
        }
        c.grid_n = j.value("grid_n", c.grid_n);
        c.sigma = j.value("sigma", c.sigma);
        c.box_limit = j.value("box_limit", c.box_limit);
        c.epsilon = j.value("epsilon", c.epsilon);
        if (j.contains("cluster")) {
            const json& k = j.at("cluster");
            c.cluster_eps_deg = k.value("eps_deg", c.cluster_eps_deg);
            c.cluster_min_points = k.value("min_points", c.cluster_min_points);
            c.cluster_min_duration = k.value("min_duration", c.cluster_min_duration);
            c.cluster_max_gap = k.value("max_gap", c.cluster_max_gap);
        }
        c.pair_radius_deg = j.value("pair_radius_deg", c.pair_radius_deg);
        if (j.contains("ttt")) {
            const json& k = j.at("ttt");
            c.ttt_radius_deg = k.value("radius_deg", c.ttt_radius_deg);
            c.ttt_window_min = k.value("window_min", c.ttt_window_min);
            c.ttt_window_max = k.value("window_max", c.ttt_window_max);
        }
        c.sample_rate = j.value("sample_rate", c.sample_rate);
        c.recalibrate = j.value("recalibrate", c.recalibrate);
        if (j.contains("domains")) {
            c.domains.clear();
            for (const auto& d : j.at("domains")) c.domains.push_back(domain_from_name(d));
        }
        if (j.contains("metrics")) {
            c.metrics.clear();
            for (const auto& m : j.at("metrics")) c.metrics.push_back(metric_from_name(m));
        }
        if (j.contains("output_dir"))
            c.output_dir = resolve(base_dir, j.at("output_dir").get<std::string>());
        c.seed = j.value("seed", c.seed);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config field error: ") + e.what());
    }
    return c;
}

std::string config_to_json(const PipelineConfig& c) {
    json j;
    j["dataset"] = c.dataset;
    j["grid_n"] = c.grid_n;
    j["sigma"] = c.sigma;
    j["box_limit"] = c.box_limit;
    j["epsilon"] = c.epsilon;
    j["cluster"] = {{"eps_deg", c.cluster_eps_deg},
                    {"min_points", c.cluster_min_points},
                    {"min_duration", c.cluster_min_duration},
                    {"max_gap", c.cluster_max_gap}};
    j["pair_radius_deg"] = c.pair_radius_deg;
    j["ttt"] = {{"radius_deg", c.ttt_radius_deg},
                {"window_min", c.ttt_window_min},
                {"window_max", c.ttt_window_max}};
    j["sample_rate"] = c.sample_rate;
    j["recalibrate"] = c.recalibrate;
    json domains = json::array();
    for (Domain d : c.domains) domains.push_back(domain_name(d));
    j["domains"] = domains;
    json metrics = json::array();
    for (MetricTag m : c.metrics) metrics.push_back(metric_name(m));
    j["metrics"] = metrics;
    j["output_dir"] = c.output_dir;
    j["seed"] = c.seed;
    return j.dump(2) + "\n";
}

namespace {

std::string file_label(const TrialLabel& l) {
    return l.subject_id + "-" + l.week_id + "-" + std::to_string(l.trial_index);
}

struct TrialData {
    TrialManifest manifest;
    TrialFeatures features;
};

}  // namespace

PipelineResult run_pipeline(const PipelineConfig& config) {
    config.validate();

    const bool writing = !config.output_dir.empty();
    const fs::path out_dir = config.output_dir;
    auto write_out = [&](const fs::path& rel, const std::string& content) {
        const fs::path full = out_dir / rel;
        fs::create_directories(full.parent_path());
        write_file(full.string(), content);
    };

    const bool want_recal =
        std::any_of(config.domains.begin(), config.domains.end(), domain_is_recalibrated);
    const int box_limit =
        config.box_limit >= 0 ? config.box_limit : default_box_limit(config.grid_n);

    // load and order trials: week, then subject, then trial index
    std::vector<TrialData> trials;
    for (const std::string& path : config.dataset) {
        TrialData td;
        td.manifest = parse_manifest(read_file(path));
        const fs::path dir = fs::path(path).parent_path();
        td.manifest.trace_path = resolve(dir.string(), td.manifest.trace_path);
        td.manifest.events_path = resolve(dir.string(), td.manifest.events_path);
        trials.push_back(std::move(td));
    }
    std::sort(trials.begin(), trials.end(), [](const TrialData& a, const TrialData& b) {
        const TrialManifest& x = a.manifest;
        const TrialManifest& y = b.manifest;
        return std::tie(x.week_id, x.subject_id, x.trial_index) <
               std::tie(y.week_id, y.subject_id, y.trial_index);
    });
    for (std::size_t i = 1; i < trials.size(); ++i)
        if (trials[i].manifest.label() == trials[i - 1].manifest.label())
            throw ConfigError("duplicate trial label: " + trials[i].manifest.label().str());

    std::set<std::string> subjects;
    for (const TrialData& t : trials) subjects.insert(t.manifest.subject_id);
    if (trials.size() < 4 || subjects.size() < 2)
        throw DegenerateGroundTruth("pipeline needs at least 2 subjects across at least 4 trials");

    PipelineResult result;
    result.n_trials = trials.size();

    for (TrialData& td : trials) {
        const TrialManifest& m = td.manifest;
        const ScreenGeometry& g = m.geometry;
        TrialFeatures& tf = td.features;
        tf.label = m.label();

        const GazeTrace trace = parse_trace(read_file(m.trace_path), config.sample_rate);
        const auto events = parse_events(read_file(m.events_path));
        const ClusterParams params{degrees_to_pixels(config.cluster_eps_deg, g),
                                   config.cluster_min_points, config.cluster_min_duration,
                                   config.cluster_max_gap};
        tf.fixations = detect_fixations(trace, params);
        if (writing)
            write_out(fs::path("fixations") / (file_label(tf.label) + ".csv"),
                      serialize_fixations(tf.fixations));

        if (want_recal) {
            const auto pairs = collect_pairs(tf.fixations, events,
                                             degrees_to_pixels(config.pair_radius_deg, g));
            try {
                tf.transform = fit_affine(pairs);
            } catch (const DegenerateFit&) {
                tf.transform.reset();
                result.recalibration_failures.push_back(tf.label);
            }
            tf.fixations_recal =
                tf.transform ? apply_affine(*tf.transform, tf.fixations) : tf.fixations;
            if (writing) {
                write_out(fs::path("fixations_recal") / (file_label(tf.label) + ".csv"),
                          serialize_fixations(tf.fixations_recal));
                write_out(fs::path("transforms") / (file_label(tf.label) + ".json"),
                          serialize_transform(tf.transform.value_or(AffineTransform::identity())));
            }
        }

        const auto epochs = build_epochs(events);
        // one normed FDM per recalibration flavor; features derive from it
        for (const bool recal : {false, true}) {
            const bool needed = std::any_of(
                config.domains.begin(), config.domains.end(),
                [&](Domain d) { return domain_is_recalibrated(d) == recal; });
            if (!needed || (recal && !want_recal)) continue;
            const auto& base = recal ? tf.fixations_recal : tf.fixations;
            const auto blank = fixations_in_epochs(base, epochs, EventKind::Blank);
            FixationDensityMap fdm = build_fdm(blank, g, config.grid_n, tf.label);
            if (!(fdm.total_mass() > 0.0)) {
                tf.fdm_empty = true;
                continue;
            }
            const FixationDensityMap normed = norm_unit_mass(smooth_gaussian(fdm, config.sigma));
            if (writing)
                write_out(fs::path(recal ? "fdm_recal" : "fdm") / (file_label(tf.label) + ".csv"),
                          serialize_fdm(normed));
            for (Domain d : config.domains) {
                if (domain_is_recalibrated(d) != recal) continue;
                if (domain_is_spectral(d)) {
                    const MagnitudeSpectrum spec = spectral_feature(normed, box_limit);
                    if (writing)
                        write_out(fs::path(domain_name(d)) / (file_label(tf.label) + ".csv"),
                                  serialize_spectrum(spec));
                    tf.features[d] = feature_from_spectrum(spec);
                } else {
                    tf.features[d] = feature_from_fdm(normed);
                }
            }
        }
        if (tf.fdm_empty) result.excluded.push_back(tf.label);
    }

    // week groupings, plus "all" when more than one week
    std::vector<std::string> groupings;
    {
        std::set<std::string> weeks;
        for (const TrialData& t : trials) weeks.insert(t.manifest.week_id);
        groupings.assign(weeks.begin(), weeks.end());
        if (weeks.size() > 1) groupings.push_back("all");
    }

    for (const std::string& grouping : groupings) {
        std::vector<const TrialFeatures*> group;
        for (const TrialData& t : trials) {
            if (t.features.fdm_empty) continue;
            if (grouping == "all" || t.manifest.week_id == grouping)
                group.push_back(&t.features);
        }
        std::set<std::string> group_subjects;
        for (const TrialFeatures* tf : group) group_subjects.insert(tf->label.subject_id);
        if (group.size() < 2 || group_subjects.size() < 2)
            throw DegenerateGroundTruth("grouping '" + grouping +
                                        "' has fewer than 2 usable subjects");

        for (Domain d : config.domains) {
            std::vector<FeatureGrid> features;
            features.reserve(group.size());
            for (const TrialFeatures* tf : group) features.push_back(tf->features.at(d));

            // EUCL reuses the KLD matrix of the same group
            std::optional<DissimilarityMatrix> kld_cache;
            auto matrix_for = [&](MetricTag metric) {
                if (metric == MetricTag::EUCL) {
                    if (!kld_cache)
                        kld_cache = build_matrix(features, MetricTag::KLD, config.epsilon);
                    return d_eucl_from_kld(*kld_cache);
                }
                DissimilarityMatrix m = build_matrix(features, metric, config.epsilon);
                if (metric == MetricTag::KLD) kld_cache = m;
                return m;
            };

            for (MetricTag metric : config.metrics) {
                const DissimilarityMatrix matrix = matrix_for(metric);
                const ComparisonSet comparisons = comparisons_from_matrix(matrix);
                const auto sweep_points = sweep(comparisons);

                GroupResult gr;
                gr.grouping = grouping;
                gr.domain = d;
                gr.metric = metric;
                gr.n_trials = group.size();
                gr.report.roc_points = roc_points(sweep_points);
                gr.report.det_points = det_points(sweep_points);
                gr.report.auc = auc(gr.report.roc_points);
                gr.report.eer = eer(gr.report.det_points);
                const AccAtMaxF1 best = acc_at_max_f1(sweep_points);
                gr.report.acc_at_max_f1 = best.acc;
                gr.report.best_threshold = best.threshold;
                gr.report.n_comparisons = comparisons.scores.size();
                gr.report.n_mated = comparisons.mated_count();
                gr.report.n_nonmated = comparisons.nonmated_count();

                if (writing) {
                    const std::string stem =
                        domain_name(d) + "_" + metric_name(metric) + "_" + grouping;
                    write_out(fs::path("matrices") / (stem + ".csv"), serialize_matrix(matrix));
                    write_out(fs::path("curves") / (stem + ".csv"),
                              serialize_curves(sweep_points));
                    write_out(fs::path("reports") / (stem + ".json"),
                              serialize_report(gr.report, group.size()));
                }
                result.results.push_back(std::move(gr));
            }
        }
    }

    if (writing) {
        write_out("summary.csv", summary_csv(result));
        write_out("summary.json", summary_json(result));
    }
    return result;
}

std::string summary_csv(const PipelineResult& r) {
    std::string out =
        "domain,metric,grouping,n_trials,n_comparisons,acc_at_max_f1,auc,eer,best_threshold\n";
    for (const GroupResult& g : r.results) {
        out += domain_name(g.domain);
        out += ',';
        out += metric_name(g.metric);
        out += ',';
        out += g.grouping;
        out += ',';
        out += std::to_string(g.n_trials);
        out += ',';
        out += std::to_string(g.report.n_comparisons);
        out += ',';
        out += fmt_double(g.report.acc_at_max_f1);
        out += ',';
        out += fmt_double(g.report.auc);
        out += ',';
        out += fmt_double(g.report.eer);
        out += ',';
        out += fmt_double(g.report.best_threshold);
        out += '\n';
    }
    return out;
}

std::string summary_json(const PipelineResult& r) {
    json j;
    j["n_trials"] = r.n_trials;
    json excluded = json::array();
    for (const TrialLabel& l : r.excluded) excluded.push_back(l.str());
    j["excluded"] = excluded;
    json failures = json::array();
    for (const TrialLabel& l : r.recalibration_failures) failures.push_back(l.str());
    j["recalibration_failures"] = failures;
    json results = json::array();
    for (const GroupResult& g : r.results) {
        json e = json::parse(serialize_report(g.report, g.n_trials));
        e["domain"] = domain_name(g.domain);
        e["metric"] = metric_name(g.metric);
        e["grouping"] = g.grouping;
        results.push_back(e);
    }
    j["results"] = results;
    return j.dump(2) + "\n";
}

}  // namespace gazebio
