// gazebio command line: synthetic data generation, the per-stage subcommands,
// and the end-to-end pipeline. Exit codes: 0 success, 2 usage error, 3 data
// error, 4 degenerate evaluation.

#include <cstdio>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gazebio/calibration.hpp"
#include "gazebio/dissimilarity.hpp"
#include "gazebio/evaluation.hpp"
#include "gazebio/fdm.hpp"
#include "gazebio/fixation.hpp"
#include "gazebio/io.hpp"
#include "gazebio/numfmt.hpp"
#include "gazebio/pipeline.hpp"
#include "gazebio/spectral.hpp"
#include "gazebio/synth.hpp"
#include "gazebio/ttt.hpp"

namespace fs = std::filesystem;
using namespace gazebio;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitDegenerate = 4;

struct ManifestBundle {
    TrialManifest manifest;
    GazeTrace trace;
    std::vector<StimulusEvent> events;
};

std::string resolve_near(const std::string& anchor_file, const std::string& path) {
    if (fs::path(path).is_absolute()) return path;
    return (fs::path(anchor_file).parent_path() / path).string();
}

ManifestBundle load_bundle(const std::string& manifest_path, double rate) {
    ManifestBundle b;
    b.manifest = parse_manifest(read_file(manifest_path));
    b.trace = parse_trace(read_file(resolve_near(manifest_path, b.manifest.trace_path)), rate);
    b.events = parse_events(read_file(resolve_near(manifest_path, b.manifest.events_path)));
    return b;
}

struct ClusterFlags {
    double eps_deg = 1.0;
    int min_points = 5;
    double min_duration = 0.1;
    double max_gap = 0.1;

    void attach(CLI::App* cmd) {
        cmd->add_option("--eps-deg", eps_deg, "cluster radius in degrees");
        cmd->add_option("--min-points", min_points, "minimum samples per fixation");
        cmd->add_option("--min-duration", min_duration, "minimum fixation duration (s)");
        cmd->add_option("--max-gap", max_gap, "maximum time gap inside a fixation (s)");
    }
    ClusterParams params(const ScreenGeometry& g) const {
        return {degrees_to_pixels(eps_deg, g), min_points, min_duration, max_gap};
    }
};

// --- synth ------------------------------------------------------------------

struct SynthArgs {
    std::string out_dir;
    std::uint64_t seed = 0;
    int trials_per_week = 4;
    int weeks = 2;
    double width = 1920.0;
    double height = 1200.0;
    double ppd = 45.0;
    double noise_px = 8.0;
    double drift_px = -1.0;  // default: 2% of screen width
    std::string profile_a_path;
    std::string profile_b_path;
};

int run_synth(const SynthArgs& args) {
    ScreenGeometry geometry{args.width, args.height, args.ppd};
    geometry.validate();
    const double drift = args.drift_px >= 0.0 ? args.drift_px : 0.02 * geometry.width_px;

    SubjectPresets presets = subject_presets();
    if (!args.profile_a_path.empty())
        presets.profile_a = parse_profile(read_file(args.profile_a_path));
    if (!args.profile_b_path.empty())
        presets.profile_b = parse_profile(read_file(args.profile_b_path));
    presets.profile_a.noise_sigma = args.noise_px;
    presets.profile_b.noise_sigma = args.noise_px;
    presets.profile_a.drift = drift;
    presets.profile_b.drift = drift;

    fs::create_directories(args.out_dir);
    write_file((fs::path(args.out_dir) / "profile_A.json").string(),
               serialize_profile(presets.profile_a));
    write_file((fs::path(args.out_dir) / "profile_B.json").string(),
               serialize_profile(presets.profile_b));
    std::vector<std::string> manifests;
    std::uint64_t counter = 0;
    for (int w = 1; w <= args.weeks; ++w) {
        const std::string week = "w" + std::to_string(w);
        for (const SubjectProfile& profile : {presets.profile_a, presets.profile_b}) {
            for (int t = 0; t < args.trials_per_week; ++t) {
                const std::uint64_t schedule_seed = args.seed * 7919 + counter;
                const std::uint64_t trial_seed = args.seed * 104729 + counter;
                ++counter;
                const StimulusSchedule schedule = make_schedule(geometry, schedule_seed);
                const SimulatedTrial trial = simulate_trial(profile, schedule, geometry, trial_seed);

                const std::string stem = profile.name + "-" + week + "-" + std::to_string(t);
                const fs::path dir = args.out_dir;
                write_file((dir / (stem + ".trace.csv")).string(), serialize_trace(trial.trace));
                write_file((dir / (stem + ".events.csv")).string(), serialize_events(trial.events));
                TrialManifest m;
                m.subject_id = profile.name;
                m.week_id = week;
                m.trial_index = t;
                m.geometry = geometry;
                m.trace_path = stem + ".trace.csv";
                m.events_path = stem + ".events.csv";
                write_file((dir / (stem + ".manifest.json")).string(), serialize_manifest(m));
                manifests.push_back(stem + ".manifest.json");
            }
        }
    }
    std::printf("wrote %zu trials to %s\n", manifests.size(), args.out_dir.c_str());
    return 0;
}

// --- per-stage subcommands ----------------------------------------------------

FeatureGrid load_feature(const std::string& path, const std::string& domain) {
    const std::string text = read_file(path);
    if (domain == "fdm") return feature_from_fdm(parse_fdm(text));
    if (domain == "dft") return feature_from_spectrum(parse_spectrum(text));
    throw ConfigError("domain must be fdm or dft");
}

void print_summary_table(const PipelineResult& result) {
    std::printf("%-10s %-6s %-8s %8s %8s %8s\n", "domain", "metric", "grouping", "acc", "auc",
                "eer");
    for (const GroupResult& g : result.results)
        std::printf("%-10s %-6s %-8s %8.4f %8.4f %8.4f\n", domain_name(g.domain).c_str(),
                    metric_name(g.metric).c_str(), g.grouping.c_str(), g.report.acc_at_max_f1,
                    g.report.auc, g.report.eer);
    if (!result.excluded.empty()) {
        std::printf("excluded trials (empty FDM):");
        for (const TrialLabel& l : result.excluded) std::printf(" %s", l.str().c_str());
        std::printf("\n");
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"eye-movement biometric pipeline: fixations, density maps, spectral features,"
                 " dissimilarity matrices and verification metrics"};
    app.require_subcommand(1);
    std::function<int()> action;

    // synth
    auto synth_args = std::make_shared<SynthArgs>();
    {
        CLI::App* cmd = app.add_subcommand("synth", "generate a synthetic two-subject dataset");
        cmd->add_option("--out", synth_args->out_dir, "output directory")->required();
        cmd->add_option("--seed", synth_args->seed, "generator seed")->required();
        cmd->add_option("--trials-per-week", synth_args->trials_per_week, "trials per subject per week");
        cmd->add_option("--weeks", synth_args->weeks, "number of weeks");
        cmd->add_option("--width", synth_args->width, "screen width in pixels");
        cmd->add_option("--height", synth_args->height, "screen height in pixels");
        cmd->add_option("--ppd", synth_args->ppd, "pixels per degree");
        cmd->add_option("--noise-px", synth_args->noise_px, "per-sample gaze noise sigma");
        cmd->add_option("--drift-px", synth_args->drift_px,
                        "per-trial calibration drift scale (default 2% of width)");
        cmd->add_option("--profile-a", synth_args->profile_a_path,
                        "profile JSON overriding the built-in subject A");
        cmd->add_option("--profile-b", synth_args->profile_b_path,
                        "profile JSON overriding the built-in subject B");
        cmd->callback([synth_args, &action] { action = [synth_args] { return run_synth(*synth_args); }; });
    }

    // fixations
    auto fix_manifest = std::make_shared<std::string>();
    auto fix_out = std::make_shared<std::string>();
    auto fix_rate = std::make_shared<double>(60.0);
    auto fix_cluster = std::make_shared<ClusterFlags>();
    {
        CLI::App* cmd = app.add_subcommand("fixations", "detect fixations in a trial's trace");
        cmd->add_option("--manifest", *fix_manifest, "trial manifest JSON")->required();
        cmd->add_option("--out", *fix_out, "output fixation CSV")->required();
        cmd->add_option("--rate", *fix_rate, "nominal sample rate (Hz)");
        fix_cluster->attach(cmd);
        cmd->callback([=, &action] {
            action = [=] {
                const ManifestBundle b = load_bundle(*fix_manifest, *fix_rate);
                const auto fixations =
                    detect_fixations(b.trace, fix_cluster->params(b.manifest.geometry));
                write_file(*fix_out, serialize_fixations(fixations));
                std::printf("%zu fixations -> %s\n", fixations.size(), fix_out->c_str());
                return 0;
            };
        });
    }

    // recalibrate
    auto rec_manifest = std::make_shared<std::string>();
    auto rec_fixations = std::make_shared<std::string>();
    auto rec_out = std::make_shared<std::string>();
    auto rec_transform = std::make_shared<std::string>();
    auto rec_radius = std::make_shared<double>(3.0);
    {
        CLI::App* cmd = app.add_subcommand(
            "recalibrate", "fit an affine correction against target positions and apply it");
        cmd->add_option("--manifest", *rec_manifest, "trial manifest JSON")->required();
        cmd->add_option("--fixations", *rec_fixations, "input fixation CSV")->required();
        cmd->add_option("--out", *rec_out, "output fixation CSV")->required();
        cmd->add_option("--transform-out", *rec_transform, "optional transform JSON output");
        cmd->add_option("--radius-deg", *rec_radius, "pairing radius in degrees");
        cmd->callback([=, &action] {
            action = [=] {
                const TrialManifest m = parse_manifest(read_file(*rec_manifest));
                const auto events =
                    parse_events(read_file(resolve_near(*rec_manifest, m.events_path)));
                const auto fixations = parse_fixations(read_file(*rec_fixations));
                const auto pairs = collect_pairs(
                    fixations, events, degrees_to_pixels(*rec_radius, m.geometry));
                const AffineTransform t = fit_affine(pairs);
                write_file(*rec_out, serialize_fixations(apply_affine(t, fixations)));
                if (!rec_transform->empty()) write_file(*rec_transform, serialize_transform(t));
                std::printf("fitted on %zu pairs, residual %s px^2 -> %s\n", pairs.size(),
                            fmt_double(affine_residual(t, pairs)).c_str(), rec_out->c_str());
                return 0;
            };
        });
    }

    // fdm
    auto fdm_manifest = std::make_shared<std::string>();
    auto fdm_fixations = std::make_shared<std::string>();
    auto fdm_out = std::make_shared<std::string>();
    auto fdm_n = std::make_shared<int>(64);
    auto fdm_sigma = std::make_shared<double>(2.0);
    {
        CLI::App* cmd = app.add_subcommand(
            "fdm", "build the smoothed unit-mass density map from blank-period fixations");
        cmd->add_option("--manifest", *fdm_manifest, "trial manifest JSON")->required();
        cmd->add_option("--fixations", *fdm_fixations, "input fixation CSV")->required();
        cmd->add_option("--out", *fdm_out, "output FDM CSV")->required();
        cmd->add_option("--n", *fdm_n, "grid size");
        cmd->add_option("--sigma", *fdm_sigma, "gaussian sigma in grid cells");
        cmd->callback([=, &action] {
            action = [=] {
                const TrialManifest m = parse_manifest(read_file(*fdm_manifest));
                const auto events =
                    parse_events(read_file(resolve_near(*fdm_manifest, m.events_path)));
                const auto fixations = parse_fixations(read_file(*fdm_fixations));
                const auto blank =
                    fixations_in_epochs(fixations, build_epochs(events), EventKind::Blank);
                const FixationDensityMap normed = norm_unit_mass(
                    smooth_gaussian(build_fdm(blank, m.geometry, *fdm_n, m.label()), *fdm_sigma));
                write_file(*fdm_out, serialize_fdm(normed));
                std::printf("%zu blank fixations -> %s\n", blank.size(), fdm_out->c_str());
                return 0;
            };
        });
    }

    // dft
    auto dft_in = std::make_shared<std::string>();
    auto dft_out = std::make_shared<std::string>();
    auto dft_limit = std::make_shared<int>(-1);
    {
        CLI::App* cmd = app.add_subcommand(
            "dft", "box-filtered magnitude spectrum feature of a density map");
        cmd->add_option("--fdm", *dft_in, "input FDM CSV")->required();
        cmd->add_option("--out", *dft_out, "output spectrum CSV")->required();
        cmd->add_option("--limit", *dft_limit, "box filter limit (default 5% of n)");
        cmd->callback([=, &action] {
            action = [=] {
                const FixationDensityMap m = parse_fdm(read_file(*dft_in));
                const int l = *dft_limit >= 0 ? *dft_limit : default_box_limit(m.n);
                write_file(*dft_out, serialize_spectrum(spectral_feature(m, l)));
                std::printf("spectrum l=%d -> %s\n", l, dft_out->c_str());
                return 0;
            };
        });
    }

    // dissim
    auto dis_metric = std::make_shared<std::string>("kld");
    auto dis_domain = std::make_shared<std::string>("fdm");
    auto dis_out = std::make_shared<std::string>();
    auto dis_eps = std::make_shared<double>(1e-10);
    auto dis_features = std::make_shared<std::vector<std::string>>();
    {
        CLI::App* cmd = app.add_subcommand("dissim", "pairwise dissimilarity matrix of features");
        cmd->add_option("--metric", *dis_metric, "mse, min, kld or eucl");
        cmd->add_option("--domain", *dis_domain, "fdm or dft (how to read the feature files)");
        cmd->add_option("--out", *dis_out, "output matrix CSV")->required();
        cmd->add_option("--epsilon", *dis_eps, "KLD floor");
        cmd->add_option("features", *dis_features, "feature files")->required()->expected(-2);
        cmd->callback([=, &action] {
            action = [=] {
                std::vector<FeatureGrid> features;
                for (const std::string& path : *dis_features)
                    features.push_back(load_feature(path, *dis_domain));
                const DissimilarityMatrix m =
                    matrix_for_metric(features, metric_from_name(*dis_metric), *dis_eps);
                write_file(*dis_out, serialize_matrix(m));
                std::printf("%zux%zu %s matrix -> %s\n", m.size(), m.size(),
                            metric_name(m.metric_tag).c_str(), dis_out->c_str());
                return 0;
            };
        });
    }

    // evaluate
    auto eval_matrix = std::make_shared<std::string>();
    auto eval_report = std::make_shared<std::string>();
    auto eval_curves = std::make_shared<std::string>();
    {
        CLI::App* cmd = app.add_subcommand(
            "evaluate", "ROC/DET/EER/AUC and accuracy-at-max-F1 from a labeled matrix");
        cmd->add_option("--matrix", *eval_matrix, "input matrix CSV")->required();
        cmd->add_option("--report", *eval_report, "output report JSON")->required();
        cmd->add_option("--curves", *eval_curves, "output curves CSV");
        cmd->callback([=, &action] {
            action = [=] {
                const DissimilarityMatrix m = parse_matrix(read_file(*eval_matrix));
                const ComparisonSet comparisons = comparisons_from_matrix(m);
                const auto sweep_points = sweep(comparisons);
                EvalReport r;
                r.roc_points = roc_points(sweep_points);
                r.det_points = det_points(sweep_points);
                r.auc = auc(r.roc_points);
                r.eer = eer(r.det_points);
                const AccAtMaxF1 best = acc_at_max_f1(sweep_points);
                r.acc_at_max_f1 = best.acc;
                r.best_threshold = best.threshold;
                r.n_comparisons = comparisons.scores.size();
                r.n_mated = comparisons.mated_count();
                r.n_nonmated = comparisons.nonmated_count();
                write_file(*eval_report, serialize_report(r, m.size()));
                if (!eval_curves->empty()) write_file(*eval_curves, serialize_curves(sweep_points));
                std::printf("acc %.4f auc %.4f eer %.4f -> %s\n", r.acc_at_max_f1, r.auc, r.eer,
                            eval_report->c_str());
                return 0;
            };
        });
    }

    // ttt
    auto ttt_manifest = std::make_shared<std::string>();
    auto ttt_fixations = std::make_shared<std::string>();
    auto ttt_records_out = std::make_shared<std::string>();
    auto ttt_stats_out = std::make_shared<std::string>();
    auto ttt_radius = std::make_shared<double>(3.0);
    auto ttt_wmin = std::make_shared<double>(0.1);
    auto ttt_wmax = std::make_shared<double>(0.4);
    auto ttt_group = std::make_shared<std::string>("trial");
    auto ttt_rate = std::make_shared<double>(60.0);
    auto ttt_cluster = std::make_shared<ClusterFlags>();
    {
        CLI::App* cmd =
            app.add_subcommand("ttt", "time-to-target records and statistics for a trial");
        cmd->add_option("--manifest", *ttt_manifest, "trial manifest JSON")->required();
        cmd->add_option("--fixations", *ttt_fixations,
                        "fixation CSV (detected from the trace when omitted)");
        cmd->add_option("--out-records", *ttt_records_out, "records CSV")->required();
        cmd->add_option("--out-stats", *ttt_stats_out, "stats CSV")->required();
        cmd->add_option("--radius-deg", *ttt_radius, "nearby radius in degrees");
        cmd->add_option("--window-min", *ttt_wmin, "lower latency bound (s)");
        cmd->add_option("--window-max", *ttt_wmax, "upper latency bound (s)");
        cmd->add_option("--group-by", *ttt_group, "stats grouping: trial, direction or all");
        cmd->add_option("--rate", *ttt_rate, "nominal sample rate (Hz)");
        ttt_cluster->attach(cmd);
        cmd->callback([=, &action] {
            action = [=] {
                const ManifestBundle b = load_bundle(*ttt_manifest, *ttt_rate);
                std::vector<Fixation> fixations;
                if (ttt_fixations->empty())
                    fixations = detect_fixations(b.trace, ttt_cluster->params(b.manifest.geometry));
                else
                    fixations = parse_fixations(read_file(*ttt_fixations));
                const double radius = degrees_to_pixels(*ttt_radius, b.manifest.geometry);
                const TttWindow window{*ttt_wmin, *ttt_wmax};
                const auto records = extract_ttt(fixations, b.events, b.manifest.geometry,
                                                 radius, window, b.manifest.label());
                TttGroupBy group_by = TttGroupBy::Trial;
                if (*ttt_group == "direction") group_by = TttGroupBy::Direction;
                else if (*ttt_group == "all") group_by = TttGroupBy::All;
                else if (*ttt_group != "trial") throw ConfigError("bad --group-by");
                write_file(*ttt_records_out, serialize_ttt_records(records, radius, window));
                write_file(*ttt_stats_out,
                           serialize_ttt_stats(ttt_stats(records, group_by), radius, window));
                std::printf("%zu records -> %s\n", records.size(), ttt_records_out->c_str());
                return 0;
            };
        });
    }

    // pipeline
    auto pipe_config = std::make_shared<std::string>();
    auto pipe_out = std::make_shared<std::string>();
    auto pipe_grid = std::make_shared<int>(-1);
    auto pipe_sigma = std::make_shared<double>(-1.0);
    auto pipe_limit = std::make_shared<int>(-2);
    auto pipe_seed = std::make_shared<std::int64_t>(-1);
    {
        CLI::App* cmd = app.add_subcommand("pipeline", "run the full pipeline from a config file");
        cmd->add_option("--config", *pipe_config, "pipeline config JSON")->required();
        cmd->add_option("--out-dir", *pipe_out, "override output_dir");
        cmd->add_option("--grid-n", *pipe_grid, "override grid_n");
        cmd->add_option("--sigma", *pipe_sigma, "override sigma");
        cmd->add_option("--box-limit", *pipe_limit, "override box_limit");
        cmd->add_option("--seed", *pipe_seed, "override seed");
        cmd->callback([=, &action] {
            action = [=] {
                PipelineConfig config = config_from_json(
                    read_file(*pipe_config), fs::path(*pipe_config).parent_path().string());
                if (!pipe_out->empty()) config.output_dir = *pipe_out;
                if (*pipe_grid > 0) config.grid_n = *pipe_grid;
                if (*pipe_sigma >= 0.0) config.sigma = *pipe_sigma;
                if (*pipe_limit >= -1) config.box_limit = *pipe_limit;
                if (*pipe_seed >= 0) config.seed = static_cast<std::uint64_t>(*pipe_seed);
                const PipelineResult result = run_pipeline(config);
                print_summary_table(result);
                return 0;
            };
        });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        return action ? action() : kExitUsage;
    } catch (const DegenerateFit& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitDegenerate;
    } catch (const DegenerateMatrix& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitDegenerate;
    } catch (const DegenerateGroundTruth& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitDegenerate;
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitData;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitData;
    }
}
