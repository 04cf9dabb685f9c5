#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <filesystem>

#include "gazebio/calibration.hpp"
#include "gazebio/dissimilarity.hpp"
#include "gazebio/evaluation.hpp"
#include "gazebio/fdm.hpp"
#include "gazebio/fixation.hpp"
#include "gazebio/io.hpp"
#include "gazebio/pipeline.hpp"
#include "gazebio/spectral.hpp"
#include "gazebio/synth.hpp"
#include "gazebio/ttt.hpp"

namespace py = pybind11;
using namespace gazebio;

namespace {

py::array_t<double> square_array(const std::vector<double>& cells, int n) {
    py::array_t<double> out({n, n});
    std::copy(cells.begin(), cells.end(), out.mutable_data());
    return out;
}

py::array_t<double> flat_array(const std::vector<double>& cells) {
    py::array_t<double> out(static_cast<py::ssize_t>(cells.size()));
    std::copy(cells.begin(), cells.end(), out.mutable_data());
    return out;
}

Point to_point(const std::pair<double, double>& p) { return {p.first, p.second}; }

}  // namespace

PYBIND11_MODULE(gazebio, m) {
    m.doc() = "eye-movement biometrics: fixation density maps, spectral features,"
              " dissimilarity scores and verification metrics";

    py::register_exception<MalformedTrace>(m, "MalformedTrace");
    py::register_exception<MalformedEvents>(m, "MalformedEvents");
    py::register_exception<DegenerateFit>(m, "DegenerateFit");
    py::register_exception<EmptyMap>(m, "EmptyMap");
    py::register_exception<ShapeError>(m, "ShapeErrorEx");
    py::register_exception<DegenerateMatrix>(m, "DegenerateMatrix");
    py::register_exception<DegenerateGroundTruth>(m, "DegenerateGroundTruth");
    py::register_exception<UndefinedDirection>(m, "UndefinedDirection");
    py::register_exception<ConfigError>(m, "ConfigError");

    py::class_<ScreenGeometry>(m, "ScreenGeometry")
        .def(py::init([](double w, double h, double ppd) {
                 ScreenGeometry g{w, h, ppd};
                 g.validate();
                 return g;
             }),
             py::arg("width_px"), py::arg("height_px"), py::arg("px_per_degree"))
        .def_readonly("width_px", &ScreenGeometry::width_px)
        .def_readonly("height_px", &ScreenGeometry::height_px)
        .def_readonly("px_per_degree", &ScreenGeometry::px_per_degree)
        .def("__repr__", [](const ScreenGeometry& g) {
            return "ScreenGeometry(" + std::to_string(g.width_px) + ", " +
                   std::to_string(g.height_px) + ", " + std::to_string(g.px_per_degree) + ")";
        });

    m.def("degrees_to_pixels", &degrees_to_pixels, py::arg("degrees"), py::arg("geometry"));

    py::class_<GazeSample>(m, "GazeSample")
        .def(py::init([](double t, double x, double y, bool valid) {
                 return GazeSample{t, x, y, valid};
             }),
             py::arg("t"), py::arg("x"), py::arg("y"), py::arg("valid") = true)
        .def_readonly("t", &GazeSample::t)
        .def_readonly("x", &GazeSample::x)
        .def_readonly("y", &GazeSample::y)
        .def_readonly("valid", &GazeSample::valid);

    py::class_<GazeTrace>(m, "GazeTrace")
        .def(py::init<>())
        .def_readwrite("samples", &GazeTrace::samples)
        .def_readwrite("nominal_rate", &GazeTrace::nominal_rate)
        .def("span", &GazeTrace::span)
        .def("__len__", [](const GazeTrace& t) { return t.samples.size(); });

    py::enum_<EventKind>(m, "EventKind")
        .value("Target", EventKind::Target)
        .value("Blank", EventKind::Blank);

    py::class_<StimulusEvent>(m, "StimulusEvent")
        .def(py::init([](double onset, double offset, EventKind kind,
                         std::pair<double, double> center, std::string color) {
                 StimulusEvent e;
                 e.t_onset = onset;
                 e.t_offset = offset;
                 e.kind = kind;
                 e.center = to_point(center);
                 e.color_tag = std::move(color);
                 return e;
             }),
             py::arg("t_onset"), py::arg("t_offset"), py::arg("kind"),
             py::arg("center") = std::pair<double, double>{0.0, 0.0}, py::arg("color") = "")
        .def_readonly("t_onset", &StimulusEvent::t_onset)
        .def_readonly("t_offset", &StimulusEvent::t_offset)
        .def_readonly("kind", &StimulusEvent::kind)
        .def_property_readonly("center",
                               [](const StimulusEvent& e) {
                                   return std::pair<double, double>{e.center.x, e.center.y};
                               })
        .def_readonly("color", &StimulusEvent::color_tag);

    py::class_<TrialLabel>(m, "TrialLabel")
        .def(py::init([](std::string subject, std::string week, int trial) {
                 return TrialLabel{std::move(subject), std::move(week), trial};
             }),
             py::arg("subject_id") = "", py::arg("week_id") = "", py::arg("trial_index") = 0)
        .def_readonly("subject_id", &TrialLabel::subject_id)
        .def_readonly("week_id", &TrialLabel::week_id)
        .def_readonly("trial_index", &TrialLabel::trial_index)
        .def("__str__", &TrialLabel::str)
        .def("__repr__", [](const TrialLabel& l) { return "TrialLabel('" + l.str() + "')"; });

    py::class_<Fixation>(m, "Fixation")
        .def(py::init([](double cx, double cy, double t_start, double duration, int n_samples) {
                 return Fixation{cx, cy, t_start, duration, n_samples};
             }),
             py::arg("cx"), py::arg("cy"), py::arg("t_start"), py::arg("duration"),
             py::arg("n_samples"))
        .def_readonly("cx", &Fixation::cx)
        .def_readonly("cy", &Fixation::cy)
        .def_readonly("t_start", &Fixation::t_start)
        .def_readonly("duration", &Fixation::duration)
        .def_readonly("n_samples", &Fixation::n_samples);

    py::class_<ClusterParams>(m, "ClusterParams")
        .def(py::init([](double eps, int min_points, double min_duration, double max_gap) {
                 return ClusterParams{eps, min_points, min_duration, max_gap};
             }),
             py::arg("eps"), py::arg("min_points") = 5, py::arg("min_duration") = 0.1,
             py::arg("max_gap") = 0.1)
        .def_static("defaults_for", &ClusterParams::defaults_for)
        .def_readwrite("eps", &ClusterParams::eps)
        .def_readwrite("min_points", &ClusterParams::min_points)
        .def_readwrite("min_duration", &ClusterParams::min_duration)
        .def_readwrite("max_gap", &ClusterParams::max_gap);

    m.def("detect_fixations", &detect_fixations, py::arg("trace"), py::arg("params"));

    py::class_<Epoch>(m, "Epoch")
        .def_readonly("kind", &Epoch::kind)
        .def_readonly("t_start", &Epoch::t_start)
        .def_readonly("t_end", &Epoch::t_end);

    m.def("build_epochs", &build_epochs, py::arg("events"));
    m.def("fixations_in_epochs", &fixations_in_epochs, py::arg("fixations"), py::arg("epochs"),
          py::arg("kind"));

    py::class_<AffineTransform>(m, "AffineTransform")
        .def(py::init([](double a11, double a12, double a21, double a22, double tx, double ty) {
                 return AffineTransform{a11, a12, a21, a22, tx, ty};
             }),
             py::arg("a11") = 1.0, py::arg("a12") = 0.0, py::arg("a21") = 0.0,
             py::arg("a22") = 1.0, py::arg("tx") = 0.0, py::arg("ty") = 0.0)
        .def_readonly("a11", &AffineTransform::a11)
        .def_readonly("a12", &AffineTransform::a12)
        .def_readonly("a21", &AffineTransform::a21)
        .def_readonly("a22", &AffineTransform::a22)
        .def_readonly("tx", &AffineTransform::tx)
        .def_readonly("ty", &AffineTransform::ty)
        .def("apply", [](const AffineTransform& t, std::pair<double, double> p) {
            const Point q = t.apply(to_point(p));
            return std::pair<double, double>{q.x, q.y};
        });

    m.def(
        "fit_affine",
        [](const std::vector<std::pair<std::pair<double, double>, std::pair<double, double>>>&
               pairs) {
            std::vector<PointPair> pp;
            pp.reserve(pairs.size());
            for (const auto& [measured, target] : pairs)
                pp.push_back({to_point(measured), to_point(target)});
            return fit_affine(pp);
        },
        py::arg("pairs"), "least-squares affine fit of (measured, target) point pairs");
    m.def("apply_affine", &apply_affine, py::arg("transform"), py::arg("fixations"));
    m.def("apply_affine_to_trace", &apply_affine_to_trace, py::arg("transform"), py::arg("trace"));
    m.def("collect_pairs",
          [](const std::vector<Fixation>& fixations, const std::vector<StimulusEvent>& events,
             double radius_px) {
              std::vector<std::pair<std::pair<double, double>, std::pair<double, double>>> out;
              for (const PointPair& p : collect_pairs(fixations, events, radius_px))
                  out.push_back({{p.measured.x, p.measured.y}, {p.target.x, p.target.y}});
              return out;
          },
          py::arg("fixations"), py::arg("events"), py::arg("radius_px"));

    py::class_<FixationDensityMap>(m, "FixationDensityMap")
        .def_readonly("n", &FixationDensityMap::n)
        .def_readonly("label", &FixationDensityMap::label)
        .def_property_readonly(
            "grid", [](const FixationDensityMap& f) { return square_array(f.cells, f.n); })
        .def("total_mass", &FixationDensityMap::total_mass);

    m.def("build_fdm", &build_fdm, py::arg("fixations"), py::arg("geometry"), py::arg("n"),
          py::arg("label") = TrialLabel{});
    m.def("smooth_gaussian", &smooth_gaussian, py::arg("fdm"), py::arg("sigma"));
    m.def("norm_unit_mass", &norm_unit_mass, py::arg("fdm"));

    py::class_<MagnitudeSpectrum>(m, "MagnitudeSpectrum")
        .def_readonly("n", &MagnitudeSpectrum::n)
        .def_readonly("box_limit", &MagnitudeSpectrum::box_limit)
        .def_readonly("label", &MagnitudeSpectrum::label)
        .def_property_readonly(
            "grid", [](const MagnitudeSpectrum& s) { return square_array(s.cells, s.n); });

    m.def("dft2_magnitude", &dft2_magnitude, py::arg("fdm"));
    m.def("box_filter", &box_filter, py::arg("spectrum"), py::arg("limit"));
    m.def("default_box_limit", &default_box_limit, py::arg("n"));
    m.def("spectral_feature", &spectral_feature, py::arg("fdm"), py::arg("limit"));

    py::class_<FeatureGrid>(m, "FeatureGrid")
        .def(py::init([](const std::vector<double>& cells, const TrialLabel& label) {
                 return FeatureGrid{cells, label};
             }),
             py::arg("cells"), py::arg("label") = TrialLabel{})
        .def_readonly("label", &FeatureGrid::label)
        .def_property_readonly("cells",
                               [](const FeatureGrid& f) { return flat_array(f.cells); });

    m.def("feature_from_fdm", &feature_from_fdm, py::arg("fdm"));
    m.def("feature_from_spectrum", &feature_from_spectrum, py::arg("spectrum"));

    m.def("d_mse", &d_mse, py::arg("p"), py::arg("r"));
    m.def("d_min", &d_min, py::arg("p"), py::arg("r"));
    m.def("d_kld_sym", &d_kld_sym, py::arg("p"), py::arg("r"), py::arg("epsilon") = 1e-10);

    py::class_<DissimilarityMatrix>(m, "DissimilarityMatrix")
        .def_readonly("labels", &DissimilarityMatrix::labels)
        .def_property_readonly("metric",
                               [](const DissimilarityMatrix& d) { return metric_name(d.metric_tag); })
        .def_property_readonly("values", [](const DissimilarityMatrix& d) {
            return square_array(d.values, static_cast<int>(d.size()));
        });

    m.def(
        "build_matrix",
        [](const std::vector<FeatureGrid>& features, const std::string& metric, double epsilon) {
            return build_matrix(features, metric_from_name(metric), epsilon);
        },
        py::arg("features"), py::arg("metric"), py::arg("epsilon") = 1e-10);
    m.def("d_eucl_from_kld", &d_eucl_from_kld, py::arg("kld_matrix"));
    m.def(
        "matrix_for_metric",
        [](const std::vector<FeatureGrid>& features, const std::string& metric, double epsilon) {
            return matrix_for_metric(features, metric_from_name(metric), epsilon);
        },
        py::arg("features"), py::arg("metric"), py::arg("epsilon") = 1e-10);

    py::class_<EvalReport>(m, "EvalReport")
        .def_readonly("acc_at_max_f1", &EvalReport::acc_at_max_f1)
        .def_readonly("auc", &EvalReport::auc)
        .def_readonly("eer", &EvalReport::eer)
        .def_readonly("best_threshold", &EvalReport::best_threshold)
        .def_readonly("n_comparisons", &EvalReport::n_comparisons)
        .def_readonly("n_mated", &EvalReport::n_mated)
        .def_readonly("n_nonmated", &EvalReport::n_nonmated)
        .def_property_readonly("roc_points",
                               [](const EvalReport& r) {
                                   py::array_t<double> out(
                                       {static_cast<py::ssize_t>(r.roc_points.size()),
                                        static_cast<py::ssize_t>(2)});
                                   auto view = out.mutable_unchecked<2>();
                                   for (py::ssize_t i = 0;
                                        i < static_cast<py::ssize_t>(r.roc_points.size()); ++i) {
                                       view(i, 0) = r.roc_points[static_cast<std::size_t>(i)].fpr;
                                       view(i, 1) = r.roc_points[static_cast<std::size_t>(i)].tpr;
                                   }
                                   return out;
                               })
        .def_property_readonly("det_points", [](const EvalReport& r) {
            py::array_t<double> out({static_cast<py::ssize_t>(r.det_points.size()),
                                     static_cast<py::ssize_t>(2)});
            auto view = out.mutable_unchecked<2>();
            for (py::ssize_t i = 0; i < static_cast<py::ssize_t>(r.det_points.size()); ++i) {
                view(i, 0) = r.det_points[static_cast<std::size_t>(i)].fpr;
                view(i, 1) = r.det_points[static_cast<std::size_t>(i)].fnr;
            }
            return out;
        });

    m.def("evaluate_matrix", &evaluate_matrix, py::arg("matrix"),
          "ROC/DET, AUC, EER and accuracy at max F1 for a labeled matrix");

    py::enum_<Direction>(m, "Direction")
        .value("Up", Direction::Up)
        .value("Right", Direction::Right)
        .value("Down", Direction::Down)
        .value("Left", Direction::Left);

    py::class_<TttRecord>(m, "TttRecord")
        .def_readonly("latency", &TttRecord::latency)
        .def_readonly("direction", &TttRecord::direction)
        .def_readonly("event_index", &TttRecord::event_index)
        .def_readonly("trial", &TttRecord::trial);

    py::class_<TttStats>(m, "TttStats")
        .def_readonly("group", &TttStats::group)
        .def_readonly("n", &TttStats::n)
        .def_readonly("mean", &TttStats::mean)
        .def_readonly("median", &TttStats::median)
        .def_readonly("sigma", &TttStats::sigma);

    m.def("classify_direction",
          [](std::pair<double, double> prev, std::pair<double, double> cur) {
              return classify_direction(to_point(prev), to_point(cur));
          },
          py::arg("prev_center"), py::arg("cur_center"));
    m.def(
        "extract_ttt",
        [](const std::vector<Fixation>& fixations, const std::vector<StimulusEvent>& events,
           const ScreenGeometry& geometry, double radius_px, double window_min, double window_max,
           const TrialLabel& label) {
            return extract_ttt(fixations, events, geometry, radius_px,
                               {window_min, window_max}, label);
        },
        py::arg("fixations"), py::arg("events"), py::arg("geometry"), py::arg("radius_px"),
        py::arg("window_min") = 0.1, py::arg("window_max") = 0.4,
        py::arg("label") = TrialLabel{});
    m.def(
        "ttt_stats",
        [](const std::vector<TttRecord>& records, const std::string& group_by) {
            TttGroupBy g = TttGroupBy::Trial;
            if (group_by == "direction") g = TttGroupBy::Direction;
            else if (group_by == "all") g = TttGroupBy::All;
            else if (group_by != "trial") throw ConfigError("group_by must be trial, direction or all");
            return ttt_stats(records, g);
        },
        py::arg("records"), py::arg("group_by") = "trial");

    py::class_<StimulusSchedule>(m, "StimulusSchedule")
        .def_readonly("events", &StimulusSchedule::events)
        .def_readonly("total_duration", &StimulusSchedule::total_duration)
        .def_readonly("target_width_px", &StimulusSchedule::target_width_px);

    py::class_<SubjectProfile>(m, "SubjectProfile")
        .def_readonly("name", &SubjectProfile::name)
        .def_readwrite("ttt_median", &SubjectProfile::ttt_median)
        .def_readwrite("ttt_spread", &SubjectProfile::ttt_spread)
        .def_readwrite("down_offset", &SubjectProfile::down_offset)
        .def_readwrite("drift", &SubjectProfile::drift)
        .def_readwrite("noise_sigma", &SubjectProfile::noise_sigma);

    py::class_<SimulatedTrial>(m, "SimulatedTrial")
        .def_readonly("trace", &SimulatedTrial::trace)
        .def_readonly("events", &SimulatedTrial::events);

    m.def("make_schedule", &make_schedule, py::arg("geometry"), py::arg("seed"));
    m.def("simulate_trial", &simulate_trial, py::arg("profile"), py::arg("schedule"),
          py::arg("geometry"), py::arg("seed"));
    m.def("subject_presets", [] {
        const SubjectPresets p = subject_presets();
        return std::pair<SubjectProfile, SubjectProfile>{p.profile_a, p.profile_b};
    });

    // file-format helpers
    m.def("parse_trace", &parse_trace, py::arg("text"), py::arg("rate") = 60.0);
    m.def("serialize_trace", &serialize_trace, py::arg("trace"));
    m.def("parse_events", &parse_events, py::arg("text"));
    m.def("serialize_events", &serialize_events, py::arg("events"));
    m.def("parse_fixations", &parse_fixations, py::arg("text"));
    m.def("serialize_fixations", &serialize_fixations, py::arg("fixations"));
    m.def("parse_fdm", &parse_fdm, py::arg("text"));
    m.def("serialize_fdm", &serialize_fdm, py::arg("fdm"));
    m.def("parse_spectrum", &parse_spectrum, py::arg("text"));
    m.def("serialize_spectrum", &serialize_spectrum, py::arg("spectrum"));
    m.def("parse_matrix", &parse_matrix, py::arg("text"));
    m.def("serialize_matrix", &serialize_matrix, py::arg("matrix"));

    m.def(
        "run_pipeline",
        [](const std::string& config_path) {
            const PipelineConfig config = config_from_json(
                read_file(config_path),
                std::filesystem::path(config_path).parent_path().string());
            const PipelineResult result = run_pipeline(config);
            return summary_json(result);
        },
        py::arg("config_path"),
        "run the full pipeline from a config file; returns the summary as a JSON string");

    m.attr("__version__") = "0.1.0";
}
