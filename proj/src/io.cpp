#include "gazebio/io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "gazebio/numfmt.hpp"
#include "gazebio/synth.hpp"

namespace gazebio {

namespace {

using nlohmann::json;

std::vector<std::string_view> split(std::string_view line, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = line.find(sep, start);
        if (pos == std::string_view::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
}

// Yields (line, 1-based line number), ignoring one trailing empty line.
template <typename Fn>
void for_each_line(const std::string& text, Fn&& fn) {
    std::size_t start = 0;
    long line_no = 0;
    while (start <= text.size()) {
        const std::size_t pos = text.find('\n', start);
        const std::string_view line = pos == std::string::npos
                                          ? std::string_view(text).substr(start)
                                          : std::string_view(text).substr(start, pos - start);
        ++line_no;
        if (!(pos == std::string::npos && line.empty())) fn(line, line_no);
        if (pos == std::string::npos) break;
        start = pos + 1;
    }
}

void check_label_component(const std::string& s, const char* what) {
    if (s.empty() || s.find_first_of(":,/\n\r\t ") != std::string::npos)
        throw ConfigError(std::string(what) + " must be non-empty without ':', ',' or whitespace");
}

}  // namespace

GazeTrace parse_trace(const std::string& text, double rate) {
    GazeTrace trace;
    trace.nominal_rate = rate;
    bool saw_header = false;
    for_each_line(text, [&](std::string_view line, long line_no) {
        if (!saw_header) {
            if (line != "t,x,y,valid") throw MalformedTrace("expected header t,x,y,valid", line_no);
            saw_header = true;
            return;
        }
        const auto fields = split(line, ',');
        if (fields.size() != 4) throw MalformedTrace("expected 4 fields", line_no);
        const auto t = parse_double(fields[0]);
        const auto x = parse_double(fields[1]);
        const auto y = parse_double(fields[2]);
        if (!t || !x || !y) throw MalformedTrace("unparseable number", line_no);
        bool valid;
        if (fields[3] == "1")
            valid = true;
        else if (fields[3] == "0")
            valid = false;
        else
            throw MalformedTrace("valid must be 0 or 1", line_no);
        if (*t < 0.0) throw MalformedTrace("negative timestamp", line_no);
        if (!trace.samples.empty() && *t <= trace.samples.back().t)
            throw MalformedTrace("timestamps must be strictly increasing", line_no);
        trace.samples.push_back({*t, *x, *y, valid});
    });
    if (!saw_header) throw MalformedTrace("empty trace file");
    return trace;
}

std::string serialize_trace(const GazeTrace& trace) {
    std::string out = "t,x,y,valid\n";
    for (const GazeSample& s : trace.samples) {
        out += fmt_double(s.t);
        out += ',';
        out += fmt_double(s.x);
        out += ',';
        out += fmt_double(s.y);
        out += ',';
        out += s.valid ? '1' : '0';
        out += '\n';
    }
    return out;
}

std::vector<StimulusEvent> parse_events(const std::string& text) {
    std::vector<StimulusEvent> events;
    bool saw_header = false;
    for_each_line(text, [&](std::string_view line, long line_no) {
        if (!saw_header) {
            if (line != "t_onset,t_offset,kind,cx,cy,color")
                throw MalformedEvents("expected header t_onset,t_offset,kind,cx,cy,color", line_no);
            saw_header = true;
            return;
        }
        const auto fields = split(line, ',');
        if (fields.size() != 6) throw MalformedEvents("expected 6 fields", line_no);
        const auto onset = parse_double(fields[0]);
        const auto offset = parse_double(fields[1]);
        if (!onset || !offset) throw MalformedEvents("unparseable time", line_no);
        if (*offset <= *onset) throw MalformedEvents("t_offset must exceed t_onset", line_no);

        StimulusEvent e;
        e.t_onset = *onset;
        e.t_offset = *offset;
        e.color_tag = std::string(fields[5]);
        if (fields[2] == "target") {
            e.kind = EventKind::Target;
            const auto cx = parse_double(fields[3]);
            const auto cy = parse_double(fields[4]);
            if (!cx || !cy) throw MalformedEvents("target requires a numeric center", line_no);
            e.center = {*cx, *cy};
        } else if (fields[2] == "blank") {
            e.kind = EventKind::Blank;
            if (!fields[3].empty() || !fields[4].empty())
                throw MalformedEvents("blank must not carry a center", line_no);
        } else {
            throw MalformedEvents("kind must be target or blank", line_no);
        }
        events.push_back(e);
    });
    if (!saw_header) throw MalformedEvents("empty events file");
    std::stable_sort(events.begin(), events.end(),
                     [](const StimulusEvent& a, const StimulusEvent& b) {
                         return a.t_onset < b.t_onset;
                     });
    return events;
}

std::string serialize_events(const std::vector<StimulusEvent>& events) {
    std::string out = "t_onset,t_offset,kind,cx,cy,color\n";
    for (const StimulusEvent& e : events) {
        out += fmt_double(e.t_onset);
        out += ',';
        out += fmt_double(e.t_offset);
        out += ',';
        if (e.kind == EventKind::Target) {
            out += "target,";
            out += fmt_double(e.center.x);
            out += ',';
            out += fmt_double(e.center.y);
        } else {
            out += "blank,,";
        }
        out += ',';
        out += e.color_tag;
        out += '\n';
    }
    return out;
}

std::vector<Fixation> parse_fixations(const std::string& text) {
    std::vector<Fixation> out;
    bool saw_header = false;
    for_each_line(text, [&](std::string_view line, long line_no) {
        if (!saw_header) {
            if (line != "cx,cy,t_start,duration,n_samples")
                throw ConfigError("expected fixation header (line " + std::to_string(line_no) + ")");
            saw_header = true;
            return;
        }
        const auto fields = split(line, ',');
        if (fields.size() != 5)
            throw ConfigError("expected 5 fixation fields (line " + std::to_string(line_no) + ")");
        const auto cx = parse_double(fields[0]);
        const auto cy = parse_double(fields[1]);
        const auto ts = parse_double(fields[2]);
        const auto dur = parse_double(fields[3]);
        const auto n = parse_long(fields[4]);
        if (!cx || !cy || !ts || !dur || !n)
            throw ConfigError("unparseable fixation row (line " + std::to_string(line_no) + ")");
        out.push_back({*cx, *cy, *ts, *dur, static_cast<int>(*n)});
    });
    return out;
}

std::string serialize_fixations(const std::vector<Fixation>& fixations) {
    std::string out = "cx,cy,t_start,duration,n_samples\n";
    for (const Fixation& f : fixations) {
        out += fmt_double(f.cx);
        out += ',';
        out += fmt_double(f.cy);
        out += ',';
        out += fmt_double(f.t_start);
        out += ',';
        out += fmt_double(f.duration);
        out += ',';
        out += std::to_string(f.n_samples);
        out += '\n';
    }
    return out;
}

TrialManifest parse_manifest(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("manifest is not valid JSON: ") + e.what());
    }
    try {
        TrialManifest m;
        m.subject_id = j.at("subject_id").get<std::string>();
        m.week_id = j.at("week_id").get<std::string>();
        m.trial_index = j.at("trial_index").get<int>();
        const json& g = j.at("geometry");
        m.geometry.width_px = g.at("width_px").get<double>();
        m.geometry.height_px = g.at("height_px").get<double>();
        m.geometry.px_per_degree = g.at("px_per_degree").get<double>();
        m.trace_path = j.at("trace_path").get<std::string>();
        m.events_path = j.at("events_path").get<std::string>();
        m.geometry.validate();
        check_label_component(m.subject_id, "subject_id");
        check_label_component(m.week_id, "week_id");
        if (m.trial_index < 0) throw ConfigError("trial_index must be non-negative");
        return m;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("manifest field error: ") + e.what());
    }
}

std::string serialize_manifest(const TrialManifest& m) {
    json j;
    j["subject_id"] = m.subject_id;
    j["week_id"] = m.week_id;
    j["trial_index"] = m.trial_index;
    j["geometry"] = {{"width_px", m.geometry.width_px},
                     {"height_px", m.geometry.height_px},
                     {"px_per_degree", m.geometry.px_per_degree}};
    j["trace_path"] = m.trace_path;
    j["events_path"] = m.events_path;
    return j.dump(2) + "\n";
}

namespace {

struct GridHeader {
    TrialLabel label;
    int n = 0;
    int l = -1;
    std::string kind = "fdm";
};

std::string grid_header_line(const TrialLabel& label, int n) {
    return "# subject=" + label.subject_id + " week=" + label.week_id +
           " trial=" + std::to_string(label.trial_index) + " n=" + std::to_string(n) + "\n";
}

std::string grid_body(const std::vector<double>& cells, int n) {
    std::string out;
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) {
            if (c) out += ',';
            out += fmt_double(cells[static_cast<std::size_t>(r) * n + c]);
        }
        out += '\n';
    }
    return out;
}

struct ParsedGrid {
    GridHeader header;
    std::vector<double> cells;
};

ParsedGrid parse_grid(const std::string& text) {
    ParsedGrid g;
    std::vector<double> row_buf;
    for_each_line(text, [&](std::string_view line, long line_no) {
        if (line.size() >= 1 && line[0] == '#') {
            for (std::string_view token : split(line.substr(1), ' ')) {
                if (token.empty()) continue;
                const auto eq = token.find('=');
                if (eq == std::string_view::npos) continue;
                const std::string_view key = token.substr(0, eq);
                const std::string_view value = token.substr(eq + 1);
                if (key == "subject") g.header.label.subject_id = std::string(value);
                else if (key == "week") g.header.label.week_id = std::string(value);
                else if (key == "trial") g.header.label.trial_index =
                    static_cast<int>(parse_long(value).value_or(0));
                else if (key == "n") g.header.n = static_cast<int>(parse_long(value).value_or(0));
                else if (key == "l") g.header.l = static_cast<int>(parse_long(value).value_or(-1));
                else if (key == "kind") g.header.kind = std::string(value);
            }
            return;
        }
        const auto fields = split(line, ',');
        for (std::string_view f : fields) {
            const auto v = parse_double(f);
            if (!v) throw ConfigError("unparseable grid cell (line " + std::to_string(line_no) + ")");
            g.cells.push_back(*v);
        }
    });
    if (g.header.n <= 0) throw ConfigError("grid file missing n metadata");
    if (g.cells.size() != static_cast<std::size_t>(g.header.n) * g.header.n)
        throw ConfigError("grid cell count does not match n");
    return g;
}

}  // namespace

std::string serialize_fdm(const FixationDensityMap& m) {
    return grid_header_line(m.label, m.n) + grid_body(m.cells, m.n);
}

FixationDensityMap parse_fdm(const std::string& text) {
    ParsedGrid g = parse_grid(text);
    if (g.header.kind != "fdm") throw ConfigError("grid file is not an FDM");
    FixationDensityMap m;
    m.n = g.header.n;
    m.cells = std::move(g.cells);
    m.label = g.header.label;
    return m;
}

std::string serialize_spectrum(const MagnitudeSpectrum& s) {
    return grid_header_line(s.label, s.n) + "# kind=spectrum l=" + std::to_string(s.box_limit) +
           "\n" + grid_body(s.cells, s.n);
}

MagnitudeSpectrum parse_spectrum(const std::string& text) {
    ParsedGrid g = parse_grid(text);
    if (g.header.kind != "spectrum" || g.header.l < 0)
        throw ConfigError("grid file is not a spectrum");
    MagnitudeSpectrum s;
    s.n = g.header.n;
    s.cells = std::move(g.cells);
    s.box_limit = g.header.l;
    s.label = g.header.label;
    return s;
}

std::string serialize_matrix(const DissimilarityMatrix& m) {
    std::string out = "# metric=" + metric_name(m.metric_tag) + "\n";
    for (const TrialLabel& l : m.labels) {
        out += ',';
        out += l.str();
    }
    out += '\n';
    for (std::size_t i = 0; i < m.size(); ++i) {
        out += m.labels[i].str();
        for (std::size_t j = 0; j < m.size(); ++j) {
            out += ',';
            out += fmt_double(m.at(i, j));
        }
        out += '\n';
    }
    return out;
}

DissimilarityMatrix parse_matrix(const std::string& text) {
    DissimilarityMatrix m;
    bool saw_labels = false;
    std::vector<std::vector<double>> rows;
    auto parse_label = [](std::string_view s, long line_no) {
        const auto parts = split(s, ':');
        if (parts.size() != 3)
            throw ConfigError("bad matrix label (line " + std::to_string(line_no) + ")");
        return TrialLabel{std::string(parts[0]), std::string(parts[1]),
                          static_cast<int>(parse_long(parts[2]).value_or(0))};
    };
    for_each_line(text, [&](std::string_view line, long line_no) {
        if (!line.empty() && line[0] == '#') {
            const auto pos = line.find("metric=");
            if (pos != std::string_view::npos)
                m.metric_tag = metric_from_name(std::string(line.substr(pos + 7)));
            return;
        }
        const auto fields = split(line, ',');
        if (!saw_labels) {
            for (std::size_t i = 1; i < fields.size(); ++i)
                m.labels.push_back(parse_label(fields[i], line_no));
            saw_labels = true;
            return;
        }
        if (fields.size() != m.labels.size() + 1)
            throw ConfigError("matrix row width mismatch (line " + std::to_string(line_no) + ")");
        std::vector<double> row;
        for (std::size_t i = 1; i < fields.size(); ++i) {
            const auto v = parse_double(fields[i]);
            if (!v) throw ConfigError("unparseable matrix cell (line " + std::to_string(line_no) + ")");
            row.push_back(*v);
        }
        rows.push_back(std::move(row));
    });
    if (rows.size() != m.labels.size()) throw ConfigError("matrix is not square");
    for (const auto& row : rows) m.values.insert(m.values.end(), row.begin(), row.end());
    return m;
}

std::string serialize_transform(const AffineTransform& t) {
    json j;
    j["a11"] = t.a11;
    j["a12"] = t.a12;
    j["a21"] = t.a21;
    j["a22"] = t.a22;
    j["tx"] = t.tx;
    j["ty"] = t.ty;
    return j.dump(2) + "\n";
}

AffineTransform parse_transform(const std::string& text) {
    try {
        const json j = json::parse(text);
        AffineTransform t;
        t.a11 = j.at("a11").get<double>();
        t.a12 = j.at("a12").get<double>();
        t.a21 = j.at("a21").get<double>();
        t.a22 = j.at("a22").get<double>();
        t.tx = j.at("tx").get<double>();
        t.ty = j.at("ty").get<double>();
        return t;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("bad transform JSON: ") + e.what());
    }
}

std::string serialize_profile(const SubjectProfile& p) {
    json j;
    j["name"] = p.name;
    j["ttt_median"] = p.ttt_median;
    j["ttt_spread"] = p.ttt_spread;
    j["down_offset"] = p.down_offset;
    json mixture = json::array();
    for (const MixtureComponent& c : p.fdm_mixture) {
        json e;
        e["mean"] = {c.mean_deg.x, c.mean_deg.y};
        e["covariance"] = {{c.cov_deg2[0], c.cov_deg2[1]}, {c.cov_deg2[2], c.cov_deg2[3]}};
        e["weight"] = c.weight;
        mixture.push_back(e);
    }
    j["fdm_mixture"] = mixture;
    j["drift"] = p.drift;
    j["noise_sigma"] = p.noise_sigma;
    return j.dump(2) + "\n";
}

SubjectProfile parse_profile(const std::string& text) {
    try {
        const json j = json::parse(text);
        SubjectProfile p;
        p.name = j.at("name").get<std::string>();
        p.ttt_median = j.at("ttt_median").get<double>();
        p.ttt_spread = j.at("ttt_spread").get<double>();
        p.down_offset = j.at("down_offset").get<double>();
        for (const json& e : j.at("fdm_mixture")) {
            MixtureComponent c;
            c.mean_deg = {e.at("mean").at(0).get<double>(), e.at("mean").at(1).get<double>()};
            const json& cov = e.at("covariance");
            c.cov_deg2 = {cov.at(0).at(0).get<double>(), cov.at(0).at(1).get<double>(),
                          cov.at(1).at(0).get<double>(), cov.at(1).at(1).get<double>()};
            c.weight = e.at("weight").get<double>();
            p.fdm_mixture.push_back(c);
        }
        p.drift = j.value("drift", 0.0);
        p.noise_sigma = j.value("noise_sigma", 0.0);
        p.validate();
        return p;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("bad profile JSON: ") + e.what());
    }
}

std::string serialize_curves(const std::vector<SweepPoint>& sweep_points) {
    std::string out = "threshold,tpr,fpr,fnr,precision,recall,f1,acc\n";
    for (const SweepPoint& p : sweep_points) {
        out += fmt_double(p.threshold);
        out += ',';
        out += fmt_double(p.tpr);
        out += ',';
        out += fmt_double(p.fpr);
        out += ',';
        out += fmt_double(p.fnr);
        out += ',';
        out += p.f1_defined ? fmt_double(p.precision) : "nan";
        out += ',';
        out += fmt_double(p.recall);
        out += ',';
        out += p.f1_defined ? fmt_double(p.f1) : "nan";
        out += ',';
        out += fmt_double(p.acc);
        out += '\n';
    }
    return out;
}

std::string serialize_report(const EvalReport& r, std::size_t n_trials) {
    json j;
    j["acc_at_max_f1"] = r.acc_at_max_f1;
    j["auc"] = r.auc;
    j["eer"] = r.eer;
    j["best_threshold"] = r.best_threshold;
    j["n_comparisons"] = r.n_comparisons;
    j["n_mated"] = r.n_mated;
    j["n_nonmated"] = r.n_nonmated;
    j["n_trials"] = n_trials;
    return j.dump(2) + "\n";
}

namespace {

std::string ttt_meta_line(double radius_px, TttWindow w) {
    return "# radius_px=" + fmt_double(radius_px) + " window_min=" + fmt_double(w.min_s) +
           " window_max=" + fmt_double(w.max_s) + "\n";
}

}  // namespace

std::string serialize_ttt_records(const std::vector<TttRecord>& records, double radius_px,
                                  TttWindow window) {
    std::string out = ttt_meta_line(radius_px, window);
    out += "trial,event_index,latency,direction\n";
    for (const TttRecord& r : records) {
        out += r.trial.str();
        out += ',';
        out += std::to_string(r.event_index);
        out += ',';
        out += fmt_double(r.latency);
        out += ',';
        out += direction_name(r.direction);
        out += '\n';
    }
    return out;
}

std::string serialize_ttt_stats(const std::vector<TttStats>& stats, double radius_px,
                                TttWindow window) {
    std::string out = ttt_meta_line(radius_px, window);
    out += "group,n,mean,median,sigma\n";
    for (const TttStats& s : stats) {
        out += s.group;
        out += ',';
        out += std::to_string(s.n);
        out += ',';
        out += fmt_double(s.mean);
        out += ',';
        out += fmt_double(s.median);
        out += ',';
        out += fmt_double(s.sigma);
        out += '\n';
    }
    return out;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot write file: " + path);
    out << content;
    if (!out) throw ConfigError("write failed: " + path);
}

}  // namespace gazebio
