#include "gazebio/dissimilarity.hpp"

#include <algorithm>
#include <cmath>

#include "gazebio/errors.hpp"

namespace gazebio {

FeatureGrid feature_from_fdm(const FixationDensityMap& m) {
    return {m.cells, m.label};
}

FeatureGrid feature_from_spectrum(const MagnitudeSpectrum& s) {
    FeatureGrid f;
    f.label = s.label;
    const int lo = std::max(-s.n / 2, -s.box_limit);
    const int hi = std::min(s.n - s.n / 2 - 1, s.box_limit);
    for (int a = lo; a <= hi; ++a)
        for (int b = lo; b <= hi; ++b) f.cells.push_back(s.at(s.index_of(a), s.index_of(b)));
    return f;
}

std::string metric_name(MetricTag m) {
    switch (m) {
        case MetricTag::MSE: return "mse";
        case MetricTag::MIN: return "min";
        case MetricTag::KLD: return "kld";
        case MetricTag::EUCL: return "eucl";
    }
    return "mse";
}

MetricTag metric_from_name(const std::string& name) {
    if (name == "mse") return MetricTag::MSE;
    if (name == "min" || name == "1-min") return MetricTag::MIN;
    if (name == "kld") return MetricTag::KLD;
    if (name == "eucl") return MetricTag::EUCL;
    throw ConfigError("unknown metric: " + name);
}

namespace {

void check_shapes(const FeatureGrid& p, const FeatureGrid& r) {
    if (p.cells.size() != r.cells.size() || p.cells.empty())
        throw ShapeError("feature grids have different shapes");
}

}  // namespace

double d_mse(const FeatureGrid& p, const FeatureGrid& r) {
    check_shapes(p, r);
    double acc = 0.0;
    for (std::size_t i = 0; i < p.cells.size(); ++i) {
        const double d = p.cells[i] - r.cells[i];
        acc += d * d;
    }
    return acc;
}

double d_min(const FeatureGrid& p, const FeatureGrid& r) {
    check_shapes(p, r);
    double overlap = 0.0;
    for (std::size_t i = 0; i < p.cells.size(); ++i)
        overlap += std::min(p.cells[i], r.cells[i]);
    return std::max(0.0, 1.0 - overlap);
}

double d_kld_sym(const FeatureGrid& p, const FeatureGrid& r, double epsilon) {
    check_shapes(p, r);
    if (!(epsilon > 0.0)) throw ConfigError("epsilon must be positive");

    // floor both at epsilon, re-norm, then the two directed divergences
    const std::size_t n = p.cells.size();
    std::vector<double> pf(n), rf(n);
    double ps = 0.0, rs = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        pf[i] = std::max(p.cells[i], epsilon);
        rf[i] = std::max(r.cells[i], epsilon);
        ps += pf[i];
        rs += rf[i];
    }
    double d1 = 0.0, d2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double a = pf[i] / ps;
        const double b = rf[i] / rs;
        const double lr = std::log(a / b);
        d1 += a * lr;
        d2 -= b * lr;
    }
    d1 = std::max(0.0, d1);
    d2 = std::max(0.0, d2);
    if (d1 <= epsilon && d2 <= epsilon) return 0.0;
    const double sum = d1 + d2;
    return sum > 0.0 ? 2.0 * d1 * d2 / sum : 0.0;
}

DissimilarityMatrix build_matrix(const std::vector<FeatureGrid>& features, MetricTag metric,
                                 double epsilon) {
    if (features.size() < 2) throw ShapeError("need at least 2 features");
    if (metric == MetricTag::EUCL)
        throw ConfigError("EUCL is derived from the KLD matrix; use matrix_for_metric");
    for (const FeatureGrid& f : features)
        if (f.cells.size() != features.front().cells.size())
            throw ShapeError("inconsistent feature shapes");

    const std::size_t k = features.size();
    DissimilarityMatrix m;
    m.metric_tag = metric;
    m.values.assign(k * k, 0.0);
    m.labels.reserve(k);
    for (const FeatureGrid& f : features) m.labels.push_back(f.label);

    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = i + 1; j < k; ++j) {
            double v = 0.0;
            switch (metric) {
                case MetricTag::MSE: v = d_mse(features[i], features[j]); break;
                case MetricTag::MIN: v = d_min(features[i], features[j]); break;
                case MetricTag::KLD: v = d_kld_sym(features[i], features[j], epsilon); break;
                case MetricTag::EUCL: break;  // unreachable
            }
            m.at(i, j) = v;
            m.at(j, i) = v;
        }
    }
    return m;
}

DissimilarityMatrix d_eucl_from_kld(const DissimilarityMatrix& kld) {
    const std::size_t k = kld.size();
    if (k < 2 || kld.values.size() != k * k) throw ShapeError("matrix is not square");

    DissimilarityMatrix out;
    out.metric_tag = MetricTag::EUCL;
    out.labels = kld.labels;
    out.values.assign(k * k, 0.0);

    double max_v = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = i + 1; j < k; ++j) {
            double acc = 0.0;
            for (std::size_t c = 0; c < k; ++c) {
                const double d = kld.at(i, c) - kld.at(j, c);
                acc += d * d;
            }
            const double v = std::sqrt(acc);
            out.at(i, j) = v;
            out.at(j, i) = v;
            max_v = std::max(max_v, v);
        }
    }
    if (!(max_v > 0.0)) throw DegenerateMatrix("KLD matrix is all-zero");
    for (double& v : out.values) v /= max_v;
    return out;
}

DissimilarityMatrix matrix_for_metric(const std::vector<FeatureGrid>& features, MetricTag metric,
                                      double epsilon) {
    if (metric == MetricTag::EUCL)
        return d_eucl_from_kld(build_matrix(features, MetricTag::KLD, epsilon));
    return build_matrix(features, metric, epsilon);
}

}  // namespace gazebio
