#include "gazebio/spectral.hpp"

#include <cassert>
#include <cmath>
#include <complex>
#include <vector>

namespace gazebio {

namespace {

// Twiddle table with exact conjugate mirroring: W[n-k] is the bitwise
// conjugate of W[k], which makes |F[a][b]| == |F[-a][-b]| hold exactly for
// real input.
std::vector<std::complex<double>> twiddle_table(int n) {
    std::vector<std::complex<double>> w(static_cast<std::size_t>(n));
    w[0] = {1.0, 0.0};
    for (int k = 1; k <= n / 2; ++k) {
        const double angle = -2.0 * M_PI * k / n;
        w[static_cast<std::size_t>(k)] = {std::cos(angle), std::sin(angle)};
    }
    if (n % 2 == 0) w[static_cast<std::size_t>(n / 2)] = {-1.0, 0.0};
    for (int k = n / 2 + 1; k < n; ++k)
        w[static_cast<std::size_t>(k)] = std::conj(w[static_cast<std::size_t>(n - k)]);
    return w;
}

}  // namespace

MagnitudeSpectrum dft2_magnitude(const FixationDensityMap& m) {
    const int n = m.n;
    if (n <= 0 || m.cells.size() != static_cast<std::size_t>(n) * n)
        throw ShapeError("map is not square");

    const auto w = twiddle_table(n);

    // rows first: G[a][y] = sum_x f[x][y] * W[(a*x) mod n]
    std::vector<std::complex<double>> g(static_cast<std::size_t>(n) * n);
    for (int a = 0; a < n; ++a) {
        for (int y = 0; y < n; ++y) {
            std::complex<double> acc{0.0, 0.0};
            for (int x = 0; x < n; ++x)
                acc += m.at(x, y) * w[static_cast<std::size_t>(a) * x % n];
            g[static_cast<std::size_t>(a) * n + y] = acc;
        }
    }

    MagnitudeSpectrum s;
    s.n = n;
    s.cells.resize(static_cast<std::size_t>(n) * n);
    s.box_limit = n / 2;
    s.label = m.label;
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
            std::complex<double> acc{0.0, 0.0};
            for (int y = 0; y < n; ++y)
                acc += g[static_cast<std::size_t>(a) * n + y] *
                       w[static_cast<std::size_t>(b) * y % n];
            s.at(a, b) = std::hypot(acc.real(), acc.imag());
        }
    }
    return s;
}

MagnitudeSpectrum box_filter(const MagnitudeSpectrum& s, int box_limit) {
    if (box_limit < 0 || box_limit > s.n / 2) throw ConfigError("box limit out of range");
    MagnitudeSpectrum out = s;
    out.box_limit = box_limit;
    for (int i = 0; i < s.n; ++i) {
        for (int j = 0; j < s.n; ++j) {
            if (std::abs(s.signed_freq(i)) > box_limit || std::abs(s.signed_freq(j)) > box_limit)
                out.at(i, j) = 0.0;
        }
    }
    return out;
}

int default_box_limit(int n) { return static_cast<int>(0.05 * n); }

MagnitudeSpectrum spectral_feature(const FixationDensityMap& m, int box_limit) {
    MagnitudeSpectrum s = box_filter(dft2_magnitude(m), box_limit);
    double total = 0.0;
    for (double c : s.cells) total += c;
    // |F[0][0]| equals the map's total mass, so a nonempty map cannot reach 0
    assert(total > 0.0);
    for (double& c : s.cells) c /= total;
    return s;
}

}  // namespace gazebio
