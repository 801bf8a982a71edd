#pragma once

// Shared oracles and fixtures. Everything here is deliberately independent of
// the library's transform path: the naive DFT is the O(n^2) definition, the
// regression oracle solves the normal equations directly.

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "dfe/timebase.hpp"

namespace oracle {

constexpr double kPi = 3.14159265358979323846;

inline std::vector<std::complex<double>> naive_dft(std::span<const double> x, std::size_t n) {
    std::vector<std::complex<double>> out(n);
    for (std::size_t k = 0; k < n; ++k) {
        std::complex<double> acc{0.0, 0.0};
        for (std::size_t m = 0; m < x.size(); ++m) {
            const double angle = -2.0 * kPi * static_cast<double>(k) * static_cast<double>(m) /
                                 static_cast<double>(n);
            acc += x[m] * std::complex<double>(std::cos(angle), std::sin(angle));
        }
        out[k] = acc;
    }
    return out;
}

// least-squares line through (t_k, x_k), solved from the explicit 2x2 system
inline std::array<double, 2> line_fit(std::span<const double> t, std::span<const double> x) {
    const double n = static_cast<double>(t.size());
    double st = 0.0, sx = 0.0, stt = 0.0, stx = 0.0;
    for (std::size_t k = 0; k < t.size(); ++k) {
        st += t[k];
        sx += x[k];
        stt += t[k] * t[k];
        stx += t[k] * x[k];
    }
    const double det = n * stt - st * st;
    const double slope = (n * stx - st * sx) / det;
    const double intercept = (sx - slope * st) / n;
    return {intercept, slope};
}

inline std::vector<double> uniform_samples(std::size_t n, double lo, double hi, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    std::vector<double> out(n);
    for (auto& v : out) v = lo + (hi - lo) * (static_cast<double>(gen() >> 11) * 0x1.0p-53);
    return out;
}

inline dfe::TimeSeries tone(double amplitude, double freq_hz, double phase_rad, std::size_t n,
                            double rate_hz) {
    dfe::TimeSeries ts;
    ts.rate_hz = rate_hz;
    ts.samples.resize(n);
    for (std::size_t k = 0; k < n; ++k)
        ts.samples[k] =
            amplitude * std::sin(2.0 * kPi * freq_hz * static_cast<double>(k) / rate_hz + phase_rad);
    return ts;
}

} // namespace oracle
