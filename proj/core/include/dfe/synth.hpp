#pragma once

#include <cstdint>
#include <vector>

#include "dfe/timebase.hpp"

namespace dfe {

/// One sinusoidal component, amplitude * sin(2*pi*frequency*t + phase).
/// A cosine is expressed as a sine with phase pi/2.
struct SinusoidSpec {
    double amplitude = 0.0;
    double frequency_hz = 0.0;
    double phase_rad = 0.0;

    /// Validates frequency > 0 and wraps the phase into [-pi, pi).
    SinusoidSpec(double amplitude, double frequency_hz, double phase_rad);
};

struct SynthSpec {
    std::vector<SinusoidSpec> components;
    double trend_intercept = 0.0;
    double trend_slope = 0.0;  ///< per second
    double noise_sigma = 0.0;
    std::uint64_t seed = 0;
    std::size_t n_s = 0;
    double rate_hz = 0.0;
};

struct SynthResult {
    TimeSeries series;
    bool aliasing = false;  ///< set when any component reaches or exceeds Nyquist
};

/// Deterministic Gaussian samples, N(0, sigma^2).
///
/// Generator: std::mt19937_64 seeded directly, mapped to (0,1] doubles from
/// the top 53 bits, then the Box-Muller transform. The same (n, sigma, seed)
/// always reproduces the same sequence.
std::vector<double> gaussian_noise(std::size_t n, double sigma, std::uint64_t seed);

/// samples[k] = intercept + slope*t_k + sum_j A_j*sin(2*pi*B_j*t_k + C_j) + noise[k],
/// with t_k = k / rate_hz. Components at or above Nyquist only set the
/// aliasing flag; deliberate aliasing studies are allowed.
SynthResult generate(const SynthSpec& spec);

} // namespace dfe
