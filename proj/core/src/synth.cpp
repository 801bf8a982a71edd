#include "dfe/synth.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "angle_util.hpp"
#include "dfe/fft.hpp"

namespace dfe {

SinusoidSpec::SinusoidSpec(double amplitude_, double frequency_hz_, double phase_rad_)
    : amplitude(amplitude_), frequency_hz(frequency_hz_), phase_rad(detail::wrap_to_pi(phase_rad_)) {
    if (!(frequency_hz > 0.0))
        throw std::invalid_argument("SinusoidSpec: frequency must be positive");
}

std::vector<double> gaussian_noise(std::size_t n, double sigma, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("gaussian_noise: n must be >= 1");
    if (!(sigma >= 0.0)) throw std::invalid_argument("gaussian_noise: sigma must be >= 0");

    std::vector<double> out(n, 0.0);
    if (sigma == 0.0) return out;

    std::mt19937_64 gen(seed);
    auto next_unit = [&gen]() {
        // (0, 1] from the top 53 bits; keeps log() finite
        return (static_cast<double>(gen() >> 11) + 1.0) * 0x1.0p-53;
    };
    for (std::size_t i = 0; i < n; i += 2) {
        const double u1 = next_unit();
        const double u2 = next_unit();
        const double r = std::sqrt(-2.0 * std::log(u1));
        out[i] = sigma * r * std::cos(kTwoPi * u2);
        if (i + 1 < n) out[i + 1] = sigma * r * std::sin(kTwoPi * u2);
    }
    return out;
}

SynthResult generate(const SynthSpec& spec) {
    if (spec.n_s < 2) throw std::invalid_argument("generate: n_s must be >= 2");
    if (!(spec.rate_hz > 0.0)) throw std::invalid_argument("generate: rate_hz must be positive");
    if (!(spec.noise_sigma >= 0.0)) throw std::invalid_argument("generate: noise_sigma must be >= 0");

    SynthResult res;
    res.series.rate_hz = spec.rate_hz;
    res.series.t0_s = 0.0;
    res.series.samples = gaussian_noise(spec.n_s, spec.noise_sigma, spec.seed);

    const double nyquist = spec.rate_hz / 2.0;
    for (const auto& c : spec.components)
        if (c.frequency_hz >= nyquist) res.aliasing = true;

    for (std::size_t k = 0; k < spec.n_s; ++k) {
        const double t = static_cast<double>(k) / spec.rate_hz;
        double v = spec.trend_intercept + spec.trend_slope * t;
        for (const auto& c : spec.components)
            v += c.amplitude * std::sin(kTwoPi * c.frequency_hz * t + c.phase_rad);
        res.series.samples[k] += v;
    }
    return res;
}

} // namespace dfe
