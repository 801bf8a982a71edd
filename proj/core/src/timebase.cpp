#include "dfe/timebase.hpp"

#include <cmath>
#include <stdexcept>

#include "dfe/fft.hpp"

namespace dfe {

SamplingCharacteristics characteristics(std::size_t n_s, double T_s, std::size_t n_fft) {
    if (n_s < 2) throw std::invalid_argument("characteristics: insufficient samples (n_s must be >= 2)");
    if (!(T_s > 0.0)) throw std::invalid_argument("characteristics: T_s must be positive");
    if (!is_power_of_two(n_fft)) throw std::invalid_argument("characteristics: n_fft must be a power of two");

    SamplingCharacteristics c;
    c.n_s = n_s;
    c.T_s = T_s;
    c.r_s = static_cast<double>(n_s) / T_s;
    c.f_nyquist = c.r_s / 2.0;
    c.t_step = 1.0 / c.r_s;
    c.n_fft = n_fft;
    c.f_res = c.r_s / static_cast<double>(n_fft);
    c.f_min = c.f_res;
    c.f_max = c.f_nyquist;
    return c;
}

SamplingCharacteristics characteristics(const TimeSeries& x, std::size_t n_fft) {
    if (!(x.rate_hz > 0.0)) throw std::invalid_argument("characteristics: rate_hz must be positive");
    return characteristics(x.size(), x.duration_s(), n_fft);
}

PeriodCounts period_counts(double f_hz, const SamplingCharacteristics& chars) {
    if (!(f_hz > 0.0)) throw std::invalid_argument("period_counts: frequency must be positive");
    PeriodCounts p;
    p.p_f_s = 1.0 / f_hz;
    p.np_f = chars.T_s * f_hz;
    p.ns_f = chars.r_s / f_hz;
    return p;
}

FrequencyBounds frequency_bounds(const SamplingCharacteristics& chars, double min_periods) {
    if (!(min_periods >= 1.0)) throw std::invalid_argument("frequency_bounds: min_periods must be >= 1");
    FrequencyBounds b;
    b.f_lo_hz = min_periods / chars.T_s;
    b.f_hi_hz = chars.r_s / 2.0;
    if (b.f_lo_hz > b.f_hi_hz)
        throw std::domain_error("frequency_bounds: window too short for requested period support");
    return b;
}

Equilibrium equilibrium_frequency(const SamplingCharacteristics& chars) {
    Equilibrium e;
    e.count = std::sqrt(static_cast<double>(chars.n_s));
    e.f_eq_hz = e.count / chars.T_s;
    return e;
}

} // namespace dfe
