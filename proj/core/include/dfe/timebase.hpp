#pragma once

#include <cstddef>
#include <vector>

namespace dfe {

/// Uniformly sampled real-valued signal.
///
/// The duration convention is T_s = n_s / rate_hz (so r_s = n_s / T_s holds
/// as an identity); the sample at index k sits at t0_s + k / rate_hz.
struct TimeSeries {
    std::vector<double> samples;
    double rate_hz = 1.0;
    double t0_s = 0.0;

    std::size_t size() const { return samples.size(); }
    double duration_s() const { return static_cast<double>(samples.size()) / rate_hz; }
    double time_at(std::size_t k) const { return t0_s + static_cast<double>(k) / rate_hz; }
};

/// The sampling ledger: every bookkeeping quantity the analysis needs.
struct SamplingCharacteristics {
    std::size_t n_s = 0;     ///< number of samples
    double T_s = 0.0;        ///< observation time, seconds
    double r_s = 0.0;        ///< sampling rate, Hz (n_s / T_s)
    double f_nyquist = 0.0;  ///< r_s / 2
    double t_step = 0.0;     ///< 1 / r_s
    std::size_t n_fft = 0;   ///< transform length, a power of two
    double f_res = 0.0;      ///< spectral grid step, r_s / n_fft
    double f_min = 0.0;      ///< lowest computable frequency (= f_res)
    double f_max = 0.0;      ///< highest computable frequency (= f_nyquist)

    /// Grid step under the n_fft == n_s convention, i.e. 1 / T_s. Kept next
    /// to f_res because the two differ whenever n_s is not a power of two.
    double conceptual_resolution() const { return 1.0 / T_s; }
};

struct PeriodCounts {
    double p_f_s = 0.0;  ///< duration of one period, seconds
    double np_f = 0.0;   ///< periods inside the observation window
    double ns_f = 0.0;   ///< samples per period
};

struct FrequencyBounds {
    double f_lo_hz = 0.0;
    double f_hi_hz = 0.0;
};

struct Equilibrium {
    double f_eq_hz = 0.0;  ///< sqrt(n_s) / T_s
    double count = 0.0;    ///< np_f(f_eq) = ns_f(f_eq) = sqrt(n_s)
};

/// Throws std::invalid_argument for n_s < 2 ("insufficient samples"),
/// T_s <= 0, or n_fft not a power of two.
SamplingCharacteristics characteristics(std::size_t n_s, double T_s, std::size_t n_fft);
SamplingCharacteristics characteristics(const TimeSeries& x, std::size_t n_fft);

PeriodCounts period_counts(double f_hz, const SamplingCharacteristics& chars);

/// Estimable band [min_periods / T_s, r_s / 2]. Throws std::domain_error when
/// the window cannot support min_periods periods of any estimable frequency.
FrequencyBounds frequency_bounds(const SamplingCharacteristics& chars, double min_periods = 3.0);

/// Frequency at which periods-in-window equals samples-per-period.
Equilibrium equilibrium_frequency(const SamplingCharacteristics& chars);

} // namespace dfe
