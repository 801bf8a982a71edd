#pragma once

#include <cstddef>
#include <vector>

#include "dfe/timebase.hpp"

namespace dfe {

enum class WindowKind { rectangular, hamming };

enum class LengthPolicy { zero_pad_up, truncate_down };

struct DetrendResult {
    TimeSeries detrended;
    double intercept = 0.0;   ///< fitted value at t = 0
    double slope_per_s = 0.0;
};

/// Removes the least-squares straight line fitted against absolute time
/// t_k = t0 + k / rate. Requires at least 2 samples.
DetrendResult detrend_linear(const TimeSeries& x);

/// Window weights of length n. Hamming is the classic 0.54 - 0.46*cos form;
/// n = 1 degenerates to [1].
std::vector<double> window(std::size_t n, WindowKind kind);

struct AdjustedSeries {
    TimeSeries series;       ///< padded or truncated to n_fft samples
    std::size_t n_fft = 0;
};

/// Brings the series to a power-of-two length: zeros appended up to the next
/// power of two, or the tail dropped down to the previous one. A series whose
/// length is already a power of two passes through unchanged.
AdjustedSeries adjust_length(const TimeSeries& x, LengthPolicy policy);

/// Frequency-domain band-pass: transform (padded to a power of two), zero all
/// bins with |f| outside [f_lo, f_hi] (closed interval, conjugate-symmetric),
/// inverse transform, crop back to the input length.
TimeSeries bandpass(const TimeSeries& x, double f_lo_hz, double f_hi_hz);

} // namespace dfe
