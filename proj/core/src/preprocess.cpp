#include "dfe/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>

#include "dfe/fft.hpp"

namespace dfe {

DetrendResult detrend_linear(const TimeSeries& x) {
    const std::size_t n = x.size();
    if (n < 2) throw std::invalid_argument("detrend_linear: need at least 2 samples");

    double t_mean = 0.0, x_mean = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        t_mean += x.time_at(k);
        x_mean += x.samples[k];
    }
    t_mean /= static_cast<double>(n);
    x_mean /= static_cast<double>(n);

    double stt = 0.0, stx = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double dt = x.time_at(k) - t_mean;
        stt += dt * dt;
        stx += dt * (x.samples[k] - x_mean);
    }

    DetrendResult r;
    r.slope_per_s = stt > 0.0 ? stx / stt : 0.0;
    r.intercept = x_mean - r.slope_per_s * t_mean;
    r.detrended = x;
    for (std::size_t k = 0; k < n; ++k)
        r.detrended.samples[k] = x.samples[k] - (r.intercept + r.slope_per_s * x.time_at(k));
    return r;
}

std::vector<double> window(std::size_t n, WindowKind kind) {
    if (n < 1) throw std::invalid_argument("window: n must be >= 1");
    std::vector<double> w(n, 1.0);
    if (kind == WindowKind::rectangular || n == 1) return w;
    // fill one half and mirror so w[k] == w[n-1-k] exactly
    for (std::size_t k = 0; k <= (n - 1) / 2; ++k) {
        const double v = 0.54 - 0.46 * std::cos(kTwoPi * static_cast<double>(k) / static_cast<double>(n - 1));
        w[k] = v;
        w[n - 1 - k] = v;
    }
    return w;
}

AdjustedSeries adjust_length(const TimeSeries& x, LengthPolicy policy) {
    const std::size_t n = x.size();
    if (n < 2) throw std::invalid_argument("adjust_length: need at least 2 samples");

    AdjustedSeries out;
    out.series = x;
    if (policy == LengthPolicy::zero_pad_up) {
        out.n_fft = next_power_of_two(n);
        out.series.samples.resize(out.n_fft, 0.0);
    } else {
        out.n_fft = prev_power_of_two(n);
        out.series.samples.resize(out.n_fft);
    }
    return out;
}

TimeSeries bandpass(const TimeSeries& x, double f_lo_hz, double f_hi_hz) {
    const std::size_t n = x.size();
    if (n < 2) throw std::invalid_argument("bandpass: need at least 2 samples");
    const double nyquist = x.rate_hz / 2.0;
    if (!(0.0 <= f_lo_hz && f_lo_hz < f_hi_hz && f_hi_hz <= nyquist))
        throw std::invalid_argument("bandpass: require 0 <= f_lo < f_hi <= f_nyquist");

    const std::size_t nfft = next_power_of_two(n);
    std::vector<std::complex<double>> a(nfft);
    for (std::size_t k = 0; k < n; ++k) a[k] = x.samples[k];
    fft_inplace(a);

    for (std::size_t k = 0; k < nfft; ++k) {
        const std::size_t kk = std::min(k, nfft - k);  // distance to DC, symmetric
        const double f = static_cast<double>(kk) * x.rate_hz / static_cast<double>(nfft);
        if (f < f_lo_hz || f > f_hi_hz) a[k] = 0.0;
    }
    ifft_inplace(a);

    TimeSeries y = x;
    for (std::size_t k = 0; k < n; ++k) y.samples[k] = a[k].real();
    return y;
}

} // namespace dfe
