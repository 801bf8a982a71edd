#include "dfe/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "dfe/fft.hpp"

namespace dfe {

namespace {

Spectrum one_sided(const std::vector<std::complex<double>>& coeffs, double rate_hz,
                   std::size_t source_n_s, bool with_phase) {
    const std::size_t nfft = coeffs.size();
    Spectrum s;
    s.n_fft = nfft;
    s.rate_hz = rate_hz;
    s.source_n_s = source_n_s;
    const std::size_t half = nfft / 2;
    s.power.resize(half + 1);
    s.freq_hz.resize(half + 1);
    if (with_phase) s.phase_rad.resize(half + 1);
    for (std::size_t k = 0; k <= half; ++k) {
        s.power[k] = std::norm(coeffs[k]);
        s.freq_hz[k] = static_cast<double>(k) * rate_hz / static_cast<double>(nfft);
        if (with_phase) s.phase_rad[k] = std::arg(coeffs[k]);
    }
    return s;
}

} // namespace

std::vector<std::complex<double>> dft(std::span<const double> x, std::size_t n_fft) {
    return fft_real(x, n_fft);
}

Spectrum raw_psd(const TimeSeries& x, LengthPolicy policy) {
    auto adjusted = adjust_length(x, policy);
    auto coeffs = fft_real(adjusted.series.samples, adjusted.n_fft);
    Spectrum s = one_sided(coeffs, x.rate_hz, x.size(), /*with_phase=*/true);
    s.normalization = PsdNormalization::raw_power;
    return s;
}

std::size_t welch_segment_length(std::size_t n_s, std::size_t n_segments, double overlap) {
    if (n_segments < 1) throw std::invalid_argument("welch_segment_length: n_segments must be >= 1");
    if (!(overlap >= 0.0 && overlap < 1.0))
        throw std::invalid_argument("welch_segment_length: overlap must be in [0, 1)");
    const double denom = 1.0 + static_cast<double>(n_segments - 1) * (1.0 - overlap);
    return static_cast<std::size_t>(std::floor(static_cast<double>(n_s) / denom));
}

Spectrum welch_psd(const TimeSeries& x, std::size_t n_segments, double overlap, WindowKind kind) {
    const std::size_t n = x.size();
    const std::size_t seg_len = welch_segment_length(n, n_segments, overlap);
    if (seg_len < 4) throw std::domain_error("welch_psd: insufficient length for segmentation");
    const std::size_t hop = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::floor((1.0 - overlap) * static_cast<double>(seg_len))));

    const std::size_t nfft = next_power_of_two(seg_len);
    const auto w = window(seg_len, kind);
    double w_energy = 0.0;
    for (double v : w) w_energy += v * v;

    std::vector<double> acc(nfft / 2 + 1, 0.0);
    std::vector<double> slice(seg_len);
    for (std::size_t m = 0; m < n_segments; ++m) {
        const std::size_t off = m * hop;
        for (std::size_t k = 0; k < seg_len; ++k) slice[k] = x.samples[off + k] * w[k];
        auto coeffs = fft_real(slice, nfft);
        for (std::size_t k = 0; k <= nfft / 2; ++k) acc[k] += std::norm(coeffs[k]) / w_energy;
    }

    Spectrum s;
    s.n_fft = nfft;
    s.rate_hz = x.rate_hz;
    s.source_n_s = n;
    s.normalization = PsdNormalization::window_energy;
    s.power.resize(nfft / 2 + 1);
    s.freq_hz.resize(nfft / 2 + 1);
    for (std::size_t k = 0; k <= nfft / 2; ++k) {
        s.power[k] = acc[k] / static_cast<double>(n_segments);
        s.freq_hz[k] = static_cast<double>(k) * x.rate_hz / static_cast<double>(nfft);
    }
    return s;
}

std::vector<double> unwrap_phase(std::span<const double> phase_rad) {
    std::vector<double> out(phase_rad.begin(), phase_rad.end());
    for (std::size_t i = 1; i < out.size(); ++i) {
        double d = std::remainder(phase_rad[i] - out[i - 1], kTwoPi);
        if (d <= -kPi) d += kTwoPi;  // keep differences in (-pi, pi]
        out[i] = out[i - 1] + d;
    }
    return out;
}

Spectrogram stft(const TimeSeries& x, std::size_t win_len, std::size_t hop, WindowKind kind) {
    const std::size_t n = x.size();
    if (win_len < 1 || hop < 1 || hop > win_len || win_len > n)
        throw std::invalid_argument("stft: require 1 <= hop <= win_len <= n_s");

    const std::size_t nfft = next_power_of_two(win_len);
    const auto w = window(win_len, kind);

    Spectrogram g;
    g.win_len = win_len;
    g.hop = hop;
    std::vector<double> slice(win_len);
    for (std::size_t start = 0; start + win_len <= n; start += hop) {
        for (std::size_t k = 0; k < win_len; ++k) slice[k] = x.samples[start + k] * w[k];
        auto coeffs = fft_real(slice, nfft);
        Spectrum frame = one_sided(coeffs, x.rate_hz, win_len, /*with_phase=*/true);
        frame.normalization = PsdNormalization::raw_power;
        g.frames.push_back(std::move(frame));
        g.frame_times_s.push_back(x.t0_s + (static_cast<double>(start) + static_cast<double>(win_len) / 2.0) / x.rate_hz);
    }
    return g;
}

double mean_frequency(const Spectrum& s) {
    double total = 0.0, weighted = 0.0;
    for (std::size_t k = 0; k < s.power.size(); ++k) {
        total += s.power[k];
        weighted += s.freq_hz[k] * s.power[k];
    }
    if (!(total > 0.0)) throw std::domain_error("mean_frequency: empty spectrum");
    return weighted / total;
}

Cepstrum real_cepstrum(const TimeSeries& x, std::size_t n_fft) {
    if (!is_power_of_two(n_fft)) throw std::invalid_argument("real_cepstrum: n_fft must be a power of two");

    std::vector<std::complex<double>> a(n_fft);
    const std::size_t m = std::min(x.size(), n_fft);
    for (std::size_t k = 0; k < m; ++k) a[k] = x.samples[k];
    fft_inplace(a);

    double max_power = 0.0;
    for (const auto& z : a) max_power = std::max(max_power, std::norm(z));
    if (!(max_power > 0.0)) throw std::domain_error("real_cepstrum: empty spectrum");
    const double eps = 1e-12 * max_power;

    for (auto& z : a) z = std::log(std::norm(z) + eps);
    ifft_inplace(a);

    Cepstrum c;
    c.rate_hz = x.rate_hz;
    c.source_n_s = x.size();
    c.quefrency_s.resize(n_fft);
    c.value.resize(n_fft);
    for (std::size_t k = 0; k < n_fft; ++k) {
        c.quefrency_s[k] = static_cast<double>(k) / x.rate_hz;
        c.value[k] = a[k].real();
    }
    return c;
}

FundamentalEstimate cepstral_fundamental(const Cepstrum& c) {
    FundamentalEstimate est;
    const std::size_t nfft = c.value.size();
    const std::size_t k_lo = 2;
    const std::size_t k_hi = std::min(nfft / 2, c.source_n_s / 3);
    if (k_hi < k_lo) return est;

    std::size_t k_best = k_lo;
    std::vector<double> magnitudes;
    magnitudes.reserve(k_hi - k_lo + 1);
    for (std::size_t k = k_lo; k <= k_hi; ++k) {
        if (c.value[k] > c.value[k_best]) k_best = k;
        magnitudes.push_back(std::fabs(c.value[k]));
    }
    std::sort(magnitudes.begin(), magnitudes.end());
    const std::size_t mid = magnitudes.size() / 2;
    const double median = magnitudes.size() % 2 == 1
                              ? magnitudes[mid]
                              : 0.5 * (magnitudes[mid - 1] + magnitudes[mid]);

    est.peak_value = c.value[k_best];
    est.median_value = median;
    est.quefrency_s = c.quefrency_s[k_best];
    est.frequency_hz = c.rate_hz / static_cast<double>(k_best);
    est.found = est.peak_value > 3.0 * median;
    return est;
}

std::size_t spectrum_argmax(const Spectrum& s, bool dc_exclude) {
    if (s.power.empty()) throw std::invalid_argument("spectrum_argmax: empty spectrum");
    std::size_t best = dc_exclude && s.power.size() > 1 ? 1 : 0;
    for (std::size_t k = best + 1; k < s.power.size(); ++k)
        if (s.power[k] > s.power[best]) best = k;
    return best;
}

} // namespace dfe
