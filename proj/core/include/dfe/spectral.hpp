#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "dfe/preprocess.hpp"
#include "dfe/timebase.hpp"

namespace dfe {

/// How Spectrum::power was scaled.
///  - raw_power:     |X[k]|^2 of the (possibly zero-padded) transform.
///  - window_energy: periodograms divided by sum(w^2) and averaged;
///                   the noise floor is then window-invariant.
enum class PsdNormalization { raw_power, window_energy };

/// One-sided power spectrum on the grid k * rate / n_fft, k = 0..n_fft/2.
struct Spectrum {
    std::vector<double> power;      ///< length n_fft/2 + 1, non-negative
    std::vector<double> freq_hz;    ///< matching frequency scale
    std::vector<double> phase_rad;  ///< empty when phase is not meaningful (Welch)
    std::size_t n_fft = 0;
    double rate_hz = 0.0;
    std::size_t source_n_s = 0;     ///< samples before padding/truncation
    PsdNormalization normalization = PsdNormalization::raw_power;

    double bin_width_hz() const { return rate_hz / static_cast<double>(n_fft); }
    bool has_phase() const { return !phase_rad.empty(); }
};

/// Time-ordered short-window spectra.
struct Spectrogram {
    std::vector<Spectrum> frames;
    std::vector<double> frame_times_s;  ///< window-center time of each frame
    std::size_t win_len = 0;
    std::size_t hop = 0;
};

/// Full complex transform of a real sequence zero-padded to n_fft.
std::vector<std::complex<double>> dft(std::span<const double> x, std::size_t n_fft);

/// Unsmoothed |X|^2 spectrum of the length-adjusted series, with phase.
Spectrum raw_psd(const TimeSeries& x, LengthPolicy policy = LengthPolicy::zero_pad_up);

/// Segment length used by welch_psd:
/// floor(n_s / (1 + (n_segments-1) * (1-overlap))).
std::size_t welch_segment_length(std::size_t n_s, std::size_t n_segments = 8, double overlap = 0.5);

/// Averaged modified periodograms: n_segments windowed segments with the
/// given overlap fraction, each transformed at the next power of two >= the
/// segment length.
Spectrum welch_psd(const TimeSeries& x, std::size_t n_segments = 8, double overlap = 0.5,
                   WindowKind window = WindowKind::hamming);

/// Removes artificial 2*pi jumps: output[0] = phi[0] and successive
/// differences lie in (-pi, pi]; values are preserved modulo 2*pi.
std::vector<double> unwrap_phase(std::span<const double> phase_rad);

/// Spectrogram of windowed slices [m*hop, m*hop + win_len); frames that would
/// run past the end are dropped. Each frame transforms at the next power of
/// two >= win_len.
Spectrogram stft(const TimeSeries& x, std::size_t win_len, std::size_t hop,
                 WindowKind window = WindowKind::hamming);

/// Power-weighted mean frequency (spectral centroid), DC included.
double mean_frequency(const Spectrum& s);

struct Cepstrum {
    std::vector<double> quefrency_s;  ///< k / rate, k = 0..n_fft-1
    std::vector<double> value;
    double rate_hz = 0.0;
    std::size_t source_n_s = 0;
};

/// Real cepstrum: inverse transform of log(|X|^2 + eps) over the full
/// symmetric spectrum, eps = 1e-12 * max power.
Cepstrum real_cepstrum(const TimeSeries& x, std::size_t n_fft);

struct FundamentalEstimate {
    bool found = false;
    double frequency_hz = 0.0;
    double quefrency_s = 0.0;
    double peak_value = 0.0;
    double median_value = 0.0;  ///< median |cepstrum| over the searched range
};

/// Searches quefrencies in [2/rate, T_s/3] for a cepstral peak; the peak
/// counts as a fundamental only when it exceeds 3x the median magnitude in
/// that range (white noise produces no such peak).
FundamentalEstimate cepstral_fundamental(const Cepstrum& c);

/// Index of the strongest bin; by default DC is skipped (trends masquerade
/// as DC peaks).
std::size_t spectrum_argmax(const Spectrum& s, bool dc_exclude = true);

} // namespace dfe
