#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "dfe/preprocess.hpp"
#include "dfe/spectral.hpp"
#include "dfe/timebase.hpp"

namespace dfe {

/// A detected and refined spectral peak.
struct Peak {
    std::size_t bin = 0;          ///< index of the local maximum
    double freq_hz = 0.0;         ///< sub-bin refined frequency
    double power = 0.0;           ///< refined peak power
    double band_lo_hz = 0.0;      ///< half-power bandwidth edges
    double band_hi_hz = 0.0;
    double energy_fraction = 0.0; ///< share of total spectral power inside the band
};

/// Indices k with power[k-1] < power[k] >= power[k+1]; a flat top counts once
/// at its leftmost sample and only when followed by a fall. Endpoints are
/// never returned.
std::vector<std::size_t> local_maxima(std::span<const double> power);

struct RefinedPeak {
    double delta_bins = 0.0;     ///< sub-bin offset, clamped to [-0.5, 0.5]
    double freq_offset_hz = 0.0; ///< delta_bins * bin width
    double power = 0.0;          ///< interpolated peak power
    bool degenerate = false;     ///< flat/invalid curvature; raw values returned
};

/// Parabolic interpolation through log power at (k-1, k, k+1). Peaks with
/// near-Gaussian shape become parabolas under log, so the fit is exact in the
/// ideal case. Bins that are zero relative to the local maximum (below
/// 1e-12x) make the log fit meaningless and are reported as degenerate.
RefinedPeak refine_peak(std::span<const double> power, std::size_t k, double bin_width_hz);

struct Band {
    double f_lo_hz = 0.0;
    double f_hi_hz = 0.0;
};

/// Half-power (amplitude / sqrt(2), FWHM) band around the peak at bin k:
/// walk outward to the first bins below power[k]/2 and place the edges by
/// linear interpolation; capped at the spectrum edges.
Band half_power_band(const Spectrum& s, std::size_t k);

/// All local maxima refined, banded and measured, sorted by refined power
/// descending, overlapping bands merged (the weaker peak is dropped),
/// truncated to k_max. Maxima more than twelve orders of magnitude below the
/// strongest one are rounding dust and never ranked.
std::vector<Peak> rank_peaks(const Spectrum& s, std::size_t k_max);

struct DominanceConfig {
    LengthPolicy policy = LengthPolicy::zero_pad_up;
    std::size_t k_max = 3;
    double margin = 1.3;        ///< required amplitude ratio over out-of-band maximum
    double min_periods = 3.0;
    double energy_floor = 0.2;  ///< required energy fraction inside the dominant band
    bool dc_exclude = true;
};

/// Dominant-frequency verdict plus every raw metric it was derived from.
struct DominanceReport {
    std::vector<Peak> peaks;     ///< ranked: dominant first, then 2nd, 3rd, ...
    /// Dominant refined amplitude over the strongest out-of-band amplitude,
    /// i.e. sqrt(refined peak power / max power outside the half-power band).
    /// The "30% higher" rule is margin_ratio >= 1.3. NaN without peaks.
    double margin_ratio = 0.0;
    double period_count = 0.0;   ///< periods of the dominant inside the window
    double snr_db = 0.0;         ///< 10*log10(band energy / out-of-band energy)
    double whiteness_p = 0.0;    ///< residual whiteness p-proxy; NaN when untestable
    bool margin_ok = false;
    bool periods_ok = false;
    bool energy_ok = false;
    DominanceConfig config;
};

/// Full pipeline: detrend -> raw PSD (per config.policy) -> rank_peaks ->
/// metrics and verdicts. Needs n_s >= 8. With no detectable peaks the report
/// carries an empty list and all verdicts false.
DominanceReport dominance_report(const TimeSeries& x, const DominanceConfig& config = {});

/// Same verdict logic on an already conditioned series and its precomputed
/// spectrum (e.g. a Welch PSD).
DominanceReport dominance_report(const TimeSeries& conditioned, const Spectrum& s,
                                 const DominanceConfig& config = {});

struct SinusoidRemoval {
    TimeSeries residual;
    double amplitude = 0.0;
    double phase_rad = 0.0;
};

/// Closed-form least-squares removal of a*sin(2*pi*f*t) + b*cos(2*pi*f*t).
SinusoidRemoval remove_dominant(const TimeSeries& x, double f_hz);

struct WhitenessResult {
    double statistic = 0.0;      ///< Jarque-Bera statistic from skewness/kurtosis
    double p_proxy = 0.0;        ///< chi-square(2) tail, exp(-statistic/2)
    bool is_gaussian_white = false;  ///< p_proxy > 0.05
};

/// Moment-based normality test; needs length >= 20 and nonzero variance.
WhitenessResult whiteness_test(std::span<const double> x);

struct TrackPoint {
    double time_s = 0.0;
    double freq_hz = 0.0;
    double power = 0.0;
};

struct TrackSegment {
    double t_start_s = 0.0;
    double t_end_s = 0.0;
    double mean_freq_hz = 0.0;
};

struct DominantTrack {
    std::vector<TrackPoint> points;      ///< per-frame refined dominant
    std::vector<TrackSegment> segments;  ///< maximal runs of active frames
};

/// Per-frame dominant frequency (within the band when given) and the time
/// segments where the in-band energy stays at or above threshold_fraction of
/// the strongest frame. Silence yields no segments.
DominantTrack track_dominant(const Spectrogram& g, std::optional<Band> band = {},
                             double threshold_fraction = 0.5);

} // namespace dfe
