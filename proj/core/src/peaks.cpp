#include "dfe/peaks.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "dfe/fft.hpp"

namespace dfe {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

bool bands_overlap(const Band& a, const Band& b) {
    return a.f_lo_hz <= b.f_hi_hz && b.f_lo_hz <= a.f_hi_hz;
}

} // namespace

std::vector<std::size_t> local_maxima(std::span<const double> power) {
    const std::size_t n = power.size();
    if (n < 3) throw std::invalid_argument("local_maxima: need at least 3 bins");

    std::vector<std::size_t> out;
    std::size_t k = 1;
    while (k < n - 1) {
        if (power[k - 1] < power[k]) {
            // scan a possible flat top
            std::size_t j = k;
            while (j + 1 < n && power[j + 1] == power[k]) ++j;
            if (j + 1 < n && power[j + 1] < power[k]) out.push_back(k);
            k = j + 1;
        } else {
            ++k;
        }
    }
    return out;
}

RefinedPeak refine_peak(std::span<const double> power, std::size_t k, double bin_width_hz) {
    if (k < 1 || k + 1 >= power.size())
        throw std::invalid_argument("refine_peak: bin must have both neighbors");

    RefinedPeak r;
    r.power = power[k];

    const double pl = power[k - 1], pc = power[k], pr = power[k + 1];
    const double local_max = std::max({pl, pc, pr});
    // log interpolation is meaningless against effectively-zero bins
    if (!(local_max > 0.0) || pl <= 1e-12 * local_max || pc <= 1e-12 * local_max ||
        pr <= 1e-12 * local_max) {
        r.degenerate = true;
        return r;
    }

    const double a = std::log(pl);
    const double b = std::log(pc);
    const double g = std::log(pr);
    const double curvature = (a + g) - 2.0 * b;
    if (curvature >= 0.0) {
        r.degenerate = true;
        return r;
    }

    double delta = 0.5 * (a - g) / curvature;
    delta = std::clamp(delta, -0.5, 0.5);
    r.delta_bins = delta;
    r.freq_offset_hz = delta * bin_width_hz;
    r.power = std::exp(b - 0.25 * (a - g) * delta);
    return r;
}

Band half_power_band(const Spectrum& s, std::size_t k) {
    const auto& p = s.power;
    if (k >= p.size()) throw std::invalid_argument("half_power_band: bin out of range");
    const double threshold = p[k] / 2.0;
    const double bw = s.bin_width_hz();

    Band band;
    // walk left to the first bin below threshold
    std::size_t i = k;
    while (i > 0 && p[i - 1] >= threshold) --i;
    if (i == 0) {
        band.f_lo_hz = s.freq_hz.front();
    } else {
        const double frac = (threshold - p[i - 1]) / (p[i] - p[i - 1]);
        band.f_lo_hz = (static_cast<double>(i - 1) + frac) * bw;
    }
    // walk right
    std::size_t j = k;
    while (j + 1 < p.size() && p[j + 1] >= threshold) ++j;
    if (j + 1 == p.size()) {
        band.f_hi_hz = s.freq_hz.back();
    } else {
        const double frac = (p[j] - threshold) / (p[j] - p[j + 1]);
        band.f_hi_hz = (static_cast<double>(j) + frac) * bw;
    }
    return band;
}

std::vector<Peak> rank_peaks(const Spectrum& s, std::size_t k_max) {
    if (k_max < 1) throw std::invalid_argument("rank_peaks: k_max must be >= 1");

    double total = 0.0;
    for (double v : s.power) total += v;

    std::vector<Peak> candidates;
    for (std::size_t k : local_maxima(s.power)) {
        const auto refined = refine_peak(s.power, k, s.bin_width_hz());
        const Band band = half_power_band(s, k);

        Peak peak;
        peak.bin = k;
        peak.freq_hz = s.freq_hz[k] + refined.freq_offset_hz;
        peak.power = refined.power;
        peak.band_lo_hz = band.f_lo_hz;
        peak.band_hi_hz = band.f_hi_hz;
        if (total > 0.0) {
            double in_band = 0.0;
            for (std::size_t j = 0; j < s.power.size(); ++j)
                if (s.freq_hz[j] >= band.f_lo_hz && s.freq_hz[j] <= band.f_hi_hz)
                    in_band += s.power[j];
            peak.energy_fraction = in_band / total;
        }
        candidates.push_back(peak);
    }

    std::stable_sort(candidates.begin(), candidates.end(), [](const Peak& x, const Peak& y) {
        if (x.power != y.power) return x.power > y.power;
        return x.bin < y.bin;
    });

    // drop rounding dust: "maxima" twelve orders below the strongest peak are
    // transform noise, not signal structure
    const double floor = candidates.empty() ? 0.0 : 1e-12 * candidates.front().power;

    // stronger peaks absorb weaker ones with overlapping bands
    std::vector<Peak> kept;
    for (const Peak& c : candidates) {
        if (c.power <= floor) break;
        const Band cb{c.band_lo_hz, c.band_hi_hz};
        bool overlaps = false;
        for (const Peak& k2 : kept)
            if (bands_overlap(cb, Band{k2.band_lo_hz, k2.band_hi_hz})) {
                overlaps = true;
                break;
            }
        if (!overlaps) kept.push_back(c);
        if (kept.size() == k_max) break;
    }
    return kept;
}

DominanceReport dominance_report(const TimeSeries& x, const DominanceConfig& config) {
    if (x.size() < 8) throw std::invalid_argument("dominance_report: need at least 8 samples");
    const auto det = detrend_linear(x);
    const Spectrum s = raw_psd(det.detrended, config.policy);
    return dominance_report(det.detrended, s, config);
}

DominanceReport dominance_report(const TimeSeries& conditioned, const Spectrum& s,
                                 const DominanceConfig& config) {
    DominanceReport rep;
    rep.config = config;
    rep.peaks = rank_peaks(s, config.k_max);
    if (rep.peaks.empty()) {
        rep.margin_ratio = kNan;
        rep.period_count = kNan;
        rep.snr_db = kNan;
        rep.whiteness_p = kNan;
        return rep;
    }

    const Peak& dom = rep.peaks.front();
    double out_max = 0.0, band_energy = 0.0, out_energy = 0.0;
    for (std::size_t k = 0; k < s.power.size(); ++k) {
        if (k == 0 && config.dc_exclude) continue;
        if (s.freq_hz[k] >= dom.band_lo_hz && s.freq_hz[k] <= dom.band_hi_hz) {
            band_energy += s.power[k];
        } else {
            out_energy += s.power[k];
            out_max = std::max(out_max, s.power[k]);
        }
    }

    rep.margin_ratio = out_max > 0.0 ? std::sqrt(dom.power / out_max)
                                     : std::numeric_limits<double>::infinity();
    rep.snr_db = out_energy > 0.0 ? 10.0 * std::log10(band_energy / out_energy)
                                  : std::numeric_limits<double>::infinity();
    rep.period_count = conditioned.duration_s() * dom.freq_hz;

    rep.margin_ok = rep.margin_ratio >= config.margin;
    rep.periods_ok = rep.period_count >= config.min_periods;
    rep.energy_ok = dom.energy_fraction >= config.energy_floor;

    rep.whiteness_p = kNan;
    if (dom.freq_hz > 0.0 && dom.freq_hz < conditioned.rate_hz / 2.0 && conditioned.size() >= 20) {
        const auto removal = remove_dominant(conditioned, dom.freq_hz);
        try {
            rep.whiteness_p = whiteness_test(removal.residual.samples).p_proxy;
        } catch (const std::domain_error&) {
            // degenerate residual; leave NaN
        }
    }
    return rep;
}

SinusoidRemoval remove_dominant(const TimeSeries& x, double f_hz) {
    if (!(f_hz > 0.0 && f_hz < x.rate_hz / 2.0))
        throw std::invalid_argument("remove_dominant: frequency must lie in (0, f_nyquist)");

    const std::size_t n = x.size();
    double sss = 0.0, scc = 0.0, ssc = 0.0, sxs = 0.0, sxc = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double arg = kTwoPi * f_hz * x.time_at(k);
        const double sn = std::sin(arg);
        const double cs = std::cos(arg);
        sss += sn * sn;
        scc += cs * cs;
        ssc += sn * cs;
        sxs += x.samples[k] * sn;
        sxc += x.samples[k] * cs;
    }

    SinusoidRemoval out;
    out.residual = x;
    const double det = sss * scc - ssc * ssc;
    if (det <= 1e-12 * sss * scc) return out;  // basis degenerate; nothing removable

    const double a = (sxs * scc - sxc * ssc) / det;
    const double b = (sxc * sss - sxs * ssc) / det;
    for (std::size_t k = 0; k < n; ++k) {
        const double arg = kTwoPi * f_hz * x.time_at(k);
        out.residual.samples[k] = x.samples[k] - (a * std::sin(arg) + b * std::cos(arg));
    }
    out.amplitude = std::hypot(a, b);
    out.phase_rad = std::atan2(b, a);
    return out;
}

WhitenessResult whiteness_test(std::span<const double> x) {
    const std::size_t n = x.size();
    if (n < 20) throw std::invalid_argument("whiteness_test: need at least 20 samples");

    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= static_cast<double>(n);

    double m2 = 0.0, m3 = 0.0, m4 = 0.0;
    for (double v : x) {
        const double d = v - mean;
        m2 += d * d;
        m3 += d * d * d;
        m4 += d * d * d * d;
    }
    m2 /= static_cast<double>(n);
    m3 /= static_cast<double>(n);
    m4 /= static_cast<double>(n);
    if (!(m2 > 0.0)) throw std::domain_error("whiteness_test: degenerate sample");

    const double skewness = m3 / std::pow(m2, 1.5);
    const double kurtosis = m4 / (m2 * m2);

    WhitenessResult r;
    r.statistic = static_cast<double>(n) / 6.0 *
                  (skewness * skewness + 0.25 * (kurtosis - 3.0) * (kurtosis - 3.0));
    r.p_proxy = std::exp(-r.statistic / 2.0);
    r.is_gaussian_white = r.p_proxy > 0.05;
    return r;
}

DominantTrack track_dominant(const Spectrogram& g, std::optional<Band> band,
                             double threshold_fraction) {
    if (g.frames.empty()) throw std::invalid_argument("track_dominant: empty spectrogram");

    DominantTrack track;
    std::vector<double> energies(g.frames.size(), 0.0);

    for (std::size_t m = 0; m < g.frames.size(); ++m) {
        const Spectrum& s = g.frames[m];
        std::size_t best = 0;
        bool have_best = false;
        double energy = 0.0;
        for (std::size_t k = 1; k < s.power.size(); ++k) {  // DC skipped
            if (band && (s.freq_hz[k] < band->f_lo_hz || s.freq_hz[k] > band->f_hi_hz)) continue;
            energy += s.power[k];
            if (!have_best || s.power[k] > s.power[best]) {
                best = k;
                have_best = true;
            }
        }
        energies[m] = energy;

        TrackPoint pt;
        pt.time_s = g.frame_times_s[m];
        if (have_best) {
            pt.freq_hz = s.freq_hz[best];
            pt.power = s.power[best];
            if (best >= 1 && best + 1 < s.power.size() && s.power[best - 1] < s.power[best] &&
                s.power[best + 1] <= s.power[best]) {
                const auto refined = refine_peak(s.power, best, s.bin_width_hz());
                pt.freq_hz += refined.freq_offset_hz;
                pt.power = refined.power;
            }
        }
        track.points.push_back(pt);
    }

    const double max_energy = *std::max_element(energies.begin(), energies.end());
    if (!(max_energy > 0.0)) return track;  // silence: no segments

    const double cut = threshold_fraction * max_energy;
    std::size_t m = 0;
    while (m < energies.size()) {
        if (energies[m] >= cut) {
            std::size_t end = m;
            while (end + 1 < energies.size() && energies[end + 1] >= cut) ++end;
            TrackSegment seg;
            seg.t_start_s = g.frame_times_s[m];
            seg.t_end_s = g.frame_times_s[end];
            double sum = 0.0;
            for (std::size_t i = m; i <= end; ++i) sum += track.points[i].freq_hz;
            seg.mean_freq_hz = sum / static_cast<double>(end - m + 1);
            track.segments.push_back(seg);
            m = end + 1;
        } else {
            ++m;
        }
    }
    return track;
}

} // namespace dfe
