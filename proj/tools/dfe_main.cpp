// Command-line front end: synth, analyze, stft, fit, pisarenko.
//
// Exit codes: 0 success, 1 usage error, 2 data/file error, 3 numeric error.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "dfe/fft.hpp"
#include "dfe/io.hpp"
#include "dfe/parametric.hpp"
#include "dfe/peaks.hpp"
#include "dfe/preprocess.hpp"
#include "dfe/report.hpp"
#include "dfe/spectral.hpp"
#include "dfe/synth.hpp"
#include "dfe/timebase.hpp"
#include "dfe/version.hpp"

namespace {

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::vector<double> split_doubles(const std::string& text, std::size_t min_count,
                                  std::size_t max_count, const std::string& what) {
    std::vector<double> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t comma = text.find(',', start);
        const std::string token =
            text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
        try {
            std::size_t used = 0;
            out.push_back(std::stod(token, &used));
            if (used != token.size()) throw std::invalid_argument(token);
        } catch (const std::exception&) {
            throw UsageError(what + ": cannot parse '" + token + "' as a number");
        }
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    if (out.size() < min_count || out.size() > max_count)
        throw UsageError(what + ": expected between " + std::to_string(min_count) + " and " +
                         std::to_string(max_count) + " comma-separated values");
    return out;
}

dfe::WindowKind parse_window(const std::string& name) {
    if (name == "hamming") return dfe::WindowKind::hamming;
    if (name == "rectangular" || name == "rect") return dfe::WindowKind::rectangular;
    throw UsageError("--window: expected 'hamming' or 'rectangular'");
}

void write_columns(const std::filesystem::path& path,
                   const std::vector<std::vector<double>>& rows, const std::string& header) {
    std::ofstream out(path);
    if (!out) throw dfe::IoError("cannot open " + path.string() + " for writing");
    out << header << '\n';
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i > 0) out << ' ';
            out << dfe::format_double(row[i]);
        }
        out << '\n';
    }
    if (!out) throw dfe::IoError("write failed: " + path.string());
}

struct SynthOptions {
    std::vector<std::string> tones;
    std::string trend;
    double noise_sigma = 0.0;
    std::uint64_t seed = 0;
    std::size_t n_s = 0;
    double rate_hz = 0.0;
    std::string output;
};

void run_synth(const SynthOptions& opt) {
    dfe::SynthSpec spec;
    spec.n_s = opt.n_s;
    spec.rate_hz = opt.rate_hz;
    spec.noise_sigma = opt.noise_sigma;
    spec.seed = opt.seed;
    for (const auto& tone : opt.tones) {
        const auto v = split_doubles(tone, 2, 3, "--tone");
        spec.components.emplace_back(v[0], v[1], v.size() == 3 ? v[2] : 0.0);
    }
    if (!opt.trend.empty()) {
        const auto v = split_doubles(opt.trend, 2, 2, "--trend");
        spec.trend_intercept = v[0];
        spec.trend_slope = v[1];
    }
    const auto result = dfe::generate(spec);
    if (result.aliasing)
        std::cerr << "warning: a component reaches or exceeds Nyquist; it will alias\n";
    dfe::write_csv(opt.output, result.series);
}

struct AnalyzeOptions {
    std::string input;
    std::optional<double> rate_hz;
    std::string policy = "pad";
    bool welch = false;
    std::size_t segments = 8;
    double overlap = 0.5;
    std::string window = "hamming";
    std::size_t k_max = 3;
    double margin = 1.3;
    double min_periods = 3.0;
    double energy_floor = 0.2;
    bool include_dc = false;
    std::string band;
    bool force_fit = false;
    std::optional<double> hint;
    bool cepstrum = false;
    std::string spectrum_out;
    std::string phase_out;
    std::string residual_out;
};

void run_analyze(const AnalyzeOptions& opt) {
    const dfe::TimeSeries x = dfe::ingest_csv(opt.input, opt.rate_hz);

    dfe::DominanceConfig cfg;
    if (opt.policy == "pad") {
        cfg.policy = dfe::LengthPolicy::zero_pad_up;
    } else if (opt.policy == "truncate") {
        cfg.policy = dfe::LengthPolicy::truncate_down;
    } else {
        throw UsageError("--policy: expected 'pad' or 'truncate'");
    }
    cfg.k_max = opt.k_max;
    cfg.margin = opt.margin;
    cfg.min_periods = opt.min_periods;
    cfg.energy_floor = opt.energy_floor;
    cfg.dc_exclude = !opt.include_dc;

    dfe::TimeSeries conditioned = dfe::detrend_linear(x).detrended;
    if (!opt.band.empty()) {
        const auto v = split_doubles(opt.band, 2, 2, "--band");
        conditioned = dfe::bandpass(conditioned, v[0], v[1]);
    }

    const dfe::Spectrum spectrum =
        opt.welch ? dfe::welch_psd(conditioned, opt.segments, opt.overlap, parse_window(opt.window))
                  : dfe::raw_psd(conditioned, cfg.policy);
    const dfe::DominanceReport dominance = dfe::dominance_report(conditioned, spectrum, cfg);

    dfe::ReportDocument doc;
    doc.tool_name = dfe::kToolName;
    doc.tool_version = dfe::kToolVersion;
    doc.input_path = opt.input;
    doc.n_s = x.size();
    doc.rate_hz = x.rate_hz;
    doc.duration_s = x.duration_s();
    doc.t0_s = x.t0_s;
    doc.psd_method = opt.welch ? "welch" : "raw";
    doc.characteristics = dfe::characteristics(x, spectrum.n_fft);
    doc.dominance = dominance;
    try {
        doc.mean_frequency_hz = dfe::mean_frequency(spectrum);
    } catch (const std::domain_error&) {
        doc.mean_frequency_hz = std::numeric_limits<double>::quiet_NaN();
    }

    // sub-resolution dominants get the parametric fit automatically
    const bool has_dominant = !dominance.peaks.empty();
    const double f_floor = cfg.min_periods / x.duration_s();
    const bool sub_resolution = has_dominant && dominance.peaks.front().freq_hz < f_floor;
    if (opt.force_fit || sub_resolution) {
        std::optional<double> hint = opt.hint;
        if (!hint && has_dominant) hint = dominance.peaks.front().freq_hz;
        doc.fit = dfe::fit_trend_sinusoid(x, hint);
    }

    if (opt.cepstrum) {
        const auto ceps =
            dfe::real_cepstrum(conditioned, dfe::next_power_of_two(conditioned.size()));
        doc.fundamental = dfe::cepstral_fundamental(ceps);
    }

    if (!opt.spectrum_out.empty()) {
        std::vector<std::vector<double>> rows;
        for (std::size_t k = 0; k < spectrum.power.size(); ++k)
            rows.push_back({spectrum.freq_hz[k], spectrum.power[k]});
        write_columns(opt.spectrum_out, rows, "# freq_hz power");
    }
    if (!opt.phase_out.empty()) {
        if (!spectrum.has_phase())
            throw UsageError("--phase-out requires the raw PSD (drop --welch)");
        const auto unwrapped = dfe::unwrap_phase(spectrum.phase_rad);
        std::vector<std::vector<double>> rows;
        for (std::size_t k = 0; k < unwrapped.size(); ++k)
            rows.push_back({spectrum.freq_hz[k], unwrapped[k]});
        write_columns(opt.phase_out, rows, "# freq_hz phase_rad");
    }
    if (!opt.residual_out.empty() && has_dominant) {
        const auto removal = dfe::remove_dominant(conditioned, dominance.peaks.front().freq_hz);
        dfe::write_csv(opt.residual_out, removal.residual);
    }

    std::cout << dfe::render_report(doc);
}

struct StftOptions {
    std::string input;
    std::optional<double> rate_hz;
    std::size_t win_len = 0;
    std::size_t hop = 0;
    std::string window = "hamming";
    std::string band;
    double threshold = 0.5;
    std::string frames_out;
};

void run_stft(const StftOptions& opt) {
    const dfe::TimeSeries x = dfe::ingest_csv(opt.input, opt.rate_hz);
    if (opt.win_len < 1 || opt.hop < 1 || opt.hop > opt.win_len || opt.win_len > x.size())
        throw UsageError("stft: require 1 <= hop <= win-len <= number of samples");

    const auto g = dfe::stft(x, opt.win_len, opt.hop, parse_window(opt.window));
    std::optional<dfe::Band> band;
    if (!opt.band.empty()) {
        const auto v = split_doubles(opt.band, 2, 2, "--band");
        band = dfe::Band{v[0], v[1]};
    }
    const auto track = dfe::track_dominant(g, band, opt.threshold);

    if (!opt.frames_out.empty()) {
        std::vector<std::vector<double>> rows;
        for (const auto& p : track.points) rows.push_back({p.time_s, p.freq_hz, p.power});
        write_columns(opt.frames_out, rows, "# time_s freq_hz power");
    }
    std::cout << dfe::render_track_document(g, track, x.rate_hz);
}

void run_fit(const std::string& input, std::optional<double> rate_hz, std::optional<double> hint) {
    const dfe::TimeSeries x = dfe::ingest_csv(input, rate_hz);
    std::cout << dfe::render_fit_document(dfe::fit_trend_sinusoid(x, hint));
}

void run_pisarenko(const std::string& input, std::optional<double> rate_hz) {
    const dfe::TimeSeries x = dfe::ingest_csv(input, rate_hz);
    std::cout << dfe::render_pisarenko_document(dfe::pisarenko_single_tone(x));
}

// DFE_CONFIG may point at a JSON file carrying analyze defaults; explicit
// flags still override.
void apply_config_defaults(AnalyzeOptions& opt) {
    const char* path = std::getenv("DFE_CONFIG");
    if (path == nullptr || *path == '\0') return;
    std::ifstream in(path);
    if (!in) throw UsageError(std::string("DFE_CONFIG: cannot open ") + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw UsageError(std::string("DFE_CONFIG: invalid JSON: ") + e.what());
    }
    if (j.contains("k_max")) opt.k_max = j["k_max"].get<std::size_t>();
    if (j.contains("margin")) opt.margin = j["margin"].get<double>();
    if (j.contains("min_periods")) opt.min_periods = j["min_periods"].get<double>();
    if (j.contains("energy_floor")) opt.energy_floor = j["energy_floor"].get<double>();
    if (j.contains("include_dc")) opt.include_dc = j["include_dc"].get<bool>();
    if (j.contains("segments")) opt.segments = j["segments"].get<std::size_t>();
    if (j.contains("overlap")) opt.overlap = j["overlap"].get<double>();
    if (j.contains("window")) opt.window = j["window"].get<std::string>();
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Dominant-frequency extraction toolkit"};
    app.set_version_flag("--version", std::string(dfe::kToolVersion));
    app.require_subcommand(1);

    SynthOptions synth_opt;
    auto* synth = app.add_subcommand("synth", "Generate a synthetic series as CSV");
    synth->add_option("--tone", synth_opt.tones,
                      "Sinusoid as amplitude,frequency_hz[,phase_rad]; repeatable");
    synth->add_option("--trend", synth_opt.trend, "Linear trend as intercept,slope_per_s");
    synth->add_option("--noise", synth_opt.noise_sigma, "Gaussian noise sigma");
    synth->add_option("--seed", synth_opt.seed, "Noise seed");
    synth->add_option("--n", synth_opt.n_s, "Number of samples")->required();
    synth->add_option("--rate", synth_opt.rate_hz, "Sampling rate, Hz")->required();
    synth->add_option("-o,--output", synth_opt.output, "Output CSV path")->required();

    AnalyzeOptions analyze_opt;
    try {
        apply_config_defaults(analyze_opt);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    auto* analyze = app.add_subcommand("analyze", "Dominance report for a CSV series");
    analyze->add_option("input", analyze_opt.input, "Input CSV")->required();
    std::optional<double> analyze_rate;
    analyze->add_option("--rate", analyze_rate, "Sampling rate for one-column input, Hz");
    analyze->add_option("--policy", analyze_opt.policy, "Length policy: pad | truncate");
    analyze->add_flag("--welch", analyze_opt.welch, "Welch PSD instead of the raw PSD");
    analyze->add_option("--segments", analyze_opt.segments, "Welch segment count");
    analyze->add_option("--overlap", analyze_opt.overlap, "Welch overlap fraction");
    analyze->add_option("--window", analyze_opt.window, "Welch window: hamming | rectangular");
    analyze->add_option("--k-max", analyze_opt.k_max, "Number of ranked peaks");
    analyze->add_option("--margin", analyze_opt.margin, "Dominance amplitude margin");
    analyze->add_option("--min-periods", analyze_opt.min_periods, "Required periods in window");
    analyze->add_option("--energy-floor", analyze_opt.energy_floor, "Required band energy fraction");
    analyze->add_flag("--include-dc", analyze_opt.include_dc, "Keep the DC bin in comparisons");
    analyze->add_option("--band", analyze_opt.band, "Band-pass lo_hz,hi_hz before the PSD");
    analyze->add_flag("--fit", analyze_opt.force_fit, "Force the trend+sinusoid fit");
    std::optional<double> analyze_hint;
    analyze->add_option("--hint", analyze_hint, "Frequency hint for the fit, Hz");
    analyze->add_flag("--cepstrum", analyze_opt.cepstrum, "Report the cepstral fundamental");
    analyze->add_option("--spectrum-out", analyze_opt.spectrum_out, "Write freq/power columns");
    analyze->add_option("--phase-out", analyze_opt.phase_out, "Write unwrapped phase columns");
    analyze->add_option("--residual-out", analyze_opt.residual_out,
                        "Write the dominant-removed residual CSV");

    StftOptions stft_opt;
    auto* stft_cmd = app.add_subcommand("stft", "Track dominant frequency over time");
    stft_cmd->add_option("input", stft_opt.input, "Input CSV")->required();
    std::optional<double> stft_rate;
    stft_cmd->add_option("--rate", stft_rate, "Sampling rate for one-column input, Hz");
    stft_cmd->add_option("--win-len", stft_opt.win_len, "Window length, samples")->required();
    stft_cmd->add_option("--hop", stft_opt.hop, "Hop, samples")->required();
    stft_cmd->add_option("--window", stft_opt.window, "Frame window: hamming | rectangular");
    stft_cmd->add_option("--band", stft_opt.band, "Search band lo_hz,hi_hz");
    stft_cmd->add_option("--threshold", stft_opt.threshold, "Active-segment energy fraction");
    stft_cmd->add_option("--frames-out", stft_opt.frames_out, "Write time/freq/power columns");

    std::string fit_input;
    std::optional<double> fit_rate, fit_hint;
    auto* fit_cmd = app.add_subcommand("fit", "Trend+sinusoid least-squares fit");
    fit_cmd->add_option("input", fit_input, "Input CSV")->required();
    fit_cmd->add_option("--rate", fit_rate, "Sampling rate for one-column input, Hz");
    fit_cmd->add_option("--hint", fit_hint, "Frequency hint, Hz");

    std::string pisarenko_input;
    std::optional<double> pisarenko_rate;
    auto* pisarenko_cmd = app.add_subcommand("pisarenko", "Closed-form single-tone estimate");
    pisarenko_cmd->add_option("input", pisarenko_input, "Input CSV")->required();
    pisarenko_cmd->add_option("--rate", pisarenko_rate, "Sampling rate for one-column input, Hz");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (synth->parsed()) {
            run_synth(synth_opt);
        } else if (analyze->parsed()) {
            analyze_opt.rate_hz = analyze_rate;
            analyze_opt.hint = analyze_hint;
            run_analyze(analyze_opt);
        } else if (stft_cmd->parsed()) {
            stft_opt.rate_hz = stft_rate;
            run_stft(stft_opt);
        } else if (fit_cmd->parsed()) {
            run_fit(fit_input, fit_rate, fit_hint);
        } else if (pisarenko_cmd->parsed()) {
            run_pisarenko(pisarenko_input, pisarenko_rate);
        }
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const dfe::IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
    return 0;
}
