#include "dfe/report.hpp"

#include <cmath>
#include <limits>

#include <json.hpp>

namespace dfe {

namespace {

using ordered_json = nlohmann::ordered_json;

// non-finite doubles have no JSON representation; null round-trips them
ordered_json metric(double v) {
    if (std::isfinite(v)) return v;
    return nullptr;
}

double metric_back(const ordered_json& j) {
    if (j.is_null()) return std::numeric_limits<double>::quiet_NaN();
    return j.get<double>();
}

ordered_json peak_to_json(const Peak& p) {
    return ordered_json{{"bin", p.bin},
                        {"freq_hz", p.freq_hz},
                        {"power", metric(p.power)},
                        {"band_lo_hz", p.band_lo_hz},
                        {"band_hi_hz", p.band_hi_hz},
                        {"energy_fraction", p.energy_fraction}};
}

Peak peak_from_json(const ordered_json& j) {
    Peak p;
    p.bin = j.at("bin").get<std::size_t>();
    p.freq_hz = j.at("freq_hz").get<double>();
    p.power = metric_back(j.at("power"));
    p.band_lo_hz = j.at("band_lo_hz").get<double>();
    p.band_hi_hz = j.at("band_hi_hz").get<double>();
    p.energy_fraction = j.at("energy_fraction").get<double>();
    return p;
}

ordered_json dominance_to_json(const DominanceReport& rep) {
    ordered_json peaks = ordered_json::array();
    for (const auto& p : rep.peaks) peaks.push_back(peak_to_json(p));
    return ordered_json{
        {"peaks", peaks},
        {"margin_ratio", metric(rep.margin_ratio)},
        {"period_count", metric(rep.period_count)},
        {"snr_db", metric(rep.snr_db)},
        {"whiteness_p", metric(rep.whiteness_p)},
        {"verdicts",
         ordered_json{{"margin_ok", rep.margin_ok},
                      {"periods_ok", rep.periods_ok},
                      {"energy_ok", rep.energy_ok}}},
        {"config",
         ordered_json{{"policy", rep.config.policy == LengthPolicy::zero_pad_up ? "zero_pad_up"
                                                                                : "truncate_down"},
                      {"k_max", rep.config.k_max},
                      {"margin", rep.config.margin},
                      {"min_periods", rep.config.min_periods},
                      {"energy_floor", rep.config.energy_floor},
                      {"dc_exclude", rep.config.dc_exclude}}}};
}

DominanceReport dominance_from_json(const ordered_json& j) {
    DominanceReport rep;
    for (const auto& p : j.at("peaks")) rep.peaks.push_back(peak_from_json(p));
    rep.margin_ratio = metric_back(j.at("margin_ratio"));
    rep.period_count = metric_back(j.at("period_count"));
    rep.snr_db = metric_back(j.at("snr_db"));
    rep.whiteness_p = metric_back(j.at("whiteness_p"));
    const auto& verdicts = j.at("verdicts");
    rep.margin_ok = verdicts.at("margin_ok").get<bool>();
    rep.periods_ok = verdicts.at("periods_ok").get<bool>();
    rep.energy_ok = verdicts.at("energy_ok").get<bool>();
    const auto& cfg = j.at("config");
    rep.config.policy = cfg.at("policy").get<std::string>() == "zero_pad_up"
                            ? LengthPolicy::zero_pad_up
                            : LengthPolicy::truncate_down;
    rep.config.k_max = cfg.at("k_max").get<std::size_t>();
    rep.config.margin = cfg.at("margin").get<double>();
    rep.config.min_periods = cfg.at("min_periods").get<double>();
    rep.config.energy_floor = cfg.at("energy_floor").get<double>();
    rep.config.dc_exclude = cfg.at("dc_exclude").get<bool>();
    return rep;
}

ordered_json characteristics_to_json(const SamplingCharacteristics& c) {
    return ordered_json{{"n_s", c.n_s},
                        {"T_s", c.T_s},
                        {"r_s", c.r_s},
                        {"f_nyquist", c.f_nyquist},
                        {"t_step", c.t_step},
                        {"n_fft", c.n_fft},
                        {"f_res", c.f_res},
                        {"f_min", c.f_min},
                        {"f_max", c.f_max}};
}

SamplingCharacteristics characteristics_from_json(const ordered_json& j) {
    SamplingCharacteristics c;
    c.n_s = j.at("n_s").get<std::size_t>();
    c.T_s = j.at("T_s").get<double>();
    c.r_s = j.at("r_s").get<double>();
    c.f_nyquist = j.at("f_nyquist").get<double>();
    c.t_step = j.at("t_step").get<double>();
    c.n_fft = j.at("n_fft").get<std::size_t>();
    c.f_res = j.at("f_res").get<double>();
    c.f_min = j.at("f_min").get<double>();
    c.f_max = j.at("f_max").get<double>();
    return c;
}

ordered_json fit_to_json(const FitResult& f) {
    return ordered_json{{"model",
                         ordered_json{{"intercept", f.model.intercept},
                                      {"slope_per_s", f.model.slope_per_s},
                                      {"amplitude", f.model.amplitude},
                                      {"frequency_hz", f.model.frequency_hz},
                                      {"phase_rad", f.model.phase_rad}}},
                        {"sse", f.sse},
                        {"iterations", f.iterations},
                        {"converged", f.converged},
                        {"restarts_used", f.restarts_used}};
}

FitResult fit_from_json(const ordered_json& j) {
    FitResult f;
    const auto& m = j.at("model");
    f.model.intercept = m.at("intercept").get<double>();
    f.model.slope_per_s = m.at("slope_per_s").get<double>();
    f.model.amplitude = m.at("amplitude").get<double>();
    f.model.frequency_hz = m.at("frequency_hz").get<double>();
    f.model.phase_rad = m.at("phase_rad").get<double>();
    f.sse = j.at("sse").get<double>();
    f.iterations = j.at("iterations").get<std::size_t>();
    f.converged = j.at("converged").get<bool>();
    f.restarts_used = j.at("restarts_used").get<std::size_t>();
    return f;
}

ordered_json fundamental_to_json(const FundamentalEstimate& e) {
    return ordered_json{{"found", e.found},
                        {"frequency_hz", e.frequency_hz},
                        {"quefrency_s", e.quefrency_s},
                        {"peak_value", e.peak_value},
                        {"median_value", e.median_value}};
}

FundamentalEstimate fundamental_from_json(const ordered_json& j) {
    FundamentalEstimate e;
    e.found = j.at("found").get<bool>();
    e.frequency_hz = j.at("frequency_hz").get<double>();
    e.quefrency_s = j.at("quefrency_s").get<double>();
    e.peak_value = j.at("peak_value").get<double>();
    e.median_value = j.at("median_value").get<double>();
    return e;
}

} // namespace

std::string render_report(const ReportDocument& doc) {
    ordered_json j{
        {"schema_version", doc.schema_version},
        {"tool", ordered_json{{"name", doc.tool_name}, {"version", doc.tool_version}}},
        {"input",
         ordered_json{{"path", doc.input_path},
                      {"n_s", doc.n_s},
                      {"rate_hz", doc.rate_hz},
                      {"duration_s", doc.duration_s},
                      {"t0_s", doc.t0_s}}},
        {"psd_method", doc.psd_method},
        {"characteristics", characteristics_to_json(doc.characteristics)},
        {"dominance", dominance_to_json(doc.dominance)},
        {"mean_frequency_hz", metric(doc.mean_frequency_hz)},
    };
    j["fit"] = doc.fit ? fit_to_json(*doc.fit) : ordered_json(nullptr);
    j["fundamental"] = doc.fundamental ? fundamental_to_json(*doc.fundamental) : ordered_json(nullptr);
    return j.dump(2) + "\n";
}

ReportDocument parse_report(const std::string& text) {
    const ordered_json j = ordered_json::parse(text);
    ReportDocument doc;
    doc.schema_version = j.at("schema_version").get<int>();
    doc.tool_name = j.at("tool").at("name").get<std::string>();
    doc.tool_version = j.at("tool").at("version").get<std::string>();
    const auto& input = j.at("input");
    doc.input_path = input.at("path").get<std::string>();
    doc.n_s = input.at("n_s").get<std::size_t>();
    doc.rate_hz = input.at("rate_hz").get<double>();
    doc.duration_s = input.at("duration_s").get<double>();
    doc.t0_s = input.at("t0_s").get<double>();
    doc.psd_method = j.at("psd_method").get<std::string>();
    doc.characteristics = characteristics_from_json(j.at("characteristics"));
    doc.dominance = dominance_from_json(j.at("dominance"));
    doc.mean_frequency_hz = metric_back(j.at("mean_frequency_hz"));
    if (!j.at("fit").is_null()) doc.fit = fit_from_json(j.at("fit"));
    if (!j.at("fundamental").is_null()) doc.fundamental = fundamental_from_json(j.at("fundamental"));
    return doc;
}

std::string render_track_document(const Spectrogram& g, const DominantTrack& track, double rate_hz) {
    ordered_json frames = ordered_json::array();
    for (const auto& p : track.points)
        frames.push_back(ordered_json{
            {"time_s", p.time_s}, {"freq_hz", metric(p.freq_hz)}, {"power", metric(p.power)}});
    ordered_json segments = ordered_json::array();
    for (const auto& s : track.segments)
        segments.push_back(ordered_json{{"t_start_s", s.t_start_s},
                                        {"t_end_s", s.t_end_s},
                                        {"mean_freq_hz", metric(s.mean_freq_hz)}});
    const ordered_json j{{"win_len", g.win_len},
                         {"hop", g.hop},
                         {"rate_hz", rate_hz},
                         {"n_frames", track.points.size()},
                         {"segments", segments},
                         {"frames", frames}};
    return j.dump(2) + "\n";
}

std::string render_fit_document(const FitResult& fit) {
    return fit_to_json(fit).dump(2) + "\n";
}

std::string render_pisarenko_document(double frequency_hz) {
    return ordered_json{{"frequency_hz", frequency_hz}}.dump(2) + "\n";
}

} // namespace dfe
