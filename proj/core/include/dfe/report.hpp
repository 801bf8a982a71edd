#pragma once

#include <optional>
#include <string>

#include "dfe/parametric.hpp"
#include "dfe/peaks.hpp"
#include "dfe/spectral.hpp"
#include "dfe/timebase.hpp"

namespace dfe {

/// Everything one analysis run produced, ready for serialization.
///
/// Rendered as a JSON document with a fixed key order (schema_version 1), so
/// identical inputs and configuration produce byte-identical text. Non-finite
/// metrics serialize as null.
struct ReportDocument {
    int schema_version = 1;
    std::string tool_name;
    std::string tool_version;
    std::string input_path;  ///< empty when the series was not read from a file
    std::size_t n_s = 0;
    double rate_hz = 0.0;
    double duration_s = 0.0;
    double t0_s = 0.0;
    std::string psd_method;  ///< "raw" or "welch"
    SamplingCharacteristics characteristics;
    DominanceReport dominance;
    double mean_frequency_hz = 0.0;
    std::optional<FitResult> fit;
    std::optional<FundamentalEstimate> fundamental;
};

std::string render_report(const ReportDocument& doc);
ReportDocument parse_report(const std::string& text);

std::string render_track_document(const Spectrogram& g, const DominantTrack& track, double rate_hz);
std::string render_fit_document(const FitResult& fit);
std::string render_pisarenko_document(double frequency_hz);

} // namespace dfe
