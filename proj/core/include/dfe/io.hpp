#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>

#include "dfe/timebase.hpp"

namespace dfe {

/// File-level failure (missing, unreadable, unwritable).
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input data; carries the offending line when known (0 = whole file).
class IngestError : public IoError {
public:
    IngestError(std::string message, std::size_t line = 0);
    std::size_t line() const { return line_; }

private:
    std::size_t line_ = 0;
};

/// Reads a one-column (value; rate_hz required) or two-column (time, value)
/// numeric text file, comma or whitespace separated, with an optional single
/// header line. Two-column time stamps must be uniform within 0.1% relative
/// jitter; the rate is taken from rate_hz when given, otherwise inferred as
/// 1 / median(dt).
TimeSeries ingest_csv(const std::filesystem::path& path, std::optional<double> rate_hz = {});

/// Writes "time_s,value" rows with shortest round-trip formatting, so reading
/// the file back reproduces every sample bit for bit.
void write_csv(const std::filesystem::path& path, const TimeSeries& x);

/// Shortest decimal representation that parses back to exactly d.
std::string format_double(double d);

} // namespace dfe
