#include "dfe/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

namespace dfe {

IngestError::IngestError(std::string message, std::size_t line)
    : IoError(line > 0 ? "line " + std::to_string(line) + ": " + message : message), line_(line) {}

namespace {

std::vector<std::string_view> tokenize(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ',' || line[i] == ' ' || line[i] == '\t')) ++i;
        std::size_t j = i;
        while (j < line.size() && line[j] != ',' && line[j] != ' ' && line[j] != '\t') ++j;
        if (j > i) out.push_back(line.substr(i, j - i));
        i = j;
    }
    return out;
}

bool parse_double(std::string_view token, double& value) {
    const char* first = token.data();
    const char* last = token.data() + token.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    return ec == std::errc{} && ptr == last;
}

} // namespace

TimeSeries ingest_csv(const std::filesystem::path& path, std::optional<double> rate_hz) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());

    std::vector<double> times, values;
    std::size_t columns = 0;
    bool header_allowed = true;

    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const auto tokens = tokenize(line);
        if (tokens.empty()) continue;

        std::vector<double> row(tokens.size());
        bool numeric = true;
        for (std::size_t i = 0; i < tokens.size(); ++i)
            if (!parse_double(tokens[i], row[i])) {
                numeric = false;
                break;
            }

        if (!numeric) {
            if (header_allowed) {
                header_allowed = false;  // one header line tolerated
                continue;
            }
            throw IngestError("non-numeric row", line_no);
        }
        header_allowed = false;

        if (columns == 0) {
            columns = row.size();
            if (columns != 1 && columns != 2)
                throw IngestError("expected 1 or 2 columns, found " + std::to_string(columns), line_no);
        } else if (row.size() != columns) {
            throw IngestError("inconsistent column count", line_no);
        }

        if (columns == 1) {
            values.push_back(row[0]);
        } else {
            times.push_back(row[0]);
            values.push_back(row[1]);
        }
    }

    if (values.empty()) throw IngestError("no samples");

    TimeSeries ts;
    ts.samples = std::move(values);

    if (columns == 1) {
        if (!rate_hz) throw IngestError("sampling rate required for one-column input");
        if (!(*rate_hz > 0.0)) throw IngestError("sampling rate must be positive");
        ts.rate_hz = *rate_hz;
        ts.t0_s = 0.0;
        return ts;
    }

    ts.t0_s = times.front();
    if (times.size() < 2) {
        if (!rate_hz) throw IngestError("sampling rate required (cannot infer from one row)");
        ts.rate_hz = *rate_hz;
        return ts;
    }

    std::vector<double> deltas(times.size() - 1);
    for (std::size_t i = 0; i + 1 < times.size(); ++i) deltas[i] = times[i + 1] - times[i];
    std::vector<double> sorted = deltas;
    std::sort(sorted.begin(), sorted.end());
    const std::size_t mid = sorted.size() / 2;
    const double median_dt =
        sorted.size() % 2 == 1 ? sorted[mid] : 0.5 * (sorted[mid - 1] + sorted[mid]);
    if (!(median_dt > 0.0)) throw IngestError("non-uniform sampling unsupported");
    for (std::size_t i = 0; i < deltas.size(); ++i)
        if (std::fabs(deltas[i] - median_dt) > 1e-3 * median_dt)
            throw IngestError("non-uniform sampling unsupported", i + 2);

    ts.rate_hz = rate_hz ? *rate_hz : 1.0 / median_dt;
    if (!(ts.rate_hz > 0.0)) throw IngestError("sampling rate must be positive");
    return ts;
}

std::string format_double(double d) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), d);
    return std::string(buf, ptr);
}

void write_csv(const std::filesystem::path& path, const TimeSeries& x) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << "time_s,value\n";
    for (std::size_t k = 0; k < x.size(); ++k)
        out << format_double(x.time_at(k)) << ',' << format_double(x.samples[k]) << '\n';
    if (!out) throw IoError("write failed: " + path.string());
}

} // namespace dfe
