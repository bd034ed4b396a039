#pragma once

#include "steinchord/rational.hpp"

#include <cassert>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace steinchord {

inline constexpr const char* kSchemaVersion = "1.0";

// One row of experiment output.  The field set and order are fixed by the
// schema version; every serialized record carries every field, with null
// (JSON) or an empty cell (CSV) for inapplicable ones.  Exact values
// serialize as canonical fraction strings ("p/q", or "p" when the
// denominator is 1); floats use 17 significant digits so parsing recovers
// the exact double.
struct ReportRecord {
    std::string schema_version = kSchemaVersion;
    std::string command;
    std::optional<std::uint64_t> n;
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> samples;
    std::optional<std::string> statistic;
    std::variant<std::monostate, double, Rational> estimate;
    bool exact = false;
    std::optional<double> ci_low;
    std::optional<double> ci_high;
    std::optional<double> bound;
    std::int64_t elapsed_ms = 0;

    bool operator==(const ReportRecord&) const = default;
};

namespace detail {

inline std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline std::string json_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size() + 2);
    for (const char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            default: out += c;
        }
    }
    return out;
}

// Field values are command names, statistic labels, or fractions; none of
// them may contain CSV structure characters, which keeps cells quote-free.
inline void assert_csv_safe(const std::string& s) {
    assert(s.find(',') == std::string::npos && s.find('\n') == std::string::npos &&
           s.find('"') == std::string::npos);
    (void)s;
}

inline std::string estimate_to_string(const ReportRecord& r, bool json) {
    if (std::holds_alternative<std::monostate>(r.estimate)) return json ? "null" : "";
    if (std::holds_alternative<double>(r.estimate))
        return format_double(std::get<double>(r.estimate));
    const std::string frac = to_fraction_string(std::get<Rational>(r.estimate));
    return json ? "\"" + frac + "\"" : frac;
}

}  // namespace detail

inline std::string serialize_records_json(const std::vector<ReportRecord>& records) {
    std::string out = "[\n";
    bool first = true;
    for (const auto& r : records) {
        if (!first) out += ",\n";
        first = false;
        const auto opt_u64 = [](const std::optional<std::uint64_t>& v) {
            return v ? std::to_string(*v) : std::string("null");
        };
        const auto opt_f = [](const std::optional<double>& v) {
            return v ? detail::format_double(*v) : std::string("null");
        };
        out += "  {\"schema_version\":\"" + detail::json_escape(r.schema_version) + "\"";
        out += ",\"command\":\"" + detail::json_escape(r.command) + "\"";
        out += ",\"n\":" + opt_u64(r.n);
        out += ",\"seed\":" + opt_u64(r.seed);
        out += ",\"samples\":" + opt_u64(r.samples);
        out += ",\"statistic\":" +
               (r.statistic ? "\"" + detail::json_escape(*r.statistic) + "\"" : std::string("null"));
        out += ",\"estimate\":" + detail::estimate_to_string(r, true);
        out += ",\"exact\":" + std::string(r.exact ? "true" : "false");
        out += ",\"ci_low\":" + opt_f(r.ci_low);
        out += ",\"ci_high\":" + opt_f(r.ci_high);
        out += ",\"bound\":" + opt_f(r.bound);
        out += ",\"elapsed_ms\":" + std::to_string(r.elapsed_ms);
        out += "}";
    }
    out += "\n]\n";
    return out;
}

inline constexpr const char* kCsvHeader =
    "schema_version,command,n,seed,samples,statistic,estimate,exact,ci_low,ci_high,bound,elapsed_ms";

inline std::string serialize_records_csv(const std::vector<ReportRecord>& records) {
    std::string out = kCsvHeader;
    out += '\n';
    for (const auto& r : records) {
        const auto opt_u64 = [](const std::optional<std::uint64_t>& v) {
            return v ? std::to_string(*v) : std::string();
        };
        const auto opt_f = [](const std::optional<double>& v) {
            return v ? detail::format_double(*v) : std::string();
        };
        detail::assert_csv_safe(r.command);
        std::string estimate = detail::estimate_to_string(r, false);
        detail::assert_csv_safe(estimate);
        std::string statistic = r.statistic.value_or("");
        detail::assert_csv_safe(statistic);
        out += r.schema_version + ',' + r.command + ',' + opt_u64(r.n) + ',' + opt_u64(r.seed) +
               ',' + opt_u64(r.samples) + ',' + statistic + ',' + estimate + ',' +
               (r.exact ? "true" : "false") + ',' + opt_f(r.ci_low) + ',' + opt_f(r.ci_high) +
               ',' + opt_f(r.bound) + ',' + std::to_string(r.elapsed_ms) + '\n';
    }
    return out;
}

inline std::vector<ReportRecord> parse_records_csv(const std::string& text) {
    std::vector<ReportRecord> records;
    std::size_t pos = 0;
    bool header_seen = false;
    while (pos < text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string::npos) end = text.size();
        const std::string line = text.substr(pos, end - pos);
        pos = end + 1;
        if (line.empty()) continue;
        if (!header_seen) {
            if (line != kCsvHeader) throw std::invalid_argument("parse_records_csv: bad header");
            header_seen = true;
            continue;
        }
        std::vector<std::string> cells;
        std::size_t cell_start = 0;
        for (;;) {
            const std::size_t comma = line.find(',', cell_start);
            if (comma == std::string::npos) {
                cells.push_back(line.substr(cell_start));
                break;
            }
            cells.push_back(line.substr(cell_start, comma - cell_start));
            cell_start = comma + 1;
        }
        if (cells.size() != 12) throw std::invalid_argument("parse_records_csv: bad row");
        ReportRecord r;
        r.schema_version = cells[0];
        r.command = cells[1];
        if (!cells[2].empty()) r.n = std::stoull(cells[2]);
        if (!cells[3].empty()) r.seed = std::stoull(cells[3]);
        if (!cells[4].empty()) r.samples = std::stoull(cells[4]);
        if (!cells[5].empty()) r.statistic = cells[5];
        r.exact = cells[7] == "true";
        if (!cells[6].empty()) {
            if (r.exact)
                r.estimate = parse_fraction(cells[6]);
            else
                r.estimate = std::stod(cells[6]);
        }
        if (!cells[8].empty()) r.ci_low = std::stod(cells[8]);
        if (!cells[9].empty()) r.ci_high = std::stod(cells[9]);
        if (!cells[10].empty()) r.bound = std::stod(cells[10]);
        r.elapsed_ms = std::stoll(cells[11]);
        records.push_back(std::move(r));
    }
    return records;
}

}  // namespace steinchord
