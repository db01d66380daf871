#pragma once

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <compare>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "simband/errors.hpp"

namespace simband {

/// Calendar date, ISO-8601 (`YYYY-MM-DD`) on the wire. Timestamps are
/// metadata only — every algorithm downstream works on sample index.
struct Date {
    int year = 1970;
    int month = 1;
    int day = 1;

    auto operator<=>(const Date&) const = default;

    static bool is_leap(int y) { return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0; }

    static int days_in_month(int y, int m) {
        static constexpr int lengths[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
        if (m == 2 && is_leap(y)) return 29;
        return lengths[m - 1];
    }

    static std::optional<Date> parse(std::string_view s) {
        if (s.size() != 10 || s[4] != '-' || s[7] != '-') return std::nullopt;
        auto num = [&](std::size_t pos, std::size_t len, int& out) {
            for (std::size_t i = pos; i < pos + len; ++i)
                if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
            auto [p, ec] = std::from_chars(s.data() + pos, s.data() + pos + len, out);
            return ec == std::errc{} && p == s.data() + pos + len;
        };
        Date d;
        if (!num(0, 4, d.year) || !num(5, 2, d.month) || !num(8, 2, d.day)) return std::nullopt;
        if (d.month < 1 || d.month > 12) return std::nullopt;
        if (d.day < 1 || d.day > days_in_month(d.year, d.month)) return std::nullopt;
        return d;
    }

    std::string to_string() const {
        char buf[16];
        std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", year, month, day);
        return buf;
    }

    Date next_day() const {
        Date d = *this;
        if (++d.day > days_in_month(d.year, d.month)) {
            d.day = 1;
            if (++d.month > 12) {
                d.month = 1;
                ++d.year;
            }
        }
        return d;
    }
};

/// A named, chronologically ordered series of (date, value) samples.
/// Invariants: timestamps strictly increasing, values finite, length >= 1.
struct TimeSeries {
    std::string name;
    std::vector<Date> timestamps;
    std::vector<double> values;

    std::size_t size() const { return values.size(); }
};

struct CsvLoadResult {
    std::vector<TimeSeries> series;
    std::size_t dropped_rows = 0; // rows discarded for missing/unparseable cells
};

namespace detail {

inline std::string trim(std::string s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) cells.push_back(trim(cell));
    if (!line.empty() && line.back() == ',') cells.push_back("");
    return cells;
}

inline std::optional<double> parse_number(const std::string& s) {
    if (s.empty()) return std::nullopt;
    double v = 0.0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size()) return std::nullopt;
    if (!std::isfinite(v)) return std::nullopt;
    return v;
}

} // namespace detail

/// Load one TimeSeries per requested column from headered CSV text.
/// First column of interest is `date_column` (ISO-8601). Rows with a
/// missing or unparseable cell in any requested column (the date included)
/// are dropped and counted. Output is chronologically sorted. An empty
/// `value_columns` selects every non-date column in header order.
inline CsvLoadResult load_csv_stream(std::istream& in, const std::string& source,
                                     const std::string& date_column,
                                     std::vector<std::string> value_columns) {
    std::string line;
    if (!std::getline(in, line)) throw data_error("load_csv: empty input: " + source);
    if (!line.empty() && line.front() == '\xEF' && line.size() >= 3 && line[1] == '\xBB' &&
        line[2] == '\xBF')
        line.erase(0, 3); // strip UTF-8 BOM

    const auto header = detail::split_csv_line(line);
    auto column_index = [&](const std::string& name) -> std::size_t {
        const auto it = std::find(header.begin(), header.end(), name);
        if (it == header.end())
            throw data_error("load_csv: column not found: " + name);
        return static_cast<std::size_t>(it - header.begin());
    };

    const std::size_t date_idx = column_index(date_column);
    if (value_columns.empty()) {
        for (std::size_t i = 0; i < header.size(); ++i)
            if (i != date_idx) value_columns.push_back(header[i]);
        if (value_columns.empty()) throw data_error("load_csv: no value columns in " + source);
    }
    std::vector<std::size_t> value_idx;
    value_idx.reserve(value_columns.size());
    for (const auto& name : value_columns) value_idx.push_back(column_index(name));

    struct Row {
        Date date;
        std::vector<double> values;
    };
    std::vector<Row> rows;
    std::size_t dropped = 0;

    while (std::getline(in, line)) {
        if (detail::trim(line).empty()) continue;
        const auto cells = detail::split_csv_line(line);
        auto cell_at = [&](std::size_t i) -> std::string {
            return i < cells.size() ? cells[i] : std::string{};
        };

        const auto date = Date::parse(cell_at(date_idx));
        if (!date) {
            ++dropped;
            continue;
        }
        Row row{*date, {}};
        row.values.reserve(value_idx.size());
        bool ok = true;
        for (std::size_t i : value_idx) {
            const auto v = detail::parse_number(cell_at(i));
            if (!v) {
                ok = false;
                break;
            }
            row.values.push_back(*v);
        }
        if (!ok) {
            ++dropped;
            continue;
        }
        rows.push_back(std::move(row));
    }

    if (rows.empty()) throw data_error("load_csv: zero usable rows in " + source);

    std::stable_sort(rows.begin(), rows.end(),
                     [](const Row& a, const Row& b) { return a.date < b.date; });
    for (std::size_t r = 1; r < rows.size(); ++r)
        if (rows[r].date == rows[r - 1].date)
            throw data_error("load_csv: duplicate timestamp " + rows[r].date.to_string() +
                             " in " + source);

    CsvLoadResult out;
    out.dropped_rows = dropped;
    out.series.reserve(value_columns.size());
    for (std::size_t c = 0; c < value_columns.size(); ++c) {
        TimeSeries ts;
        ts.name = value_columns[c];
        ts.timestamps.reserve(rows.size());
        ts.values.reserve(rows.size());
        for (const auto& row : rows) {
            ts.timestamps.push_back(row.date);
            ts.values.push_back(row.values[c]);
        }
        out.series.push_back(std::move(ts));
    }
    return out;
}

/// File-path convenience wrapper around load_csv_stream.
inline CsvLoadResult load_csv(const std::string& path, const std::string& date_column,
                              std::vector<std::string> value_columns) {
    std::ifstream in(path);
    if (!in) throw data_error("load_csv: cannot open file: " + path);
    return load_csv_stream(in, path, date_column, std::move(value_columns));
}

} // namespace simband
