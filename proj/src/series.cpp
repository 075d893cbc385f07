#include "tvewd/series.hpp"

#include "tvewd/errors.hpp"
#include "tvewd/text.hpp"

#include <cmath>
#include <cstdio>

namespace tvewd {

namespace {

bool is_weekend(std::chrono::sys_days day) {
    const std::chrono::weekday wd{day};
    return wd == std::chrono::Saturday || wd == std::chrono::Sunday;
}

void require_header(std::string_view line, std::string_view expected, std::string_view what) {
    if (trim(line) != expected) {
        throw DataError(std::string(what) + ": line 1: expected header '" + std::string(expected) + "', got '" +
                        std::string(line) + "'");
    }
}

}  // namespace

Date parse_date(std::string_view text) {
    text = trim(text);
    if (text.size() != 10 || text[4] != '-' || text[7] != '-') {
        throw DataError("invalid date '" + std::string(text) + "' (expected YYYY-MM-DD)");
    }
    const auto y = parse_integer(text.substr(0, 4), "date year");
    const auto m = parse_integer(text.substr(5, 2), "date month");
    const auto d = parse_integer(text.substr(8, 2), "date day");
    const Date date{std::chrono::year{static_cast<int>(y)}, std::chrono::month{static_cast<unsigned>(m)},
                    std::chrono::day{static_cast<unsigned>(d)}};
    if (!date.ok()) {
        throw DataError("invalid calendar date '" + std::string(text) + "'");
    }
    return date;
}

std::string format_date(Date date) {
    char buffer[16];
    std::snprintf(buffer, sizeof buffer, "%04d-%02u-%02u", static_cast<int>(date.year()),
                  static_cast<unsigned>(date.month()), static_cast<unsigned>(date.day()));
    return buffer;
}

std::vector<Date> business_days(Date start, std::size_t count) {
    std::vector<Date> out;
    out.reserve(count);
    std::chrono::sys_days day{start};
    while (out.size() < count) {
        if (!is_weekend(day)) {
            out.emplace_back(day);
        }
        day += std::chrono::days{1};
    }
    return out;
}

Date add_business_days(Date date, std::size_t count) {
    std::chrono::sys_days day{date};
    while (count > 0) {
        day += std::chrono::days{1};
        if (!is_weekend(day)) {
            --count;
        }
    }
    return Date{day};
}

void VolatilitySeries::validate() const {
    if (values.empty()) {
        throw DataError("series '" + label + "' is empty");
    }
    if (dates.size() != values.size()) {
        throw DataError("series '" + label + "': dates and values differ in length");
    }
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!std::isfinite(values[i]) || values[i] < 0.0) {
            throw DataError("series '" + label + "': value at " + format_date(dates[i]) +
                            " is not a finite nonnegative number");
        }
        if (i > 0 && std::chrono::sys_days{dates[i]} <= std::chrono::sys_days{dates[i - 1]}) {
            throw DataError("series '" + label + "': dates not strictly increasing at " + format_date(dates[i]));
        }
    }
}

VolatilitySeries VolatilitySeries::slice(std::size_t first, std::size_t count) const {
    if (first + count > values.size()) {
        throw std::out_of_range("series slice out of range");
    }
    VolatilitySeries out;
    out.label = label;
    out.dates.assign(dates.begin() + static_cast<std::ptrdiff_t>(first),
                     dates.begin() + static_cast<std::ptrdiff_t>(first + count));
    out.values.assign(values.begin() + static_cast<std::ptrdiff_t>(first),
                      values.begin() + static_cast<std::ptrdiff_t>(first + count));
    return out;
}

VolatilitySeries parse_series_csv(std::string_view text, std::string label) {
    const auto rows = lines(text);
    if (rows.empty()) {
        throw DataError("series CSV: missing header");
    }
    require_header(rows.front(), "date,value", "series CSV");
    VolatilitySeries series;
    series.label = std::move(label);
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto row_no = std::to_string(i + 1);
        if (trim(rows[i]).empty()) {
            continue;
        }
        const auto fields = split(rows[i], ',');
        if (fields.size() != 2) {
            throw DataError("series CSV: line " + row_no + ": expected 2 fields");
        }
        Date date{};
        double value = 0.0;
        try {
            date = parse_date(fields[0]);
            value = parse_double(fields[1], "value");
        } catch (const DataError& e) {
            throw DataError("series CSV: line " + row_no + ": " + e.what());
        }
        if (!series.dates.empty()) {
            const std::chrono::sys_days prev{series.dates.back()};
            const std::chrono::sys_days cur{date};
            if (cur == prev) {
                throw DataError("series CSV: line " + row_no + ": duplicate date " + format_date(date));
            }
            if (cur < prev) {
                throw DataError("series CSV: line " + row_no + ": dates not increasing");
            }
        }
        if (!std::isfinite(value) || value < 0.0) {
            throw DataError("series CSV: line " + row_no + ": value must be finite and nonnegative");
        }
        series.dates.push_back(date);
        series.values.push_back(value);
    }
    series.validate();
    return series;
}

std::string series_csv(const VolatilitySeries& series) {
    std::string out = "date,value\n";
    for (std::size_t i = 0; i < series.size(); ++i) {
        out += format_date(series.dates[i]);
        out += ',';
        out += format_double(series.values[i]);
        out += '\n';
    }
    return out;
}

VolatilitySeries load_series(const std::filesystem::path& path) {
    return parse_series_csv(read_file(path), path.stem().string());
}

void store_series(const VolatilitySeries& series, const std::filesystem::path& path) {
    series.validate();
    write_file_atomic(path, series_csv(series));
}

}  // namespace tvewd
