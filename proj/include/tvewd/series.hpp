#pragma once

#include <chrono>
#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace tvewd {

using Date = std::chrono::year_month_day;

/// Parses an ISO-8601 calendar date (YYYY-MM-DD). Throws DataError.
Date parse_date(std::string_view text);
std::string format_date(Date date);

/// `count` consecutive weekdays starting at `start` (or the next weekday).
std::vector<Date> business_days(Date start, std::size_t count);

/// Advance `date` by `count` weekdays.
Date add_business_days(Date date, std::size_t count);

/**
 * @brief Dated, evenly indexed annualized volatility observations.
 *
 * Dates are strictly increasing trading dates; values are annualized
 * volatility in percent. Index t (0-based) is observation t+1 of the sample
 * in rescaled time u = (t+1)/T.
 */
struct VolatilitySeries {
    std::string label;
    std::vector<Date> dates;
    std::vector<double> values;

    [[nodiscard]] std::size_t size() const { return values.size(); }
    [[nodiscard]] std::span<const double> view() const { return values; }

    /// Throws DataError unless dates are strictly increasing, values are
    /// finite and nonnegative, and the series is non-empty.
    void validate() const;

    /// Observations [first, first + count).
    [[nodiscard]] VolatilitySeries slice(std::size_t first, std::size_t count) const;

    bool operator==(const VolatilitySeries&) const = default;
};

/// CSV with header `date,value`. Errors carry the 1-based line number.
VolatilitySeries parse_series_csv(std::string_view text, std::string label);
std::string series_csv(const VolatilitySeries& series);

/// Label defaults to the file stem.
VolatilitySeries load_series(const std::filesystem::path& path);
void store_series(const VolatilitySeries& series, const std::filesystem::path& path);

}  // namespace tvewd
