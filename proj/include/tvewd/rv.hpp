#pragma once

#include "tvewd/series.hpp"

#include <chrono>
#include <filesystem>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace tvewd::rv {

/// Exchange-local wall clock time. No time zone is attached.
using Timestamp = std::chrono::sys_time<std::chrono::microseconds>;

/// Accepts `YYYY-MM-DD HH:MM[:SS[.ffffff]]`, with ' ' or 'T' as separator.
Timestamp parse_timestamp(std::string_view text);
std::string format_timestamp(Timestamp ts);

struct PriceTick {
    Timestamp timestamp;
    double price = 0.0;
};

/**
 * @brief Trading-day boundary and intraday binning rule.
 *
 * A tick whose clock time is at or after `day_cutoff` belongs to the next
 * calendar date's session (cutoff 00:00 means calendar days). Bins start at
 * the first occurrence of `session_open` inside the session and are
 * `bin_minutes` wide; bin i ends at open + (i+1)*bin_minutes.
 */
struct SessionRule {
    std::chrono::minutes day_cutoff{0};
    std::chrono::minutes session_open{0};
    int bins = 288;
    int bin_minutes = 5;

    void validate() const;
};

/// Parses "HH:MM" into minutes after midnight.
std::chrono::minutes parse_clock(std::string_view text);

class TradingCalendar {
public:
    TradingCalendar() = default;
    explicit TradingCalendar(SessionRule session);

    void exclude(Date date);
    /// Adds Dec 24-26 and Dec 31-Jan 2 for every year in [first_year, last_year].
    void exclude_year_end(int first_year, int last_year);

    [[nodiscard]] bool is_excluded(Date date) const;
    [[nodiscard]] const std::set<std::chrono::sys_days>& excluded() const { return excluded_; }
    [[nodiscard]] const SessionRule& session() const { return session_; }

    [[nodiscard]] Date trading_date(Timestamp ts) const;
    /// End of bin `bin` (0-based) of the session for `day`.
    [[nodiscard]] Timestamp bin_end(Date day, int bin) const;

private:
    SessionRule session_;
    std::set<std::chrono::sys_days> excluded_;
};

struct DayBars {
    Date date;
    std::vector<double> prices;
};

/**
 * For every retained session day, the last tick price at or before each bin
 * end. Bins with no new tick repeat the previous price; leading bins with no
 * price yet on that day are dropped. Excluded dates are skipped.
 *
 * @throws DataError if timestamps decrease or a price is not positive.
 */
std::vector<DayBars> sample_five_minute(std::span<const PriceTick> ticks, const TradingCalendar& calendar);

struct DailyRv {
    std::vector<Date> dates;
    std::vector<double> values;
    std::vector<Date> dropped;  // days with fewer than two bar prices
};

/// Sum of squared log returns per day.
DailyRv realized_variance(std::span<const DayBars> days);

/// 100 * sqrt(252 * RV). Throws std::invalid_argument on negative RV.
double annualize(double rv);
VolatilitySeries annualize(const DailyRv& rv, std::string label);

std::vector<PriceTick> parse_ticks_csv(std::string_view text);
std::vector<PriceTick> load_ticks(const std::filesystem::path& path);

/// Pre-aggregated daily realized variance, header `date,rv`.
DailyRv parse_rv_csv(std::string_view text);
std::string rv_csv(const DailyRv& rv);
DailyRv load_rv(const std::filesystem::path& path);

}  // namespace tvewd::rv
