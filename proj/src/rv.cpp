#include "tvewd/rv.hpp"

#include "tvewd/errors.hpp"
#include "tvewd/text.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace tvewd::rv {

using std::chrono::days;
using std::chrono::minutes;
using std::chrono::sys_days;

Timestamp parse_timestamp(std::string_view text) {
    text = trim(text);
    if (text.size() < 16 || (text[10] != ' ' && text[10] != 'T') || text[13] != ':') {
        throw DataError("invalid timestamp '" + std::string(text) + "'");
    }
    const Date date = parse_date(text.substr(0, 10));
    const auto hh = parse_integer(text.substr(11, 2), "hour");
    const auto mm = parse_integer(text.substr(14, 2), "minute");
    long long ss = 0;
    long long micros = 0;
    if (text.size() > 16) {
        if (text[16] != ':' || text.size() < 19) {
            throw DataError("invalid timestamp '" + std::string(text) + "'");
        }
        ss = parse_integer(text.substr(17, 2), "second");
        if (text.size() > 19) {
            if (text[19] != '.' || text.size() == 20 || text.size() > 26) {
                throw DataError("invalid timestamp fraction in '" + std::string(text) + "'");
            }
            auto frac = std::string(text.substr(20));
            frac.resize(6, '0');
            micros = parse_integer(frac, "fraction");
        }
    }
    if (hh > 23 || mm > 59 || ss > 60 || hh < 0 || mm < 0 || ss < 0) {
        throw DataError("timestamp out of range '" + std::string(text) + "'");
    }
    return Timestamp{sys_days{date}} + std::chrono::hours{hh} + minutes{mm} + std::chrono::seconds{ss} +
           std::chrono::microseconds{micros};
}

std::string format_timestamp(Timestamp ts) {
    const auto day = std::chrono::floor<days>(ts);
    const auto micros = (ts - day).count();
    const auto total_seconds = micros / 1'000'000;
    char buffer[48];
    std::snprintf(buffer, sizeof buffer, "%s %02lld:%02lld:%02lld.%06lld", format_date(Date{day}).c_str(),
                  static_cast<long long>(total_seconds / 3600), static_cast<long long>((total_seconds / 60) % 60),
                  static_cast<long long>(total_seconds % 60), static_cast<long long>(micros % 1'000'000));
    return buffer;
}

minutes parse_clock(std::string_view text) {
    text = trim(text);
    if (text.size() != 5 || text[2] != ':') {
        throw ConfigError("invalid clock time '" + std::string(text) + "' (expected HH:MM)");
    }
    const auto hh = parse_integer(text.substr(0, 2), "hour");
    const auto mm = parse_integer(text.substr(3, 2), "minute");
    if (hh < 0 || hh > 23 || mm < 0 || mm > 59) {
        throw ConfigError("clock time out of range '" + std::string(text) + "'");
    }
    return minutes{hh * 60 + mm};
}

void SessionRule::validate() const {
    if (day_cutoff < minutes{0} || day_cutoff >= days{1} || session_open < minutes{0} ||
        session_open >= days{1}) {
        throw ConfigError("session clock times must lie in [00:00, 24:00)");
    }
    if (bins < 1 || bin_minutes < 1) {
        throw ConfigError("session needs at least one bin of positive width");
    }
    if (static_cast<long long>(bins) * bin_minutes > 24 * 60) {
        throw ConfigError("session bins exceed 24 hours");
    }
}

TradingCalendar::TradingCalendar(SessionRule session) : session_(session) { session_.validate(); }

void TradingCalendar::exclude(Date date) { excluded_.insert(sys_days{date}); }

void TradingCalendar::exclude_year_end(int first_year, int last_year) {
    using namespace std::chrono;
    for (int y = first_year; y <= last_year; ++y) {
        for (unsigned d : {24U, 25U, 26U, 31U}) {
            exclude(Date{year{y}, December, day{d}});
        }
        exclude(Date{year{y}, January, day{1}});
        exclude(Date{year{y}, January, day{2}});
    }
}

bool TradingCalendar::is_excluded(Date date) const { return excluded_.contains(sys_days{date}); }

Date TradingCalendar::trading_date(Timestamp ts) const {
    if (session_.day_cutoff == minutes{0}) {
        return Date{std::chrono::floor<days>(ts)};
    }
    return Date{std::chrono::floor<days>(ts + (days{1} - session_.day_cutoff))};
}

Timestamp TradingCalendar::bin_end(Date day, int bin) const {
    const sys_days date{day};
    Timestamp open;
    if (session_.day_cutoff == minutes{0} || session_.session_open < session_.day_cutoff) {
        open = Timestamp{date} + session_.session_open;
    } else {
        open = Timestamp{date - days{1}} + session_.session_open;
    }
    return open + minutes{static_cast<long long>(bin + 1) * session_.bin_minutes};
}

std::vector<DayBars> sample_five_minute(std::span<const PriceTick> ticks, const TradingCalendar& calendar) {
    std::vector<DayBars> out;
    for (std::size_t i = 0; i < ticks.size(); ++i) {
        if (!(ticks[i].price > 0.0) || !std::isfinite(ticks[i].price)) {
            throw DataError("tick " + std::to_string(i + 1) + ": price must be positive");
        }
        if (i > 0 && ticks[i].timestamp < ticks[i - 1].timestamp) {
            throw DataError("tick " + std::to_string(i + 1) + ": timestamps not sorted (" +
                            format_timestamp(ticks[i].timestamp) + " after " +
                            format_timestamp(ticks[i - 1].timestamp) + ")");
        }
    }
    const int bins = calendar.session().bins;
    std::size_t i = 0;
    while (i < ticks.size()) {
        const Date day = calendar.trading_date(ticks[i].timestamp);
        std::size_t end = i;
        while (end < ticks.size() && calendar.trading_date(ticks[end].timestamp) == day) {
            ++end;
        }
        if (!calendar.is_excluded(day)) {
            DayBars bars{day, {}};
            bars.prices.reserve(static_cast<std::size_t>(bins));
            std::size_t cursor = i;
            bool have_price = false;
            double last = 0.0;
            for (int b = 0; b < bins; ++b) {
                const auto bin_end = calendar.bin_end(day, b);
                while (cursor < end && ticks[cursor].timestamp <= bin_end) {
                    last = ticks[cursor].price;
                    have_price = true;
                    ++cursor;
                }
                if (have_price) {
                    bars.prices.push_back(last);
                }
            }
            if (!bars.prices.empty()) {
                out.push_back(std::move(bars));
            }
        }
        i = end;
    }
    return out;
}

DailyRv realized_variance(std::span<const DayBars> days_in) {
    DailyRv out;
    for (const auto& day : days_in) {
        if (day.prices.size() < 2) {
            out.dropped.push_back(day.date);
            continue;
        }
        double sum = 0.0;
        double prev = std::log(day.prices.front());
        for (std::size_t i = 1; i < day.prices.size(); ++i) {
            if (!(day.prices[i] > 0.0)) {
                throw DataError("bar price on " + format_date(day.date) + " is not positive");
            }
            const double cur = std::log(day.prices[i]);
            sum += (cur - prev) * (cur - prev);
            prev = cur;
        }
        out.dates.push_back(day.date);
        out.values.push_back(sum);
    }
    return out;
}

double annualize(double rv) {
    if (!(rv >= 0.0) || !std::isfinite(rv)) {
        throw std::invalid_argument("realized variance must be finite and nonnegative");
    }
    return 100.0 * std::sqrt(252.0 * rv);
}

VolatilitySeries annualize(const DailyRv& rv, std::string label) {
    VolatilitySeries series;
    series.label = std::move(label);
    series.dates = rv.dates;
    series.values.reserve(rv.values.size());
    for (double x : rv.values) {
        series.values.push_back(annualize(x));
    }
    return series;
}

std::vector<PriceTick> parse_ticks_csv(std::string_view text) {
    const auto rows = lines(text);
    if (rows.empty() || trim(rows.front()) != "timestamp,price") {
        throw DataError("tick CSV: line 1: expected header 'timestamp,price'");
    }
    std::vector<PriceTick> ticks;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        if (trim(rows[i]).empty()) {
            continue;
        }
        const auto fields = split(rows[i], ',');
        try {
            if (fields.size() != 2) {
                throw DataError("expected 2 fields");
            }
            ticks.push_back({parse_timestamp(fields[0]), parse_double(fields[1], "price")});
        } catch (const DataError& e) {
            throw DataError("tick CSV: line " + std::to_string(i + 1) + ": " + e.what());
        }
    }
    return ticks;
}

std::vector<PriceTick> load_ticks(const std::filesystem::path& path) { return parse_ticks_csv(read_file(path)); }

DailyRv parse_rv_csv(std::string_view text) {
    const auto rows = lines(text);
    if (rows.empty() || trim(rows.front()) != "date,rv") {
        throw DataError("RV CSV: line 1: expected header 'date,rv'");
    }
    DailyRv out;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        if (trim(rows[i]).empty()) {
            continue;
        }
        const auto fields = split(rows[i], ',');
        try {
            if (fields.size() != 2) {
                throw DataError("expected 2 fields");
            }
            const Date date = parse_date(fields[0]);
            const double value = parse_double(fields[1], "rv");
            if (!out.dates.empty() && sys_days{date} <= sys_days{out.dates.back()}) {
                throw DataError("dates not strictly increasing");
            }
            if (!(value >= 0.0) || !std::isfinite(value)) {
                throw DataError("rv must be finite and nonnegative");
            }
            out.dates.push_back(date);
            out.values.push_back(value);
        } catch (const DataError& e) {
            throw DataError("RV CSV: line " + std::to_string(i + 1) + ": " + e.what());
        }
    }
    return out;
}

std::string rv_csv(const DailyRv& rv) {
    std::string out = "date,rv\n";
    for (std::size_t i = 0; i < rv.values.size(); ++i) {
        out += format_date(rv.dates[i]) + ',' + format_double(rv.values[i]) + '\n';
    }
    return out;
}

DailyRv load_rv(const std::filesystem::path& path) { return parse_rv_csv(read_file(path)); }

}  // namespace tvewd::rv
