#include "tvewd/errors.hpp"
#include "tvewd/series.hpp"
#include "tvewd/text.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <random>

using namespace tvewd;
using namespace std::chrono;

TEST_CASE("format_double round-trips shortest representations") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-1e6, 1e6);
    for (int i = 0; i < 2000; ++i) {
        const double x = u(rng) * std::pow(10.0, static_cast<double>(i % 13) - 6.0);
        CHECK(parse_double(format_double(x), "x") == x);
    }
    CHECK(format_double(0.5) == "0.5");
    CHECK(format_double(35.0) == "35");
}

TEST_CASE("strict number parsing") {
    CHECK_THROWS_AS(parse_double("1.5x", "field"), DataError);
    CHECK_THROWS_AS(parse_double("", "field"), DataError);
    CHECK(parse_integer(" 42 ", "n") == 42);
    CHECK_THROWS_AS(parse_integer("4.2", "n"), DataError);
}

TEST_CASE("dates and business days") {
    CHECK(format_date(parse_date("2012-09-15")) == "2012-09-15");
    CHECK_THROWS_AS(parse_date("2012-02-30"), DataError);
    CHECK_THROWS_AS(parse_date("15/09/2012"), DataError);
    // 2000-01-01 is a Saturday
    const auto days = business_days(parse_date("2000-01-01"), 6);
    CHECK(format_date(days.front()) == "2000-01-03");
    CHECK(format_date(days.back()) == "2000-01-10");
    CHECK(format_date(add_business_days(parse_date("2000-01-07"), 1)) == "2000-01-10");
    CHECK(format_date(add_business_days(parse_date("2000-01-03"), 22)) == "2000-02-02");
}

TEST_CASE("series CSV round trip is exact") {
    std::mt19937_64 rng(11);
    std::exponential_distribution<double> e(0.05);
    VolatilitySeries s{"CL", business_days(parse_date("2010-01-04"), 300), {}};
    for (std::size_t i = 0; i < 300; ++i) {
        s.values.push_back(e(rng));
    }
    s.values[3] = 0.0;
    const auto path = std::filesystem::temp_directory_path() / "tvewd_roundtrip" / "CL.csv";
    std::filesystem::create_directories(path.parent_path());
    store_series(s, path);
    const auto back = load_series(path);
    CHECK(back == s);
    CHECK(parse_series_csv(series_csv(s), "CL") == s);
}

TEST_CASE("malformed series rows carry line numbers") {
    const auto expect = [](const char* text, const char* fragment) {
        try {
            parse_series_csv(text, "x");
            FAIL("expected a DataError");
        } catch (const DataError& e) {
            CHECK(std::string(e.what()).find(fragment) != std::string::npos);
        }
    };
    expect("date,value\n2020-01-02,1\n2020-01-03\n", "line 3");
    expect("date,value\n2020-01-02,1\n2020-01-02,2\n", "duplicate date");
    expect("date,value\n2020-01-02,abc\n", "line 2");
    expect("date,value\n2020-01-02,-1\n", "line 2");
    expect("when,value\n2020-01-02,1\n", "header");
}

TEST_CASE("series validation and slicing") {
    VolatilitySeries s{"x", business_days(parse_date("2020-01-06"), 5), {1, 2, 3, 4, 5}};
    CHECK_NOTHROW(s.validate());
    const auto mid = s.slice(1, 3);
    CHECK(mid.values == std::vector<double>{2, 3, 4});
    CHECK(mid.dates.front() == s.dates[1]);
    CHECK_THROWS((void)s.slice(4, 2));
    auto bad = s;
    bad.values[2] = std::nan("");
    CHECK_THROWS_AS(bad.validate(), DataError);
    bad = s;
    std::swap(bad.dates[0], bad.dates[1]);
    CHECK_THROWS_AS(bad.validate(), DataError);
}

TEST_CASE("atomic writes leave no temporary files") {
    const auto dir = std::filesystem::temp_directory_path() / "tvewd_atomic";
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    write_file_atomic(dir / "a.txt", "one");
    write_file_atomic(dir / "a.txt", "two");
    CHECK(read_file(dir / "a.txt") == "two");
    std::size_t files = 0;
    for ([[maybe_unused]] const auto& entry : std::filesystem::directory_iterator(dir)) {
        ++files;
    }
    CHECK(files == 1);
}
