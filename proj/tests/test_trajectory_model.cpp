#include <doctest.h>

#include <random>
#include <sstream>

#include "mobility/error.hpp"
#include "mobility/trajectory_model.hpp"
#include "support.hpp"

using namespace mobility;

namespace {

RoundedCoord rc(const char* lat, const char* lon) { return round_coord(parse_micro_degrees(lat), parse_micro_degrees(lon)); }

}  // namespace

TEST_CASE("round_coord scales to centidegrees, half away from zero") {
    CHECK(rc("36.123456", "139.987654") == RoundedCoord{3612, 13999});
    CHECK(rc("36.125000", "139.000000") == RoundedCoord{3613, 13900});
    CHECK(rc("-0.004999", "0.000000") == RoundedCoord{0, 0});
    CHECK(rc("-36.125", "-139.005") == RoundedCoord{-3613, -13901});
    CHECK(rc("90", "-180") == RoundedCoord{9000, -18000});
    CHECK(round_coord_degrees(36.123456, 139.987654) == RoundedCoord{3612, 13999});
}

TEST_CASE("round_coord rejects out-of-range coordinates") {
    CHECK_THROWS_AS(rc("91.0", "0"), RecordError);
    CHECK_THROWS_AS(rc("0", "180.000001"), RecordError);
    CHECK_THROWS_AS(round_coord_degrees(0.0, -181.0), RecordError);
}

TEST_CASE("parse_micro_degrees is strict") {
    CHECK(parse_micro_degrees("35.5") == 35'500'000);
    CHECK(parse_micro_degrees("-0.000001") == -1);
    CHECK(parse_micro_degrees("+12") == 12'000'000);
    for (const char* bad : {"", "-", "1.", ".5", "1.1234567", "abc", "1e3", "12.3x", "1234.5"})
        CHECK_THROWS_AS(parse_micro_degrees(bad), RecordError);
    CHECK(format_micro_degrees(-1) == "-0.000001");
    CHECK(format_micro_degrees(139'987'654) == "139.987654");
}

TEST_CASE("round_coord is idempotent on grid points and total on the valid range") {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<std::int64_t> lat(-90'000'000, 90'000'000);
    std::uniform_int_distribution<std::int64_t> lon(-180'000'000, 180'000'000);
    for (int i = 0; i < 2000; ++i) {
        const auto c = round_coord(lat(rng), lon(rng));
        CHECK(std::abs(c.lat) <= 9000);
        CHECK(std::abs(c.lon) <= 18000);
        CHECK(round_coord(std::int64_t{c.lat} * 10000, std::int64_t{c.lon} * 10000) == c);
    }
}

TEST_CASE("localize converts into the analysis timezone") {
    const auto at = [](const char* ts) { return localize(parse_timestamp(ts)); };
    CHECK(at("2017-04-01T00:30:00+09:00") == LocalTime{parse_date("2017-04-01"), HourBin(0)});
    CHECK(at("2017-03-31T15:30:00Z") == LocalTime{parse_date("2017-04-01"), HourBin(0)});
    CHECK(at("2017-04-01T23:59:59+09:00") == LocalTime{parse_date("2017-04-01"), HourBin(23)});
    CHECK(localize(parse_timestamp("2017-04-01T00:30:00+09:00"), UtcOffset{}) ==
          LocalTime{parse_date("2017-03-31"), HourBin(15)});
}

TEST_CASE("timestamps parse strictly and round-trip") {
    const auto t = parse_timestamp("2017-04-01T12:34:56+09:00");
    CHECK(format_timestamp(t, kJapanStandardTime) == "2017-04-01T12:34:56+09:00");
    CHECK(format_timestamp(t, UtcOffset{}) == "2017-04-01T03:34:56+00:00");
    CHECK(parse_timestamp("2017-04-01T03:34:56Z") == t);
    CHECK(parse_timestamp("2017-04-01 12:34:56+09:00") == t);
    for (const char* bad : {"2017-04-01T12:34:56", "2017-02-30T00:00:00Z",
                            "2017-04-01T24:00:00Z", "2017-04-01T12:34+09:00", "2017-04-01T12:34:56+9:00"})
        CHECK_THROWS_AS(parse_timestamp(bad), RecordError);
}

TEST_CASE("UtcOffset parses and formats") {
    CHECK(UtcOffset::parse("+09:00") == kJapanStandardTime);
    CHECK(UtcOffset::parse("-05:30").minutes.count() == -330);
    CHECK(UtcOffset::parse("Z").minutes.count() == 0);
    CHECK(UtcOffset::parse("-05:30").to_string() == "-05:30");
    CHECK_THROWS_AS(UtcOffset::parse("+0900"), RecordError);
    CHECK_THROWS_AS(UtcOffset::parse("+24:00"), RecordError);
}

TEST_CASE("localize of consecutive hours steps the bin and wraps the date") {
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<std::int64_t> secs(1'400'000'000, 1'600'000'000);
    for (int i = 0; i < 1000; ++i) {
        const Instant t{std::chrono::seconds{secs(rng)}};
        const auto a = localize(t);
        const auto b = localize(t + std::chrono::hours{1});
        CHECK(b.hour.value() == (a.hour.value() + 1) % 24);
        CHECK((b.date == a.date + std::chrono::days{1}) == (a.hour.value() == 23));
        if (a.hour.value() != 23) CHECK(b.date == a.date);
    }
}

TEST_CASE("day_of_week uses the proleptic Gregorian calendar") {
    CHECK(day_of_week(parse_date("2017-04-01")) == Weekday::Saturday);
    CHECK(day_of_week(parse_date("2017-01-02")) == Weekday::Monday);
    CHECK(day_of_week(parse_date("2017-02-28")) == Weekday::Tuesday);
    CHECK(day_of_week(parse_date("2000-02-29")) == Weekday::Tuesday);
    CHECK(day_of_week(parse_date("1970-01-01")) == Weekday::Thursday);
}

TEST_CASE("week_of_month uses 7-day blocks with the tail in week 4") {
    CHECK(week_of_month(parse_date("2017-05-01")) == 1);
    CHECK(week_of_month(parse_date("2017-05-07")) == 1);
    CHECK(week_of_month(parse_date("2017-05-08")) == 2);
    CHECK(week_of_month(parse_date("2017-05-14")) == 2);
    CHECK(week_of_month(parse_date("2017-05-15")) == 3);
    CHECK(week_of_month(parse_date("2017-05-21")) == 3);
    CHECK(week_of_month(parse_date("2017-05-22")) == 4);
    CHECK(week_of_month(parse_date("2017-05-31")) == 4);
    CHECK(week_of_month(parse_date("2017-02-28")) == 4);
}

TEST_CASE("holiday and weekend membership") {
    const auto cal = testing::japan_2017();
    CHECK(is_holiday(parse_date("2017-01-09"), cal));
    CHECK_FALSE(is_holiday(parse_date("2017-04-28"), cal));
    CHECK(is_weekend(parse_date("2017-04-02")));
    CHECK_FALSE(is_weekend(parse_date("2017-04-03")));
}

TEST_CASE("every date sets exactly one weekday and one week block") {
    auto d = parse_date("2016-01-01");
    for (int i = 0; i < 3 * 366; ++i, d += std::chrono::days{1}) {
        const auto wd = static_cast<int>(day_of_week(d));
        CHECK(wd >= 0);
        CHECK(wd <= 6);
        const int w = week_of_month(d);
        CHECK(w >= 1);
        CHECK(w <= 4);
        CHECK(is_weekend(d) == (wd >= 5));
    }
}

TEST_CASE("holiday calendar file format") {
    std::istringstream in("\xEF\xBB\xBF# header\n2017-01-01\n\n  2017-01-09  # coming of age\r\n");
    const auto cal = HolidayCalendar::parse(in);
    CHECK(cal.size() == 2);
    CHECK(cal.contains(parse_date("2017-01-09")));
    std::istringstream bad("2017-13-01\n");
    CHECK_THROWS_AS(HolidayCalendar::parse(bad), DataError);
    CHECK_THROWS_AS(HolidayCalendar::load("/nonexistent/holidays.txt"), DataError);
}

TEST_CASE("HourBin range") {
    CHECK_THROWS(HourBin(24));
    CHECK_THROWS(HourBin(-1));
    CHECK(HourBin(23).value() == 23);
}
