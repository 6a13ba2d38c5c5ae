#pragma once

// Core value types shared by every pipeline stage: timestamps, calendar
// dates in the analysis timezone, hour bins and grid-rounded coordinates.

#include <chrono>
#include <compare>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <set>
#include <string>
#include <string_view>

namespace mobility {

// UTC instant at one-second resolution.
using Instant = std::chrono::sys_seconds;

// Calendar date in the analysis timezone, counted in days from 1970-01-01.
using LocalDate = std::chrono::sys_days;

// Fixed offset from UTC, e.g. +09:00.
struct UtcOffset {
    std::chrono::minutes minutes{0};

    static UtcOffset parse(std::string_view text);
    std::string to_string() const;

    friend bool operator==(const UtcOffset&, const UtcOffset&) = default;
};

inline constexpr UtcOffset kJapanStandardTime{std::chrono::minutes{9 * 60}};

// One of the 24 wall-clock hour periods 00:00-00:59 ... 23:00-23:59.
class HourBin {
public:
    static constexpr int kCount = 24;

    constexpr HourBin() = default;
    explicit HourBin(int value);

    constexpr int value() const noexcept { return value_; }

    friend constexpr auto operator<=>(const HourBin&, const HourBin&) = default;

private:
    int value_ = 0;
};

// Coordinate snapped to a decimal grid. With the default two decimals the
// components are integer centidegrees; integer equality is coordinate identity.
struct RoundedCoord {
    std::int32_t lat = 0;
    std::int32_t lon = 0;

    friend constexpr auto operator<=>(const RoundedCoord&, const RoundedCoord&) = default;
};

inline constexpr int kDefaultRoundingDecimals = 2;
inline constexpr std::int64_t kMicroPerDegree = 1'000'000;

// Exact decimal parse of "[-]ddd[.dddddd]" into integer micro-degrees.
// Throws RecordError on malformed text or more than six decimals.
std::int64_t parse_micro_degrees(std::string_view text);
std::string format_micro_degrees(std::int64_t micro);

// Scale to `decimals` places and round half away from zero. Throws RecordError
// when lat is outside [-90, 90] or lon outside [-180, 180].
RoundedCoord round_coord(std::int64_t lat_micro, std::int64_t lon_micro,
                         int decimals = kDefaultRoundingDecimals);
RoundedCoord round_coord_degrees(double lat, double lon, int decimals = kDefaultRoundingDecimals);

// ISO-8601 "YYYY-MM-DDTHH:MM:SS" followed by "Z" or "+HH:MM"/"-HH:MM".
Instant parse_timestamp(std::string_view text);
std::string format_timestamp(Instant instant, UtcOffset offset);

LocalDate parse_date(std::string_view text);
std::string format_date(LocalDate date);

struct LocalTime {
    LocalDate date;
    HourBin hour;

    friend auto operator<=>(const LocalTime&, const LocalTime&) = default;
};

LocalTime localize(Instant instant, UtcOffset offset = kJapanStandardTime);

enum class Weekday { Monday = 0, Tuesday, Wednesday, Thursday, Friday, Saturday, Sunday };

Weekday day_of_week(LocalDate date);
bool is_weekend(LocalDate date);

// Day-of-month blocks 1-7, 8-14, 15-21 and 22-end map to weeks 1..4.
int week_of_month(LocalDate date);
int day_of_month(LocalDate date);

// National holidays loaded from a text file: one YYYY-MM-DD per line,
// '#' starts a comment, blank lines ignored.
class HolidayCalendar {
public:
    HolidayCalendar() = default;
    explicit HolidayCalendar(std::set<LocalDate> dates) : dates_(std::move(dates)) {}

    static HolidayCalendar parse(std::istream& in);
    static HolidayCalendar load(const std::filesystem::path& path);

    bool contains(LocalDate date) const { return dates_.count(date) != 0; }
    std::size_t size() const noexcept { return dates_.size(); }
    const std::set<LocalDate>& dates() const noexcept { return dates_; }

private:
    std::set<LocalDate> dates_;
};

bool is_holiday(LocalDate date, const HolidayCalendar& calendar);

}  // namespace mobility
