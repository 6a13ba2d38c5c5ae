#include "mobility/trajectory_model.hpp"

#include <array>
#include <charconv>
#include <cstdio>
#include <cmath>
#include <fstream>
#include <istream>

#include "mobility/error.hpp"

namespace mobility {

namespace {

using namespace std::chrono;

bool parse_fixed_int(std::string_view text, int& out) {
    if (text.empty()) return false;
    for (char c : text)
        if (c < '0' || c > '9') return false;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
    return ec == std::errc{} && ptr == text.data() + text.size();
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::int64_t pow10(int e) {
    std::int64_t r = 1;
    while (e-- > 0) r *= 10;
    return r;
}

// Integer division rounding half away from zero.
std::int64_t div_round_half_away(std::int64_t value, std::int64_t divisor) {
    const std::int64_t mag = value < 0 ? -value : value;
    std::int64_t q = mag / divisor;
    if ((mag % divisor) * 2 >= divisor) ++q;
    return value < 0 ? -q : q;
}

}  // namespace

UtcOffset UtcOffset::parse(std::string_view text) {
    text = trim(text);
    if (text == "Z" || text == "z") return UtcOffset{};
    if (text.size() != 6 || (text[0] != '+' && text[0] != '-') || text[3] != ':')
        throw RecordError("invalid UTC offset '" + std::string(text) + "' (expected +HH:MM)");
    int hh = 0;
    int mm = 0;
    if (!parse_fixed_int(text.substr(1, 2), hh) || !parse_fixed_int(text.substr(4, 2), mm) || hh > 23 ||
        mm > 59)
        throw RecordError("invalid UTC offset '" + std::string(text) + "'");
    const int total = hh * 60 + mm;
    return UtcOffset{std::chrono::minutes{text[0] == '-' ? -total : total}};
}

std::string UtcOffset::to_string() const {
    const auto total = minutes.count();
    const auto mag = total < 0 ? -total : total;
    char buf[8];
    std::snprintf(buf, sizeof buf, "%c%02d:%02d", total < 0 ? '-' : '+', static_cast<int>(mag / 60),
                  static_cast<int>(mag % 60));
    return buf;
}

HourBin::HourBin(int value) : value_(value) {
    if (value < 0 || value >= kCount) throw std::out_of_range("hour bin out of range: " + std::to_string(value));
}

std::int64_t parse_micro_degrees(std::string_view text) {
    text = trim(text);
    const std::string original(text);
    bool negative = false;
    if (!text.empty() && (text.front() == '-' || text.front() == '+')) {
        negative = text.front() == '-';
        text.remove_prefix(1);
    }
    const auto dot = text.find('.');
    const std::string_view whole = text.substr(0, dot);
    std::string_view frac = dot == std::string_view::npos ? std::string_view{} : text.substr(dot + 1);
    if (whole.empty() || whole.size() > 3 || frac.size() > 6 || (dot != std::string_view::npos && frac.empty()))
        throw RecordError("malformed coordinate '" + original + "'");
    int whole_value = 0;
    if (!parse_fixed_int(whole, whole_value)) throw RecordError("malformed coordinate '" + original + "'");
    int frac_value = 0;
    if (!frac.empty() && !parse_fixed_int(frac, frac_value))
        throw RecordError("malformed coordinate '" + original + "'");
    const std::int64_t micro =
        static_cast<std::int64_t>(whole_value) * kMicroPerDegree + frac_value * pow10(6 - static_cast<int>(frac.size()));
    return negative ? -micro : micro;
}

std::string format_micro_degrees(std::int64_t micro) {
    const std::int64_t mag = micro < 0 ? -micro : micro;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%s%lld.%06lld", micro < 0 ? "-" : "", static_cast<long long>(mag / kMicroPerDegree),
                  static_cast<long long>(mag % kMicroPerDegree));
    return buf;
}

RoundedCoord round_coord(std::int64_t lat_micro, std::int64_t lon_micro, int decimals) {
    if (decimals < 0 || decimals > 6) throw UsageError("rounding decimals must be in [0, 6]");
    if (lat_micro < -90 * kMicroPerDegree || lat_micro > 90 * kMicroPerDegree)
        throw RecordError("latitude out of range: " + format_micro_degrees(lat_micro));
    if (lon_micro < -180 * kMicroPerDegree || lon_micro > 180 * kMicroPerDegree)
        throw RecordError("longitude out of range: " + format_micro_degrees(lon_micro));
    const std::int64_t divisor = pow10(6 - decimals);
    return RoundedCoord{static_cast<std::int32_t>(div_round_half_away(lat_micro, divisor)),
                        static_cast<std::int32_t>(div_round_half_away(lon_micro, divisor))};
}

RoundedCoord round_coord_degrees(double lat, double lon, int decimals) {
    if (!std::isfinite(lat) || !std::isfinite(lon)) throw RecordError("non-finite coordinate");
    if (std::fabs(lat) > 90.0 || std::fabs(lon) > 180.0)
        throw RecordError("coordinate out of range: (" + std::to_string(lat) + ", " + std::to_string(lon) + ")");
    return round_coord(static_cast<std::int64_t>(std::llround(lat * 1e6)), static_cast<std::int64_t>(std::llround(lon * 1e6)), decimals);
}

LocalDate parse_date(std::string_view text) {
    text = trim(text);
    int y = 0;
    int m = 0;
    int d = 0;
    if (text.size() != 10 || text[4] != '-' || text[7] != '-' || !parse_fixed_int(text.substr(0, 4), y) ||
        !parse_fixed_int(text.substr(5, 2), m) || !parse_fixed_int(text.substr(8, 2), d))
        throw RecordError("malformed date '" + std::string(text) + "' (expected YYYY-MM-DD)");
    const year_month_day ymd{year{y}, month{static_cast<unsigned>(m)}, day{static_cast<unsigned>(d)}};
    if (!ymd.ok()) throw RecordError("invalid calendar date '" + std::string(text) + "'");
    return sys_days{ymd};
}

std::string format_date(LocalDate date) {
    const year_month_day ymd{date};
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()), static_cast<unsigned>(ymd.month()),
                  static_cast<unsigned>(ymd.day()));
    return buf;
}

Instant parse_timestamp(std::string_view text) {
    text = trim(text);
    if (text.size() < 20 || (text[10] != 'T' && text[10] != ' ') || text[13] != ':' || text[16] != ':')
        throw RecordError("malformed timestamp '" + std::string(text) + "'");
    const LocalDate date = parse_date(text.substr(0, 10));
    int hh = 0;
    int mm = 0;
    int ss = 0;
    if (!parse_fixed_int(text.substr(11, 2), hh) || !parse_fixed_int(text.substr(14, 2), mm) ||
        !parse_fixed_int(text.substr(17, 2), ss) || hh > 23 || mm > 59 || ss > 59)
        throw RecordError("malformed timestamp '" + std::string(text) + "'");
    const auto offset = UtcOffset::parse(text.substr(19));
    const auto local = date + hours{hh} + minutes{mm} + seconds{ss};
    return Instant{local - offset.minutes};
}

std::string format_timestamp(Instant instant, UtcOffset offset) {
    const auto local = instant + offset.minutes;
    const auto date = floor<days>(local);
    const hh_mm_ss<seconds> tod{local - date};
    char buf[24];
    std::snprintf(buf, sizeof buf, "T%02d:%02d:%02d", static_cast<int>(tod.hours().count()),
                  static_cast<int>(tod.minutes().count()), static_cast<int>(tod.seconds().count()));
    return format_date(date) + buf + offset.to_string();
}

LocalTime localize(Instant instant, UtcOffset offset) {
    const auto local = instant + offset.minutes;
    const auto date = floor<days>(local);
    const auto hour = duration_cast<hours>(local - date);
    return LocalTime{date, HourBin{static_cast<int>(hour.count())}};
}

Weekday day_of_week(LocalDate date) {
    // iso_encoding: Monday = 1 ... Sunday = 7
    return static_cast<Weekday>(weekday{date}.iso_encoding() - 1);
}

bool is_weekend(LocalDate date) {
    const auto wd = day_of_week(date);
    return wd == Weekday::Saturday || wd == Weekday::Sunday;
}

int day_of_month(LocalDate date) { return static_cast<int>(static_cast<unsigned>(year_month_day{date}.day())); }

int week_of_month(LocalDate date) {
    const int week = (day_of_month(date) - 1) / 7 + 1;
    return week > 4 ? 4 : week;
}

HolidayCalendar HolidayCalendar::parse(std::istream& in) {
    std::set<LocalDate> dates;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view view = line;
        if (line_no == 1 && view.substr(0, 3) == "\xEF\xBB\xBF") view.remove_prefix(3);
        if (const auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
        view = trim(view);
        if (view.empty()) continue;
        try {
            dates.insert(parse_date(view));
        } catch (const RecordError& e) {
            throw DataError("holiday calendar line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return HolidayCalendar{std::move(dates)};
}

HolidayCalendar HolidayCalendar::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open holiday calendar '" + path.string() + "'");
    return parse(in);
}

bool is_holiday(LocalDate date, const HolidayCalendar& calendar) { return calendar.contains(date); }

}  // namespace mobility
