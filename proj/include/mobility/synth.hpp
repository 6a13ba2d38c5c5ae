#pragma once

// Seeded synthetic GPS traces with controllable day-level habit effects.
//
// Every user has a fixed habitual grid cell per hour bin. On each observed
// day the probability of following the habit is
//     clamp(base_habit_prob + sum of effects whose indicator holds that day, 0, 1)
// and each hour bin independently either stays at the habitual cell, jumps to
// a uniformly random novel cell (probability `noise` among the non-habit
// bins), or visits one of the user's other locations.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "mobility/ingestion.hpp"
#include "mobility/trajectory_model.hpp"

namespace mobility {

struct SynthConfig {
    std::size_t n_users = 100;
    LocalDate start_date = parse_date("2017-04-03");
    LocalDate end_date = parse_date("2017-05-28");  // inclusive
    int cadence_minutes = 5;
    int locations_per_user = 3;
    double base_habit_prob = 0.6;
    std::map<std::string, double> effects;  // feature name -> habit probability delta
    double noise = 0.2;
    std::uint64_t seed = 1;
    // Days without any record, drawn inside each half of the period (never the
    // first or last day, so every user's split point stays fixed).
    int missing_days_per_half = 0;
    // Each user's period is shifted by a uniform 0..stagger_days days.
    int stagger_days = 0;
    // 0 draws missing days uniformly. Above 0 each user weights every weekday
    // by 1 + skew * u, u uniform in [-1, 1], so some users skip certain
    // weekdays more often than others.
    double weekday_missing_skew = 0.0;
    UtcOffset timezone = kJapanStandardTime;

    // Throws UsageError describing the first invalid field.
    void validate() const;

    static SynthConfig from_json(std::istream& in);
    std::string to_json() const;
};

struct SynthUser {
    std::string user_id;
    std::vector<GpsRecord> records;  // strictly increasing timestamps
};

// Deterministic for a fixed config (seed included). Users are ordered by id.
std::vector<SynthUser> generate(const SynthConfig& config, const HolidayCalendar& calendar);

void write_synth_csv(std::ostream& out, const std::vector<SynthUser>& users, UtcOffset offset);

}  // namespace mobility
