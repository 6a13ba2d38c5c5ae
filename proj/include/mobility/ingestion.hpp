#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "mobility/trajectory_model.hpp"

namespace mobility {

// One raw input row after validation.
struct GpsRecord {
    std::string user_id;
    Instant timestamp;
    std::int64_t lat_micro = 0;
    std::int64_t lon_micro = 0;

    friend bool operator==(const GpsRecord&, const GpsRecord&) = default;
};

// A record placed in the analysis timezone and snapped to the grid.
struct TrajectoryPoint {
    Instant timestamp;
    LocalDate date;
    HourBin hour;
    RoundedCoord coord;
    std::int64_t lat_micro = 0;
    std::int64_t lon_micro = 0;

    friend bool operator==(const TrajectoryPoint&, const TrajectoryPoint&) = default;
};

struct UserTrajectory {
    std::string user_id;
    std::vector<TrajectoryPoint> points;  // sorted by timestamp
};

struct SplitTrajectory {
    std::vector<TrajectoryPoint> learn;
    std::vector<TrajectoryPoint> test;
    // Midpoint of the observed span; may fall on a half second.
    double split_instant = 0.0;
};

struct Diagnostic {
    std::string stage;
    std::size_t line = 0;  // 0 when not tied to an input line
    std::string user_id;
    std::string message;
};

struct IngestOptions {
    UtcOffset timezone = kJapanStandardTime;
    int rounding_decimals = kDefaultRoundingDecimals;
};

struct ParseResult {
    std::map<std::string, UserTrajectory> users;
    std::vector<Diagnostic> diagnostics;
    std::size_t rows_read = 0;
    std::size_t rows_rejected = 0;
    std::size_t duplicates_removed = 0;
};

inline constexpr const char* kRecordHeader = "user_id,timestamp,latitude,longitude";

// Reads the `user_id,timestamp,latitude,longitude` CSV. Rejected rows are
// reported with their line number. Throws DataError when the header is
// missing or no row survives validation.
ParseResult parse_records(std::istream& in, const IngestOptions& options = {});

// Sorts, removes exact duplicates and localizes one user's records.
UserTrajectory build_trajectory(std::string user_id, std::vector<GpsRecord> records,
                                const IngestOptions& options = {}, std::size_t* duplicates_removed = nullptr);

// Records strictly before the span midpoint go to `learn`, the rest to `test`.
// Throws InsufficientData for a zero-length span or an empty half.
SplitTrajectory split_learn_test(const UserTrajectory& trajectory);

// Writes records in the input CSV format, timestamps rendered in `offset`.
void write_records(std::ostream& out, const std::map<std::string, UserTrajectory>& users, UtcOffset offset);

}  // namespace mobility
