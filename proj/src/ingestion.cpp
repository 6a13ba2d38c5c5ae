#include "mobility/ingestion.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <string_view>
#include <tuple>

#include "mobility/error.hpp"

namespace mobility {

namespace {

std::string_view strip_cr(std::string_view s) {
    if (!s.empty() && s.back() == '\r') s.remove_suffix(1);
    return s;
}

bool split_fields(std::string_view line, std::string_view (&fields)[4]) {
    std::size_t start = 0;
    for (int i = 0; i < 4; ++i) {
        const auto comma = line.find(',', start);
        if (i < 3) {
            if (comma == std::string_view::npos) return false;
            fields[i] = line.substr(start, comma - start);
            start = comma + 1;
        } else {
            if (comma != std::string_view::npos) return false;
            fields[i] = line.substr(start);
        }
    }
    return true;
}

}  // namespace

UserTrajectory build_trajectory(std::string user_id, std::vector<GpsRecord> records, const IngestOptions& options,
                                std::size_t* duplicates_removed) {
    const auto key = [](const GpsRecord& r) { return std::tie(r.timestamp, r.lat_micro, r.lon_micro); };
    std::sort(records.begin(), records.end(), [&](const GpsRecord& a, const GpsRecord& b) { return key(a) < key(b); });
    const auto last = std::unique(records.begin(), records.end(),
                                  [&](const GpsRecord& a, const GpsRecord& b) { return key(a) == key(b); });
    if (duplicates_removed) *duplicates_removed += static_cast<std::size_t>(records.end() - last);
    records.erase(last, records.end());

    UserTrajectory traj;
    traj.user_id = std::move(user_id);
    traj.points.reserve(records.size());
    for (const auto& r : records) {
        const auto local = localize(r.timestamp, options.timezone);
        traj.points.push_back(TrajectoryPoint{r.timestamp, local.date, local.hour,
                                              round_coord(r.lat_micro, r.lon_micro, options.rounding_decimals),
                                              r.lat_micro, r.lon_micro});
    }
    return traj;
}

ParseResult parse_records(std::istream& in, const IngestOptions& options) {
    ParseResult result;
    std::string line;
    std::size_t line_no = 0;

    if (!std::getline(in, line)) throw DataError("input is empty: missing header '" + std::string(kRecordHeader) + "'");
    ++line_no;
    std::string_view header = strip_cr(line);
    if (header.substr(0, 3) == "\xEF\xBB\xBF") header.remove_prefix(3);
    if (header != kRecordHeader)
        throw DataError("missing or unexpected header (expected '" + std::string(kRecordHeader) + "')");

    std::map<std::string, std::vector<GpsRecord>> grouped;
    const auto reject = [&](std::string user, std::string message) {
        ++result.rows_rejected;
        result.diagnostics.push_back(Diagnostic{"ingest", line_no, std::move(user), std::move(message)});
    };

    while (std::getline(in, line)) {
        ++line_no;
        const std::string_view row = strip_cr(line);
        if (row.empty()) continue;
        ++result.rows_read;
        std::string_view fields[4];
        if (!split_fields(row, fields)) {
            reject("", "expected 4 comma-separated fields");
            continue;
        }
        const std::string user(fields[0]);
        if (user.empty()) {
            reject("", "empty user_id");
            continue;
        }
        try {
            GpsRecord rec{user, parse_timestamp(fields[1]), parse_micro_degrees(fields[2]),
                          parse_micro_degrees(fields[3])};
            round_coord(rec.lat_micro, rec.lon_micro, options.rounding_decimals);  // range check
            grouped[user].push_back(std::move(rec));
        } catch (const RecordError& e) {
            reject(user, e.what());
        }
    }

    if (grouped.empty()) throw DataError("no valid records in input");
    for (auto& [user, records] : grouped)
        result.users.emplace(user, build_trajectory(user, std::move(records), options, &result.duplicates_removed));
    return result;
}

SplitTrajectory split_learn_test(const UserTrajectory& trajectory) {
    const auto& pts = trajectory.points;
    if (pts.size() < 2) throw InsufficientData("user '" + trajectory.user_id + "' has fewer than two records");
    const auto first = pts.front().timestamp.time_since_epoch().count();
    const auto last = pts.back().timestamp.time_since_epoch().count();
    const auto span = last - first;
    if (span <= 0) throw InsufficientData("user '" + trajectory.user_id + "' spans zero duration");

    SplitTrajectory split;
    split.split_instant = static_cast<double>(first) + static_cast<double>(span) / 2.0;
    for (const auto& p : pts) {
        // learn iff t < first + span/2, compared in integers
        if (2 * (p.timestamp.time_since_epoch().count() - first) < span)
            split.learn.push_back(p);
        else
            split.test.push_back(p);
    }
    if (split.learn.empty() || split.test.empty())
        throw InsufficientData("user '" + trajectory.user_id + "' has an empty learn or test half");
    return split;
}

void write_records(std::ostream& out, const std::map<std::string, UserTrajectory>& users, UtcOffset offset) {
    out << kRecordHeader << '\n';
    for (const auto& [user, traj] : users)
        for (const auto& p : traj.points)
            out << user << ',' << format_timestamp(p.timestamp, offset) << ',' << format_micro_degrees(p.lat_micro)
                << ',' << format_micro_degrees(p.lon_micro) << '\n';
}

}  // namespace mobility
