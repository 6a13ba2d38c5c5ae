#include "mobility/features.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <set>

#include "mobility/error.hpp"
#include "mobility/stats.hpp"
#include "mobility/text_io.hpp"

namespace mobility {

int feature_index(std::string_view name) {
    for (std::size_t i = 0; i < kFeatureNames.size(); ++i)
        if (kFeatureNames[i] == name) return static_cast<int>(i);
    return -1;
}

std::vector<LocalDate> distinct_dates(std::span<const TrajectoryPoint> points) {
    std::set<LocalDate> dates;
    for (const auto& p : points) dates.insert(p.date);
    return {dates.begin(), dates.end()};
}

FeatureVector extract_features(std::span<const LocalDate> dates, const HolidayCalendar& calendar) {
    const std::set<LocalDate> unique(dates.begin(), dates.end());
    if (unique.empty()) throw InsufficientData("no test dates to extract features from");
    FeatureVector fv;
    for (const auto date : unique) {
        ++fv.counts[static_cast<std::size_t>(day_of_week(date))];
        ++fv.counts[static_cast<std::size_t>(Feature::Wk1) + static_cast<std::size_t>(week_of_month(date) - 1)];
        if (is_holiday(date, calendar)) ++fv[Feature::Natl];
        if (is_weekend(date)) ++fv[Feature::Wknd];
    }
    return fv;
}

std::vector<double> Dataset::column(std::size_t j) const {
    if (j > kFeatureCount) throw std::out_of_range("dataset column out of range");
    std::vector<double> out;
    out.reserve(rows_.size());
    for (const auto& r : rows_)
        out.push_back(j == kFeatureCount ? r.features.score : static_cast<double>(r.features.counts[j]));
    return out;
}

Dataset assemble_dataset(std::vector<DatasetRow> rows) {
    std::sort(rows.begin(), rows.end(), [](const DatasetRow& a, const DatasetRow& b) { return a.user_id < b.user_id; });
    for (std::size_t i = 1; i < rows.size(); ++i)
        if (rows[i].user_id == rows[i - 1].user_id) throw DataError("duplicate user_id '" + rows[i].user_id + "'");
    Dataset ds;
    ds.rows_ = std::move(rows);
    return ds;
}

std::vector<ColumnSummary> describe(const Dataset& dataset) {
    if (dataset.size() < 2) throw InsufficientData("describe needs at least 2 rows");
    std::vector<ColumnSummary> out;
    for (std::size_t j = 0; j <= kFeatureCount; ++j) {
        const auto col = dataset.column(j);
        const auto m = stats::moments(col);
        const auto [lo, hi] = std::minmax_element(col.begin(), col.end());
        out.push_back(ColumnSummary{j == kFeatureCount ? "score" : std::string(kFeatureNames[j]), m.mean, m.sd,
                                    m.kurtosis, m.skew, *lo, *hi});
    }
    return out;
}

void write_features_csv(std::ostream& out, const Dataset& dataset) {
    out << kFeaturesHeader << '\n';
    for (const auto& r : dataset.rows()) {
        out << r.user_id;
        for (int c : r.features.counts) out << ',' << c;
        out << ',' << format_number(r.features.score) << '\n';
    }
}

Dataset read_features_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || split_csv(line) != split_csv(kFeaturesHeader))
        throw DataError(std::string("features file must start with header '") + kFeaturesHeader + "'");
    std::vector<DatasetRow> rows;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        const auto fields = split_csv(line);
        if (fields.size() != kFeatureCount + 2)
            throw DataError("features line " + std::to_string(line_no) + ": expected " +
                            std::to_string(kFeatureCount + 2) + " fields");
        DatasetRow row;
        row.user_id = std::string(fields[0]);
        try {
            for (std::size_t j = 0; j < kFeatureCount; ++j) {
                const auto v = parse_integer(fields[j + 1]);
                if (v < 0) throw DataError("negative count");
                row.features.counts[j] = static_cast<int>(v);
            }
            row.features.score = parse_number(fields[kFeatureCount + 1]);
        } catch (const DataError& e) {
            throw DataError("features line " + std::to_string(line_no) + ": " + e.what());
        }
        rows.push_back(std::move(row));
    }
    return assemble_dataset(std::move(rows));
}

void write_describe_csv(std::ostream& out, const std::vector<ColumnSummary>& summary) {
    out << "variable,mean,sd,kurtosis,skew,min,max\n";
    for (const auto& s : summary)
        out << s.name << ',' << format_number(s.mean) << ',' << format_number(s.sd) << ',' << format_number(s.kurtosis)
            << ',' << format_number(s.skew) << ',' << format_number(s.min) << ',' << format_number(s.max) << '\n';
}

}  // namespace mobility
