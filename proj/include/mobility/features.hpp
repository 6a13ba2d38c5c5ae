#pragma once

#include <array>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mobility/ingestion.hpp"
#include "mobility/trajectory_model.hpp"

namespace mobility {

// Column order of the regression dataset: weekdays, weeks of month, holidays.
enum class Feature { Mon, Tue, Wed, Thu, Fri, Sat, Sun, Wk1, Wk2, Wk3, Wk4, Natl, Wknd };

inline constexpr std::size_t kFeatureCount = 13;
inline constexpr std::array<std::string_view, kFeatureCount> kFeatureNames = {
    "mon", "tue", "wed", "thu", "fri", "sat", "sun", "wk1", "wk2", "wk3", "wk4", "natl", "wknd"};

// Returns the feature index for a column name, or -1.
int feature_index(std::string_view name);

struct FeatureVector {
    std::array<int, kFeatureCount> counts{};
    double score = 0.0;

    int& operator[](Feature f) { return counts[static_cast<std::size_t>(f)]; }
    int operator[](Feature f) const { return counts[static_cast<std::size_t>(f)]; }

    friend bool operator==(const FeatureVector&, const FeatureVector&) = default;
};

// Sorted distinct dates among the points.
std::vector<LocalDate> distinct_dates(std::span<const TrajectoryPoint> points);

// Counts each distinct date once per indicator it satisfies. The score is
// left at zero; the pipeline attaches it. Throws InsufficientData for an
// empty date set.
FeatureVector extract_features(std::span<const LocalDate> dates, const HolidayCalendar& calendar);

struct DatasetRow {
    std::string user_id;
    FeatureVector features;
};

// One row per usable user, ordered by user_id.
class Dataset {
public:
    Dataset() = default;

    std::size_t size() const noexcept { return rows_.size(); }
    bool empty() const noexcept { return rows_.empty(); }
    const std::vector<DatasetRow>& rows() const noexcept { return rows_; }
    const DatasetRow& row(std::size_t i) const { return rows_.at(i); }

    // Column j in [0, 13) is a feature count; j == 13 is the score.
    std::vector<double> column(std::size_t j) const;
    std::vector<double> scores() const { return column(kFeatureCount); }

    friend Dataset assemble_dataset(std::vector<DatasetRow> rows);

private:
    std::vector<DatasetRow> rows_;
};

// Sorts by user_id; throws DataError on duplicate ids.
Dataset assemble_dataset(std::vector<DatasetRow> rows);

struct ColumnSummary {
    std::string name;
    double mean = 0.0;
    double sd = 0.0;
    double kurtosis = 0.0;  // raw, normal = 3; NaN for constant columns
    double skew = 0.0;      // NaN for constant columns
    double min = 0.0;
    double max = 0.0;
};

// Per-column statistics for the 13 features and the score. Needs >= 2 rows.
std::vector<ColumnSummary> describe(const Dataset& dataset);

inline constexpr const char* kFeaturesHeader = "user_id,mon,tue,wed,thu,fri,sat,sun,wk1,wk2,wk3,wk4,natl,wknd,score";

void write_features_csv(std::ostream& out, const Dataset& dataset);
Dataset read_features_csv(std::istream& in);
void write_describe_csv(std::ostream& out, const std::vector<ColumnSummary>& summary);

}  // namespace mobility
