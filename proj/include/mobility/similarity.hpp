#pragma once

// Lifestyle similarity between the learn and test halves of one user's
// trajectory. The learn half becomes a per-hour template of visit
// frequencies; every (date, hour) cell of the test half contributes the
// template weight of its representative coordinate.

#include <array>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mobility/ingestion.hpp"
#include "mobility/rational.hpp"
#include "mobility/trajectory_model.hpp"

namespace mobility {

struct TemplateBin {
    std::map<RoundedCoord, std::uint32_t> counts;
    std::uint32_t total = 0;

    // count / total, or nullopt when the coordinate never occurs in this bin.
    std::optional<Rational> weight(RoundedCoord coord) const;
};

class HourlyTemplate {
public:
    const TemplateBin& bin(HourBin hour) const { return bins_[static_cast<std::size_t>(hour.value())]; }
    TemplateBin& bin(HourBin hour) { return bins_[static_cast<std::size_t>(hour.value())]; }

private:
    std::array<TemplateBin, HourBin::kCount> bins_;
};

struct DayHour {
    LocalDate date;
    HourBin hour;

    friend auto operator<=>(const DayHour&, const DayHour&) = default;
};

using DailyRepresentatives = std::map<DayHour, RoundedCoord>;

struct CellScore {
    DayHour cell;
    RoundedCoord representative;
    std::uint32_t matched_count = 0;  // occurrences of the representative in the template bin
    std::uint32_t bin_total = 0;      // size of the template bin

    bool matched() const noexcept { return matched_count != 0; }
    Rational weight() const { return bin_total == 0 ? Rational{} : Rational{matched_count, bin_total}; }
};

struct SimilarityScore {
    std::vector<CellScore> cells;  // ordered by (date, hour)
    // Per hour bin: summed matched counts over all test dates, and template bin size.
    std::array<std::uint64_t, HourBin::kCount> matched_counts{};
    std::array<std::uint32_t, HourBin::kCount> bin_totals{};

    double total() const;
    // Exact sum, or nullopt if it does not fit in 64-bit fractions.
    std::optional<Rational> exact_total() const;
    std::size_t matched_cells() const;
    std::size_t test_dates() const;
};

HourlyTemplate build_template(std::span<const TrajectoryPoint> learn);

// Most frequent coordinate per (date, hour); ties go to the coordinate seen first.
DailyRepresentatives extract_representatives(std::span<const TrajectoryPoint> test);

SimilarityScore match_score(const HourlyTemplate& tmpl, const DailyRepresentatives& reps);

struct UserScore {
    std::string user_id;
    double score = 0.0;
    std::size_t n_test_dates = 0;
    std::size_t n_matched_cells = 0;
};

}  // namespace mobility
