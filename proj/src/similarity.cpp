#include "mobility/similarity.hpp"

#include <set>
#include <stdexcept>

namespace mobility {

std::optional<Rational> TemplateBin::weight(RoundedCoord coord) const {
    const auto it = counts.find(coord);
    if (it == counts.end()) return std::nullopt;
    return Rational{it->second, total};
}

HourlyTemplate build_template(std::span<const TrajectoryPoint> learn) {
    HourlyTemplate tmpl;
    for (const auto& p : learn) {
        auto& bin = tmpl.bin(p.hour);
        ++bin.counts[p.coord];
        ++bin.total;
    }
    return tmpl;
}

DailyRepresentatives extract_representatives(std::span<const TrajectoryPoint> test) {
    struct Tally {
        RoundedCoord coord;
        std::uint32_t count;
    };
    // Tallies keep first-occurrence order, which is the tie-break.
    std::map<DayHour, std::vector<Tally>> cells;
    for (const auto& p : test) {
        auto& tallies = cells[DayHour{p.date, p.hour}];
        bool found = false;
        for (auto& t : tallies) {
            if (t.coord == p.coord) {
                ++t.count;
                found = true;
                break;
            }
        }
        if (!found) tallies.push_back(Tally{p.coord, 1});
    }

    DailyRepresentatives reps;
    for (const auto& [cell, tallies] : cells) {
        const Tally* best = &tallies.front();
        for (const auto& t : tallies)
            if (t.count > best->count) best = &t;
        reps.emplace(cell, best->coord);
    }
    return reps;
}

SimilarityScore match_score(const HourlyTemplate& tmpl, const DailyRepresentatives& reps) {
    SimilarityScore score;
    for (int h = 0; h < HourBin::kCount; ++h) score.bin_totals[static_cast<std::size_t>(h)] = tmpl.bin(HourBin{h}).total;

    score.cells.reserve(reps.size());
    for (const auto& [cell, coord] : reps) {
        const auto& bin = tmpl.bin(cell.hour);
        const auto it = bin.counts.find(coord);
        const std::uint32_t matched = it == bin.counts.end() ? 0 : it->second;
        score.cells.push_back(CellScore{cell, coord, matched, bin.total});
        score.matched_counts[static_cast<std::size_t>(cell.hour.value())] += matched;
    }
    return score;
}

double SimilarityScore::total() const {
    double sum = 0.0;
    for (std::size_t h = 0; h < matched_counts.size(); ++h)
        if (matched_counts[h] != 0) sum += static_cast<double>(matched_counts[h]) / static_cast<double>(bin_totals[h]);
    return sum;
}

std::optional<Rational> SimilarityScore::exact_total() const {
    try {
        Rational sum;
        for (std::size_t h = 0; h < matched_counts.size(); ++h)
            if (matched_counts[h] != 0)
                sum += Rational{static_cast<std::int64_t>(matched_counts[h]), static_cast<std::int64_t>(bin_totals[h])};
        return sum;
    } catch (const std::overflow_error&) {
        return std::nullopt;
    }
}

std::size_t SimilarityScore::matched_cells() const {
    std::size_t n = 0;
    for (const auto& c : cells) n += c.matched() ? 1 : 0;
    return n;
}

std::size_t SimilarityScore::test_dates() const {
    std::set<LocalDate> dates;
    for (const auto& c : cells) dates.insert(c.cell.date);
    return dates.size();
}

}  // namespace mobility
