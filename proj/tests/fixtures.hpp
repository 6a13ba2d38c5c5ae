#pragma once

// Constructed datasets for the outlier search.

#include <algorithm>
#include <array>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "mobility/features.hpp"
#include "mobility/stats.hpp"

namespace testing {

struct PlantedFixture {
    mobility::Dataset dataset;
    std::vector<std::size_t> candidate_rows;              // 8 rows, each extreme in one feature
    std::vector<std::vector<std::size_t>> planted;        // expected minimal removal sets
};

inline std::string fixture_id(std::size_t i) {
    return (i < 10 ? "s0" : "s") + std::to_string(i);
}

// Rows whose residual noise is a shuffled set of normal quantiles, plus eight
// candidates, four sharing an extreme value in each of the first two
// features. `shocks` maps a candidate index in [0, 8) to its residual; the
// other candidates draw from the quantiles like everyone else.
inline PlantedFixture shocked_fixture(std::uint64_t seed, const std::map<std::size_t, double>& shocks,
                                      std::size_t n = 60) {
    std::mt19937_64 rng(seed);
    const std::vector<std::size_t> cand{3, 9, 14, 22, 30, 37, 45, 51};
    std::vector<double> noise;
    const std::size_t regular = n - shocks.size();
    for (std::size_t i = 1; i <= regular; ++i)
        noise.push_back(mobility::stats::normal_quantile((static_cast<double>(i) - 0.5) / static_cast<double>(regular)));
    std::shuffle(noise.begin(), noise.end(), rng);

    std::array<double, mobility::kFeatureCount> beta{};
    for (auto& b : beta) b = static_cast<double>(rng() % 7) - 3.0;

    std::vector<mobility::DatasetRow> rows;
    std::size_t next_noise = 0;
    for (std::size_t i = 0; i < n; ++i) {
        mobility::DatasetRow r;
        r.user_id = fixture_id(i);
        for (auto& c : r.features.counts) c = static_cast<int>(rng() % 5);
        // a wide spread in the two grouped columns keeps candidate leverage low
        r.features.counts[0] = static_cast<int>(rng() % 15);
        r.features.counts[1] = static_cast<int>(rng() % 15);
        const auto pos = std::find(cand.begin(), cand.end(), i);
        double e = 0.0;
        if (pos != cand.end()) {
            const auto k = static_cast<std::size_t>(pos - cand.begin());
            r.features.counts[k / 4] = 40;
            const auto shock = shocks.find(k);
            e = shock != shocks.end() ? shock->second : noise[next_noise++];
        } else {
            e = noise[next_noise++];
        }
        double y = 50.0;
        for (std::size_t j = 0; j < mobility::kFeatureCount; ++j) y += beta[j] * r.features.counts[j];
        r.features.score = y + e;
        rows.push_back(std::move(r));
    }
    PlantedFixture f;
    f.dataset = mobility::assemble_dataset(std::move(rows));
    f.candidate_rows = cand;
    return f;
}

// Two large shocks and two moderate ones of the same sign: the smallest
// passing removals are both large ones plus either moderate one.
inline PlantedFixture planted_fixture() {
    auto f = shocked_fixture(229, {{1, 14.0}, {4, -14.0}, {2, 5.5}, {6, 5.5}});
    const auto& c = f.candidate_rows;
    f.planted = {{c[1], c[2], c[4]}, {c[1], c[4], c[6]}};
    return f;
}

}  // namespace testing
