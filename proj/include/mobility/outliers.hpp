#pragma once

// z-score outlier candidates and the ascending-k search for the smallest
// removal sets that make the regression residuals pass Jarque-Bera.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mobility/features.hpp"
#include "mobility/stats.hpp"

namespace mobility {

// Design matrix of `score ~ wdays + mquar + hdays` over the given rows.
stats::DesignMatrix factor_design(const Dataset& dataset, std::span<const std::size_t> rows);

// Order in which feature columns are admitted when exact dependencies are
// resolved: wknd, natl, wk4 ... wk1, sun ... mon. Within each collinear group
// the earliest column becomes the dropped reference level.
std::vector<std::size_t> factor_admission_order();

struct FactorFit {
    std::vector<std::size_t> rows;  // dataset rows used
    stats::AliasedFit model;
    std::optional<stats::NormalityResult> normality;  // empty when residuals are degenerate
};

// OLS on every row not in `excluded`, then Jarque-Bera on its residuals.
// Throws InsufficientData when too few rows remain.
FactorFit refit_excluding(const Dataset& dataset, std::span<const std::size_t> excluded);

struct CandidateTrigger {
    std::size_t feature = 0;
    double z = 0.0;
};

struct Candidate {
    std::size_t row = 0;
    std::string user_id;
    std::vector<CandidateTrigger> triggers;
};

struct CandidateSet {
    double threshold = 3.0;
    std::vector<Candidate> members;  // ascending row

    std::vector<std::size_t> rows() const;
};

// Rows with any feature |z| strictly above `threshold`. The score column is
// not considered.
CandidateSet find_candidates(const Dataset& dataset, double threshold);

struct SearchOptions {
    double alpha = 0.05;
    std::size_t max_k = 5;
};

struct CombinationResult {
    std::vector<std::size_t> rows;
    std::optional<stats::NormalityResult> normality;
    std::string error;  // set when the refit or the test could not be computed
    bool passed = false;
};

struct OutlierSearchResult {
    double threshold = 0.0;
    double alpha = 0.05;
    std::size_t candidate_count = 0;
    bool passed = false;
    std::size_t k_found = 0;
    std::vector<CombinationResult> solutions;
    // Non-empty combinations refitted (the full-data test is not counted).
    std::size_t combinations_examined = 0;
    CombinationResult full_data;
    // Highest p-value seen, reported when nothing passes.
    std::optional<CombinationResult> best;
    // Every evaluation in order, the full-data test first.
    std::vector<CombinationResult> log;
};

// Tests k = 0, 1, ... in ascending order, every k-combination of the
// candidates in lexicographic order, and stops after the first k with a
// passing combination (p >= alpha), returning all passing ones at that k.
OutlierSearchResult search_minimal_removals(const Dataset& dataset, const CandidateSet& candidates,
                                            const SearchOptions& options = {});

}  // namespace mobility
