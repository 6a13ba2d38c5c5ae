#include "mobility/outliers.hpp"

#include <algorithm>
#include <cmath>

#include "mobility/error.hpp"

namespace mobility {

stats::DesignMatrix factor_design(const Dataset& dataset, std::span<const std::size_t> rows) {
    stats::DesignMatrix x(rows.size(), std::vector<std::string>(kFeatureNames.begin(), kFeatureNames.end()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& counts = dataset.row(rows[i]).features.counts;
        for (std::size_t j = 0; j < kFeatureCount; ++j) x(i, j) = static_cast<double>(counts[j]);
    }
    return x;
}

std::vector<std::size_t> factor_admission_order() {
    std::vector<std::size_t> order(kFeatureCount);
    for (std::size_t j = 0; j < kFeatureCount; ++j) order[j] = kFeatureCount - 1 - j;
    return order;
}

FactorFit refit_excluding(const Dataset& dataset, std::span<const std::size_t> excluded) {
    FactorFit out;
    for (std::size_t i = 0; i < dataset.size(); ++i)
        if (std::find(excluded.begin(), excluded.end(), i) == excluded.end()) out.rows.push_back(i);
    if (out.rows.size() + excluded.size() != dataset.size()) throw UsageError("excluded rows are not dataset rows");
    if (out.rows.size() < kFeatureCount + 2)
        throw InsufficientData("only " + std::to_string(out.rows.size()) + " rows remain after exclusion");

    std::vector<double> y;
    y.reserve(out.rows.size());
    for (auto r : out.rows) y.push_back(dataset.row(r).features.score);
    const auto order = factor_admission_order();
    out.model = stats::ols_fit_dropping_aliased(factor_design(dataset, out.rows), y, order);
    try {
        out.normality = stats::jarque_bera(out.model.fit.residuals);
    } catch (const DataError&) {
        out.normality.reset();
    }
    return out;
}

std::vector<std::size_t> CandidateSet::rows() const {
    std::vector<std::size_t> out;
    for (const auto& m : members) out.push_back(m.row);
    return out;
}

CandidateSet find_candidates(const Dataset& dataset, double threshold) {
    if (!(threshold > 0.0)) throw UsageError("z-score threshold must be positive");
    std::vector<std::vector<double>> columns;
    for (std::size_t j = 0; j < kFeatureCount; ++j) columns.push_back(dataset.column(j));
    const auto z = stats::zscores(columns);

    CandidateSet set;
    set.threshold = threshold;
    for (std::size_t i = 0; i < z.rows; ++i) {
        Candidate c{i, dataset.row(i).user_id, {}};
        for (std::size_t j = 0; j < z.cols; ++j)
            if (std::fabs(z.at(i, j)) > threshold) c.triggers.push_back(CandidateTrigger{j, z.at(i, j)});
        if (!c.triggers.empty()) set.members.push_back(std::move(c));
    }
    return set;
}

namespace {

CombinationResult evaluate(const Dataset& dataset, std::vector<std::size_t> rows, double alpha) {
    CombinationResult r;
    r.rows = std::move(rows);
    try {
        const auto fit = refit_excluding(dataset, r.rows);
        r.normality = fit.normality;
        if (!fit.normality) r.error = "residuals have zero variance";
    } catch (const Error& e) {
        r.error = e.what();
    }
    r.passed = r.normality && r.normality->p_value >= alpha;
    return r;
}

bool better(const CombinationResult& a, const std::optional<CombinationResult>& b) {
    if (!a.normality) return false;
    return !b || !b->normality || a.normality->p_value > b->normality->p_value;
}

// Advances `idx` to the next k-combination of [0, n) in lexicographic order.
bool next_combination(std::vector<std::size_t>& idx, std::size_t n) {
    const std::size_t k = idx.size();
    for (std::size_t i = k; i-- > 0;) {
        if (idx[i] < n - k + i) {
            ++idx[i];
            for (std::size_t j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
            return true;
        }
    }
    return false;
}

}  // namespace

OutlierSearchResult search_minimal_removals(const Dataset& dataset, const CandidateSet& candidates,
                                            const SearchOptions& options) {
    if (!(options.alpha > 0.0 && options.alpha < 1.0)) throw UsageError("alpha must be in (0, 1)");
    OutlierSearchResult result;
    result.threshold = candidates.threshold;
    result.alpha = options.alpha;
    result.candidate_count = candidates.members.size();

    const auto record = [&](CombinationResult r) {
        if (better(r, result.best)) result.best = r;
        result.log.push_back(r);
        return r;
    };

    result.full_data = record(evaluate(dataset, {}, options.alpha));
    if (result.full_data.passed) {
        result.passed = true;
        result.k_found = 0;
        result.solutions.push_back(result.full_data);
        return result;
    }

    const auto members = candidates.rows();
    const std::size_t n = members.size();
    const std::size_t k_max = std::min(n, options.max_k);
    for (std::size_t k = 1; k <= k_max; ++k) {
        std::vector<std::size_t> idx(k);
        for (std::size_t i = 0; i < k; ++i) idx[i] = i;
        do {
            std::vector<std::size_t> rows(k);
            for (std::size_t i = 0; i < k; ++i) rows[i] = members[idx[i]];
            auto r = record(evaluate(dataset, std::move(rows), options.alpha));
            ++result.combinations_examined;
            if (r.passed) result.solutions.push_back(std::move(r));
        } while (next_combination(idx, n));
        if (!result.solutions.empty()) {
            result.passed = true;
            result.k_found = k;
            return result;
        }
    }
    return result;
}

}  // namespace mobility
