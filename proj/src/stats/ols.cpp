#include <algorithm>
#include <cmath>
#include <numeric>

#include "mobility/error.hpp"
#include "mobility/stats.hpp"

namespace mobility::stats {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm2(std::span<const double> a) {
    // scaled to avoid overflow on wild inputs
    double scale = 0.0;
    for (double v : a) scale = std::max(scale, std::fabs(v));
    if (scale == 0.0) return 0.0;
    double s = 0.0;
    for (double v : a) s += (v / scale) * (v / scale);
    return scale * std::sqrt(s);
}

}  // namespace

DesignMatrix::DesignMatrix(std::size_t rows, std::vector<std::string> labels)
    : rows_(rows), labels_(std::move(labels)), data_(rows_ * labels_.size(), 0.0) {}

DesignMatrix DesignMatrix::select_columns(std::span<const std::size_t> columns) const {
    std::vector<std::string> labels;
    for (auto j : columns) labels.push_back(labels_.at(j));
    DesignMatrix out(rows_, std::move(labels));
    for (std::size_t k = 0; k < columns.size(); ++k)
        std::copy_n(data_.begin() + static_cast<std::ptrdiff_t>(columns[k] * rows_), rows_,
                    out.data_.begin() + static_cast<std::ptrdiff_t>(k * rows_));
    return out;
}

DesignMatrix DesignMatrix::select_rows(std::span<const std::size_t> rows) const {
    DesignMatrix out(rows.size(), labels_);
    for (std::size_t j = 0; j < cols(); ++j)
        for (std::size_t k = 0; k < rows.size(); ++k) out(k, j) = (*this)(rows[k], j);
    return out;
}

RegressionFit ols_fit(const DesignMatrix& x, std::span<const double> y) {
    const std::size_t n = x.rows();
    const std::size_t m = x.cols() + 1;
    if (y.size() != n) throw DataError("response length does not match design rows");
    if (n < m + 1)
        throw InsufficientData("least squares needs at least " + std::to_string(m + 1) + " rows for " +
                               std::to_string(m) + " parameters, got " + std::to_string(n));
    for (double v : y)
        if (!std::isfinite(v)) throw DataError("non-finite response value");

    // a = [1 | X], column-major, reduced in place to R (upper) + reflectors (lower).
    std::vector<double> a(n * m);
    std::fill_n(a.begin(), n, 1.0);
    for (std::size_t j = 0; j < x.cols(); ++j) {
        const auto col = x.column(j);
        for (std::size_t i = 0; i < n; ++i) {
            if (!std::isfinite(col[i])) throw DataError("non-finite value in column '" + x.labels()[j] + "'");
            a[(j + 1) * n + i] = col[i];
        }
    }
    const auto column = [&](std::size_t j, std::size_t from = 0) {
        return std::span<double>(a.data() + j * n + from, n - from);
    };

    std::vector<std::size_t> perm(m);
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<double> qty(y.begin(), y.end());
    std::vector<double> diag(m);
    double largest_pivot = 0.0;

    for (std::size_t k = 0; k < m; ++k) {
        // Pivot: largest remaining column norm (recomputed, no downdating).
        std::size_t best = k;
        double best_norm = -1.0;
        for (std::size_t j = k; j < m; ++j) {
            const double nj = norm2(column(j, k));
            if (nj > best_norm) {
                best_norm = nj;
                best = j;
            }
        }
        if (best != k) {
            std::swap_ranges(column(k).begin(), column(k).end(), column(best).begin());
            std::swap(perm[k], perm[best]);
        }
        if (k == 0) largest_pivot = best_norm;
        if (best_norm <= kRankTolerance * largest_pivot) {
            std::vector<std::string> offending;
            std::vector<std::size_t> rest(perm.begin() + static_cast<std::ptrdiff_t>(k), perm.end());
            std::sort(rest.begin(), rest.end());
            for (auto j : rest) offending.push_back(j == 0 ? kInterceptLabel : x.labels()[j - 1]);
            std::string names;
            for (const auto& s : offending) names += (names.empty() ? "" : ", ") + s;
            throw RankDeficient("design matrix is rank deficient; dependent columns: " + names, offending);
        }

        // Householder reflector v with v[0] = 1 implied, H = I - tau v v^T.
        auto v = column(k, k);
        const double alpha = v[0] >= 0 ? -best_norm : best_norm;
        const double v0 = v[0] - alpha;
        for (std::size_t i = 1; i < v.size(); ++i) v[i] /= v0;
        const double tau = -v0 / alpha;
        v[0] = 1.0;
        diag[k] = alpha;

        const auto apply = [&](std::span<double> target) {
            const double s = tau * dot(v, target);
            for (std::size_t i = 0; i < target.size(); ++i) target[i] -= s * v[i];
        };
        for (std::size_t j = k + 1; j < m; ++j) apply(column(j, k));
        apply(std::span<double>(qty.data() + k, n - k));
    }

    // R(i, j) = a[j * n + i] for i < j, diag on the diagonal.
    const auto r = [&](std::size_t i, std::size_t j) { return i == j ? diag[i] : a[j * n + i]; };

    std::vector<double> coef_pivoted(m);
    for (std::size_t ii = m; ii-- > 0;) {
        double s = qty[ii];
        for (std::size_t j = ii + 1; j < m; ++j) s -= r(ii, j) * coef_pivoted[j];
        coef_pivoted[ii] = s / r(ii, ii);
    }

    // R^-1 column by column; diag((M^T M)^-1) = row sums of squares of R^-1.
    std::vector<double> rinv(m * m, 0.0);  // row-major
    for (std::size_t col = 0; col < m; ++col) {
        for (std::size_t ii = col + 1; ii-- > 0;) {
            double s = ii == col ? 1.0 : 0.0;
            for (std::size_t j = ii + 1; j <= col; ++j) s -= r(ii, j) * rinv[j * m + col];
            rinv[ii * m + col] = s / r(ii, ii);
        }
    }

    RegressionFit fit;
    fit.n = n;
    fit.dof = n - m;
    fit.labels.reserve(m);
    fit.labels.emplace_back(kInterceptLabel);
    for (const auto& l : x.labels()) fit.labels.push_back(l);
    fit.coefficients.assign(m, 0.0);
    fit.unscaled_variance.assign(m, 0.0);
    for (std::size_t ii = 0; ii < m; ++ii) {
        fit.coefficients[perm[ii]] = coef_pivoted[ii];
        double s = 0.0;
        for (std::size_t j = ii; j < m; ++j) s += rinv[ii * m + j] * rinv[ii * m + j];
        fit.unscaled_variance[perm[ii]] = s;
    }

    fit.residuals.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        double pred = fit.coefficients[0];
        for (std::size_t j = 0; j < x.cols(); ++j) pred += fit.coefficients[j + 1] * x(i, j);
        fit.residuals[i] = y[i] - pred;
    }
    fit.rss = dot(fit.residuals, fit.residuals);
    return fit;
}

std::vector<CoefficientInference> t_inference(const RegressionFit& fit, double confidence) {
    if (fit.dof == 0) throw InsufficientData("t inference needs at least one residual degree of freedom");
    if (!(confidence > 0.0 && confidence < 1.0)) throw UsageError("confidence must be in (0, 1)");
    const double dof = static_cast<double>(fit.dof);
    const double sigma2 = fit.rss / dof;
    const double tcrit = student_t_quantile(0.5 + confidence / 2.0, dof);

    std::vector<CoefficientInference> out;
    out.reserve(fit.coefficients.size());
    for (std::size_t j = 0; j < fit.coefficients.size(); ++j) {
        CoefficientInference ci;
        ci.label = fit.labels[j];
        ci.coef = fit.coefficients[j];
        ci.se = std::sqrt(sigma2 * fit.unscaled_variance[j]);
        if (ci.se > 0.0) {
            ci.t = ci.coef / ci.se;
            ci.p = std::min(1.0, 2.0 * student_t_sf(std::fabs(ci.t), dof));
        } else {
            // exact fit: the estimate carries no sampling error
            ci.t = ci.coef == 0.0 ? 0.0 : std::copysign(INFINITY, ci.coef);
            ci.p = ci.coef == 0.0 ? 1.0 : 0.0;
        }
        ci.ci_low = ci.coef - tcrit * ci.se;
        ci.ci_high = ci.coef + tcrit * ci.se;
        out.push_back(std::move(ci));
    }
    return out;
}

std::vector<std::size_t> find_aliased_columns(const DesignMatrix& x, std::span<const std::size_t> admission_order) {
    const std::size_t n = x.rows();
    std::vector<std::vector<double>> basis;  // orthonormal
    {
        std::vector<double> ones(n, 1.0 / std::sqrt(static_cast<double>(n)));
        basis.push_back(std::move(ones));
    }
    std::vector<bool> seen(x.cols(), false);
    std::vector<std::size_t> aliased;
    for (auto j : admission_order) {
        if (j >= x.cols() || seen[j]) throw UsageError("admission order must list each column once");
        seen[j] = true;
        const auto col = x.column(j);
        std::vector<double> v(col.begin(), col.end());
        const double original = norm2(v);
        // two Gram-Schmidt passes keep the residual orthogonal in floating point
        for (int pass = 0; pass < 2; ++pass)
            for (const auto& q : basis) {
                const double s = dot(q, v);
                for (std::size_t i = 0; i < n; ++i) v[i] -= s * q[i];
            }
        const double remaining = norm2(v);
        if (original == 0.0 || remaining <= kRankTolerance * original) {
            aliased.push_back(j);
            continue;
        }
        for (double& e : v) e /= remaining;
        basis.push_back(std::move(v));
    }
    for (std::size_t j = 0; j < x.cols(); ++j)
        if (!seen[j]) throw UsageError("admission order must cover every column");
    std::sort(aliased.begin(), aliased.end());
    return aliased;
}

AliasedFit ols_fit_dropping_aliased(const DesignMatrix& x, std::span<const double> y,
                                    std::span<const std::size_t> admission_order) {
    AliasedFit out;
    out.aliased = find_aliased_columns(x, admission_order);
    for (std::size_t j = 0; j < x.cols(); ++j)
        if (!std::binary_search(out.aliased.begin(), out.aliased.end(), j)) out.kept.push_back(j);
    out.fit = ols_fit(out.aliased.empty() ? x : x.select_columns(out.kept), y);
    return out;
}

}  // namespace mobility::stats
