#pragma once

// Numerical statistics used by the factor analysis: least squares with
// t-inference, Jarque-Bera residual normality, moments, z-scores and QQ data.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace mobility::stats {

// Pivots below this fraction of the largest pivot count as rank loss.
inline constexpr double kRankTolerance = 1e-10;

// n x p regressors, column-major. The intercept column is implicit.
class DesignMatrix {
public:
    DesignMatrix() = default;
    DesignMatrix(std::size_t rows, std::vector<std::string> labels);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return labels_.size(); }
    const std::vector<std::string>& labels() const noexcept { return labels_; }

    double& operator()(std::size_t i, std::size_t j) { return data_[j * rows_ + i]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[j * rows_ + i]; }
    std::span<const double> column(std::size_t j) const { return {data_.data() + j * rows_, rows_}; }

    DesignMatrix select_columns(std::span<const std::size_t> columns) const;
    DesignMatrix select_rows(std::span<const std::size_t> rows) const;

private:
    std::size_t rows_ = 0;
    std::vector<std::string> labels_;
    std::vector<double> data_;
};

struct RegressionFit {
    std::vector<std::string> labels;      // "intercept" followed by the regressor labels
    std::vector<double> coefficients;     // same order as labels
    std::vector<double> unscaled_variance;  // diagonal of (M^T M)^-1, M = [1 | X]
    std::vector<double> residuals;
    double rss = 0.0;
    std::size_t n = 0;
    std::size_t dof = 0;  // n - (p + 1)
};

inline constexpr const char* kInterceptLabel = "intercept";

// Least squares through a column-pivoted Householder QR of [1 | X].
// Throws RankDeficient naming the columns that fall below kRankTolerance, and
// InsufficientData when n < p + 2.
RegressionFit ols_fit(const DesignMatrix& x, std::span<const double> y);

struct CoefficientInference {
    std::string label;
    double coef = 0.0;
    double se = 0.0;
    double t = 0.0;
    double p = 0.0;  // two-sided
    double ci_low = 0.0;
    double ci_high = 0.0;
};

std::vector<CoefficientInference> t_inference(const RegressionFit& fit, double confidence = 0.95);

// Exact linear dependencies resolved by dropping columns. The intercept is
// always kept; the remaining columns are admitted in `admission_order` and a
// column is aliased when its component orthogonal to the admitted ones is
// below kRankTolerance of its norm.
std::vector<std::size_t> find_aliased_columns(const DesignMatrix& x, std::span<const std::size_t> admission_order);

struct AliasedFit {
    RegressionFit fit;                    // over the kept columns only
    std::vector<std::size_t> kept;        // X column indices, ascending
    std::vector<std::size_t> aliased;     // X column indices, ascending
};

AliasedFit ols_fit_dropping_aliased(const DesignMatrix& x, std::span<const double> y,
                                    std::span<const std::size_t> admission_order);

// I_x(a, b) by continued fraction.
double regularized_incomplete_beta(double a, double b, double x);

// Upper tail P(T > t) of Student's t with `dof` degrees of freedom.
double student_t_sf(double t, double dof);
// t such that P(T <= t) = prob.
double student_t_quantile(double prob, double dof);

double normal_sf(double z);
double normal_quantile(double prob);

struct Moments {
    std::size_t n = 0;
    double mean = 0.0;
    double sd = 0.0;        // sample (n - 1)
    double skew = 0.0;      // m3 / m2^1.5, NaN if m2 == 0
    double kurtosis = 0.0;  // m4 / m2^2 (raw), NaN if m2 == 0
};

Moments moments(std::span<const double> values);

struct NormalityResult {
    std::size_t n = 0;
    double jb = 0.0;
    double p_value = 1.0;
    double skew = 0.0;
    double kurtosis = 0.0;
};

double jarque_bera_statistic(std::size_t n, double skew, double kurtosis);
// Chi-square (2 dof) survival: exp(-jb / 2).
double jarque_bera_pvalue(double jb);
// Needs at least 8 values with non-zero variance.
NormalityResult jarque_bera(std::span<const double> residuals);

struct ZScores {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> values;     // row-major
    std::vector<bool> degenerate;   // per column: zero SD, z forced to 0

    double at(std::size_t i, std::size_t j) const { return values[i * cols + j]; }
};

// Column-wise standardization with the sample SD.
ZScores zscores(const std::vector<std::vector<double>>& columns);

struct QQPoint {
    double theoretical = 0.0;
    double sample = 0.0;
};

// Sorted standardized values against normal quantiles at (i - 0.5) / n.
std::vector<QQPoint> qq_points(std::span<const double> residuals);

}  // namespace mobility::stats
