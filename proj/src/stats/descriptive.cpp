#include <algorithm>
#include <cmath>

#include "mobility/error.hpp"
#include "mobility/stats.hpp"

namespace mobility::stats {

Moments moments(std::span<const double> values) {
    const std::size_t n = values.size();
    if (n < 2) throw InsufficientData("moments need at least 2 values");
    double sum = 0.0;
    for (double v : values) sum += v;
    const double mean = sum / static_cast<double>(n);

    double s2 = 0.0;
    double s3 = 0.0;
    double s4 = 0.0;
    for (double v : values) {
        const double d = v - mean;
        const double d2 = d * d;
        s2 += d2;
        s3 += d2 * d;
        s4 += d2 * d2;
    }
    const double nn = static_cast<double>(n);
    const double m2 = s2 / nn;

    Moments out;
    out.n = n;
    out.mean = mean;
    out.sd = std::sqrt(s2 / (nn - 1.0));
    if (m2 > 0.0) {
        out.skew = (s3 / nn) / std::pow(m2, 1.5);
        out.kurtosis = (s4 / nn) / (m2 * m2);
    } else {
        out.skew = std::nan("");
        out.kurtosis = std::nan("");
    }
    return out;
}

double jarque_bera_statistic(std::size_t n, double skew, double kurtosis) {
    const double excess = kurtosis - 3.0;
    return static_cast<double>(n) / 6.0 * (skew * skew + excess * excess / 4.0);
}

double jarque_bera_pvalue(double jb) { return std::exp(-jb / 2.0); }

NormalityResult jarque_bera(std::span<const double> residuals) {
    if (residuals.size() < 8) throw InsufficientData("Jarque-Bera needs at least 8 values");
    const auto m = moments(residuals);
    if (std::isnan(m.skew)) throw DegenerateInput("Jarque-Bera undefined for zero-variance input");
    NormalityResult r;
    r.n = residuals.size();
    r.skew = m.skew;
    r.kurtosis = m.kurtosis;
    r.jb = jarque_bera_statistic(r.n, m.skew, m.kurtosis);
    r.p_value = jarque_bera_pvalue(r.jb);
    return r;
}

ZScores zscores(const std::vector<std::vector<double>>& columns) {
    ZScores z;
    z.cols = columns.size();
    z.rows = columns.empty() ? 0 : columns.front().size();
    if (z.rows < 2) throw InsufficientData("z-scores need at least 2 rows");
    z.values.assign(z.rows * z.cols, 0.0);
    z.degenerate.assign(z.cols, false);
    for (std::size_t j = 0; j < z.cols; ++j) {
        const auto& col = columns[j];
        if (col.size() != z.rows) throw DataError("z-score columns differ in length");
        const auto m = moments(col);
        if (!(m.sd > 0.0)) {
            z.degenerate[j] = true;
            continue;
        }
        for (std::size_t i = 0; i < z.rows; ++i) z.values[i * z.cols + j] = (col[i] - m.mean) / m.sd;
    }
    return z;
}

std::vector<QQPoint> qq_points(std::span<const double> residuals) {
    const std::size_t n = residuals.size();
    if (n < 3) throw InsufficientData("QQ plot needs at least 3 values");
    const auto m = moments(residuals);
    if (!(m.sd > 0.0)) throw DegenerateInput("QQ plot undefined for zero-variance input");
    std::vector<double> sorted(residuals.begin(), residuals.end());
    std::sort(sorted.begin(), sorted.end());
    std::vector<QQPoint> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        out[i].theoretical = normal_quantile((static_cast<double>(i) + 0.5) / static_cast<double>(n));
        out[i].sample = (sorted[i] - m.mean) / m.sd;
    }
    return out;
}

}  // namespace mobility::stats
