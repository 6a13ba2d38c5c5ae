#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "mobility/error.hpp"
#include "mobility/stats.hpp"
#include "oracles.hpp"
#include "published.hpp"

using namespace mobility;
using namespace mobility::stats;

namespace {

DesignMatrix matrix(std::vector<std::vector<double>> columns) {
    std::vector<std::string> labels;
    for (std::size_t j = 0; j < columns.size(); ++j) labels.push_back("x" + std::to_string(j + 1));
    DesignMatrix x(columns.empty() ? 0 : columns[0].size(), labels);
    for (std::size_t j = 0; j < columns.size(); ++j)
        for (std::size_t i = 0; i < columns[j].size(); ++i) x(i, j) = columns[j][i];
    return x;
}

// A fit whose single coefficient has the given estimate and standard error.
RegressionFit single(double coef, double se, std::size_t dof) {
    RegressionFit f;
    f.labels = {"v"};
    f.coefficients = {coef};
    f.unscaled_variance = {se * se};
    f.rss = static_cast<double>(dof);
    f.n = dof + 1;
    f.dof = dof;
    return f;
}

double max_abs_mte(const DesignMatrix& x, const std::vector<double>& e) {
    double worst = std::fabs(std::accumulate(e.begin(), e.end(), 0.0));
    for (std::size_t j = 0; j < x.cols(); ++j) {
        double s = 0;
        for (std::size_t i = 0; i < x.rows(); ++i) s += x(i, j) * e[i];
        worst = std::max(worst, std::fabs(s));
    }
    return worst;
}

}  // namespace

TEST_CASE("exact linear data") {
    const auto fit = ols_fit(matrix({{1, 2, 3}}), std::vector<double>{3, 5, 7});
    CHECK(fit.coefficients[0] == doctest::Approx(1.0));
    CHECK(fit.coefficients[1] == doctest::Approx(2.0));
    for (double e : fit.residuals) CHECK(std::fabs(e) < 1e-12);
    CHECK(fit.dof == 1);
    CHECK(fit.labels == std::vector<std::string>{"intercept", "x1"});
}

TEST_CASE("rank deficiency names the dependent columns") {
    const std::vector<double> y{1, 4, 2, 8, 5};
    try {
        ols_fit(matrix({{1, 2, 3, 4, 5}, {1, 2, 3, 4, 5}}), y);
        FAIL("expected RankDeficient");
    } catch (const RankDeficient& e) {
        CHECK(e.columns() == std::vector<std::string>{"x2"});
    }
    CHECK_THROWS_AS(ols_fit(matrix({{2, 2, 2, 2, 2}}), y), RankDeficient);
    CHECK_THROWS_AS(ols_fit(matrix({{1, 2, 3}}), std::vector<double>{1, 2}), DataError);
    CHECK_THROWS_AS(ols_fit(matrix({{1, 2}}), std::vector<double>{1, 2}), InsufficientData);
}

TEST_CASE("aliased columns are dropped in admission order") {
    // x3 = x1 + x2 exactly; admitting x3 first makes x1 (admitted last) the alias
    std::mt19937_64 rng(1);
    std::vector<double> a(30), b(30), c(30), y(30);
    for (std::size_t i = 0; i < 30; ++i) {
        a[i] = static_cast<double>(rng() % 7);
        b[i] = static_cast<double>(rng() % 5);
        c[i] = a[i] + b[i];
        y[i] = 2 * a[i] - b[i] + static_cast<double>(rng() % 3);
    }
    const auto x = matrix({a, b, c});
    const std::vector<std::size_t> order{2, 1, 0};
    CHECK(find_aliased_columns(x, order) == std::vector<std::size_t>{0});
    const std::vector<std::size_t> forward{0, 1, 2};
    CHECK(find_aliased_columns(x, forward) == std::vector<std::size_t>{2});

    const auto fit = ols_fit_dropping_aliased(x, y, order);
    CHECK(fit.kept == std::vector<std::size_t>{1, 2});
    CHECK(fit.aliased == std::vector<std::size_t>{0});
    CHECK(fit.fit.dof == 30 - 3);
    // same column space, same residuals
    const auto other = ols_fit_dropping_aliased(x, y, forward);
    for (std::size_t i = 0; i < 30; ++i) CHECK(fit.fit.residuals[i] == doctest::Approx(other.fit.residuals[i]).epsilon(1e-9));
    // a column equal to a multiple of the intercept is aliased too
    const auto with_const = matrix({a, std::vector<double>(30, 4.0)});
    CHECK(find_aliased_columns(with_const, std::vector<std::size_t>{0, 1}) == std::vector<std::size_t>{1});
}

TEST_CASE("OLS matches the high-precision pseudo-inverse oracle") {
    std::mt19937_64 rng(42);
    for (int trial = 0; trial < 60; ++trial) {
        const auto inst = oracle::random_instance(rng);
        const auto fit = ols_fit(inst.x, inst.y);
        const auto ref = oracle::least_squares(inst.x, inst.y);
        double diff = 0, norm = 0;
        for (std::size_t j = 0; j < ref.coefficients.size(); ++j) {
            diff += std::pow(fit.coefficients[j] - ref.coefficients[j], 2);
            norm += std::pow(ref.coefficients[j], 2);
        }
        INFO("trial " << trial << " n=" << inst.x.rows() << " p=" << inst.x.cols() << " cond=" << inst.condition);
        CHECK(std::sqrt(diff / norm) <= 1e-8);

        double col = 1.0;
        for (std::size_t j = 0; j < inst.x.cols(); ++j) {
            double s = 0;
            for (double v : inst.x.column(j)) s += v * v;
            col = std::max(col, std::sqrt(s));
        }
        double ynorm = 0;
        for (double v : inst.y) ynorm += v * v;
        CHECK(max_abs_mte(inst.x, fit.residuals) <= 1e-8 * col * std::sqrt(ynorm));
    }
}

TEST_CASE("shifting y moves only the intercept") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 30; ++trial) {
        const auto inst = oracle::random_instance(rng, 1e4);
        auto shifted = inst.y;
        for (auto& v : shifted) v += 123.5;
        const auto a = ols_fit(inst.x, inst.y);
        const auto b = ols_fit(inst.x, shifted);
        double scale = 0;
        for (double c : a.coefficients) scale = std::max(scale, std::fabs(c));
        for (std::size_t j = 1; j < a.coefficients.size(); ++j)
            CHECK(std::fabs(a.coefficients[j] - b.coefficients[j]) <= 1e-10 * std::max(1.0, scale) * 1e2);
        CHECK(b.coefficients[0] - a.coefficients[0] == doctest::Approx(123.5).epsilon(1e-6));
    }
}

TEST_CASE("t inference reproduces published rows") {
    const auto thu = t_inference(single(88.72, 38.51, 83)).front();
    CHECK(thu.t == doctest::Approx(2.30).epsilon(0.005));
    CHECK(thu.p == doctest::Approx(0.02).epsilon(0.25));
    const auto fri = t_inference(single(-85.02, 34.67, 83)).front();
    CHECK(fri.t == doctest::Approx(-2.45).epsilon(0.005));
    CHECK(std::round(fri.p * 100) / 100 == doctest::Approx(0.02));

    for (const auto& row : published::kInferenceRows) {
        INFO(row.case_name << " " << row.variable);
        const auto r = t_inference(single(row.coef, row.se, published::kDof)).front();
        CHECK(std::fabs(r.t - row.t) <= 0.015);
        CHECK(std::fabs(std::round(r.p * 100) / 100 - row.p) < 1e-9);
        CHECK(std::fabs(r.ci_low - row.ci_low) <= 0.1);
        CHECK(std::fabs(r.ci_high - row.ci_high) <= 0.1);
    }
}

TEST_CASE("t inference edge cases") {
    const auto zero = t_inference(single(0.0, 2.0, 10)).front();
    CHECK(zero.t == 0.0);
    CHECK(zero.p == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(zero.ci_high == doctest::Approx(-zero.ci_low));
    CHECK_THROWS_AS(t_inference(single(1.0, 1.0, 0)), InsufficientData);
}

TEST_CASE("Student t survival function") {
    CHECK(student_t_sf(0.0, 1) == 0.5);
    CHECK(student_t_sf(0.0, 83) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(student_t_sf(1.0, 1) == doctest::Approx(0.25).epsilon(1e-13));
    CHECK(student_t_sf(1.989, 83) == doctest::Approx(0.025).epsilon(0.01));
    CHECK(student_t_quantile(0.975, 83) == doctest::Approx(1.98896).epsilon(1e-5));
    CHECK_THROWS_AS(student_t_sf(NAN, 3), DataError);
    CHECK_THROWS_AS(student_t_sf(INFINITY, 3), DataError);
}

TEST_CASE("Student t survival function against quadrature") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 200; ++i) {
        const double dof = i % 3 == 0 ? static_cast<double>(1 + rng() % 200) : std::pow(10.0, 3.0 * u(rng));
        const double t = (u(rng) - 0.5) * 2.0 * (i % 4 == 0 ? 40.0 : 6.0);
        INFO("t=" << t << " dof=" << dof);
        CHECK(std::fabs(student_t_sf(t, dof) - static_cast<double>(oracle::student_t_sf(t, dof))) <= 1e-10);
    }
}

TEST_CASE("Student t survival function properties") {
    for (double dof : {1.0, 2.0, 5.0, 30.0, 83.0, 1000.0}) {
        double prev = 1.0;
        for (double t = -8.0; t <= 8.0; t += 0.25) {
            const double s = student_t_sf(t, dof);
            CHECK(s <= prev);
            CHECK(student_t_sf(-t, dof) == doctest::Approx(1.0 - s).epsilon(1e-12));
            prev = s;
        }
    }
    for (double t : {1.0, 2.0, 3.0}) CHECK(std::fabs(student_t_sf(t, 1e6) - normal_sf(t)) <= 1e-4);
    for (double p : {0.6, 0.9, 0.975, 0.999})
        for (double dof : {1.0, 7.0, 83.0}) CHECK(student_t_sf(student_t_quantile(p, dof), dof) == doctest::Approx(1 - p).epsilon(1e-9));
}

TEST_CASE("normal distribution helpers") {
    CHECK(normal_sf(0.0) == 0.5);
    CHECK(normal_sf(1.96) == doctest::Approx(0.024997895148220435).epsilon(1e-12));
    for (double p = 0.001; p < 1.0; p += 0.0173) CHECK(1.0 - normal_sf(normal_quantile(p)) == doctest::Approx(p).epsilon(1e-12));
    CHECK(normal_quantile(0.5) == 0.0);
    CHECK(normal_quantile(1e-10) == doctest::Approx(-6.361340902404056).epsilon(1e-12));
}

TEST_CASE("incomplete beta boundary values") {
    CHECK(regularized_incomplete_beta(2.0, 3.0, 0.0) == 0.0);
    CHECK(regularized_incomplete_beta(2.0, 3.0, 1.0) == 1.0);
    // I_x(1, 1) = x and I_x(a, 1) = x^a
    CHECK(regularized_incomplete_beta(1.0, 1.0, 0.3) == doctest::Approx(0.3).epsilon(1e-14));
    CHECK(regularized_incomplete_beta(4.0, 1.0, 0.5) == doctest::Approx(0.0625).epsilon(1e-14));
}

TEST_CASE("moments") {
    const std::vector<double> sym{-1, 0, 1};
    CHECK(moments(sym).skew == 0.0);
    CHECK(moments(sym).sd == 1.0);
    const std::vector<double> v{1, 2, 2, 3, 9, 4, 4, 4, 5};
    const auto m = moments(v);
    std::vector<double> w;
    for (double x : v) w.push_back(3.5 * x - 40);
    const auto mw = moments(w);
    CHECK(mw.skew == doctest::Approx(m.skew).epsilon(1e-12));
    CHECK(mw.kurtosis == doctest::Approx(m.kurtosis).epsilon(1e-12));

    std::mt19937_64 rng(123);
    std::normal_distribution<double> g;
    std::vector<double> big(10000);
    for (auto& x : big) x = g(rng);
    const auto mb = moments(big);
    CHECK(mb.kurtosis >= 2.8);
    CHECK(mb.kurtosis <= 3.2);
    CHECK(std::isnan(moments(std::vector<double>{2, 2, 2}).skew));
}

TEST_CASE("Jarque-Bera statistic and p-value") {
    for (const auto& row : published::kNormalityRows) {
        CHECK(std::fabs(jarque_bera_pvalue(row.jb) - row.expected_p) <= 0.0005);
        CHECK(std::round(jarque_bera_pvalue(row.jb) * 100) / 100 == doctest::Approx(row.printed_p));
    }
    const double jb = jarque_bera_statistic(100, -0.64, 2.64);
    CHECK(jb >= 7.2);
    CHECK(jb <= 7.5);
    CHECK(std::fabs(jb - 7.27) <= 0.15);

    std::mt19937_64 rng(5);
    std::exponential_distribution<double> e;
    std::vector<double> r(60);
    for (auto& x : r) x = e(rng);
    const auto res = jarque_bera(r);
    const auto ref = oracle::jarque_bera(r);
    CHECK(res.jb == doctest::Approx(ref.jb).epsilon(1e-12));
    CHECK(res.p_value == doctest::Approx(ref.p).epsilon(1e-10));
    std::vector<double> moved;
    for (double x : r) moved.push_back(0.01 * x + 1e3);
    CHECK(std::fabs(jarque_bera(moved).jb - res.jb) <= 1e-10 * std::max(1.0, res.jb) * 1e3);

    CHECK_THROWS_AS(jarque_bera(std::vector<double>{1, 2, 3, 4, 5, 6, 7}), InsufficientData);
    CHECK_THROWS_AS(jarque_bera(std::vector<double>(10, 1.0)), DegenerateInput);
}

TEST_CASE("z-scores") {
    const auto z = zscores({{0, 10}, {4, 4}});
    CHECK(z.at(0, 0) == doctest::Approx(-std::sqrt(0.5)));
    CHECK(z.at(1, 0) == doctest::Approx(std::sqrt(0.5)));
    CHECK(z.at(0, 1) == 0.0);
    CHECK(z.degenerate == std::vector<bool>{false, true});

    std::mt19937_64 rng(6);
    std::vector<double> col(57);
    for (auto& v : col) v = static_cast<double>(rng() % 1000) / 7.0;
    const auto zc = zscores({col});
    std::vector<double> out;
    for (std::size_t i = 0; i < col.size(); ++i) out.push_back(zc.at(i, 0));
    const auto m = moments(out);
    CHECK(std::fabs(m.mean) <= 1e-12);
    CHECK(m.sd == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("QQ points") {
    const auto three = qq_points(std::vector<double>{1, -1, 0});
    REQUIRE(three.size() == 3);
    CHECK(three[0].theoretical == doctest::Approx(normal_quantile(1.0 / 6)).epsilon(1e-12));
    CHECK(three[1].theoretical == doctest::Approx(0.0));
    CHECK(three[2].theoretical == doctest::Approx(normal_quantile(5.0 / 6)).epsilon(1e-12));
    CHECK(three[0].sample == -1.0);
    CHECK(three[2].sample == 1.0);

    // normal quantiles standardize onto a line through the origin; its slope
    // is 1 / sd(quantiles) and tends to 1 as n grows
    for (std::size_t n : {20u, 200u, 5000u}) {
        std::vector<double> q;
        for (std::size_t i = 1; i <= n; ++i) q.push_back(normal_quantile((static_cast<double>(i) - 0.5) / static_cast<double>(n)));
        const double sd = moments(q).sd;
        const auto pts = qq_points(q);
        for (const auto& p : pts) CHECK(std::fabs(p.sample * sd - p.theoretical) <= 1e-9);
        if (n == 5000) CHECK(std::fabs(1.0 / sd - 1.0) < 2e-3);
    }

    std::mt19937_64 rng(31);
    std::student_t_distribution<double> heavy(2.0);
    std::vector<double> h(400);
    for (auto& v : h) v = heavy(rng);
    const auto hp = qq_points(h);
    CHECK(hp.back().sample > hp.back().theoretical);
    CHECK(hp.front().sample < hp.front().theoretical);

    CHECK_THROWS(qq_points(std::vector<double>{1, 2}));
    CHECK_THROWS(qq_points(std::vector<double>{2, 2, 2}));
}
