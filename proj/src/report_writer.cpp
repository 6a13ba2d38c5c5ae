#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <ostream>

#include <json.hpp>

#include "mobility/error.hpp"
#include "mobility/pipeline.hpp"
#include "mobility/text_io.hpp"

namespace mobility {

namespace {

using ojson = nlohmann::ordered_json;

ojson number_or_null(double v) { return std::isfinite(v) ? ojson(v) : ojson(nullptr); }

ojson normality_json(const std::optional<stats::NormalityResult>& r) {
    if (!r) return nullptr;
    ojson j;
    j["n"] = r->n;
    j["jb"] = number_or_null(r->jb);
    j["p"] = number_or_null(r->p_value);
    j["skew"] = number_or_null(r->skew);
    j["kurtosis"] = number_or_null(r->kurtosis);
    return j;
}

ojson combination_json(const Dataset& dataset, const CombinationResult& c) {
    ojson j;
    j["k"] = c.rows.size();
    ojson users = ojson::array();
    for (auto r : c.rows) users.push_back(dataset.row(r).user_id);
    j["excluded_users"] = users;
    j["rows"] = c.rows;
    j["jb"] = c.normality ? number_or_null(c.normality->jb) : ojson(nullptr);
    j["p"] = c.normality ? number_or_null(c.normality->p_value) : ojson(nullptr);
    j["passed"] = c.passed;
    if (!c.error.empty()) j["error"] = c.error;
    return j;
}

std::string csv_number(double v) { return std::isfinite(v) ? format_number(v) : ""; }

constexpr std::array<const char*, kFeatureCount> kPalette = {
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2",
    "#7f7f7f", "#bcbd22", "#17becf", "#393b79", "#637939", "#843c39"};

// Affine map from data range to pixel range.
struct Axis {
    double lo, hi, px_lo, px_hi;
    double operator()(double v) const { return px_lo + (v - lo) / (hi - lo) * (px_hi - px_lo); }
};

std::string px(double v) { return format_fixed(v, 2); }

}  // namespace

void write_users_csv(std::ostream& out, const std::vector<UserStatus>& users) {
    out << "user_id,n_records,n_learn,n_test,split_instant,status\n";
    for (const auto& u : users)
        out << u.user_id << ',' << u.n_records << ',' << u.n_learn << ',' << u.n_test << ','
            << (u.status == "ok" ? format_number(u.split_instant) : "") << ',' << u.status << '\n';
}

void write_diagnostics_csv(std::ostream& out, const std::vector<Diagnostic>& diagnostics) {
    out << "stage,line,user_id,message\n";
    for (const auto& d : diagnostics) {
        std::string message = d.message;
        std::replace(message.begin(), message.end(), ',', ';');
        out << d.stage << ',' << (d.line == 0 ? std::string() : std::to_string(d.line)) << ',' << d.user_id << ','
            << message << '\n';
    }
}

void write_scores_csv(std::ostream& out, const std::vector<UserScore>& scores) {
    out << "user_id,score,n_test_dates,n_matched_cells\n";
    for (const auto& s : scores)
        out << s.user_id << ',' << format_number(s.score) << ',' << s.n_test_dates << ',' << s.n_matched_cells << '\n';
}

void write_zscore_csv(std::ostream& out, const Dataset& dataset) {
    std::vector<std::vector<double>> columns;
    for (std::size_t j = 0; j < kFeatureCount; ++j) columns.push_back(dataset.column(j));
    const auto z = stats::zscores(columns);
    out << "user_id,variable,z\n";
    for (std::size_t i = 0; i < z.rows; ++i)
        for (std::size_t j = 0; j < z.cols; ++j)
            out << dataset.row(i).user_id << ',' << kFeatureNames[j] << ',' << format_number(z.at(i, j)) << '\n';
}

void write_zscore_svg(std::ostream& out, const Dataset& dataset, const std::vector<double>& thresholds) {
    std::vector<std::vector<double>> columns;
    for (std::size_t j = 0; j < kFeatureCount; ++j) columns.push_back(dataset.column(j));
    const auto z = stats::zscores(columns);

    double span = 1.0;
    for (double v : z.values) span = std::max(span, std::fabs(v));
    for (double t : thresholds) span = std::max(span, t);
    span = std::ceil(span + 0.5);

    constexpr double width = 800;
    constexpr double height = 400;
    const Axis x{0.0, static_cast<double>(std::max<std::size_t>(z.rows, 2) - 1), 50, width - 20};
    const Axis y{-span, span, height - 30, 20};

    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height << "\">\n";
    out << "<title>z-scores of the temporal features per user</title>\n";
    out << "<line class=\"axis\" x1=\"50\" y1=\"" << px(y(0)) << "\" x2=\"" << px(width - 20) << "\" y2=\"" << px(y(0))
        << "\" stroke=\"#000\"/>\n";
    out << "<line class=\"axis\" x1=\"50\" y1=\"20\" x2=\"50\" y2=\"" << px(height - 30) << "\" stroke=\"#000\"/>\n";
    for (double t : thresholds)
        for (double v : {t, -t})
            out << "<line class=\"threshold\" x1=\"50\" y1=\"" << px(y(v)) << "\" x2=\"" << px(width - 20)
                << "\" y2=\"" << px(y(v)) << "\" stroke=\"#c00\" stroke-dasharray=\"4 3\"/>\n";
    for (std::size_t j = 0; j < z.cols; ++j) {
        out << "<g class=\"variable\" data-name=\"" << kFeatureNames[j] << "\" fill=\"" << kPalette[j] << "\">\n";
        for (std::size_t i = 0; i < z.rows; ++i)
            out << "<circle cx=\"" << px(x(static_cast<double>(i))) << "\" cy=\"" << px(y(z.at(i, j)))
                << "\" r=\"2.5\"/>\n";
        out << "</g>\n";
    }
    out << "</svg>\n";
}

void write_qq_csv(std::ostream& out, const std::vector<stats::QQPoint>& points) {
    out << "theoretical,sample\n";
    for (const auto& p : points) out << format_number(p.theoretical) << ',' << format_number(p.sample) << '\n';
}

void write_qq_svg(std::ostream& out, const std::vector<stats::QQPoint>& points, std::string_view title) {
    double span = 1.0;
    for (const auto& p : points) span = std::max({span, std::fabs(p.theoretical), std::fabs(p.sample)});
    span = std::ceil(span + 0.25);

    constexpr double size = 400;
    const Axis x{-span, span, 40, size - 20};
    const Axis y{-span, span, size - 40, 20};
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size << "\" height=\"" << size << "\">\n";
    out << "<title>" << title << "</title>\n";
    out << "<line class=\"axis\" x1=\"40\" y1=\"" << px(size - 40) << "\" x2=\"" << px(size - 20) << "\" y2=\""
        << px(size - 40) << "\" stroke=\"#000\"/>\n";
    out << "<line class=\"axis\" x1=\"40\" y1=\"20\" x2=\"40\" y2=\"" << px(size - 40) << "\" stroke=\"#000\"/>\n";
    out << "<line class=\"reference\" x1=\"" << px(x(-span)) << "\" y1=\"" << px(y(-span)) << "\" x2=\"" << px(x(span))
        << "\" y2=\"" << px(y(span)) << "\" stroke=\"#c00\"/>\n";
    out << "<g class=\"points\" fill=\"#1f77b4\">\n";
    for (const auto& p : points)
        out << "<circle cx=\"" << px(x(p.theoretical)) << "\" cy=\"" << px(y(p.sample)) << "\" r=\"2.5\"/>\n";
    out << "</g>\n</svg>\n";
}

void write_search_log(std::ostream& out, const Dataset& dataset, const OutlierStage& stage) {
    auto gate = combination_json(dataset, stage.full_data);
    gate["threshold"] = nullptr;
    out << gate.dump() << '\n';
    for (const auto& search : stage.searches) {
        // entry 0 of every search repeats the full-data gate
        for (std::size_t i = 1; i < search.log.size(); ++i) {
            auto j = combination_json(dataset, search.log[i]);
            j["threshold"] = search.threshold;
            out << j.dump() << '\n';
        }
    }
}

void write_outliers_json(std::ostream& out, const Dataset& dataset, const OutlierStage& stage) {
    ojson j;
    j["n_users"] = dataset.size();
    j["alpha"] = stage.searches.empty() ? ojson(nullptr) : ojson(stage.searches.front().alpha);
    j["full_data"] = combination_json(dataset, stage.full_data);
    ojson thresholds = ojson::array();
    for (std::size_t s = 0; s < stage.searches.size(); ++s) {
        const auto& cands = stage.candidate_sets[s];
        const auto& search = stage.searches[s];
        ojson t;
        t["threshold"] = cands.threshold;
        ojson members = ojson::array();
        for (const auto& m : cands.members) {
            ojson mj;
            mj["user_id"] = m.user_id;
            mj["row"] = m.row;
            ojson triggers = ojson::array();
            for (const auto& tr : m.triggers)
                triggers.push_back(ojson{{"variable", std::string(kFeatureNames[tr.feature])}, {"z", tr.z}});
            mj["triggers"] = triggers;
            members.push_back(mj);
        }
        t["candidates"] = members;
        t["passed"] = search.passed;
        t["k_found"] = search.passed ? ojson(search.k_found) : ojson(nullptr);
        t["combinations_examined"] = search.combinations_examined;
        ojson sols = ojson::array();
        for (const auto& sol : search.solutions) sols.push_back(combination_json(dataset, sol));
        t["solutions"] = sols;
        thresholds.push_back(t);
    }
    j["thresholds"] = thresholds;
    j["normality_achieved"] = stage.passed;
    ojson solutions = ojson::array();
    for (const auto& rows : stage.solutions) {
        ojson users = ojson::array();
        for (auto r : rows) users.push_back(dataset.row(r).user_id);
        solutions.push_back(ojson{{"excluded_users", users}});
    }
    j["solutions"] = solutions;
    j["best"] = stage.best ? combination_json(dataset, *stage.best) : ojson(nullptr);
    out << j.dump(2) << '\n';
}

void write_report_csv(std::ostream& out, const FactorReport& report) {
    out << "case,no,variable,coef,se,t,p,ci_low,ci_high,tier,aliased\n";
    for (const auto& c : report.cases)
        for (const auto& r : c.rows) {
            const auto& inf = r.inference;
            out << c.name << ',' << r.index << ',' << r.variable << ',' << csv_number(inf.coef) << ','
                << csv_number(inf.se) << ',' << csv_number(inf.t) << ',' << csv_number(inf.p) << ','
                << csv_number(inf.ci_low) << ',' << csv_number(inf.ci_high) << ',' << tier_name(r.tier) << ','
                << (r.aliased ? "true" : "false") << '\n';
        }
}

void write_report_json(std::ostream& out, const FactorReport& report) {
    ojson j;
    j["n_users"] = report.n_users;
    j["full_data"] = normality_json(report.full_normality);
    j["normality_achieved"] = report.normality_achieved;
    ojson cases = ojson::array();
    for (const auto& c : report.cases) {
        ojson cj;
        cj["name"] = c.name;
        cj["excluded_users"] = c.excluded_users;
        cj["n"] = c.n;
        cj["dof"] = c.dof;
        cj["normality"] = normality_json(c.normality);
        ojson aliased = ojson::array();
        for (const auto& r : c.rows)
            if (r.aliased) aliased.push_back(r.variable);
        cj["aliased"] = aliased;
        cases.push_back(cj);
    }
    j["cases"] = cases;
    j["notes"] = ojson::array({"all test dates with at least one record are kept (no sparse-day filter)",
                               "aliased variables are exact linear combinations of the admitted columns"});
    out << j.dump(2) << '\n';
}

void write_report_markdown(std::ostream& out, const FactorReport& report) {
    out << "# Temporal factor report\n\n";
    out << "Users: " << report.n_users << "\n\n";
    if (report.full_normality)
        out << "Residual normality on the entire data: JB = " << format_fixed(report.full_normality->jb, 2)
            << ", p = " << format_fixed(report.full_normality->p_value, 4) << "\n\n";
    if (!report.normality_achieved)
        out << "No removal set within the search limits made the residuals pass; the entire-data fit is shown.\n\n";
    for (const auto& c : report.cases) {
        out << "## Case " << c.name;
        if (!c.excluded_users.empty()) {
            out << " (excluding";
            for (const auto& u : c.excluded_users) out << ' ' << u;
            out << ')';
        }
        out << "\n\n";
        out << "n = " << c.n << ", dof = " << c.dof;
        if (c.normality)
            out << ", JB = " << format_fixed(c.normality->jb, 2) << ", p = " << format_fixed(c.normality->p_value, 4);
        out << "\n\n";
        out << "| no. | variable | coef | SE | t | p | [0.025 | 0.975] | tier |\n";
        out << "|---:|:---|---:|---:|---:|---:|---:|---:|:---|\n";
        for (const auto& r : c.rows) {
            const auto& inf = r.inference;
            if (r.aliased) {
                out << "| " << r.index << " | " << r.variable << " | aliased | | | | | | |\n";
                continue;
            }
            std::string stars;
            if (r.tier == Tier::Significant) stars = " (***)";
            else if (r.tier == Tier::NearlySignificant) stars = " (**)";
            else if (r.tier == Tier::Normal) stars = " (*)";
            out << "| " << r.index << " | " << r.variable << " | " << format_fixed(inf.coef, 2) << " | "
                << format_fixed(inf.se, 2) << " | " << format_fixed(inf.t, 2) << " | " << format_fixed(inf.p, 3)
                << stars << " | " << format_fixed(inf.ci_low, 2) << " | " << format_fixed(inf.ci_high, 2) << " | "
                << tier_name(r.tier) << " |\n";
        }
        out << '\n';
    }
}

void write_report_artifacts(const std::filesystem::path& dir, const FactorReport& report) {
    const auto open = [&](const std::string& name) {
        std::ofstream out(dir / name, std::ios::binary);
        if (!out) throw DataError("cannot write '" + (dir / name).string() + "'");
        return out;
    };
    {
        auto out = open("report.csv");
        write_report_csv(out, report);
    }
    {
        auto out = open("report.json");
        write_report_json(out, report);
    }
    {
        auto out = open("report.md");
        write_report_markdown(out, report);
    }
    const auto emit_qq = [&](const std::string& name, const std::vector<stats::QQPoint>& qq) {
        {
            auto out = open("qq_" + name + ".csv");
            write_qq_csv(out, qq);
        }
        auto out = open("qq_" + name + ".svg");
        write_qq_svg(out, qq, "QQ plot of residuals: " + name);
    };
    emit_qq("entire", report.full_qq);
    for (const auto& c : report.cases)
        if (c.name != "entire") emit_qq(c.name, c.qq);
}

}  // namespace mobility
