#include "mobility/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>

#include <json.hpp>

#include "mobility/error.hpp"

namespace mobility {

namespace fs = std::filesystem;

Tier classify(double p, const TierCutoffs& cutoffs) {
    if (p <= cutoffs.significant) return Tier::Significant;
    if (p <= cutoffs.nearly_significant) return Tier::NearlySignificant;
    if (p <= cutoffs.normal) return Tier::Normal;
    return Tier::None;
}

std::string_view tier_name(Tier tier) {
    switch (tier) {
        case Tier::Significant: return "significant";
        case Tier::NearlySignificant: return "nearly_significant";
        case Tier::Normal: return "normal";
        case Tier::None: return "none";
    }
    return "none";
}

void RunConfig::validate() const {
    if (thresholds.empty()) throw UsageError("at least one z-score threshold is required");
    for (double t : thresholds)
        if (!(t > 0.0)) throw UsageError("z-score thresholds must be positive");
    if (!(alpha > 0.0 && alpha < 1.0)) throw UsageError("alpha must be in (0, 1)");
    if (!(cutoffs.significant > 0.0 && cutoffs.significant < cutoffs.nearly_significant &&
          cutoffs.nearly_significant < cutoffs.normal && cutoffs.normal <= 1.0))
        throw UsageError("tier cutoffs must be strictly increasing within (0, 1]");
    if (rounding_decimals < 0 || rounding_decimals > 6) throw UsageError("rounding decimals must be in [0, 6]");
}

void RunConfig::merge_json(std::istream& in) {
    nlohmann::json j;
    try {
        in >> j;
        if (!j.is_object()) throw UsageError("run config must be a JSON object");
        for (const auto& [key, value] : j.items()) {
            if (key == "input") input = value.get<std::string>();
            else if (key == "holidays") holidays = value.get<std::string>();
            else if (key == "timezone") timezone = UtcOffset::parse(value.get<std::string>());
            else if (key == "rounding_decimals") rounding_decimals = value.get<int>();
            else if (key == "thresholds") thresholds = value.get<std::vector<double>>();
            else if (key == "alpha") alpha = value.get<double>();
            else if (key == "max_k") max_k = value.get<std::size_t>();
            else if (key == "tier_cutoffs") {
                const auto c = value.get<std::vector<double>>();
                if (c.size() != 3) throw UsageError("tier_cutoffs needs exactly 3 values");
                cutoffs = TierCutoffs{c[0], c[1], c[2]};
            } else if (key == "output_dir") output_dir = value.get<std::string>();
            else throw UsageError("run config: unknown key '" + key + "'");
        }
    } catch (const nlohmann::json::exception& e) {
        throw UsageError(std::string("run config: ") + e.what());
    } catch (const RecordError& e) {
        throw UsageError(std::string("run config: ") + e.what());
    }
}

ScoringResult score_users(const std::map<std::string, UserTrajectory>& users, const HolidayCalendar& calendar) {
    ScoringResult result;
    std::vector<DatasetRow> rows;
    for (const auto& [user_id, traj] : users) {
        UserStatus status;
        status.user_id = user_id;
        status.n_records = traj.points.size();
        try {
            const auto split = split_learn_test(traj);
            status.n_learn = split.learn.size();
            status.n_test = split.test.size();
            status.split_instant = split.split_instant;

            const auto tmpl = build_template(split.learn);
            const auto reps = extract_representatives(split.test);
            const auto score = match_score(tmpl, reps);
            const auto dates = distinct_dates(split.test);
            auto features = extract_features(dates, calendar);
            features.score = score.total();

            result.scores.push_back(UserScore{user_id, features.score, score.test_dates(), score.matched_cells()});
            rows.push_back(DatasetRow{user_id, features});
        } catch (const InsufficientData& e) {
            status.status = "excluded";
            result.diagnostics.push_back(Diagnostic{"split", 0, user_id, e.what()});
        }
        result.users.push_back(std::move(status));
    }
    result.dataset = assemble_dataset(std::move(rows));
    return result;
}

OutlierStage run_outlier_stage(const Dataset& dataset, const RunConfig& config) {
    config.validate();
    OutlierStage stage;
    const SearchOptions options{config.alpha, config.max_k};

    const auto gate = search_minimal_removals(dataset, CandidateSet{config.thresholds.front(), {}}, options);
    stage.full_data = gate.full_data;
    if (gate.passed) {
        stage.passed = true;
        stage.solutions.push_back({});
        return stage;
    }

    const auto higher_p = [](const std::optional<CombinationResult>& a, const std::optional<CombinationResult>& b) {
        if (!a || !a->normality) return false;
        return !b || !b->normality || a->normality->p_value > b->normality->p_value;
    };
    stage.best = gate.best;
    for (double threshold : config.thresholds) {
        stage.candidate_sets.push_back(find_candidates(dataset, threshold));
        stage.searches.push_back(search_minimal_removals(dataset, stage.candidate_sets.back(), options));
        const auto& search = stage.searches.back();
        if (search.passed) {
            stage.passed = true;
            for (const auto& s : search.solutions) stage.solutions.push_back(s.rows);
            stage.best.reset();
            return stage;
        }
        if (higher_p(search.best, stage.best)) stage.best = search.best;
    }
    return stage;
}

FactorReport build_report(const Dataset& dataset, const std::vector<std::vector<std::size_t>>& exclusions,
                          bool normality_achieved, const TierCutoffs& cutoffs) {
    FactorReport report;
    report.n_users = dataset.size();
    report.normality_achieved = normality_achieved;

    const auto full = refit_excluding(dataset, {});
    report.full_normality = full.normality;
    try {
        report.full_qq = stats::qq_points(full.model.fit.residuals);
    } catch (const DataError&) {
        report.full_qq.clear();
    }

    std::size_t excluded_index = 0;
    for (const auto& excluded : exclusions) {
        const auto fit = excluded.empty() ? full : refit_excluding(dataset, excluded);
        RegressionCase c;
        c.name = excluded.empty() ? "entire" : "excluded_" + std::to_string(++excluded_index);
        c.excluded_rows = excluded;
        std::sort(c.excluded_rows.begin(), c.excluded_rows.end());
        for (auto r : c.excluded_rows) c.excluded_users.push_back(dataset.row(r).user_id);
        c.n = fit.model.fit.n;
        c.dof = fit.model.fit.dof;
        c.normality = fit.normality;
        try {
            c.qq = stats::qq_points(fit.model.fit.residuals);
        } catch (const DataError&) {
            c.qq.clear();
        }

        const auto inference = stats::t_inference(fit.model.fit);
        ReportRow intercept{0, "intercept", false, inference.front(), classify(inference.front().p, cutoffs)};
        c.rows.push_back(intercept);
        const auto& kept = fit.model.kept;
        for (std::size_t j = 0; j < kFeatureCount; ++j) {
            ReportRow row;
            row.index = j + 1;
            row.variable = std::string(kFeatureNames[j]);
            const auto it = std::find(kept.begin(), kept.end(), j);
            if (it == kept.end()) {
                row.aliased = true;
                const double nan = std::nan("");
                row.inference = stats::CoefficientInference{row.variable, nan, nan, nan, nan, nan, nan};
                row.tier = Tier::None;
            } else {
                row.inference = inference[static_cast<std::size_t>(it - kept.begin()) + 1];
                row.inference.label = row.variable;
                row.tier = classify(row.inference.p, cutoffs);
            }
            c.rows.push_back(std::move(row));
        }
        report.cases.push_back(std::move(c));
    }
    return report;
}

AnalysisResult analyze(const Dataset& dataset, const RunConfig& config) {
    AnalysisResult result;
    result.outliers = run_outlier_stage(dataset, config);
    std::vector<std::vector<std::size_t>> exclusions = result.outliers.solutions;
    if (!result.outliers.passed) exclusions = {{}};
    result.report = build_report(dataset, exclusions, result.outliers.passed, config.cutoffs);
    return result;
}

ParseResult read_records(const std::string& path, const IngestOptions& options) {
    if (path == "-") return parse_records(std::cin, options);
    std::ifstream in(path);
    if (!in) throw DataError("cannot open input '" + path + "'");
    return parse_records(in, options);
}

HolidayCalendar load_calendar(const std::string& path) {
    if (path.empty()) return HolidayCalendar{};
    return HolidayCalendar::load(path);
}

namespace {

std::ofstream open_output(const fs::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write '" + path.string() + "'");
    return out;
}

}  // namespace

PipelineResult run_pipeline(const RunConfig& config) {
    config.validate();
    PipelineResult result;
    const IngestOptions ingest{config.timezone, config.rounding_decimals};
    result.parsed = read_records(config.input, ingest);
    const auto calendar = load_calendar(config.holidays);
    result.scoring = score_users(result.parsed.users, calendar);
    if (result.scoring.dataset.size() < kFeatureCount + 2)
        throw InsufficientData("only " + std::to_string(result.scoring.dataset.size()) +
                               " usable users; the regression needs at least " + std::to_string(kFeatureCount + 2));
    result.analysis = analyze(result.scoring.dataset, config);
    result.exit_status = result.analysis.outliers.passed ? kExitOk : kExitNoPass;

    const fs::path dir = config.output_dir;
    fs::create_directories(dir);
    std::vector<Diagnostic> diagnostics = result.parsed.diagnostics;
    diagnostics.insert(diagnostics.end(), result.scoring.diagnostics.begin(), result.scoring.diagnostics.end());
    {
        auto out = open_output(dir / "users.csv");
        write_users_csv(out, result.scoring.users);
    }
    {
        auto out = open_output(dir / "diagnostics.csv");
        write_diagnostics_csv(out, diagnostics);
    }
    {
        auto out = open_output(dir / "scores.csv");
        write_scores_csv(out, result.scoring.scores);
    }
    {
        auto out = open_output(dir / "features.csv");
        write_features_csv(out, result.scoring.dataset);
    }
    {
        auto out = open_output(dir / "describe.csv");
        write_describe_csv(out, describe(result.scoring.dataset));
    }
    {
        auto out = open_output(dir / "zscore.csv");
        write_zscore_csv(out, result.scoring.dataset);
    }
    {
        auto out = open_output(dir / "zscore.svg");
        write_zscore_svg(out, result.scoring.dataset, config.thresholds);
    }
    {
        auto out = open_output(dir / "outliers.jsonl");
        write_search_log(out, result.scoring.dataset, result.analysis.outliers);
    }
    {
        auto out = open_output(dir / "outliers.json");
        write_outliers_json(out, result.scoring.dataset, result.analysis.outliers);
    }
    write_report_artifacts(dir, result.analysis.report);
    return result;
}

FactorReport rebuild_report(const fs::path& run_dir, const fs::path& out_dir, const TierCutoffs& cutoffs) {
    std::ifstream features_in(run_dir / "features.csv");
    if (!features_in) throw DataError("cannot open '" + (run_dir / "features.csv").string() + "'");
    const auto dataset = read_features_csv(features_in);

    std::ifstream outliers_in(run_dir / "outliers.json");
    if (!outliers_in) throw DataError("cannot open '" + (run_dir / "outliers.json").string() + "'");
    nlohmann::json j;
    try {
        outliers_in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("outliers.json: ") + e.what());
    }

    std::map<std::string, std::size_t> row_of;
    for (std::size_t i = 0; i < dataset.size(); ++i) row_of[dataset.row(i).user_id] = i;

    std::vector<std::vector<std::size_t>> exclusions;
    bool achieved = false;
    try {
        achieved = j.at("normality_achieved").get<bool>();
        for (const auto& s : j.at("solutions")) {
            std::vector<std::size_t> rows;
            for (const auto& u : s.at("excluded_users")) {
                const auto it = row_of.find(u.get<std::string>());
                if (it == row_of.end()) throw DataError("outliers.json names unknown user '" + u.get<std::string>() + "'");
                rows.push_back(it->second);
            }
            exclusions.push_back(std::move(rows));
        }
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("outliers.json: ") + e.what());
    }
    if (exclusions.empty()) exclusions.push_back({});

    auto report = build_report(dataset, exclusions, achieved, cutoffs);
    fs::create_directories(out_dir);
    write_report_artifacts(out_dir, report);
    return report;
}

}  // namespace mobility
