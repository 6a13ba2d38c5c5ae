#pragma once

// End-to-end factor analysis: ingest -> split -> template/score -> features
// -> residual normality gate -> outlier search -> per-case inference.

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mobility/features.hpp"
#include "mobility/ingestion.hpp"
#include "mobility/outliers.hpp"
#include "mobility/similarity.hpp"
#include "mobility/stats.hpp"

namespace mobility {

enum class Tier { Significant, NearlySignificant, Normal, None };

struct TierCutoffs {
    double significant = 0.001;
    double nearly_significant = 0.01;
    double normal = 0.05;
};

// Inclusive upper bounds: p <= 0.001 significant, <= 0.01 nearly, <= 0.05 normal.
Tier classify(double p, const TierCutoffs& cutoffs = {});
std::string_view tier_name(Tier tier);

struct RunConfig {
    std::string input = "-";
    std::string holidays;  // empty: no national holidays
    UtcOffset timezone = kJapanStandardTime;
    int rounding_decimals = kDefaultRoundingDecimals;
    std::vector<double> thresholds{3.0};
    double alpha = 0.05;
    std::size_t max_k = 5;
    TierCutoffs cutoffs;
    std::string output_dir = ".";

    void validate() const;
    // Keys mirror the field names; `tier_cutoffs` is a 3-element array and
    // `timezone` a "+HH:MM" string. Missing keys keep their current value.
    void merge_json(std::istream& in);
};

struct UserStatus {
    std::string user_id;
    std::size_t n_records = 0;
    std::size_t n_learn = 0;
    std::size_t n_test = 0;
    double split_instant = 0.0;
    std::string status = "ok";
};

struct ScoringResult {
    std::vector<UserStatus> users;
    std::vector<UserScore> scores;  // usable users only, ordered by id
    Dataset dataset;
    std::vector<Diagnostic> diagnostics;
};

// Split, template, score and feature extraction for every user. Users that
// cannot be split are excluded with a diagnostic.
ScoringResult score_users(const std::map<std::string, UserTrajectory>& users, const HolidayCalendar& calendar);

struct OutlierStage {
    CombinationResult full_data;
    std::vector<CandidateSet> candidate_sets;       // one per threshold tried
    std::vector<OutlierSearchResult> searches;      // same order
    bool passed = false;
    std::vector<std::vector<std::size_t>> solutions;  // dataset rows to exclude
    std::optional<CombinationResult> best;            // when nothing passed
};

// Normality gate on the full data, then the candidate search per threshold in
// the configured order until one passes.
OutlierStage run_outlier_stage(const Dataset& dataset, const RunConfig& config);

struct ReportRow {
    std::size_t index = 0;
    std::string variable;
    bool aliased = false;  // dropped as an exact linear combination of other columns
    stats::CoefficientInference inference;
    Tier tier = Tier::None;
};

struct RegressionCase {
    std::string name;
    std::vector<std::size_t> excluded_rows;
    std::vector<std::string> excluded_users;
    std::size_t n = 0;
    std::size_t dof = 0;
    std::vector<ReportRow> rows;  // intercept then mon ... wknd
    std::optional<stats::NormalityResult> normality;
    std::vector<stats::QQPoint> qq;
};

struct FactorReport {
    std::size_t n_users = 0;
    std::optional<stats::NormalityResult> full_normality;
    std::vector<stats::QQPoint> full_qq;
    bool normality_achieved = false;
    std::vector<RegressionCase> cases;
};

// Regression cases for the given exclusion sets (an empty set is the entire
// dataset).
FactorReport build_report(const Dataset& dataset, const std::vector<std::vector<std::size_t>>& exclusions,
                          bool normality_achieved, const TierCutoffs& cutoffs);

struct AnalysisResult {
    OutlierStage outliers;
    FactorReport report;
};

AnalysisResult analyze(const Dataset& dataset, const RunConfig& config);

// Exit status of a finished run: 0 on success, 3 when no removal set passed.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;
inline constexpr int kExitNoPass = 3;

struct PipelineResult {
    ParseResult parsed;
    ScoringResult scoring;
    AnalysisResult analysis;
    int exit_status = kExitOk;
};

// Full `regress` run: reads the inputs named in `config` and writes every
// artifact into `config.output_dir`.
PipelineResult run_pipeline(const RunConfig& config);

// Re-derives the report from a finished run directory's features.csv and
// outliers.json and writes the report artifacts into `out_dir`.
FactorReport rebuild_report(const std::filesystem::path& run_dir, const std::filesystem::path& out_dir,
                            const TierCutoffs& cutoffs);

// Artifact writers.
void write_users_csv(std::ostream& out, const std::vector<UserStatus>& users);
void write_diagnostics_csv(std::ostream& out, const std::vector<Diagnostic>& diagnostics);
void write_scores_csv(std::ostream& out, const std::vector<UserScore>& scores);
void write_zscore_csv(std::ostream& out, const Dataset& dataset);
void write_zscore_svg(std::ostream& out, const Dataset& dataset, const std::vector<double>& thresholds);
void write_qq_csv(std::ostream& out, const std::vector<stats::QQPoint>& points);
void write_qq_svg(std::ostream& out, const std::vector<stats::QQPoint>& points, std::string_view title);
void write_search_log(std::ostream& out, const Dataset& dataset, const OutlierStage& stage);
void write_outliers_json(std::ostream& out, const Dataset& dataset, const OutlierStage& stage);
void write_report_csv(std::ostream& out, const FactorReport& report);
void write_report_json(std::ostream& out, const FactorReport& report);
void write_report_markdown(std::ostream& out, const FactorReport& report);

// Writes report.csv/json/md plus one qq_<case>.csv/svg per case and the
// entire-data QQ plot.
void write_report_artifacts(const std::filesystem::path& dir, const FactorReport& report);

// Input helpers: "-" reads standard input.
ParseResult read_records(const std::string& path, const IngestOptions& options);
HolidayCalendar load_calendar(const std::string& path);

}  // namespace mobility
