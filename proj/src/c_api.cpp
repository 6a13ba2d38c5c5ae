#include "mobility/mobility.h"

#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <new>
#include <string>

#include <json.hpp>

#include "mobility/error.hpp"
#include "mobility/pipeline.hpp"
#include "mobility/synth.hpp"

namespace fs = std::filesystem;
using mobility::RunConfig;

struct mlf_session {
    RunConfig config;
    std::string error;
    std::string summary = "{}";
};

namespace {

template <class F>
mlf_status guarded(mlf_session* s, F&& body) {
    if (s == nullptr) return MLF_USAGE;
    s->error.clear();
    try {
        return body();
    } catch (const mobility::UsageError& e) {
        s->error = e.what();
        return MLF_USAGE;
    } catch (const mobility::Error& e) {
        s->error = e.what();
        return MLF_DATA;
    } catch (const fs::filesystem_error& e) {
        s->error = e.what();
        return MLF_DATA;
    } catch (const std::bad_alloc&) {
        s->error = "out of memory";
        return MLF_INTERNAL;
    } catch (const std::exception& e) {
        s->error = e.what();
        return MLF_INTERNAL;
    } catch (...) {
        s->error = "unknown failure";
        return MLF_INTERNAL;
    }
}

std::string require(const char* text, const char* what) {
    if (text == nullptr || *text == '\0') throw mobility::UsageError(std::string(what) + " is required");
    return text;
}

void write_file(const fs::path& path, const std::function<void(std::ostream&)>& body) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw mobility::DataError("cannot write '" + path.string() + "'");
    body(out);
    if (!out) throw mobility::DataError("write failed for '" + path.string() + "'");
}

fs::path prepare_dir(const char* out_dir) {
    fs::path dir = (out_dir == nullptr || *out_dir == '\0') ? fs::path(".") : fs::path(out_dir);
    fs::create_directories(dir);
    return dir;
}

mobility::ParseResult ingest(const RunConfig& config, const std::string& input) {
    return mobility::read_records(input, mobility::IngestOptions{config.timezone, config.rounding_decimals});
}

std::vector<mobility::Diagnostic> merged(const mobility::ParseResult& parsed, const mobility::ScoringResult& scoring) {
    auto all = parsed.diagnostics;
    all.insert(all.end(), scoring.diagnostics.begin(), scoring.diagnostics.end());
    return all;
}

nlohmann::ordered_json parse_summary(const mobility::ParseResult& parsed) {
    nlohmann::ordered_json j;
    j["rows_read"] = parsed.rows_read;
    j["rows_rejected"] = parsed.rows_rejected;
    j["duplicates_removed"] = parsed.duplicates_removed;
    j["users"] = parsed.users.size();
    return j;
}

void require_regression_size(const mobility::Dataset& dataset) {
    if (dataset.size() < mobility::kFeatureCount + 2)
        throw mobility::InsufficientData("only " + std::to_string(dataset.size()) +
                                         " usable users; the regression needs at least " +
                                         std::to_string(mobility::kFeatureCount + 2));
}

nlohmann::ordered_json stage_summary(const mobility::Dataset& dataset, const mobility::OutlierStage& stage) {
    nlohmann::ordered_json j;
    j["n_users"] = dataset.size();
    j["full_data_p"] = stage.full_data.normality ? nlohmann::ordered_json(stage.full_data.normality->p_value)
                                                 : nlohmann::ordered_json(nullptr);
    j["normality_achieved"] = stage.passed;
    auto sols = nlohmann::ordered_json::array();
    for (const auto& rows : stage.solutions) {
        auto users = nlohmann::ordered_json::array();
        for (auto r : rows) users.push_back(dataset.row(r).user_id);
        sols.push_back(users);
    }
    j["solutions"] = sols;
    return j;
}

}  // namespace

extern "C" {

const char* mlf_version(void) { return "1.0.0"; }

mlf_session* mlf_session_create(void) { return new (std::nothrow) mlf_session(); }

void mlf_session_destroy(mlf_session* session) { delete session; }

const char* mlf_last_error(const mlf_session* session) {
    return session == nullptr ? "null session" : session->error.c_str();
}

const char* mlf_last_summary(const mlf_session* session) {
    return session == nullptr ? "{}" : session->summary.c_str();
}

mlf_status mlf_load_config(mlf_session* s, const char* path) {
    return guarded(s, [&] {
        const auto p = require(path, "config path");
        std::ifstream in(p);
        if (!in) throw mobility::UsageError("cannot open config '" + p + "'");
        RunConfig next = s->config;
        next.merge_json(in);
        next.validate();
        s->config = next;
        return MLF_OK;
    });
}

mlf_status mlf_set_timezone(mlf_session* s, const char* offset) {
    return guarded(s, [&] {
        try {
            s->config.timezone = mobility::UtcOffset::parse(require(offset, "timezone"));
        } catch (const mobility::RecordError& e) {
            throw mobility::UsageError(e.what());
        }
        return MLF_OK;
    });
}

mlf_status mlf_set_holidays(mlf_session* s, const char* path) {
    return guarded(s, [&] {
        s->config.holidays = path == nullptr ? "" : path;
        return MLF_OK;
    });
}

mlf_status mlf_set_rounding(mlf_session* s, int decimals) {
    return guarded(s, [&] {
        RunConfig next = s->config;
        next.rounding_decimals = decimals;
        next.validate();
        s->config = next;
        return MLF_OK;
    });
}

mlf_status mlf_clear_thresholds(mlf_session* s) {
    return guarded(s, [&] {
        s->config.thresholds.clear();
        return MLF_OK;
    });
}

mlf_status mlf_add_threshold(mlf_session* s, double threshold) {
    return guarded(s, [&] {
        if (!(threshold > 0.0)) throw mobility::UsageError("z-score thresholds must be positive");
        s->config.thresholds.push_back(threshold);
        return MLF_OK;
    });
}

mlf_status mlf_set_alpha(mlf_session* s, double alpha) {
    return guarded(s, [&] {
        if (!(alpha > 0.0 && alpha < 1.0)) throw mobility::UsageError("alpha must be in (0, 1)");
        s->config.alpha = alpha;
        return MLF_OK;
    });
}

mlf_status mlf_set_max_k(mlf_session* s, size_t max_k) {
    return guarded(s, [&] {
        s->config.max_k = max_k;
        return MLF_OK;
    });
}

mlf_status mlf_set_tier_cutoffs(mlf_session* s, double significant, double nearly_significant, double normal) {
    return guarded(s, [&] {
        RunConfig next = s->config;
        next.cutoffs = mobility::TierCutoffs{significant, nearly_significant, normal};
        next.validate();
        s->config = next;
        return MLF_OK;
    });
}

mlf_status mlf_ingest(mlf_session* s, const char* input, const char* out_dir) {
    return guarded(s, [&] {
        s->config.validate();
        const auto parsed = ingest(s->config, require(input, "input"));
        const auto dir = prepare_dir(out_dir);
        write_file(dir / "records.csv",
                   [&](std::ostream& out) { mobility::write_records(out, parsed.users, s->config.timezone); });
        write_file(dir / "diagnostics.csv",
                   [&](std::ostream& out) { mobility::write_diagnostics_csv(out, parsed.diagnostics); });
        nlohmann::ordered_json j;
        j["command"] = "ingest";
        j["ingest"] = parse_summary(parsed);
        s->summary = j.dump();
        return MLF_OK;
    });
}

mlf_status mlf_score(mlf_session* s, const char* input, const char* out_dir) {
    return guarded(s, [&] {
        s->config.validate();
        const auto parsed = ingest(s->config, require(input, "input"));
        const auto calendar = mobility::load_calendar(s->config.holidays);
        const auto scoring = mobility::score_users(parsed.users, calendar);
        const auto dir = prepare_dir(out_dir);
        write_file(dir / "scores.csv", [&](std::ostream& out) { mobility::write_scores_csv(out, scoring.scores); });
        write_file(dir / "users.csv", [&](std::ostream& out) { mobility::write_users_csv(out, scoring.users); });
        write_file(dir / "diagnostics.csv",
                   [&](std::ostream& out) { mobility::write_diagnostics_csv(out, merged(parsed, scoring)); });
        nlohmann::ordered_json j;
        j["command"] = "score";
        j["ingest"] = parse_summary(parsed);
        j["scored_users"] = scoring.scores.size();
        s->summary = j.dump();
        return MLF_OK;
    });
}

mlf_status mlf_features(mlf_session* s, const char* input, const char* out_dir) {
    return guarded(s, [&] {
        s->config.validate();
        const auto parsed = ingest(s->config, require(input, "input"));
        const auto calendar = mobility::load_calendar(s->config.holidays);
        const auto scoring = mobility::score_users(parsed.users, calendar);
        const auto& dataset = scoring.dataset;
        const auto dir = prepare_dir(out_dir);
        write_file(dir / "features.csv", [&](std::ostream& out) { mobility::write_features_csv(out, dataset); });
        write_file(dir / "describe.csv",
                   [&](std::ostream& out) { mobility::write_describe_csv(out, mobility::describe(dataset)); });
        write_file(dir / "zscore.csv", [&](std::ostream& out) { mobility::write_zscore_csv(out, dataset); });
        write_file(dir / "zscore.svg",
                   [&](std::ostream& out) { mobility::write_zscore_svg(out, dataset, s->config.thresholds); });
        write_file(dir / "diagnostics.csv",
                   [&](std::ostream& out) { mobility::write_diagnostics_csv(out, merged(parsed, scoring)); });
        nlohmann::ordered_json j;
        j["command"] = "features";
        j["ingest"] = parse_summary(parsed);
        j["rows"] = dataset.size();
        s->summary = j.dump();
        return MLF_OK;
    });
}

mlf_status mlf_outliers(mlf_session* s, const char* features_csv, const char* out_dir) {
    return guarded(s, [&] {
        s->config.validate();
        const auto path = require(features_csv, "features CSV");
        mobility::Dataset dataset;
        if (path == "-") {
            dataset = mobility::read_features_csv(std::cin);
        } else {
            std::ifstream in(path);
            if (!in) throw mobility::DataError("cannot open '" + path + "'");
            dataset = mobility::read_features_csv(in);
        }
        require_regression_size(dataset);
        const auto stage = mobility::run_outlier_stage(dataset, s->config);
        const auto dir = prepare_dir(out_dir);
        write_file(dir / "outliers.jsonl",
                   [&](std::ostream& out) { mobility::write_search_log(out, dataset, stage); });
        write_file(dir / "outliers.json",
                   [&](std::ostream& out) { mobility::write_outliers_json(out, dataset, stage); });
        auto j = stage_summary(dataset, stage);
        s->summary = nlohmann::ordered_json{{"command", "outliers"}, {"outliers", j}}.dump();
        return stage.passed ? MLF_OK : MLF_NO_PASS;
    });
}

mlf_status mlf_regress(mlf_session* s, const char* input, const char* out_dir) {
    return guarded(s, [&] {
        RunConfig config = s->config;
        config.input = require(input, "input");
        config.output_dir = prepare_dir(out_dir).string();
        const auto result = mobility::run_pipeline(config);
        nlohmann::ordered_json j;
        j["command"] = "regress";
        j["ingest"] = parse_summary(result.parsed);
        j["outliers"] = stage_summary(result.scoring.dataset, result.analysis.outliers);
        auto cases = nlohmann::ordered_json::array();
        for (const auto& c : result.analysis.report.cases) cases.push_back(c.name);
        j["cases"] = cases;
        s->summary = j.dump();
        return result.exit_status == mobility::kExitNoPass ? MLF_NO_PASS : MLF_OK;
    });
}

mlf_status mlf_report(mlf_session* s, const char* run_dir, const char* out_dir) {
    return guarded(s, [&] {
        s->config.validate();
        const fs::path run = require(run_dir, "run directory");
        const auto report = mobility::rebuild_report(run, prepare_dir(out_dir), s->config.cutoffs);
        nlohmann::ordered_json j;
        j["command"] = "report";
        auto cases = nlohmann::ordered_json::array();
        for (const auto& c : report.cases) cases.push_back(c.name);
        j["cases"] = cases;
        s->summary = j.dump();
        return MLF_OK;
    });
}

mlf_status mlf_synth(mlf_session* s, const char* config_path, int has_seed, uint64_t seed_override,
                     const char* output) {
    return guarded(s, [&] {
        mobility::SynthConfig config;
        if (config_path != nullptr && *config_path != '\0') {
            std::ifstream in(config_path);
            if (!in) throw mobility::UsageError(std::string("cannot open synth config '") + config_path + "'");
            config = mobility::SynthConfig::from_json(in);
        }
        if (has_seed != 0) config.seed = seed_override;
        const auto calendar = mobility::load_calendar(s->config.holidays);
        const auto users = mobility::generate(config, calendar);
        const std::string out = require(output, "output");
        if (out == "-") {
            mobility::write_synth_csv(std::cout, users, config.timezone);
            std::cout.flush();
        } else {
            const fs::path p = out;
            if (p.has_parent_path()) fs::create_directories(p.parent_path());
            write_file(p, [&](std::ostream& o) { mobility::write_synth_csv(o, users, config.timezone); });
        }
        std::size_t records = 0;
        for (const auto& u : users) records += u.records.size();
        nlohmann::ordered_json j;
        j["command"] = "synth";
        j["users"] = users.size();
        j["records"] = records;
        j["seed"] = config.seed;
        s->summary = j.dump();
        return MLF_OK;
    });
}

}  // extern "C"
