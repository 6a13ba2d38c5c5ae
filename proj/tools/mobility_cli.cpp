// Command-line front end; talks to the library only through the C API.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mobility/mobility.h"

namespace {

struct Options {
    std::string config;
    std::string tz;
    std::string out = ".";
    std::string input = "-";
    std::string holidays;
    std::vector<double> thresholds;
    std::optional<double> alpha;
    std::optional<std::size_t> max_k;
    std::optional<int> rounding;
    std::vector<double> cutoffs;
    std::optional<std::uint64_t> seed;
    std::string output = "-";
    std::string run_dir;
};

class Session {
public:
    Session() : s_(mlf_session_create()) {}
    ~Session() { mlf_session_destroy(s_); }
    Session(const Session&) = delete;
    Session& operator=(const Session&) = delete;
    mlf_session* get() const { return s_; }

private:
    mlf_session* s_;
};

int report(mlf_session* s, mlf_status status, const char* command) {
    if (status == MLF_OK || status == MLF_NO_PASS) {
        std::cout << mlf_last_summary(s) << '\n';
        if (status == MLF_NO_PASS)
            std::cerr << "mobility " << command << ": no removal set within the search limits passed the normality test\n";
    } else {
        std::cerr << "mobility " << command << ": " << mlf_last_error(s) << '\n';
    }
    // internal failures share the data-error exit code
    return status == MLF_INTERNAL ? MLF_DATA : static_cast<int>(status);
}

mlf_status configure(mlf_session* s, const Options& o) {
    mlf_status st = MLF_OK;
    if (!o.config.empty() && (st = mlf_load_config(s, o.config.c_str())) != MLF_OK) return st;
    if (!o.tz.empty() && (st = mlf_set_timezone(s, o.tz.c_str())) != MLF_OK) return st;
    if (!o.holidays.empty() && (st = mlf_set_holidays(s, o.holidays.c_str())) != MLF_OK) return st;
    if (o.rounding && (st = mlf_set_rounding(s, *o.rounding)) != MLF_OK) return st;
    if (!o.thresholds.empty()) {
        mlf_clear_thresholds(s);
        for (double t : o.thresholds)
            if ((st = mlf_add_threshold(s, t)) != MLF_OK) return st;
    }
    if (o.alpha && (st = mlf_set_alpha(s, *o.alpha)) != MLF_OK) return st;
    if (o.max_k && (st = mlf_set_max_k(s, *o.max_k)) != MLF_OK) return st;
    if (!o.cutoffs.empty()) {
        if (o.cutoffs.size() != 3) return MLF_USAGE;
        if ((st = mlf_set_tier_cutoffs(s, o.cutoffs[0], o.cutoffs[1], o.cutoffs[2])) != MLF_OK) return st;
    }
    return MLF_OK;
}

}  // namespace

int main(int argc, char** argv) {
    Options o;
    CLI::App app{"Temporal factors of human mobility lifestyle"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(mlf_version()));
    app.add_option("--config", o.config, "JSON run configuration")->check(CLI::ExistingFile);
    app.add_option("--tz", o.tz, "UTC offset for wall-clock hours, e.g. +09:00");
    app.add_option("--out", o.out, "Output directory");

    const auto add_input = [&](CLI::App* cmd) {
        cmd->add_option("--input", o.input, "GPS records CSV, - for standard input");
        cmd->add_option("--holidays", o.holidays, "National holiday list, one YYYY-MM-DD per line");
        cmd->add_option("--rounding", o.rounding, "Coordinate rounding decimals");
    };
    const auto add_search = [&](CLI::App* cmd) {
        cmd->add_option("--threshold", o.thresholds, "z-score threshold; repeat for a fallback sequence")
            ->allow_extra_args(false);
        cmd->add_option("--alpha", o.alpha, "Normality test significance level");
        cmd->add_option("--max-k", o.max_k, "Largest removal set size to try");
    };

    auto* ingest = app.add_subcommand("ingest", "Validate, clean and localize GPS records");
    add_input(ingest);
    auto* score = app.add_subcommand("score", "Similarity score per user");
    add_input(score);
    auto* features = app.add_subcommand("features", "Temporal feature table with z-scores");
    add_input(features);
    features->add_option("--threshold", o.thresholds, "z-score threshold lines to draw")->allow_extra_args(false);
    auto* outliers = app.add_subcommand("outliers", "Normality gate and minimal outlier removal search");
    outliers->add_option("--input", o.input, "features.csv from the features stage, - for standard input");
    add_search(outliers);
    auto* regress = app.add_subcommand("regress", "Full pipeline with the factor report");
    add_input(regress);
    add_search(regress);
    regress->add_option("--tier-cutoffs", o.cutoffs, "Three increasing p cutoffs")->expected(3);
    auto* synth = app.add_subcommand("synth", "Generate synthetic GPS traces");
    synth->add_option("--seed", o.seed, "Seed override");
    synth->add_option("--output", o.output, "Output CSV, - for standard output");
    synth->add_option("--holidays", o.holidays, "National holiday list used for the effects");
    auto* rep = app.add_subcommand("report", "Rebuild the report of a finished run");
    rep->add_option("--run-dir", o.run_dir, "Directory written by regress")->required()->check(CLI::ExistingDirectory);
    rep->add_option("--tier-cutoffs", o.cutoffs, "Three increasing p cutoffs")->expected(3);

    for (auto* cmd : app.get_subcommands({})) cmd->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : MLF_USAGE;
    }

    Session session;
    mlf_session* s = session.get();
    if (s == nullptr) {
        std::cerr << "mobility: cannot allocate session\n";
        return MLF_DATA;
    }
    // for synth the global --config names the generator config instead
    std::string synth_config;
    if (*synth) std::swap(synth_config, o.config);
    if (const auto st = configure(s, o); st != MLF_OK) {
        std::cerr << "mobility: " << (*mlf_last_error(s) ? mlf_last_error(s) : "invalid options") << '\n';
        return st == MLF_INTERNAL ? MLF_DATA : static_cast<int>(st);
    }

    const char* out = o.out.c_str();
    if (*ingest) return report(s, mlf_ingest(s, o.input.c_str(), out), "ingest");
    if (*score) return report(s, mlf_score(s, o.input.c_str(), out), "score");
    if (*features) return report(s, mlf_features(s, o.input.c_str(), out), "features");
    if (*outliers) return report(s, mlf_outliers(s, o.input.c_str(), out), "outliers");
    if (*regress) return report(s, mlf_regress(s, o.input.c_str(), out), "regress");
    if (*synth) {
        const auto st = mlf_synth(s, synth_config.empty() ? nullptr : synth_config.c_str(), o.seed ? 1 : 0,
                                  o.seed.value_or(0), o.output.c_str());
        if (st != MLF_OK || o.output != "-") return report(s, st, "synth");
        return 0;
    }
    return report(s, mlf_report(s, o.run_dir.c_str(), out), "report");
}
