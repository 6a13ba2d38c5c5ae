#ifndef MOBILITY_MOBILITY_H
#define MOBILITY_MOBILITY_H

/* C interface to the mobility lifestyle factor toolkit.
 *
 * A session holds the run configuration. Every operation returns an
 * mlf_status; on failure mlf_last_error() describes the problem. Paths are
 * UTF-8; "-" as an input path means standard input and as an output path
 * standard output. Returned strings stay valid until the next call on the
 * same session. Sessions are not thread-safe; distinct sessions are
 * independent. */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(MOBILITY_BUILDING)
#    define MLF_API __declspec(dllexport)
#  else
#    define MLF_API __declspec(dllimport)
#  endif
#else
#  define MLF_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum mlf_status {
    MLF_OK = 0,
    MLF_USAGE = 1,    /* invalid argument or configuration */
    MLF_DATA = 2,     /* unreadable or unusable input data */
    MLF_NO_PASS = 3,  /* outlier search exhausted without a normal fit */
    MLF_INTERNAL = 4
} mlf_status;

typedef struct mlf_session mlf_session;

MLF_API const char* mlf_version(void);

MLF_API mlf_session* mlf_session_create(void);
MLF_API void mlf_session_destroy(mlf_session* session);

MLF_API const char* mlf_last_error(const mlf_session* session);
/* JSON object summarising the last successful (or no-pass) operation. */
MLF_API const char* mlf_last_summary(const mlf_session* session);

/* Configuration. */
MLF_API mlf_status mlf_load_config(mlf_session* session, const char* path);
MLF_API mlf_status mlf_set_timezone(mlf_session* session, const char* offset);
MLF_API mlf_status mlf_set_holidays(mlf_session* session, const char* path);
MLF_API mlf_status mlf_set_rounding(mlf_session* session, int decimals);
MLF_API mlf_status mlf_clear_thresholds(mlf_session* session);
MLF_API mlf_status mlf_add_threshold(mlf_session* session, double threshold);
MLF_API mlf_status mlf_set_alpha(mlf_session* session, double alpha);
MLF_API mlf_status mlf_set_max_k(mlf_session* session, size_t max_k);
MLF_API mlf_status mlf_set_tier_cutoffs(mlf_session* session, double significant, double nearly_significant,
                                        double normal);

/* Stages. Each writes its artifacts into out_dir (created if missing). */

/* records.csv (cleaned, sorted, deduplicated) and diagnostics.csv. */
MLF_API mlf_status mlf_ingest(mlf_session* session, const char* input, const char* out_dir);
/* scores.csv, users.csv and diagnostics.csv. */
MLF_API mlf_status mlf_score(mlf_session* session, const char* input, const char* out_dir);
/* features.csv, describe.csv, zscore.csv and zscore.svg. */
MLF_API mlf_status mlf_features(mlf_session* session, const char* input, const char* out_dir);
/* Normality gate and outlier search on a features.csv: outliers.json and
 * outliers.jsonl. Returns MLF_NO_PASS when no removal set passes. */
MLF_API mlf_status mlf_outliers(mlf_session* session, const char* features_csv, const char* out_dir);
/* Full pipeline: every artifact above plus report.csv/json/md and QQ plots. */
MLF_API mlf_status mlf_regress(mlf_session* session, const char* input, const char* out_dir);
/* Rebuilds the report of a finished run directory into out_dir. */
MLF_API mlf_status mlf_report(mlf_session* session, const char* run_dir, const char* out_dir);

/* Synthetic traces from a JSON config. seed_override is used when has_seed
 * is non-zero. A NULL config_path uses the built-in defaults. */
MLF_API mlf_status mlf_synth(mlf_session* session, const char* config_path, int has_seed, uint64_t seed_override,
                             const char* output);

#ifdef __cplusplus
}
#endif

#endif
