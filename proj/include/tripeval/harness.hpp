#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tripeval/baselines.hpp"
#include "tripeval/coverage.hpp"
#include "tripeval/dataset.hpp"
#include "tripeval/downstream.hpp"
#include "tripeval/ot.hpp"

namespace tripeval {

inline constexpr std::string_view kToolkitVersion = "0.1.0";

// A built-in generator (spec set) or a list of pre-drawn synthetic CSVs.
struct GeneratorEntry {
    std::string name;
    std::optional<GeneratorSpec> spec;
    std::vector<std::string> files;  // as written in the config
};

struct ExperimentConfig {
    std::string data;    // raw trip CSV, as written in the config
    std::string schema;  // schema JSON
    std::filesystem::path base_dir;  // relative paths resolve against this
    std::optional<std::string> target;  // overrides the schema target

    PreprocessSpec preprocess;
    std::size_t train_size = 40000;
    std::size_t holdout_size = 20000;
    std::optional<std::uint64_t> split_seed;  // derived from master_seed when unset

    std::vector<GeneratorEntry> generators;
    std::size_t fits_per_model = 3;
    std::size_t samples_per_fit = 5;
    std::size_t sample_size = 20000;

    OtConfig ot;
    CoverageConfig coverage;
    std::size_t row_cap = 20000;  // coverage and DCR inputs are subsampled above this
    GbmConfig gbm;
    std::optional<std::uint64_t> gbm_seed;  // derived from master_seed when unset
    std::vector<double> alphas{1, 2, 3, 4, 5, 10, 15, 20, 30, 40, 50};
    double rdcr_alpha = 5.0;

    std::optional<std::pair<std::string, std::string>> zone_columns;  // (pickup, dropoff)
    std::uint64_t master_seed = 0;

    std::filesystem::path resolve(const std::string& path) const;
    void validate() const;
};

ExperimentConfig parse_experiment_config(std::string_view json, const std::filesystem::path& base_dir = {});
ExperimentConfig load_experiment_config(const std::filesystem::path& path);
// Normalized echo with every default filled in.
std::string config_to_json(const ExperimentConfig& cfg);

// Seeds handed out by the harness:
//   split        derive_seed(master, "split")
//   gbm          derive_seed(master, "gbm")
//   fit f        derive_seed(master, "fit:" + name, f)
//   sample f, s  derive_seed(master, name, f, s)
//   metric jobs  derive_seed(master, "<metric>:" + name, f, s)
std::uint64_t sample_seed(std::uint64_t master, std::string_view generator, std::size_t fit, std::size_t sample);

struct MetricSummary {
    bool applicable = true;
    double mean = 0.0;
    double std = 0.0;  // sample standard deviation (n - 1); 0 for a single run
    std::size_t run_count = 0;
    std::vector<double> values;  // per run, in run order
};

MetricSummary summarize(std::vector<double> values);
MetricSummary not_applicable();

struct SweepSummary {
    double alpha = 0.0;
    MetricSummary d_rs;
    MetricSummary d_hs;
    MetricSummary ratio;
};

struct RunInfo {
    std::size_t fit = 0;
    std::size_t sample = 0;
    std::uint64_t seed = 0;
    std::string source;  // file for external runs
    std::string w1_tr_path;
    std::string w1_te_path;
};

struct GeneratorReport {
    std::string name;
    std::string kind;  // generator kind or "external"
    std::optional<std::string> error;
    std::vector<RunInfo> runs;
    std::vector<std::pair<std::string, MetricSummary>> metrics;
    std::vector<SweepSummary> sweep;

    const MetricSummary* find(std::string_view metric) const;
};

// The no-synthetic-data columns of each table.
struct ReferenceValues {
    double w1_tr_te = 0.0;
    std::string w1_path;
    double cov_tr_te = 0.0;
    std::optional<double> g_tr_te;
    double dwn_tr_tr = 0.0;
    double dwn_tr_te = 0.0;
};

struct MetricReport {
    std::string toolkit_version{kToolkitVersion};
    std::string config_json;
    std::uint64_t master_seed = 0;
    std::uint64_t split_seed = 0;
    std::uint64_t gbm_seed = 0;
    std::size_t rows_loaded = 0;
    std::size_t rows_removed = 0;
    std::size_t train_rows = 0;
    std::size_t holdout_rows = 0;
    double rdcr_alpha = 5.0;
    ReferenceValues reference;
    std::vector<GeneratorReport> generators;
};

ReferenceValues reference_baselines(const DataTable& train, const DataTable& holdout, const ExperimentConfig& cfg);

// Loads, preprocesses and splits cfg.data, then runs every generator.
MetricReport run_experiment(const ExperimentConfig& cfg, std::ostream* log = nullptr);
// Same with the raw table supplied directly (cfg.data is ignored).
MetricReport run_experiment(const ExperimentConfig& cfg, const DataTable& raw, std::ostream* log = nullptr);

enum class ReportFormat { Json, Markdown, Csv };
ReportFormat parse_report_format(std::string_view text);

std::string render_report(const MetricReport& report, ReportFormat format);
MetricReport parse_report_json(std::string_view text);
MetricReport load_report(const std::filesystem::path& path);

// "73.17 (0.00)"
std::string format_mean_std(double mean, double std, int decimals);

// Mean alpha sweep of one generator: "alpha,d_rs,d_hs,ratio".
std::string sweep_csv(const GeneratorReport& generator);
// One "<generator>_sweep.csv" per generator with a sweep; returns the paths.
std::vector<std::filesystem::path> write_sweep_csvs(const MetricReport& report, const std::filesystem::path& dir);

}  // namespace tripeval
