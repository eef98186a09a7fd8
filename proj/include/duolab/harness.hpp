// Experiment configuration, baseline wiring, metrics persistence, and the
// comparison report.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "duolab/classifier.hpp"
#include "duolab/selection.hpp"
#include "duolab/serialize.hpp"
#include "duolab/stream.hpp"
#include "duolab/types.hpp"

namespace duolab {

enum class Method {
    Duolab,              // Q-function routing, no clustering
    DuolabKmeans,        // Q-function routing + kmeans diversity
    OnlyStrong,          // strong labeler only
    OnlyWeak,            // weak labeler only
    CleanAllSuspicious,  // every suspicious sample relabeled, no budget (upper reference)
    NoAl,                // filter only, no cleansing
    OptFilter,           // ground-truth filter, no cleansing (upper reference)
    NoFilter,            // no filtering; whole batch is the suspicious pool
};

Method method_from_string(const std::string& name);
std::string method_name(Method method);
const std::vector<Method>& all_methods();

struct SyntheticConfig {
    int n_classes = 8;
    int n_features = 16;
    int n_samples = 0;  // 0 = exactly what the stream plan needs
    double class_separation = 3.0;
};

struct ExperimentConfig {
    std::string csv_path;  // empty -> synthetic data
    SyntheticConfig synthetic;
    StreamPlan plan{300, 200, 500, 10, 1500};
    double noise_rate = 0.3;
    TrainConfig train;
    ClassifierKind classifier;
    // Desk-scale defaults: budget = 25% of the batch size, cheap strong labeler.
    SelectionConfig selection{2, 125, 10.0, 2, 25, 0};
    Method method = Method::Duolab;
    int filter_top_k = 2;
    double rollback_r = 0.20;
    bool replay_initial = false;
    bool kmeanspp_seeding = true;
    // Robustness experiments only: labeler answers corrupted with this
    // probability (0 = perfect oracles).
    double labeler_error = 0.0;
    int n_repeats = 1;
    std::uint64_t seed = 0;
    std::string out_dir = "runs/exp";

    // Throws ConfigError on hard errors; returns warnings.
    std::vector<std::string> validate() const;
};

// Maps a method onto engine settings (routing policy, filter mode,
// clustering, and the baseline switches).
EngineConfig engine_config_for(const ExperimentConfig& cfg);

struct RunRecord {
    std::vector<BatchMetrics> per_batch;
    double initial_test_accuracy = 0.0;
    double best_test_accuracy = 0.0;
};

// One full stream run of the configured method; seeds derive from
// cfg.seed + repeat_index. No persistence.
RunRecord run_baseline(const ExperimentConfig& cfg, int repeat_index);

// Executes n_repeats runs and persists, under cfg.out_dir:
//   config.json                resolved configuration echo
//   run_<r>.jsonl              one BatchMetrics object per line
//   run_<r>.summary.json       per-run summary
//   summary.json               cross-repeat mean/std
// Re-running the same config reproduces every file byte for byte.
// Returns the run directory path.
std::string run_experiment(const ExperimentConfig& cfg);

// Aggregated statistics for one run directory; the numbers are recomputed
// from the persisted JSONL, never read from the summaries.
struct ReportRow {
    std::string method;
    std::optional<int> strong_cost;
    double acc_pct = 0.0;  // best accuracy over batches, averaged over repeats
    std::optional<double> strong_per_batch;
    std::optional<double> weak_per_batch;
    std::optional<double> cleansed_per_batch;
    std::optional<double> tp_pct;
    std::optional<double> fp_pct;
};

ReportRow summarize_run_dir(const std::string& run_dir);

struct Report {
    std::vector<ReportRow> rows;

    std::string to_text() const;  // aligned table, "-" for inapplicable cells
    std::string to_csv() const;   // empty cells for inapplicable values
};

Report report(const std::vector<std::string>& run_dirs);

// Round-trip loader for the report CSV.
Report load_report_csv(const std::string& path);

void to_json(json& j, const ExperimentConfig& cfg);
void from_json(const json& j, ExperimentConfig& cfg);

}  // namespace duolab
