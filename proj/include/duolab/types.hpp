// Core domain types shared by all modules.
#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace duolab {

// Thrown when data does not match the declared dataset schema.
struct SchemaError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Thrown on invalid configuration values, before any compute starts.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Thrown when training produces a non-finite loss or parameters.
struct DivergenceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DatasetSchema {
    int n_classes = 0;   // N
    int n_features = 0;  // d

    void validate() const;
    bool valid_label(int label) const { return label >= 0 && label < n_classes; }
    bool operator==(const DatasetSchema&) const = default;
};

class Sample;
int ground_truth(const Sample& s);

// One stream element: feature vector plus the given (possibly noisy) label.
// The hidden true label is private on purpose; the only way to read it is
// ground_truth() below, whose call sites are the oracle labelers, noise
// injection, and metrics. Training and selection code never touches it.
class Sample {
public:
    Sample() = default;
    Sample(std::int64_t id, std::vector<double> features, int given_label, int true_label)
        : id_(id), features_(std::move(features)), given_label_(given_label), true_label_(true_label) {}

    std::int64_t id() const { return id_; }
    const std::vector<double>& features() const { return features_; }
    int given_label() const { return given_label_; }

    // Label correction applied when a labeler cleanses the sample.
    void relabel(int label) { given_label_ = label; }

    // Label corruption applied by noise injection; keeps the true label intact.
    void corrupt(int label) { given_label_ = label; }

    void validate(const DatasetSchema& schema) const;

private:
    friend int ground_truth(const Sample& s);

    std::int64_t id_ = -1;
    std::vector<double> features_;
    int given_label_ = -1;
    int true_label_ = -1;
};

// Oracle/metrics access point for the hidden ground-truth label.
inline int ground_truth(const Sample& s) { return s.true_label_; }

// Softmax output p(x) over the N classes.
struct PredictionDistribution {
    std::vector<double> probs;

    void validate() const;  // entries in [0,1], sum within 1e-6 of 1
};

// Full label ordering by descending predicted probability (ties: lower class
// index first). order[0] is the top prediction.
struct RankedLabels {
    std::vector<int> order;
};

// Per-batch split: clean set C, suspicious set U, selected candidates K
// (most informative first), and discarded leftovers.
struct BatchPartition {
    std::vector<Sample> clean;
    std::vector<Sample> suspicious;
    std::vector<Sample> selected;
    std::vector<Sample> discarded;

    void validate() const;  // the four lists are pairwise disjoint by id
};

struct SelectionConfig {
    int strong_cost = 10;         // c: one strong query costs c weak-query units
    int budget = 250;             // B: per-batch budget in weak-query units
    double q_threshold = 10.0;    // Q-bar: above it, route to the strong labeler
    int max_weak_per_sample = 2;  // w-bar
    int per_cluster_top = 50;     // samples kept per cluster when clustering is on
    int n_clusters = 0;           // 0 = one cluster per class

    // Throws ConfigError on hard errors; returns human-readable warnings
    // (e.g. budget < strong_cost makes the strong labeler unreachable).
    std::vector<std::string> validate() const;
};

// Per-batch query accounting. Charging past the budget is impossible: the
// charge methods throw instead of overdrawing.
class CostLedger {
public:
    CostLedger(int strong_cost, int budget);

    int weak_queries() const { return weak_; }      // E_W
    int strong_queries() const { return strong_; }  // E_S
    int strong_cost() const { return strong_cost_; }
    int budget() const { return budget_; }
    int spent() const { return weak_ + strong_cost_ * strong_; }

    bool can_afford_weak() const { return spent() + 1 <= budget_; }
    bool can_afford_strong() const { return spent() + strong_cost_ <= budget_; }

    void charge_weak();
    void charge_strong();

private:
    int strong_cost_;
    int budget_;
    int weak_ = 0;
    int strong_ = 0;
};

// Full classifier parameter state for rollback. Restoring a snapshot yields
// bit-identical predictions to the moment of capture.
struct ModelSnapshot {
    DatasetSchema schema;
    std::string variant;             // "softmax_linear" | "mlp"
    int hidden_units = 0;            // mlp only
    std::vector<double> parameters;  // flat parameter blob
    int batch_index = -1;
    double validation_accuracy = 0.0;
};

struct BatchMetrics {
    int batch_index = 0;
    double test_accuracy = 0.0;
    double val_accuracy = 0.0;
    // Fractions of the full batch; absent when the run has no filtering step.
    std::optional<double> filter_tp_rate;
    std::optional<double> filter_fp_rate;
    int n_strong = 0;
    int n_weak = 0;
    int n_cleansed = 0;
    int n_discarded = 0;
    bool rolled_back = false;

    void validate() const;
};

}  // namespace duolab
