// Dataset ingestion, synthetic generation, symmetric label-noise injection,
// and batch scheduling of the online stream.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "duolab/types.hpp"

namespace duolab {

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Dataset {
    DatasetSchema schema;
    std::vector<Sample> samples;
};

struct NoiseConfig {
    double rate = 0.0;  // fraction of samples corrupted, per-sample Bernoulli
    std::uint64_t seed = 0;

    void validate() const;
};

struct StreamPlan {
    int initial_size = 0;     // |D^I|
    int validation_size = 0;  // |D^V|
    int batch_size = 0;
    int n_batches = 0;
    int test_size = 0;

    void validate() const;
    std::int64_t total() const;
};

struct Stream {
    DatasetSchema schema;
    std::vector<Sample> initial;     // clean
    std::vector<Sample> validation;  // clean
    std::vector<Sample> test;        // clean
    std::vector<std::vector<Sample>> batches;  // noisy
};

// Each sample is independently picked with probability cfg.rate; picked ones
// get a uniformly random label different from the truth. True labels are
// never touched.
void inject_noise(std::vector<Sample>& samples, int n_classes, const NoiseConfig& cfg);

// Shuffles the dataset once with `seed`, then slices disjoint initial /
// validation / test / batch splits. Noise is injected once, into the batches
// only. Throws ConfigError if the dataset is too small for the plan.
Stream make_stream(const Dataset& dataset, const StreamPlan& plan, const NoiseConfig& noise,
                   std::uint64_t seed);

// Balanced per-class isotropic unit-variance Gaussian clusters. Class centers
// are placed pairwise class_separation apart (orthonormal directions; needs
// n_classes <= n_features), so the difficulty is controlled exactly.
Dataset generate_gaussian_blobs(int n_classes, int n_features, int n_samples,
                                double class_separation, std::uint64_t seed);

struct CsvLoadResult {
    Dataset dataset;
    std::vector<std::string> label_names;  // index i maps to class i
    bool had_header = false;
};

// CSV format: d numeric feature columns then one label column; optional
// header auto-detected by a non-numeric first row. Labels map to 0..N-1 in
// first-appearance order. If `declared` is given, the feature count must
// match and the observed label cardinality must not exceed n_classes.
CsvLoadResult load_csv(const std::string& path, std::optional<DatasetSchema> declared = {});

void write_csv(const std::string& path, const Dataset& dataset,
               const std::vector<std::string>* label_names = nullptr);

}  // namespace duolab
