// Test doubles for the classifier interface.
#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "duolab/classifier.hpp"
#include "duolab/types.hpp"

namespace duolab::testing {

// Fixed probability table indexed by the sample's first feature. Training is
// a no-op, so batch runs with this model are fully hand-traceable.
class StubClassifier final : public Classifier {
public:
    StubClassifier(DatasetSchema schema, std::vector<std::vector<double>> table)
        : schema_(schema), table_(std::move(table)) {}

    const DatasetSchema& schema() const override { return schema_; }
    std::string variant() const override { return "stub"; }

    PredictionDistribution predict_proba(std::span<const double> features) const override {
        return PredictionDistribution{row(features)};
    }

    std::vector<double> extract_features(std::span<const double> features) const override {
        return {features.begin(), features.end()};
    }

    // Training is a no-op but records every train set it was handed, so tests
    // can inspect the exact clean set C a batch run assembled.
    void train(std::span<const Sample> data, const TrainConfig&, int) override {
        train_calls.emplace_back(data.begin(), data.end());
    }

    std::vector<std::vector<Sample>> train_calls;

    double loss(std::span<const Sample>, double) const override { return 0.0; }
    std::vector<double> loss_gradient(std::span<const Sample>, double) const override {
        return {};
    }

    std::vector<double> parameters() const override { return {}; }
    void set_parameters(std::span<const double>) override {}

    ModelSnapshot snapshot() const override {
        ModelSnapshot snap;
        snap.schema = schema_;
        snap.variant = variant();
        return snap;
    }
    void restore(const ModelSnapshot&) override {}

private:
    const std::vector<double>& row(std::span<const double> features) const {
        auto idx = static_cast<std::size_t>(features[0]);
        if (idx >= table_.size()) throw std::out_of_range("stub: no table row for input");
        return table_[idx];
    }

    DatasetSchema schema_;
    std::vector<std::vector<double>> table_;
};

// Predicts the sample's true label with probability `best` and puts the
// second-best mass on (truth + 1) mod N; reads ground truth, so it is an
// oracle for filter metrics, not a learner.
class TruthOracleClassifier final : public Classifier {
public:
    explicit TruthOracleClassifier(DatasetSchema schema, double best = 0.7)
        : schema_(schema), best_(best) {}

    const DatasetSchema& schema() const override { return schema_; }
    std::string variant() const override { return "truth_oracle"; }

    PredictionDistribution predict_proba(std::span<const double> features) const override {
        // Encodes the true label in the first feature; see make_encoded_batch.
        int truth = static_cast<int>(features[0]);
        const int n = schema_.n_classes;
        std::vector<double> probs(n, 0.0);
        double rest = 1.0 - best_;
        double second = n == 2 ? rest : rest * 0.9;
        double crumbs = n > 2 ? (rest - second) / static_cast<double>(n - 2) : 0.0;
        for (int c = 0; c < n; ++c) probs[c] = crumbs;
        probs[truth] = best_;
        probs[(truth + 1) % n] = second;
        return PredictionDistribution{std::move(probs)};
    }

    std::vector<double> extract_features(std::span<const double> features) const override {
        return {features.begin(), features.end()};
    }

    void train(std::span<const Sample>, const TrainConfig&, int) override {}
    double loss(std::span<const Sample>, double) const override { return 0.0; }
    std::vector<double> loss_gradient(std::span<const Sample>, double) const override {
        return {};
    }
    std::vector<double> parameters() const override { return {}; }
    void set_parameters(std::span<const double>) override {}
    ModelSnapshot snapshot() const override {
        ModelSnapshot snap;
        snap.schema = schema_;
        snap.variant = variant();
        return snap;
    }
    void restore(const ModelSnapshot&) override {}

private:
    DatasetSchema schema_;
    double best_;
};

}  // namespace duolab::testing
