// Pluggable probabilistic classifier with gradient training, feature
// extraction for clustering, and snapshot/rollback.
#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "duolab/types.hpp"

namespace duolab {

struct TrainConfig {
    double learning_rate = 0.1;
    double momentum = 0.9;
    double weight_decay = 2e-3;
    int epochs_initial = 60;
    int epochs_per_batch = 20;
    int minibatch_size = 32;
    std::uint64_t seed = 0;

    void validate() const;
};

struct ClassifierKind {
    enum class Variant { SoftmaxLinear, Mlp };

    Variant variant = Variant::SoftmaxLinear;
    int hidden_units = 32;  // mlp only

    static ClassifierKind softmax_linear() { return {Variant::SoftmaxLinear, 0}; }
    static ClassifierKind mlp(int hidden_units) { return {Variant::Mlp, hidden_units}; }

    void validate() const;
    std::string name() const;
};

// Interface every model plugs into. train() and restore() need exclusive
// access; the const members are safe to call concurrently between them.
class Classifier {
public:
    virtual ~Classifier() = default;

    virtual const DatasetSchema& schema() const = 0;
    virtual std::string variant() const = 0;

    // Softmax output over the N classes. Deterministic.
    virtual PredictionDistribution predict_proba(std::span<const double> features) const = 0;

    // Last-layer input used for clustering: the logits for the linear model,
    // the hidden activations for the mlp.
    virtual std::vector<double> extract_features(std::span<const double> features) const = 0;

    // Minibatch SGD with momentum and weight decay on cross-entropy loss for
    // the given number of epochs. Labels are the samples' given labels.
    // Deterministic given cfg.seed. Throws DivergenceError on non-finite
    // loss or parameters, SchemaError on dimension mismatch.
    virtual void train(std::span<const Sample> data, const TrainConfig& cfg, int epochs) = 0;

    // Mean cross-entropy on data plus 0.5 * l2 * ||theta||^2, and its exact
    // gradient; the pair the finite-difference check exercises.
    virtual double loss(std::span<const Sample> data, double l2) const = 0;
    virtual std::vector<double> loss_gradient(std::span<const Sample> data, double l2) const = 0;

    virtual std::vector<double> parameters() const = 0;
    virtual void set_parameters(std::span<const double> params) = 0;

    virtual ModelSnapshot snapshot() const = 0;
    virtual void restore(const ModelSnapshot& snap) = 0;
};

// init_seed drives the mlp weight init; the linear model is zero-initialized
// and ignores it.
std::unique_ptr<Classifier> make_classifier(const ClassifierKind& kind, const DatasetSchema& schema,
                                            std::uint64_t init_seed);

// Full descending ordering of the labels by probability; equal probabilities
// break toward the lower class index.
RankedLabels rank_labels(const PredictionDistribution& dist);

// Mean negative log-likelihood of the labels on a clean validation set,
// probabilities floored at 1e-12 before the log. Lower = more reliable.
double validation_loss(const Classifier& model, std::span<const Sample> validation);

// Top-1 accuracy against the samples' given labels (meaningful on clean sets).
double top1_accuracy(const Classifier& model, std::span<const Sample> samples);

}  // namespace duolab
