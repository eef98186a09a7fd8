#include "duolab/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "duolab/rng.hpp"

namespace duolab {

namespace {

constexpr double kProbFloor = 1e-12;

void softmax_inplace(std::vector<double>& z) {
    double m = *std::max_element(z.begin(), z.end());
    double sum = 0.0;
    for (double& v : z) {
        v = std::exp(v - m);
        sum += v;
    }
    for (double& v : z) v /= sum;
}

// Shared SGD machinery; concrete models supply the per-example forward +
// backward pass on the flat parameter vector.
class GradientModel : public Classifier {
public:
    GradientModel(DatasetSchema schema, std::size_t n_params)
        : schema_(schema), params_(n_params, 0.0) {}

    const DatasetSchema& schema() const override { return schema_; }

    void train(std::span<const Sample> data, const TrainConfig& cfg, int epochs) override {
        cfg.validate();
        if (epochs < 0) throw ConfigError("train: epochs must be >= 0");
        if (data.empty()) throw SchemaError("train: empty training set");
        for (const Sample& s : data) s.validate(schema_);

        Rng rng(cfg.seed);
        std::vector<std::size_t> order(data.size());
        std::iota(order.begin(), order.end(), std::size_t{0});

        std::vector<double> velocity(params_.size(), 0.0);
        std::vector<double> grad(params_.size(), 0.0);

        for (int epoch = 0; epoch < epochs; ++epoch) {
            rng.shuffle(order);
            for (std::size_t start = 0; start < order.size(); start += cfg.minibatch_size) {
                std::size_t end = std::min(order.size(), start + cfg.minibatch_size);
                std::fill(grad.begin(), grad.end(), 0.0);
                double batch_loss = 0.0;
                for (std::size_t i = start; i < end; ++i) {
                    const Sample& s = data[order[i]];
                    batch_loss += example_gradient(s.features(), s.given_label(), grad);
                }
                double inv = 1.0 / static_cast<double>(end - start);
                if (!std::isfinite(batch_loss))
                    throw DivergenceError("train: non-finite minibatch loss");
                for (std::size_t p = 0; p < params_.size(); ++p) {
                    double g = grad[p] * inv + cfg.weight_decay * params_[p];
                    velocity[p] = cfg.momentum * velocity[p] - cfg.learning_rate * g;
                    params_[p] += velocity[p];
                }
            }
            for (double p : params_)
                if (!std::isfinite(p)) throw DivergenceError("train: non-finite parameters");
        }
    }

    double loss(std::span<const Sample> data, double l2) const override {
        if (data.empty()) throw SchemaError("loss: empty data");
        double total = 0.0;
        for (const Sample& s : data) total += example_loss(s.features(), s.given_label());
        double reg = 0.0;
        for (double p : params_) reg += p * p;
        return total / static_cast<double>(data.size()) + 0.5 * l2 * reg;
    }

    std::vector<double> loss_gradient(std::span<const Sample> data, double l2) const override {
        if (data.empty()) throw SchemaError("loss_gradient: empty data");
        std::vector<double> grad(params_.size(), 0.0);
        for (const Sample& s : data) example_gradient(s.features(), s.given_label(), grad);
        double inv = 1.0 / static_cast<double>(data.size());
        for (std::size_t p = 0; p < params_.size(); ++p) grad[p] = grad[p] * inv + l2 * params_[p];
        return grad;
    }

    std::vector<double> parameters() const override { return params_; }

    void set_parameters(std::span<const double> params) override {
        if (params.size() != params_.size())
            throw SchemaError("set_parameters: wrong parameter count");
        params_.assign(params.begin(), params.end());
    }

    ModelSnapshot snapshot() const override {
        ModelSnapshot snap;
        snap.schema = schema_;
        snap.variant = variant();
        snap.hidden_units = hidden_units();
        snap.parameters = params_;
        return snap;
    }

    void restore(const ModelSnapshot& snap) override {
        if (snap.schema != schema_ || snap.variant != variant() ||
            snap.hidden_units != hidden_units() || snap.parameters.size() != params_.size())
            throw SchemaError("restore: snapshot does not match model");
        params_ = snap.parameters;
    }

protected:
    virtual int hidden_units() const { return 0; }

    // Adds the example's cross-entropy gradient into grad, returns its loss.
    virtual double example_gradient(std::span<const double> x, int label,
                                    std::vector<double>& grad) const = 0;
    virtual double example_loss(std::span<const double> x, int label) const = 0;

    void check_input(std::span<const double> x) const {
        if (static_cast<int>(x.size()) != schema_.n_features)
            throw SchemaError("input has wrong feature dimension");
    }

    DatasetSchema schema_;
    std::vector<double> params_;
};

// Softmax regression: logits = W x + b. Parameters are [W row-major, b],
// zero-initialized (the objective is convex).
class SoftmaxLinear final : public GradientModel {
public:
    explicit SoftmaxLinear(DatasetSchema schema)
        : GradientModel(schema, static_cast<std::size_t>(schema.n_classes) * schema.n_features +
                                    schema.n_classes) {}

    std::string variant() const override { return "softmax_linear"; }

    PredictionDistribution predict_proba(std::span<const double> x) const override {
        std::vector<double> z = logits(x);
        softmax_inplace(z);
        return PredictionDistribution{std::move(z)};
    }

    std::vector<double> extract_features(std::span<const double> x) const override {
        return logits(x);
    }

private:
    std::vector<double> logits(std::span<const double> x) const {
        check_input(x);
        const int N = schema_.n_classes, d = schema_.n_features;
        std::vector<double> z(N);
        for (int c = 0; c < N; ++c) {
            double acc = params_[static_cast<std::size_t>(N) * d + c];  // bias
            const double* w = &params_[static_cast<std::size_t>(c) * d];
            for (int j = 0; j < d; ++j) acc += w[j] * x[j];
            z[c] = acc;
        }
        return z;
    }

    double example_gradient(std::span<const double> x, int label,
                            std::vector<double>& grad) const override {
        const int N = schema_.n_classes, d = schema_.n_features;
        std::vector<double> p = logits(x);
        softmax_inplace(p);
        double loss = -std::log(std::max(p[label], kProbFloor));
        for (int c = 0; c < N; ++c) {
            double dz = p[c] - (c == label ? 1.0 : 0.0);
            double* gw = &grad[static_cast<std::size_t>(c) * d];
            for (int j = 0; j < d; ++j) gw[j] += dz * x[j];
            grad[static_cast<std::size_t>(N) * d + c] += dz;
        }
        return loss;
    }

    double example_loss(std::span<const double> x, int label) const override {
        std::vector<double> p = logits(x);
        softmax_inplace(p);
        return -std::log(std::max(p[label], kProbFloor));
    }
};

// One hidden layer with rectified-linear activation. Parameters are
// [W1 row-major, b1, W2 row-major, b2]; init is seeded uniform scaled by
// 1/sqrt(fan_in), biases zero.
class Mlp final : public GradientModel {
public:
    Mlp(DatasetSchema schema, int hidden, std::uint64_t init_seed)
        : GradientModel(schema, param_count(schema, hidden)), hidden_(hidden) {
        Rng rng(init_seed);
        const int d = schema.n_features, N = schema.n_classes;
        double s1 = 1.0 / std::sqrt(static_cast<double>(d));
        double s2 = 1.0 / std::sqrt(static_cast<double>(hidden));
        for (int i = 0; i < hidden * d; ++i) params_[i] = rng.uniform(-s1, s1);
        std::size_t w2_off = w2_offset();
        for (int i = 0; i < N * hidden; ++i) params_[w2_off + i] = rng.uniform(-s2, s2);
    }

    std::string variant() const override { return "mlp"; }

    PredictionDistribution predict_proba(std::span<const double> x) const override {
        std::vector<double> h = hidden_activations(x);
        std::vector<double> z = output_logits(h);
        softmax_inplace(z);
        return PredictionDistribution{std::move(z)};
    }

    std::vector<double> extract_features(std::span<const double> x) const override {
        return hidden_activations(x);
    }

protected:
    int hidden_units() const override { return hidden_; }

private:
    static std::size_t param_count(const DatasetSchema& s, int hidden) {
        return static_cast<std::size_t>(hidden) * s.n_features + hidden +
               static_cast<std::size_t>(s.n_classes) * hidden + s.n_classes;
    }

    std::size_t b1_offset() const { return static_cast<std::size_t>(hidden_) * schema_.n_features; }
    std::size_t w2_offset() const { return b1_offset() + hidden_; }
    std::size_t b2_offset() const {
        return w2_offset() + static_cast<std::size_t>(schema_.n_classes) * hidden_;
    }

    std::vector<double> hidden_activations(std::span<const double> x) const {
        check_input(x);
        const int d = schema_.n_features;
        std::vector<double> h(hidden_);
        for (int i = 0; i < hidden_; ++i) {
            double acc = params_[b1_offset() + i];
            const double* w = &params_[static_cast<std::size_t>(i) * d];
            for (int j = 0; j < d; ++j) acc += w[j] * x[j];
            h[i] = acc > 0.0 ? acc : 0.0;
        }
        return h;
    }

    std::vector<double> output_logits(const std::vector<double>& h) const {
        const int N = schema_.n_classes;
        std::vector<double> z(N);
        for (int c = 0; c < N; ++c) {
            double acc = params_[b2_offset() + c];
            const double* w = &params_[w2_offset() + static_cast<std::size_t>(c) * hidden_];
            for (int i = 0; i < hidden_; ++i) acc += w[i] * h[i];
            z[c] = acc;
        }
        return z;
    }

    double example_gradient(std::span<const double> x, int label,
                            std::vector<double>& grad) const override {
        const int N = schema_.n_classes, d = schema_.n_features;
        std::vector<double> h = hidden_activations(x);
        std::vector<double> p = output_logits(h);
        softmax_inplace(p);
        double loss = -std::log(std::max(p[label], kProbFloor));

        std::vector<double> dh(hidden_, 0.0);
        for (int c = 0; c < N; ++c) {
            double dz = p[c] - (c == label ? 1.0 : 0.0);
            double* gw2 = &grad[w2_offset() + static_cast<std::size_t>(c) * hidden_];
            const double* w2 = &params_[w2_offset() + static_cast<std::size_t>(c) * hidden_];
            for (int i = 0; i < hidden_; ++i) {
                gw2[i] += dz * h[i];
                dh[i] += dz * w2[i];
            }
            grad[b2_offset() + c] += dz;
        }
        for (int i = 0; i < hidden_; ++i) {
            if (h[i] <= 0.0) continue;  // relu gate
            double* gw1 = &grad[static_cast<std::size_t>(i) * d];
            for (int j = 0; j < d; ++j) gw1[j] += dh[i] * x[j];
            grad[b1_offset() + i] += dh[i];
        }
        return loss;
    }

    double example_loss(std::span<const double> x, int label) const override {
        std::vector<double> h = hidden_activations(x);
        std::vector<double> p = output_logits(h);
        softmax_inplace(p);
        return -std::log(std::max(p[label], kProbFloor));
    }

    int hidden_;
};

}  // namespace

void TrainConfig::validate() const {
    if (learning_rate < 0.0) throw ConfigError("train: learning_rate must be >= 0");
    if (momentum < 0.0 || momentum >= 1.0) throw ConfigError("train: momentum must be in [0,1)");
    if (weight_decay < 0.0) throw ConfigError("train: weight_decay must be >= 0");
    if (epochs_initial < 1) throw ConfigError("train: epochs_initial must be >= 1");
    if (epochs_per_batch < 1) throw ConfigError("train: epochs_per_batch must be >= 1");
    if (minibatch_size < 1) throw ConfigError("train: minibatch_size must be >= 1");
}

void ClassifierKind::validate() const {
    if (variant == Variant::Mlp && hidden_units < 1)
        throw ConfigError("classifier: mlp hidden_units must be >= 1");
}

std::string ClassifierKind::name() const {
    return variant == Variant::SoftmaxLinear ? "softmax_linear" : "mlp";
}

std::unique_ptr<Classifier> make_classifier(const ClassifierKind& kind, const DatasetSchema& schema,
                                            std::uint64_t init_seed) {
    kind.validate();
    schema.validate();
    if (kind.variant == ClassifierKind::Variant::SoftmaxLinear)
        return std::make_unique<SoftmaxLinear>(schema);
    return std::make_unique<Mlp>(schema, kind.hidden_units, init_seed);
}

RankedLabels rank_labels(const PredictionDistribution& dist) {
    RankedLabels ranked;
    ranked.order.resize(dist.probs.size());
    std::iota(ranked.order.begin(), ranked.order.end(), 0);
    std::stable_sort(ranked.order.begin(), ranked.order.end(),
                     [&dist](int a, int b) { return dist.probs[a] > dist.probs[b]; });
    return ranked;
}

double validation_loss(const Classifier& model, std::span<const Sample> validation) {
    if (validation.empty()) throw SchemaError("validation_loss: empty validation set");
    double total = 0.0;
    for (const Sample& s : validation) {
        PredictionDistribution dist = model.predict_proba(s.features());
        total += -std::log(std::max(dist.probs[s.given_label()], kProbFloor));
    }
    return total / static_cast<double>(validation.size());
}

double top1_accuracy(const Classifier& model, std::span<const Sample> samples) {
    if (samples.empty()) return 0.0;
    int correct = 0;
    for (const Sample& s : samples) {
        RankedLabels ranked = rank_labels(model.predict_proba(s.features()));
        if (ranked.order[0] == s.given_label()) ++correct;
    }
    return static_cast<double>(correct) / static_cast<double>(samples.size());
}

}  // namespace duolab
