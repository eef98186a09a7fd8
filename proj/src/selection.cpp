#include "duolab/selection.hpp"

#include <algorithm>
#include <cmath>

#include "duolab/diversity.hpp"
#include "duolab/filter.hpp"
#include "duolab/rng.hpp"

namespace duolab {

namespace {
constexpr double kInformativenessFloor = 1e-6;
}

double q_value(const QContext& ctx, double informativeness) {
    double i = std::max(informativeness, kInformativenessFloor);
    double e_s = std::max(ctx.ledger->strong_queries(), 1);
    return ctx.reliability / (i * ctx.config->strong_cost * e_s);
}

LabelerChoice choose_labeler(const QContext& ctx, double informativeness) {
    if (q_value(ctx, informativeness) > ctx.config->q_threshold && ctx.ledger->can_afford_strong())
        return LabelerChoice::Strong;
    if (ctx.ledger->can_afford_weak()) return LabelerChoice::Weak;
    return LabelerChoice::None;
}

namespace {

LabelerChoice pick(const QContext& ctx, double informativeness, RoutingPolicy policy) {
    switch (policy) {
        case RoutingPolicy::QFunction:
            return choose_labeler(ctx, informativeness);
        case RoutingPolicy::OnlyStrong:
            return ctx.ledger->can_afford_strong() ? LabelerChoice::Strong : LabelerChoice::None;
        case RoutingPolicy::OnlyWeak:
            return ctx.ledger->can_afford_weak() ? LabelerChoice::Weak : LabelerChoice::None;
    }
    return LabelerChoice::None;
}

}  // namespace

CleanseOutcome cleanse_sample(const QContext& ctx, CostLedger& ledger, StrongLabeler& strong,
                              WeakLabeler& weak, const Sample& s, const RankedLabels& omega,
                              double informativeness, RoutingPolicy policy) {
    CleanseOutcome outcome;
    const int w_max = ctx.config->max_weak_per_sample;
    int w = 0;

    while (true) {
        LabelerChoice choice = pick(ctx, informativeness, policy);
        if (choice == LabelerChoice::None) return outcome;

        if (choice == LabelerChoice::Strong) {
            auto label = strong_query(ledger, strong, s);
            ++outcome.strong_queries;
            outcome.cleaned = true;
            outcome.label = *label;
            return outcome;
        }

        // Weak: ask for the next candidate in omega order.
        if (w >= w_max || w >= static_cast<int>(omega.order.size())) return outcome;
        int candidate = omega.order[w];
        auto answer = weak_query(ledger, weak, s, candidate);
        ++w;
        ++outcome.weak_queries;
        if (*answer) {
            outcome.cleaned = true;
            outcome.label = candidate;
            return outcome;
        }
        if (w >= w_max) return outcome;  // cap reached without a yes
    }
}

void EngineConfig::validate() const {
    selection.validate();
    train.validate();
    if (filter_top_k < 1) throw ConfigError("engine: filter_top_k must be >= 1");
    if (rollback_r <= 0.0 || rollback_r >= 1.0)
        throw ConfigError("engine: rollback_r must be in (0,1)");
}

namespace {

BatchPartition split_batch(const Classifier& model, std::span<const Sample> batch,
                           const EngineConfig& cfg) {
    switch (cfg.filter) {
        case FilterMode::Model:
            return filter_batch(model, batch, cfg.filter_top_k);
        case FilterMode::GroundTruth: {
            BatchPartition out;
            for (const Sample& s : batch)
                (s.given_label() == ground_truth(s) ? out.clean : out.suspicious).push_back(s);
            return out;
        }
        case FilterMode::Off: {
            BatchPartition out;
            out.suspicious.assign(batch.begin(), batch.end());
            return out;
        }
    }
    return {};
}

}  // namespace

BatchMetrics run_batch(Classifier& model, std::span<const Sample> batch,
                       std::span<const Sample> validation, std::span<const Sample> test,
                       const EngineConfig& cfg, std::uint64_t seed, StrongLabeler& strong,
                       WeakLabeler& weak, int batch_index, std::span<const Sample> extra_train) {
    cfg.validate();
    if (batch.empty()) throw ConfigError("run_batch: empty batch");
    if (validation.empty()) throw ConfigError("run_batch: empty validation set");

    ModelSnapshot pre_batch = model.snapshot();
    double start_val_acc = top1_accuracy(model, validation);
    pre_batch.batch_index = batch_index;
    pre_batch.validation_accuracy = start_val_acc;

    // L_V is fixed for the whole batch, before any queries.
    double reliability = validation_loss(model, validation);

    BatchMetrics metrics;
    metrics.batch_index = batch_index;

    BatchPartition partition = split_batch(model, batch, cfg);
    if (cfg.filter != FilterMode::Off) {
        FilterRates rates = score_filter(partition, batch);
        metrics.filter_tp_rate = rates.tp;
        metrics.filter_fp_rate = rates.fp;
    }

    CostLedger ledger(cfg.selection.strong_cost, cfg.selection.budget);

    if (!cfg.no_queries && !partition.suspicious.empty()) {
        // Samples move between the partition lists so they stay disjoint:
        // suspicious -> selected (K) or discarded, then selected -> clean or
        // discarded as cleansing resolves each candidate.
        const std::vector<Sample> suspicious = std::move(partition.suspicious);
        partition.suspicious.clear();

        // Predictions are taken once, with the model as of batch arrival.
        std::vector<double> scores(suspicious.size());
        std::vector<RankedLabels> omegas(suspicious.size());
        std::vector<std::int64_t> ids(suspicious.size());
        for (std::size_t i = 0; i < suspicious.size(); ++i) {
            PredictionDistribution dist = model.predict_proba(suspicious[i].features());
            scores[i] = bvsb(dist);
            omegas[i] = rank_labels(dist);
            ids[i] = suspicious[i].id();
        }

        std::vector<int> order;
        if (cfg.use_clustering && !cfg.clean_all_suspicious) {
            std::vector<std::vector<double>> feats(suspicious.size());
            for (std::size_t i = 0; i < suspicious.size(); ++i)
                feats[i] = model.extract_features(suspicious[i].features());
            int k = cfg.selection.n_clusters > 0 ? cfg.selection.n_clusters
                                                 : model.schema().n_classes;
            ClusteringResult clusters =
                kmeans(feats, k, seed, 100, 1e-6, cfg.kmeanspp_seeding);
            order = select_top_k_per_cluster(clusters, scores, ids, cfg.selection.per_cluster_top);
        } else {
            order = rank_suspicious_no_clustering(scores, ids);
        }

        std::vector<bool> taken(suspicious.size(), false);
        for (int idx : order) {
            taken[idx] = true;
            partition.selected.push_back(suspicious[idx]);
        }
        for (std::size_t i = 0; i < suspicious.size(); ++i)
            if (!taken[i]) partition.discarded.push_back(suspicious[i]);
        partition.validate();

        QContext ctx{reliability, &ledger, &cfg.selection};
        std::vector<Sample> queue = std::move(partition.selected);
        partition.selected.clear();
        for (std::size_t q = 0; q < queue.size(); ++q) {
            Sample& s = queue[q];
            int idx = order[q];
            CleanseOutcome outcome;
            if (cfg.clean_all_suspicious) {
                outcome.cleaned = true;
                outcome.label = strong.label_of(s);  // unmetered upper reference
            } else {
                outcome = cleanse_sample(ctx, ledger, strong, weak, s, omegas[idx], scores[idx],
                                         cfg.routing);
            }
            if (outcome.cleaned) {
                s.relabel(outcome.label);
                partition.clean.push_back(std::move(s));
                ++metrics.n_cleansed;
            } else {
                partition.discarded.push_back(std::move(s));
            }
        }
    } else if (!partition.suspicious.empty()) {
        partition.discarded = std::move(partition.suspicious);
        partition.suspicious.clear();
    }
    partition.validate();

    std::vector<Sample> train_set = partition.clean;
    if (cfg.train_unqueried_with_given) {
        train_set.insert(train_set.end(), partition.discarded.begin(), partition.discarded.end());
        partition.discarded.clear();
    }
    metrics.n_strong = ledger.strong_queries();
    metrics.n_weak = ledger.weak_queries();
    metrics.n_discarded = static_cast<int>(partition.discarded.size());

    train_set.insert(train_set.end(), extra_train.begin(), extra_train.end());

    bool rolled_back = false;
    if (!train_set.empty()) {
        TrainConfig train_cfg = cfg.train;
        train_cfg.seed = mix_seed(cfg.train.seed, static_cast<std::uint64_t>(batch_index));
        try {
            model.train(train_set, train_cfg, train_cfg.epochs_per_batch);
        } catch (const DivergenceError&) {
            model.restore(pre_batch);
            rolled_back = true;
        }
    }

    if (!rolled_back) {
        double end_val_acc = top1_accuracy(model, validation);
        if (end_val_acc < (1.0 - cfg.rollback_r) * start_val_acc) {
            model.restore(pre_batch);
            rolled_back = true;
        }
    }

    metrics.rolled_back = rolled_back;
    metrics.val_accuracy = top1_accuracy(model, validation);
    metrics.test_accuracy = test.empty() ? 0.0 : top1_accuracy(model, test);
    metrics.validate();
    return metrics;
}

StreamRunResult run_stream(Classifier& model, const Stream& stream, const EngineConfig& cfg,
                           std::uint64_t seed, StrongLabeler& strong, WeakLabeler& weak) {
    cfg.validate();
    if (stream.initial.empty()) throw ConfigError("run_stream: empty initial set");

    model.train(stream.initial, cfg.train, cfg.train.epochs_initial);

    StreamRunResult result;
    result.initial_test_accuracy =
        stream.test.empty() ? 0.0 : top1_accuracy(model, stream.test);

    std::span<const Sample> extra =
        cfg.replay_initial ? std::span<const Sample>(stream.initial) : std::span<const Sample>();

    for (std::size_t b = 0; b < stream.batches.size(); ++b) {
        BatchMetrics metrics =
            run_batch(model, stream.batches[b], stream.validation, stream.test, cfg,
                      mix_seed(seed, b), strong, weak, static_cast<int>(b), extra);
        result.best_test_accuracy = std::max(result.best_test_accuracy, metrics.test_accuracy);
        result.per_batch.push_back(std::move(metrics));
    }
    return result;
}

}  // namespace duolab
