// The cost-sensitive labeler-selection function Q and the full per-batch
// loop: filter, cluster/rank, route queries, relabel or discard, retrain,
// and roll back on a validation-accuracy collapse.
#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "duolab/classifier.hpp"
#include "duolab/labelers.hpp"
#include "duolab/stream.hpp"
#include "duolab/types.hpp"

namespace duolab {

struct QContext {
    double reliability = 0.0;  // L_V(t): validation cross-entropy at batch start
    const CostLedger* ledger = nullptr;
    const SelectionConfig* config = nullptr;
};

// Q(x) = L_V / (max(I, 1e-6) * c * max(E_S, 1)). Higher when the model is
// less reliable, the sample more informative, or the strong labeler less
// used. The floors remove the I = 0 and E_S = 0 singularities.
double q_value(const QContext& ctx, double informativeness);

enum class LabelerChoice { Strong, Weak, None };

// Strong if Q exceeds the threshold and a strong query still fits in the
// budget; otherwise weak if one more unit fits; otherwise none.
LabelerChoice choose_labeler(const QContext& ctx, double informativeness);

// How the per-sample cleansing loop picks labelers.
enum class RoutingPolicy {
    QFunction,   // choose_labeler above
    OnlyStrong,  // strong while budget allows, never weak
    OnlyWeak,    // weak while budget allows, never strong
};

// How the arriving batch is split before cleansing.
enum class FilterMode {
    Model,        // top-k prediction agreement
    GroundTruth,  // perfect split (upper filtering reference)
    Off,          // no filtering: the whole batch is the suspicious pool
};

struct CleanseOutcome {
    bool cleaned = false;
    int label = -1;
    int weak_queries = 0;
    int strong_queries = 0;
};

// One pass of the per-sample loop: repeatedly pick a labeler; a strong query
// relabels with the truth; weak queries walk the candidates in omega order
// until a yes, the per-sample cap, or budget exhaustion. ctx.reliability is
// fixed for the batch; Q still re-evaluates on every entry because E_S moves.
CleanseOutcome cleanse_sample(const QContext& ctx, CostLedger& ledger, StrongLabeler& strong,
                              WeakLabeler& weak, const Sample& s, const RankedLabels& omega,
                              double informativeness, RoutingPolicy policy);

struct EngineConfig {
    SelectionConfig selection;
    TrainConfig train;
    RoutingPolicy routing = RoutingPolicy::QFunction;
    FilterMode filter = FilterMode::Model;
    int filter_top_k = 2;
    bool use_clustering = false;
    bool kmeanspp_seeding = true;
    // Relabel every suspicious sample to its true label, no budget (upper
    // reference). Overrides routing.
    bool clean_all_suspicious = false;
    // Skip the query phase entirely (filter-only runs).
    bool no_queries = false;
    // Train discarded/unqueried suspicious samples with their given labels
    // (the no-filter regime).
    bool train_unqueried_with_given = false;
    // Relative validation-accuracy drop that triggers a rollback.
    double rollback_r = 0.20;
    // Replay the initial training set alongside C on every batch.
    bool replay_initial = false;

    void validate() const;
};

// Runs one batch: computes L_V, filters, ranks (with or without clustering),
// cleanses the candidate set in informativeness order under a fresh ledger,
// trains on the assembled clean set, and rolls back if validation accuracy
// drops more than rollback_r relative to the batch start. Deterministic
// given seed. `test` may be empty (test_accuracy = 0 then).
BatchMetrics run_batch(Classifier& model, std::span<const Sample> batch,
                       std::span<const Sample> validation, std::span<const Sample> test,
                       const EngineConfig& cfg, std::uint64_t seed, StrongLabeler& strong,
                       WeakLabeler& weak, int batch_index = 0,
                       std::span<const Sample> extra_train = {});

struct StreamRunResult {
    std::vector<BatchMetrics> per_batch;
    double initial_test_accuracy = 0.0;
    double best_test_accuracy = 0.0;  // max over batches (headline metric)
};

// Trains on the initial set, then runs every batch in arrival order. Each
// batch's data is dropped after its step. Per-batch seeds derive from `seed`.
StreamRunResult run_stream(Classifier& model, const Stream& stream, const EngineConfig& cfg,
                           std::uint64_t seed, StrongLabeler& strong, WeakLabeler& weak);

}  // namespace duolab
