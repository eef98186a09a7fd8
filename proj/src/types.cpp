#include "duolab/types.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

namespace duolab {

void DatasetSchema::validate() const {
    if (n_classes < 2) throw SchemaError("schema: n_classes must be >= 2");
    if (n_features < 1) throw SchemaError("schema: n_features must be >= 1");
}

void Sample::validate(const DatasetSchema& schema) const {
    if (static_cast<int>(features_.size()) != schema.n_features)
        throw SchemaError("sample " + std::to_string(id_) + ": expected " +
                          std::to_string(schema.n_features) + " features, got " +
                          std::to_string(features_.size()));
    for (double v : features_)
        if (!std::isfinite(v))
            throw SchemaError("sample " + std::to_string(id_) + ": non-finite feature");
    if (!schema.valid_label(given_label_))
        throw SchemaError("sample " + std::to_string(id_) + ": given_label out of range");
    if (!schema.valid_label(true_label_))
        throw SchemaError("sample " + std::to_string(id_) + ": true_label out of range");
}

void PredictionDistribution::validate() const {
    double sum = 0.0;
    for (double p : probs) {
        if (!(p >= 0.0 && p <= 1.0))
            throw SchemaError("prediction distribution: entry outside [0,1]");
        sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-6)
        throw SchemaError("prediction distribution: entries sum to " + std::to_string(sum));
}

void BatchPartition::validate() const {
    std::unordered_set<std::int64_t> seen;
    auto check = [&seen](const std::vector<Sample>& part) {
        for (const Sample& s : part)
            if (!seen.insert(s.id()).second)
                throw SchemaError("batch partition: duplicate sample id " + std::to_string(s.id()));
    };
    check(clean);
    check(suspicious);
    check(selected);
    check(discarded);
}

std::vector<std::string> SelectionConfig::validate() const {
    if (strong_cost < 1) throw ConfigError("selection: strong_cost must be >= 1");
    if (budget < 0) throw ConfigError("selection: budget must be >= 0");
    if (q_threshold < 0.0) throw ConfigError("selection: q_threshold must be >= 0");
    if (max_weak_per_sample < 1) throw ConfigError("selection: max_weak_per_sample must be >= 1");
    if (per_cluster_top < 1) throw ConfigError("selection: per_cluster_top must be >= 1");
    if (n_clusters < 0) throw ConfigError("selection: n_clusters must be >= 0");

    std::vector<std::string> warnings;
    if (budget < strong_cost)
        warnings.push_back("budget " + std::to_string(budget) + " is below strong_cost " +
                           std::to_string(strong_cost) + "; the strong labeler is unreachable");
    return warnings;
}

CostLedger::CostLedger(int strong_cost, int budget) : strong_cost_(strong_cost), budget_(budget) {
    if (strong_cost < 1) throw ConfigError("ledger: strong_cost must be >= 1");
    if (budget < 0) throw ConfigError("ledger: budget must be >= 0");
}

void CostLedger::charge_weak() {
    if (!can_afford_weak())
        throw std::logic_error("ledger: weak charge would exceed budget");
    ++weak_;
}

void CostLedger::charge_strong() {
    if (!can_afford_strong())
        throw std::logic_error("ledger: strong charge would exceed budget");
    ++strong_;
}

void BatchMetrics::validate() const {
    if (filter_tp_rate && filter_fp_rate && *filter_tp_rate + *filter_fp_rate > 1.0 + 1e-9)
        throw SchemaError("metrics: filter_tp_rate + filter_fp_rate > 1");
    if (n_strong < 0 || n_weak < 0 || n_cleansed < 0 || n_discarded < 0)
        throw SchemaError("metrics: negative count");
}

}  // namespace duolab
