#include "duolab/filter.hpp"

#include <unordered_set>

namespace duolab {

BatchPartition filter_batch(const Classifier& model, std::span<const Sample> batch, int top_k) {
    if (top_k < 1) throw ConfigError("filter: top_k must be >= 1");
    BatchPartition out;
    for (const Sample& s : batch) {
        s.validate(model.schema());
        RankedLabels ranked = rank_labels(model.predict_proba(s.features()));
        bool clean = false;
        int limit = std::min<int>(top_k, static_cast<int>(ranked.order.size()));
        for (int r = 0; r < limit; ++r) {
            if (ranked.order[r] == s.given_label()) {
                clean = true;
                break;
            }
        }
        (clean ? out.clean : out.suspicious).push_back(s);
    }
    return out;
}

FilterRates score_filter(const BatchPartition& partition, std::span<const Sample> batch) {
    std::unordered_set<std::int64_t> kept;
    for (const Sample& s : partition.clean) kept.insert(s.id());

    FilterRates rates;
    if (batch.empty()) return rates;
    int tp = 0, fp = 0, tn = 0, fn = 0;
    for (const Sample& s : batch) {
        bool truly_clean = s.given_label() == ground_truth(s);
        bool routed_clean = kept.count(s.id()) > 0;
        if (truly_clean && routed_clean) ++tp;
        else if (!truly_clean && routed_clean) ++fp;
        else if (!truly_clean) ++tn;
        else ++fn;
    }
    double n = static_cast<double>(batch.size());
    rates.tp = tp / n;
    rates.fp = fp / n;
    rates.tn = tn / n;
    rates.fn = fn / n;
    return rates;
}

}  // namespace duolab
