// Splits an arriving noisy batch into clean set C and suspicious set U by
// top-k prediction agreement, and scores the split against ground truth.
#pragma once

#include <span>

#include "duolab/classifier.hpp"
#include "duolab/types.hpp"

namespace duolab {

// A sample is clean iff its given label is among the model's top_k predicted
// labels (descending probability, ties toward the lower class index). Clean
// samples keep their given labels. selected/discarded stay empty.
BatchPartition filter_batch(const Classifier& model, std::span<const Sample> batch, int top_k = 2);

// Fractions of the full batch. "Positive" means routed to C:
//   tp = truly clean kept, fp = truly noisy kept,
//   tn = truly noisy dropped, fn = truly clean dropped.
// Metrics context only (reads ground truth). Call on the filter output,
// before any cleansing.
struct FilterRates {
    double tp = 0.0;
    double fp = 0.0;
    double tn = 0.0;
    double fn = 0.0;
};

FilterRates score_filter(const BatchPartition& partition, std::span<const Sample> batch);

}  // namespace duolab
