// Strong and weak labeler interfaces, their ground-truth oracle
// implementations, and the budget-charging query wrappers.
#pragma once

#include <cstdint>
#include <memory>
#include <optional>

#include "duolab/rng.hpp"
#include "duolab/types.hpp"

namespace duolab {

// Knows the true label; costs c weak-query units per question.
class StrongLabeler {
public:
    virtual ~StrongLabeler() = default;
    virtual int label_of(const Sample& s) = 0;
};

// Only answers "is the label `candidate`?" with yes/no; costs 1 unit.
class WeakLabeler {
public:
    virtual ~WeakLabeler() = default;
    virtual bool confirms(const Sample& s, int candidate_label) = 0;
};

class OracleStrongLabeler final : public StrongLabeler {
public:
    int label_of(const Sample& s) override { return ground_truth(s); }
};

class OracleWeakLabeler final : public WeakLabeler {
public:
    bool confirms(const Sample& s, int candidate_label) override {
        return candidate_label == ground_truth(s);
    }
};

// Robustness-experiment wrappers: the answer is corrupted with probability
// epsilon. Off by default and outside the standard pipeline.
class FallibleStrongLabeler final : public StrongLabeler {
public:
    FallibleStrongLabeler(StrongLabeler& base, double epsilon, std::uint64_t seed, int n_classes)
        : base_(base), epsilon_(epsilon), rng_(seed), n_classes_(n_classes) {}

    int label_of(const Sample& s) override {
        int truth = base_.label_of(s);
        if (!rng_.bernoulli(epsilon_)) return truth;
        int offset = 1 + static_cast<int>(rng_.uniform_int(n_classes_ - 1));
        return (truth + offset) % n_classes_;
    }

private:
    StrongLabeler& base_;
    double epsilon_;
    Rng rng_;
    int n_classes_;
};

class FallibleWeakLabeler final : public WeakLabeler {
public:
    FallibleWeakLabeler(WeakLabeler& base, double epsilon, std::uint64_t seed)
        : base_(base), epsilon_(epsilon), rng_(seed) {}

    bool confirms(const Sample& s, int candidate_label) override {
        bool answer = base_.confirms(s, candidate_label);
        return rng_.bernoulli(epsilon_) ? !answer : answer;
    }

private:
    WeakLabeler& base_;
    double epsilon_;
    Rng rng_;
};

// Budget-enforcing queries. On insufficient budget they return nullopt
// without charging the ledger or consulting the labeler.
std::optional<int> strong_query(CostLedger& ledger, StrongLabeler& labeler, const Sample& s);
std::optional<bool> weak_query(CostLedger& ledger, WeakLabeler& labeler, const Sample& s,
                               int candidate_label);

}  // namespace duolab
