#include "duolab/labelers.hpp"

namespace duolab {

std::optional<int> strong_query(CostLedger& ledger, StrongLabeler& labeler, const Sample& s) {
    if (!ledger.can_afford_strong()) return std::nullopt;
    ledger.charge_strong();
    return labeler.label_of(s);
}

std::optional<bool> weak_query(CostLedger& ledger, WeakLabeler& labeler, const Sample& s,
                               int candidate_label) {
    if (!ledger.can_afford_weak()) return std::nullopt;
    ledger.charge_weak();
    return labeler.confirms(s, candidate_label);
}

}  // namespace duolab
