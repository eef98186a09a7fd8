#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "duolab/labelers.hpp"
#include "duolab/rng.hpp"

using namespace duolab;

namespace {
Sample sample_with_truth(int truth) { return Sample(0, {0.0}, truth, truth); }
}  // namespace

TEST_CASE("strong oracle returns the true label and charges once") {
    CostLedger ledger(10, 250);
    OracleStrongLabeler strong;
    Sample s(7, {1.0}, 2, 4);  // noisy given label, truth 4
    auto label = strong_query(ledger, strong, s);
    REQUIRE(label.has_value());
    CHECK(*label == 4);
    CHECK(ledger.strong_queries() == 1);
    CHECK(ledger.spent() == 10);
}

TEST_CASE("strong query fails cleanly on an exhausted budget") {
    CostLedger ledger(5, 5);
    OracleStrongLabeler strong;
    Sample s = sample_with_truth(1);
    CHECK(strong_query(ledger, strong, s).has_value());
    auto second = strong_query(ledger, strong, s);
    CHECK_FALSE(second.has_value());
    CHECK(ledger.strong_queries() == 1);  // unchanged
    CHECK(ledger.spent() == 5);
}

TEST_CASE("budget 10 with cost 10 admits exactly one strong query") {
    CostLedger ledger(10, 10);
    OracleStrongLabeler strong;
    Sample s = sample_with_truth(0);
    CHECK(strong_query(ledger, strong, s).has_value());
    CHECK_FALSE(strong_query(ledger, strong, s).has_value());
}

TEST_CASE("weak oracle confirms the truth and denies everything else") {
    CostLedger ledger(10, 250);
    OracleWeakLabeler weak;
    Sample s(3, {0.0}, 1, 2);
    auto yes = weak_query(ledger, weak, s, 2);
    auto no = weak_query(ledger, weak, s, 1);
    REQUIRE(yes.has_value());
    REQUIRE(no.has_value());
    CHECK(*yes);
    CHECK_FALSE(*no);
    CHECK(ledger.weak_queries() == 2);
    CHECK(ledger.spent() == 2);
}

TEST_CASE("weak query fails cleanly on an exhausted budget") {
    CostLedger ledger(2, 1);
    OracleWeakLabeler weak;
    Sample s = sample_with_truth(0);
    CHECK(weak_query(ledger, weak, s, 0).has_value());
    CHECK_FALSE(weak_query(ledger, weak, s, 0).has_value());
    CHECK(ledger.weak_queries() == 1);
}

TEST_CASE("oracles are stateless: repeats answer identically and are charged") {
    CostLedger ledger(3, 100);
    OracleStrongLabeler strong;
    OracleWeakLabeler weak;
    Sample s(9, {0.0}, 0, 2);
    for (int i = 0; i < 5; ++i) {
        CHECK(*strong_query(ledger, strong, s) == 2);
        CHECK(*weak_query(ledger, weak, s, 2));
        CHECK_FALSE(*weak_query(ledger, weak, s, 0));
    }
    CHECK(ledger.strong_queries() == 5);
    CHECK(ledger.weak_queries() == 10);
}

TEST_CASE("spent never exceeds the budget under random query sequences") {
    Rng rng(77);
    OracleStrongLabeler strong;
    OracleWeakLabeler weak;
    for (int trial = 0; trial < 200; ++trial) {
        int c = 1 + static_cast<int>(rng.uniform_int(12));
        int budget = static_cast<int>(rng.uniform_int(40));
        CostLedger ledger(c, budget);
        Sample s = sample_with_truth(static_cast<int>(rng.uniform_int(4)));
        for (int q = 0; q < 60; ++q) {
            if (rng.bernoulli(0.5))
                strong_query(ledger, strong, s);
            else
                weak_query(ledger, weak, s, static_cast<int>(rng.uniform_int(4)));
            CHECK(ledger.spent() <= budget);
            CHECK(ledger.spent() == ledger.weak_queries() + c * ledger.strong_queries());
        }
    }
}

TEST_CASE("fallible wrappers flip answers at epsilon = 1 and not at 0") {
    OracleStrongLabeler strong;
    OracleWeakLabeler weak;
    Sample s(1, {0.0}, 0, 3);

    FallibleStrongLabeler always_wrong(strong, 1.0, 5, 6);
    FallibleStrongLabeler never_wrong(strong, 0.0, 5, 6);
    FallibleWeakLabeler lying(weak, 1.0, 5);
    FallibleWeakLabeler honest(weak, 0.0, 5);

    for (int i = 0; i < 20; ++i) {
        CHECK(always_wrong.label_of(s) != 3);
        CHECK(never_wrong.label_of(s) == 3);
        CHECK_FALSE(lying.confirms(s, 3));
        CHECK(lying.confirms(s, 1));
        CHECK(honest.confirms(s, 3));
    }
}
