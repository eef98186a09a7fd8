#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <limits>

#include "duolab/serialize.hpp"
#include "duolab/types.hpp"

using namespace duolab;

TEST_CASE("schema validation") {
    CHECK_THROWS_AS((DatasetSchema{1, 4}.validate()), SchemaError);
    CHECK_THROWS_AS((DatasetSchema{3, 0}.validate()), SchemaError);
    CHECK_NOTHROW((DatasetSchema{2, 1}.validate()));
}

TEST_CASE("sample invariants") {
    DatasetSchema schema{3, 2};
    CHECK_NOTHROW(Sample(0, {1.0, 2.0}, 1, 2).validate(schema));
    CHECK_THROWS_AS(Sample(1, {1.0}, 1, 2).validate(schema), SchemaError);
    CHECK_THROWS_AS(Sample(2, {1.0, std::numeric_limits<double>::infinity()}, 1, 2).validate(schema),
                    SchemaError);
    CHECK_THROWS_AS(Sample(3, {1.0, 2.0}, 3, 2).validate(schema), SchemaError);
    CHECK_THROWS_AS(Sample(4, {1.0, 2.0}, 1, -1).validate(schema), SchemaError);
}

TEST_CASE("sample serialization round-trips without loss") {
    Sample original(42, {0.1, -3.25, 1e-17, 123456.789012345678}, 2, 5);
    json j = original;
    Sample restored = j.get<Sample>();
    CHECK(restored.id() == original.id());
    CHECK(restored.features() == original.features());  // bit-exact doubles
    CHECK(restored.given_label() == original.given_label());
    CHECK(ground_truth(restored) == ground_truth(original));
}

TEST_CASE("prediction distribution invariants") {
    CHECK_NOTHROW((PredictionDistribution{{0.5, 0.25, 0.25}}.validate()));
    CHECK_THROWS_AS((PredictionDistribution{{0.9, 0.3}}.validate()), SchemaError);
    CHECK_THROWS_AS((PredictionDistribution{{-0.1, 1.1}}.validate()), SchemaError);
}

TEST_CASE("batch partition disjointness") {
    Sample a(1, {0.0}, 0, 0), b(2, {0.0}, 0, 0);
    BatchPartition ok;
    ok.clean = {a};
    ok.suspicious = {b};
    CHECK_NOTHROW(ok.validate());

    BatchPartition dup;
    dup.clean = {a};
    dup.discarded = {a};
    CHECK_THROWS_AS(dup.validate(), SchemaError);
}

TEST_CASE("selection config warns when the strong labeler is unreachable") {
    SelectionConfig cfg;
    cfg.strong_cost = 10;
    cfg.budget = 5;
    auto warnings = cfg.validate();
    REQUIRE(warnings.size() == 1);
    CHECK(warnings[0].find("unreachable") != std::string::npos);

    cfg.budget = 10;
    CHECK(cfg.validate().empty());

    cfg.strong_cost = 0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
}

TEST_CASE("cost ledger arithmetic and budget enforcement") {
    CostLedger ledger(10, 25);
    CHECK(ledger.spent() == 0);

    ledger.charge_strong();
    ledger.charge_weak();
    CHECK(ledger.spent() == 11);
    CHECK(ledger.weak_queries() == 1);
    CHECK(ledger.strong_queries() == 1);

    ledger.charge_strong();  // spent 21
    CHECK_FALSE(ledger.can_afford_strong());
    CHECK_THROWS_AS(ledger.charge_strong(), std::logic_error);
    CHECK(ledger.spent() == 21);  // rejected charge left no trace

    ledger.charge_weak();
    ledger.charge_weak();
    ledger.charge_weak();
    ledger.charge_weak();
    CHECK(ledger.spent() == 25);
    CHECK_FALSE(ledger.can_afford_weak());
    CHECK_THROWS_AS(ledger.charge_weak(), std::logic_error);
}

TEST_CASE("c weak queries cost exactly one strong query") {
    const int c = 7;
    CostLedger weak_side(c, 100), strong_side(c, 100);
    for (int i = 0; i < c; ++i) weak_side.charge_weak();
    strong_side.charge_strong();
    CHECK(weak_side.spent() == strong_side.spent());
}

TEST_CASE("batch metrics invariants") {
    BatchMetrics m;
    m.filter_tp_rate = 0.7;
    m.filter_fp_rate = 0.2;
    CHECK_NOTHROW(m.validate());

    m.filter_fp_rate = 0.4;
    CHECK_THROWS_AS(m.validate(), SchemaError);

    m.filter_fp_rate = 0.1;
    m.n_weak = -1;
    CHECK_THROWS_AS(m.validate(), SchemaError);
}

TEST_CASE("batch metrics JSON round-trip, including absent filter rates") {
    BatchMetrics m;
    m.batch_index = 3;
    m.test_accuracy = 0.875;
    m.val_accuracy = 0.9;
    m.filter_tp_rate = std::nullopt;
    m.filter_fp_rate = std::nullopt;
    m.n_strong = 4;
    m.n_weak = 9;
    m.n_cleansed = 11;
    m.n_discarded = 2;
    m.rolled_back = true;

    json j = m;
    CHECK(j.at("filter_tp_rate").is_null());
    BatchMetrics back = j.get<BatchMetrics>();
    CHECK(back.batch_index == m.batch_index);
    CHECK(back.test_accuracy == m.test_accuracy);
    CHECK_FALSE(back.filter_tp_rate.has_value());
    CHECK(back.n_strong == 4);
    CHECK(back.rolled_back);
}
