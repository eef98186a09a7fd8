#include "duolab/serialize.hpp"

namespace duolab {

void to_json(json& j, const DatasetSchema& schema) {
    j = json{{"n_classes", schema.n_classes}, {"n_features", schema.n_features}};
}

void from_json(const json& j, DatasetSchema& schema) {
    j.at("n_classes").get_to(schema.n_classes);
    j.at("n_features").get_to(schema.n_features);
}

void to_json(json& j, const Sample& sample) {
    j = json{{"id", sample.id()},
             {"features", sample.features()},
             {"given_label", sample.given_label()},
             {"true_label", ground_truth(sample)}};
}

void from_json(const json& j, Sample& sample) {
    sample = Sample(j.at("id").get<std::int64_t>(),
                    j.at("features").get<std::vector<double>>(),
                    j.at("given_label").get<int>(), j.at("true_label").get<int>());
}

void to_json(json& j, const ModelSnapshot& snap) {
    j = json{{"format_version", 1},
             {"schema", snap.schema},
             {"variant", snap.variant},
             {"hidden_units", snap.hidden_units},
             {"parameters", snap.parameters},
             {"batch_index", snap.batch_index},
             {"validation_accuracy", snap.validation_accuracy}};
}

void from_json(const json& j, ModelSnapshot& snap) {
    int version = j.at("format_version").get<int>();
    if (version != 1)
        throw SchemaError("snapshot: unsupported format_version " + std::to_string(version));
    j.at("schema").get_to(snap.schema);
    j.at("variant").get_to(snap.variant);
    j.at("hidden_units").get_to(snap.hidden_units);
    j.at("parameters").get_to(snap.parameters);
    j.at("batch_index").get_to(snap.batch_index);
    j.at("validation_accuracy").get_to(snap.validation_accuracy);
}

void to_json(json& j, const BatchMetrics& m) {
    j = json{{"batch_index", m.batch_index},
             {"test_accuracy", m.test_accuracy},
             {"val_accuracy", m.val_accuracy},
             {"filter_tp_rate", m.filter_tp_rate ? json(*m.filter_tp_rate) : json(nullptr)},
             {"filter_fp_rate", m.filter_fp_rate ? json(*m.filter_fp_rate) : json(nullptr)},
             {"n_strong", m.n_strong},
             {"n_weak", m.n_weak},
             {"n_cleansed", m.n_cleansed},
             {"n_discarded", m.n_discarded},
             {"rolled_back", m.rolled_back}};
}

void from_json(const json& j, BatchMetrics& m) {
    j.at("batch_index").get_to(m.batch_index);
    j.at("test_accuracy").get_to(m.test_accuracy);
    j.at("val_accuracy").get_to(m.val_accuracy);
    m.filter_tp_rate = j.at("filter_tp_rate").is_null()
                           ? std::nullopt
                           : std::optional<double>(j.at("filter_tp_rate").get<double>());
    m.filter_fp_rate = j.at("filter_fp_rate").is_null()
                           ? std::nullopt
                           : std::optional<double>(j.at("filter_fp_rate").get<double>());
    j.at("n_strong").get_to(m.n_strong);
    j.at("n_weak").get_to(m.n_weak);
    j.at("n_cleansed").get_to(m.n_cleansed);
    j.at("n_discarded").get_to(m.n_discarded);
    j.at("rolled_back").get_to(m.rolled_back);
}

}  // namespace duolab
