#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "duolab/harness.hpp"
#include "duolab/rng.hpp"

namespace fs = std::filesystem;

namespace duolab {

namespace {

const std::vector<std::pair<Method, std::string>>& method_table() {
    static const std::vector<std::pair<Method, std::string>> table = {
        {Method::Duolab, "duolab"},
        {Method::DuolabKmeans, "duolab_kmeans"},
        {Method::OnlyStrong, "only_strong"},
        {Method::OnlyWeak, "only_weak"},
        {Method::CleanAllSuspicious, "clean_all_suspicious"},
        {Method::NoAl, "no_al"},
        {Method::OptFilter, "opt_filter"},
        {Method::NoFilter, "no_filter"},
    };
    return table;
}

// Sub-seed streams carved out of one repeat seed.
enum SeedStream : std::uint64_t {
    kDataSeed = 0,
    kStreamSeed = 1,
    kNoiseSeed = 2,
    kInitSeed = 3,
    kTrainSeed = 4,
    kEngineSeed = 5,
    kStrongErrorSeed = 6,
    kWeakErrorSeed = 7,
};

}  // namespace

Method method_from_string(const std::string& name) {
    for (const auto& [method, text] : method_table())
        if (text == name) return method;
    throw ConfigError("unknown method '" + name + "'");
}

std::string method_name(Method method) {
    for (const auto& [m, text] : method_table())
        if (m == method) return text;
    return "?";
}

const std::vector<Method>& all_methods() {
    static const std::vector<Method> methods = [] {
        std::vector<Method> out;
        for (const auto& [m, text] : method_table()) out.push_back(m);
        return out;
    }();
    return methods;
}

std::vector<std::string> ExperimentConfig::validate() const {
    plan.validate();
    if (noise_rate < 0.0 || noise_rate >= 1.0) throw ConfigError("noise_rate must be in [0,1)");
    train.validate();
    classifier.validate();
    std::vector<std::string> warnings = selection.validate();
    if (filter_top_k < 1) throw ConfigError("filter_top_k must be >= 1");
    if (rollback_r <= 0.0 || rollback_r >= 1.0) throw ConfigError("rollback_r must be in (0,1)");
    if (labeler_error < 0.0 || labeler_error > 1.0)
        throw ConfigError("labeler_error must be in [0,1]");
    if (n_repeats < 1) throw ConfigError("n_repeats must be >= 1");
    if (csv_path.empty()) {
        if (synthetic.n_classes < 2 || synthetic.n_features < 1)
            throw ConfigError("synthetic: need n_classes >= 2 and n_features >= 1");
        if (synthetic.class_separation <= 0.0)
            throw ConfigError("synthetic: class_separation must be > 0");
    }
    return warnings;
}

EngineConfig engine_config_for(const ExperimentConfig& cfg) {
    EngineConfig engine;
    engine.selection = cfg.selection;
    engine.train = cfg.train;
    engine.filter_top_k = cfg.filter_top_k;
    engine.rollback_r = cfg.rollback_r;
    engine.replay_initial = cfg.replay_initial;
    engine.kmeanspp_seeding = cfg.kmeanspp_seeding;

    switch (cfg.method) {
        case Method::Duolab:
            break;
        case Method::DuolabKmeans:
            engine.use_clustering = true;
            break;
        case Method::OnlyStrong:
            engine.routing = RoutingPolicy::OnlyStrong;
            break;
        case Method::OnlyWeak:
            engine.routing = RoutingPolicy::OnlyWeak;
            break;
        case Method::CleanAllSuspicious:
            engine.clean_all_suspicious = true;
            break;
        case Method::NoAl:
            engine.no_queries = true;
            break;
        case Method::OptFilter:
            engine.filter = FilterMode::GroundTruth;
            engine.no_queries = true;
            break;
        case Method::NoFilter:
            engine.filter = FilterMode::Off;
            engine.train_unqueried_with_given = true;
            break;
    }
    return engine;
}

namespace {

Dataset build_dataset(const ExperimentConfig& cfg, std::uint64_t data_seed) {
    if (!cfg.csv_path.empty()) return load_csv(cfg.csv_path).dataset;
    int needed = static_cast<int>(cfg.plan.total());
    int n = std::max(cfg.synthetic.n_samples, needed);
    return generate_gaussian_blobs(cfg.synthetic.n_classes, cfg.synthetic.n_features, n,
                                   cfg.synthetic.class_separation, data_seed);
}

}  // namespace

RunRecord run_baseline(const ExperimentConfig& cfg, int repeat_index) {
    std::uint64_t base = cfg.seed + static_cast<std::uint64_t>(repeat_index);

    Dataset dataset = build_dataset(cfg, mix_seed(base, kDataSeed));
    NoiseConfig noise{cfg.noise_rate, mix_seed(base, kNoiseSeed)};
    Stream stream = make_stream(dataset, cfg.plan, noise, mix_seed(base, kStreamSeed));

    auto model = make_classifier(cfg.classifier, dataset.schema, mix_seed(base, kInitSeed));

    EngineConfig engine = engine_config_for(cfg);
    engine.train.seed = mix_seed(base, kTrainSeed);

    OracleStrongLabeler oracle_strong;
    OracleWeakLabeler oracle_weak;
    StrongLabeler* strong = &oracle_strong;
    WeakLabeler* weak = &oracle_weak;
    FallibleStrongLabeler fallible_strong(oracle_strong, cfg.labeler_error,
                                          mix_seed(base, kStrongErrorSeed),
                                          dataset.schema.n_classes);
    FallibleWeakLabeler fallible_weak(oracle_weak, cfg.labeler_error,
                                      mix_seed(base, kWeakErrorSeed));
    if (cfg.labeler_error > 0.0) {
        strong = &fallible_strong;
        weak = &fallible_weak;
    }
    StreamRunResult run =
        run_stream(*model, stream, engine, mix_seed(base, kEngineSeed), *strong, *weak);

    return RunRecord{std::move(run.per_batch), run.initial_test_accuracy, run.best_test_accuracy};
}

namespace {

double mean_of(const std::vector<double>& v) {
    if (v.empty()) return 0.0;
    double sum = 0.0;
    for (double x : v) sum += x;
    return sum / static_cast<double>(v.size());
}

double std_of(const std::vector<double>& v) {
    if (v.size() < 2) return 0.0;
    double m = mean_of(v);
    double acc = 0.0;
    for (double x : v) acc += (x - m) * (x - m);
    return std::sqrt(acc / static_cast<double>(v.size() - 1));
}

json run_summary_json(const RunRecord& record) {
    std::vector<double> strongs, weaks, cleansed;
    int rolled = 0;
    for (const BatchMetrics& m : record.per_batch) {
        strongs.push_back(m.n_strong);
        weaks.push_back(m.n_weak);
        cleansed.push_back(m.n_cleansed);
        rolled += m.rolled_back ? 1 : 0;
    }
    return json{{"n_batches", record.per_batch.size()},
                {"initial_test_accuracy", record.initial_test_accuracy},
                {"best_test_accuracy", record.best_test_accuracy},
                {"strong_per_batch", mean_of(strongs)},
                {"weak_per_batch", mean_of(weaks)},
                {"cleansed_per_batch", mean_of(cleansed)},
                {"n_rolled_back", rolled}};
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << content;
}

}  // namespace

std::string run_experiment(const ExperimentConfig& cfg) {
    for (const std::string& w : cfg.validate()) std::cerr << "warning: " << w << '\n';

    fs::path dir(cfg.out_dir);
    fs::create_directories(dir);

    write_file(dir / "config.json", json(cfg).dump(2) + "\n");

    std::vector<RunRecord> records;
    std::vector<double> best_accs;
    for (int r = 0; r < cfg.n_repeats; ++r) {
        RunRecord record = run_baseline(cfg, r);

        std::string lines;
        for (const BatchMetrics& m : record.per_batch) lines += json(m).dump() + "\n";
        write_file(dir / ("run_" + std::to_string(r) + ".jsonl"), lines);
        write_file(dir / ("run_" + std::to_string(r) + ".summary.json"),
                   run_summary_json(record).dump(2) + "\n");

        best_accs.push_back(record.best_test_accuracy);
        records.push_back(std::move(record));
    }

    std::vector<double> strongs, weaks, cleansed, tps, fps;
    for (const RunRecord& record : records) {
        for (const BatchMetrics& m : record.per_batch) {
            strongs.push_back(m.n_strong);
            weaks.push_back(m.n_weak);
            cleansed.push_back(m.n_cleansed);
            if (m.filter_tp_rate) tps.push_back(*m.filter_tp_rate);
            if (m.filter_fp_rate) fps.push_back(*m.filter_fp_rate);
        }
    }
    json summary{{"method", method_name(cfg.method)},
                 {"strong_cost", cfg.selection.strong_cost},
                 {"n_repeats", cfg.n_repeats},
                 {"best_test_accuracy_mean", mean_of(best_accs)},
                 {"best_test_accuracy_std", std_of(best_accs)},
                 {"best_test_accuracy_values", best_accs},
                 {"strong_per_batch", mean_of(strongs)},
                 {"weak_per_batch", mean_of(weaks)},
                 {"cleansed_per_batch", mean_of(cleansed)},
                 {"tp_rate", tps.empty() ? json(nullptr) : json(mean_of(tps))},
                 {"fp_rate", fps.empty() ? json(nullptr) : json(mean_of(fps))}};
    write_file(dir / "summary.json", summary.dump(2) + "\n");

    return dir.string();
}

void to_json(json& j, const ExperimentConfig& cfg) {
    j = json{{"csv_path", cfg.csv_path},
             {"synthetic",
              {{"n_classes", cfg.synthetic.n_classes},
               {"n_features", cfg.synthetic.n_features},
               {"n_samples", cfg.synthetic.n_samples},
               {"class_separation", cfg.synthetic.class_separation}}},
             {"plan",
              {{"initial_size", cfg.plan.initial_size},
               {"validation_size", cfg.plan.validation_size},
               {"batch_size", cfg.plan.batch_size},
               {"n_batches", cfg.plan.n_batches},
               {"test_size", cfg.plan.test_size}}},
             {"noise_rate", cfg.noise_rate},
             {"train",
              {{"learning_rate", cfg.train.learning_rate},
               {"momentum", cfg.train.momentum},
               {"weight_decay", cfg.train.weight_decay},
               {"epochs_initial", cfg.train.epochs_initial},
               {"epochs_per_batch", cfg.train.epochs_per_batch},
               {"minibatch_size", cfg.train.minibatch_size}}},
             {"classifier", {{"variant", cfg.classifier.name()}, {"hidden_units", cfg.classifier.hidden_units}}},
             {"selection",
              {{"strong_cost", cfg.selection.strong_cost},
               {"budget", cfg.selection.budget},
               {"q_threshold", cfg.selection.q_threshold},
               {"max_weak_per_sample", cfg.selection.max_weak_per_sample},
               {"per_cluster_top", cfg.selection.per_cluster_top},
               {"n_clusters", cfg.selection.n_clusters}}},
             {"method", method_name(cfg.method)},
             {"filter_top_k", cfg.filter_top_k},
             {"rollback_r", cfg.rollback_r},
             {"labeler_error", cfg.labeler_error},
             {"replay_initial", cfg.replay_initial},
             {"kmeanspp_seeding", cfg.kmeanspp_seeding},
             {"n_repeats", cfg.n_repeats},
             {"seed", cfg.seed},
             {"out_dir", cfg.out_dir}};
}

void from_json(const json& j, ExperimentConfig& cfg) {
    j.at("csv_path").get_to(cfg.csv_path);
    const json& synth = j.at("synthetic");
    synth.at("n_classes").get_to(cfg.synthetic.n_classes);
    synth.at("n_features").get_to(cfg.synthetic.n_features);
    synth.at("n_samples").get_to(cfg.synthetic.n_samples);
    synth.at("class_separation").get_to(cfg.synthetic.class_separation);
    const json& plan = j.at("plan");
    plan.at("initial_size").get_to(cfg.plan.initial_size);
    plan.at("validation_size").get_to(cfg.plan.validation_size);
    plan.at("batch_size").get_to(cfg.plan.batch_size);
    plan.at("n_batches").get_to(cfg.plan.n_batches);
    plan.at("test_size").get_to(cfg.plan.test_size);
    j.at("noise_rate").get_to(cfg.noise_rate);
    const json& train = j.at("train");
    train.at("learning_rate").get_to(cfg.train.learning_rate);
    train.at("momentum").get_to(cfg.train.momentum);
    train.at("weight_decay").get_to(cfg.train.weight_decay);
    train.at("epochs_initial").get_to(cfg.train.epochs_initial);
    train.at("epochs_per_batch").get_to(cfg.train.epochs_per_batch);
    train.at("minibatch_size").get_to(cfg.train.minibatch_size);
    const json& clf = j.at("classifier");
    cfg.classifier = clf.at("variant").get<std::string>() == "mlp"
                         ? ClassifierKind::mlp(clf.at("hidden_units").get<int>())
                         : ClassifierKind::softmax_linear();
    const json& sel = j.at("selection");
    sel.at("strong_cost").get_to(cfg.selection.strong_cost);
    sel.at("budget").get_to(cfg.selection.budget);
    sel.at("q_threshold").get_to(cfg.selection.q_threshold);
    sel.at("max_weak_per_sample").get_to(cfg.selection.max_weak_per_sample);
    sel.at("per_cluster_top").get_to(cfg.selection.per_cluster_top);
    sel.at("n_clusters").get_to(cfg.selection.n_clusters);
    cfg.method = method_from_string(j.at("method").get<std::string>());
    j.at("filter_top_k").get_to(cfg.filter_top_k);
    j.at("rollback_r").get_to(cfg.rollback_r);
    j.at("labeler_error").get_to(cfg.labeler_error);
    j.at("replay_initial").get_to(cfg.replay_initial);
    j.at("kmeanspp_seeding").get_to(cfg.kmeanspp_seeding);
    j.at("n_repeats").get_to(cfg.n_repeats);
    j.at("seed").get_to(cfg.seed);
    j.at("out_dir").get_to(cfg.out_dir);
}

}  // namespace duolab
