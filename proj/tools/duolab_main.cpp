// Command-line front end: run experiments, sweep the baseline grid, report
// comparison tables, and export synthetic datasets.

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "duolab/harness.hpp"

namespace fs = std::filesystem;
using namespace duolab;

namespace {

struct CliOptions {
    ExperimentConfig cfg;
    std::string method = "duolab";
    std::string model = "softmax_linear";
    int hidden_units = 32;
    bool plain_seeding = false;
    std::string config_path;  // consumed by expand_config_file before parsing
};

// Expands `--config file` into --key=value tokens inserted after the
// subcommand, so explicit command-line flags always override config keys.
// The file is plain `key = value` lines with # comments.
std::vector<std::string> expand_config_file(int argc, char** argv) {
    std::vector<std::string> args(argv, argv + argc);

    std::string path;
    for (std::size_t i = 1; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
        else if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
    }
    if (path.empty()) return args;

    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path);

    std::vector<std::string> given;
    for (const std::string& arg : args)
        if (arg.rfind("--", 0) == 0) given.push_back(arg.substr(0, arg.find('=')));

    std::vector<std::string> expanded;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto eq = line.find('=');
        if (eq == std::string::npos) {
            if (line.find_first_not_of(" \t\r") != std::string::npos)
                throw ConfigError(path + " line " + std::to_string(line_no) +
                                  ": expected key = value");
            continue;
        }
        auto trim = [](std::string s) {
            auto b = s.find_first_not_of(" \t\r");
            auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw ConfigError(path + " line " + std::to_string(line_no) + ": empty key");
        std::string flag = "--" + key;
        if (std::find(given.begin(), given.end(), flag) != given.end()) continue;
        expanded.push_back(flag + "=" + value);
    }

    // Insert right after the subcommand name.
    std::vector<std::string> out;
    out.push_back(args[0]);
    std::size_t i = 1;
    if (i < args.size() && args[i].rfind("--", 0) != 0) out.push_back(args[i++]);
    out.insert(out.end(), expanded.begin(), expanded.end());
    out.insert(out.end(), args.begin() + static_cast<std::ptrdiff_t>(i), args.end());
    return out;
}

void add_experiment_options(CLI::App* cmd, CliOptions& o) {
    cmd->add_option("--csv", o.cfg.csv_path, "train from this CSV instead of synthetic data");
    cmd->add_option("--n-classes", o.cfg.synthetic.n_classes, "synthetic: number of classes");
    cmd->add_option("--n-features", o.cfg.synthetic.n_features, "synthetic: feature dimension");
    cmd->add_option("--n-samples", o.cfg.synthetic.n_samples,
                    "synthetic: dataset size (0 = exactly what the plan needs)");
    cmd->add_option("--separation", o.cfg.synthetic.class_separation,
                    "synthetic: pairwise class-center distance");

    cmd->add_option("--initial-size", o.cfg.plan.initial_size, "clean initial training set size");
    cmd->add_option("--validation-size", o.cfg.plan.validation_size, "clean validation set size");
    cmd->add_option("--batch-size", o.cfg.plan.batch_size, "stream batch size");
    cmd->add_option("--n-batches", o.cfg.plan.n_batches, "number of stream batches");
    cmd->add_option("--test-size", o.cfg.plan.test_size, "clean test set size");
    cmd->add_option("--noise-rate", o.cfg.noise_rate, "label corruption probability");

    cmd->add_option("--model", o.model, "classifier: softmax_linear or mlp");
    cmd->add_option("--hidden-units", o.hidden_units, "mlp hidden layer width");
    cmd->add_option("--lr", o.cfg.train.learning_rate, "learning rate");
    cmd->add_option("--momentum", o.cfg.train.momentum, "SGD momentum");
    cmd->add_option("--weight-decay", o.cfg.train.weight_decay, "L2 weight decay");
    cmd->add_option("--epochs-initial", o.cfg.train.epochs_initial, "epochs on the initial set");
    cmd->add_option("--epochs-per-batch", o.cfg.train.epochs_per_batch, "epochs per stream batch");
    cmd->add_option("--minibatch", o.cfg.train.minibatch_size, "minibatch size");

    cmd->add_option("--cost", o.cfg.selection.strong_cost, "strong labeler cost c");
    cmd->add_option("--budget", o.cfg.selection.budget, "per-batch budget B in weak-query units");
    cmd->add_option("--q-threshold", o.cfg.selection.q_threshold, "Q threshold for strong routing");
    cmd->add_option("--max-weak", o.cfg.selection.max_weak_per_sample,
                    "weak-query cap per sample");
    cmd->add_option("--per-cluster-top", o.cfg.selection.per_cluster_top,
                    "candidates kept per cluster");
    cmd->add_option("--n-clusters", o.cfg.selection.n_clusters,
                    "kmeans cluster count (0 = one per class)");
    cmd->add_flag("--plain-seeding", o.plain_seeding,
                  "seed kmeans uniformly instead of kmeans++");
    cmd->add_option("--filter-top-k", o.cfg.filter_top_k, "prediction ranks accepted as clean");
    cmd->add_option("--rollback-r", o.cfg.rollback_r,
                    "relative validation-accuracy drop that triggers rollback");
    cmd->add_flag("--replay-initial", o.cfg.replay_initial,
                  "train each batch on C plus the initial set");

    cmd->add_option("--labeler-error", o.cfg.labeler_error,
                    "corrupt labeler answers with this probability (robustness runs)");
    cmd->add_option("--repeats", o.cfg.n_repeats, "independent repeats (seed + index)");
    cmd->add_option("--seed", o.cfg.seed, "experiment seed");
    cmd->add_option("--config", o.config_path, "key = value config file; flags override its keys");
}

void finalize(CliOptions& o) {
    o.cfg.classifier = o.model == "mlp" ? ClassifierKind::mlp(o.hidden_units)
                                        : ClassifierKind::softmax_linear();
    if (o.model != "mlp" && o.model != "softmax_linear")
        throw ConfigError("unknown model '" + o.model + "'");
    o.cfg.method = method_from_string(o.method);
    o.cfg.kmeanspp_seeding = !o.plain_seeding;
}

std::string sanitize(double v) {
    std::string s = std::to_string(v);
    s.erase(s.find_last_not_of('0') + 1);
    if (!s.empty() && s.back() == '.') s.pop_back();
    for (char& c : s)
        if (c == '.') c = 'p';
    return s;
}

int cmd_run(CliOptions& o) {
    finalize(o);
    std::string dir = run_experiment(o.cfg);
    Report rep = report({dir});
    std::cout << rep.to_text();
    std::cout << "run directory: " << dir << '\n';
    return 0;
}

int cmd_sweep(CliOptions& o, const std::vector<std::string>& methods,
              const std::vector<double>& noise_rates, const std::vector<int>& costs,
              const std::string& out_root) {
    finalize(o);
    for (double rate : noise_rates) {
        std::vector<std::string> dirs;
        for (const std::string& method : methods) {
            for (int cost : costs) {
                ExperimentConfig cfg = o.cfg;
                cfg.method = method_from_string(method);
                cfg.noise_rate = rate;
                cfg.selection.strong_cost = cost;
                cfg.out_dir = out_root + "/" + method + "_noise" + sanitize(rate) + "_c" +
                              std::to_string(cost);
                std::cout << "running " << cfg.out_dir << " ..." << std::endl;
                dirs.push_back(run_experiment(cfg));
            }
        }
        Report rep = report(dirs);
        std::string stem = out_root + "/report_noise" + sanitize(rate);
        std::ofstream(stem + ".txt") << rep.to_text();
        std::ofstream(stem + ".csv") << rep.to_csv();
        std::cout << '\n' << "noise rate " << rate << ":\n" << rep.to_text() << '\n';
    }
    return 0;
}

int cmd_report(const std::vector<std::string>& dirs, const std::string& csv_out,
               const std::string& text_out) {
    Report rep = report(dirs);
    if (!csv_out.empty()) std::ofstream(csv_out) << rep.to_csv();
    if (!text_out.empty()) std::ofstream(text_out) << rep.to_text();
    std::cout << rep.to_text();
    return 0;
}

int cmd_gen_data(const std::string& out, int n_classes, int n_features, int n_samples,
                 double separation, std::uint64_t seed) {
    Dataset dataset = generate_gaussian_blobs(n_classes, n_features, n_samples, separation, seed);
    write_csv(out, dataset);
    std::cout << "wrote " << dataset.samples.size() << " samples to " << out << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"streaming active learning on noisy-label data with weak/strong labelers"};
    app.require_subcommand(1);

    CliOptions run_opts;
    CLI::App* run = app.add_subcommand("run", "run one experiment and print its report row");
    run->add_option("--method", run_opts.method,
                    "duolab | duolab_kmeans | only_strong | only_weak | clean_all_suspicious | "
                    "no_al | opt_filter | no_filter");
    run->add_option("--out", run_opts.cfg.out_dir, "run directory");
    add_experiment_options(run, run_opts);

    CliOptions sweep_opts;
    std::vector<std::string> sweep_methods = {"duolab",   "duolab_kmeans", "only_strong",
                                              "only_weak", "clean_all_suspicious", "no_al",
                                              "opt_filter", "no_filter"};
    std::vector<double> sweep_noise = {0.3, 0.6};
    std::vector<int> sweep_costs = {2, 10};
    std::string sweep_out = "runs/sweep";
    CLI::App* sweep = app.add_subcommand("sweep", "run a method/noise/cost grid and report it");
    sweep->add_option("--methods", sweep_methods, "methods to include")->delimiter(',');
    sweep->add_option("--noise-rates", sweep_noise, "noise rates to include")->delimiter(',');
    sweep->add_option("--costs", sweep_costs, "strong labeler costs to include")->delimiter(',');
    sweep->add_option("--out", sweep_out, "sweep output root");
    add_experiment_options(sweep, sweep_opts);

    std::vector<std::string> report_dirs;
    std::string report_csv, report_text;
    CLI::App* rep = app.add_subcommand("report", "aggregate run directories into a table");
    rep->add_option("dirs", report_dirs, "run directories")->required();
    rep->add_option("--csv", report_csv, "also write the table as CSV");
    rep->add_option("--out", report_text, "also write the text table");

    std::string gen_out = "blobs.csv";
    int gen_classes = 8, gen_features = 16, gen_samples = 10000;
    double gen_separation = 3.0;
    std::uint64_t gen_seed = 0;
    CLI::App* gen = app.add_subcommand("gen-data", "export a synthetic dataset as CSV");
    gen->add_option("--out", gen_out, "output CSV path");
    gen->add_option("--n-classes", gen_classes, "number of classes");
    gen->add_option("--n-features", gen_features, "feature dimension");
    gen->add_option("--n-samples", gen_samples, "dataset size");
    gen->add_option("--separation", gen_separation, "pairwise class-center distance");
    gen->add_option("--seed", gen_seed, "generator seed");

    try {
        std::vector<std::string> args = expand_config_file(argc, argv);
        std::vector<const char*> argv2;
        for (const std::string& a : args) argv2.push_back(a.c_str());
        app.parse(static_cast<int>(argv2.size()), argv2.data());
        if (*run) return cmd_run(run_opts);
        if (*sweep) return cmd_sweep(sweep_opts, sweep_methods, sweep_noise, sweep_costs, sweep_out);
        if (*rep) return cmd_report(report_dirs, report_csv, report_text);
        if (*gen) return cmd_gen_data(gen_out, gen_classes, gen_features, gen_samples,
                                      gen_separation, gen_seed);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
