#include "duolab/stream.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "duolab/rng.hpp"

namespace duolab {

void NoiseConfig::validate() const {
    if (rate < 0.0 || rate >= 1.0) throw ConfigError("noise: rate must be in [0,1)");
}

void StreamPlan::validate() const {
    if (initial_size < 1) throw ConfigError("plan: initial_size must be >= 1");
    if (validation_size < 1) throw ConfigError("plan: validation_size must be >= 1");
    if (batch_size < 1) throw ConfigError("plan: batch_size must be >= 1");
    if (n_batches < 0) throw ConfigError("plan: n_batches must be >= 0");
    if (test_size < 1) throw ConfigError("plan: test_size must be >= 1");
}

std::int64_t StreamPlan::total() const {
    return static_cast<std::int64_t>(initial_size) + validation_size + test_size +
           static_cast<std::int64_t>(n_batches) * batch_size;
}

void inject_noise(std::vector<Sample>& samples, int n_classes, const NoiseConfig& cfg) {
    cfg.validate();
    if (n_classes < 2) throw SchemaError("inject_noise: n_classes must be >= 2");
    Rng rng(cfg.seed);
    for (Sample& s : samples) {
        if (!rng.bernoulli(cfg.rate)) continue;
        // Uniform over the N-1 labels different from the truth.
        int offset = 1 + static_cast<int>(rng.uniform_int(n_classes - 1));
        s.corrupt((ground_truth(s) + offset) % n_classes);
    }
}

Stream make_stream(const Dataset& dataset, const StreamPlan& plan, const NoiseConfig& noise,
                   std::uint64_t seed) {
    plan.validate();
    noise.validate();
    dataset.schema.validate();
    if (plan.total() > static_cast<std::int64_t>(dataset.samples.size()))
        throw ConfigError("make_stream: dataset has " + std::to_string(dataset.samples.size()) +
                          " samples, plan needs " + std::to_string(plan.total()));

    std::vector<std::size_t> order(dataset.samples.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    Rng rng(seed);
    rng.shuffle(order);

    Stream stream;
    stream.schema = dataset.schema;
    std::size_t pos = 0;
    auto take = [&](int count) {
        std::vector<Sample> part;
        part.reserve(count);
        for (int i = 0; i < count; ++i) part.push_back(dataset.samples[order[pos++]]);
        return part;
    };

    stream.initial = take(plan.initial_size);
    stream.validation = take(plan.validation_size);
    stream.test = take(plan.test_size);

    std::vector<Sample> pool = take(plan.batch_size * plan.n_batches);
    inject_noise(pool, dataset.schema.n_classes, noise);
    stream.batches.reserve(plan.n_batches);
    for (int b = 0; b < plan.n_batches; ++b)
        stream.batches.emplace_back(pool.begin() + static_cast<std::ptrdiff_t>(b) * plan.batch_size,
                                    pool.begin() + static_cast<std::ptrdiff_t>(b + 1) * plan.batch_size);
    return stream;
}

namespace {

// Orthonormal directions via Gram-Schmidt on seeded Gaussian draws.
std::vector<std::vector<double>> orthonormal_directions(int count, int dim, Rng& rng) {
    std::vector<std::vector<double>> dirs;
    dirs.reserve(count);
    while (static_cast<int>(dirs.size()) < count) {
        std::vector<double> v(dim);
        for (double& x : v) x = rng.normal();
        for (const auto& u : dirs) {
            double dot = 0.0;
            for (int j = 0; j < dim; ++j) dot += u[j] * v[j];
            for (int j = 0; j < dim; ++j) v[j] -= dot * u[j];
        }
        double norm = 0.0;
        for (double x : v) norm += x * x;
        norm = std::sqrt(norm);
        if (norm < 1e-8) continue;  // degenerate draw, retry
        for (double& x : v) x /= norm;
        dirs.push_back(std::move(v));
    }
    return dirs;
}

}  // namespace

Dataset generate_gaussian_blobs(int n_classes, int n_features, int n_samples,
                                double class_separation, std::uint64_t seed) {
    DatasetSchema schema{n_classes, n_features};
    schema.validate();
    if (n_samples < 1) throw ConfigError("blobs: n_samples must be >= 1");
    if (class_separation <= 0.0) throw ConfigError("blobs: class_separation must be > 0");
    if (n_classes > n_features)
        throw ConfigError("blobs: n_classes must be <= n_features for exact center placement");

    Rng rng(seed);
    auto dirs = orthonormal_directions(n_classes, n_features, rng);

    // Centers sit on seeded orthonormal directions, the first half at radius
    // sep/sqrt(2) and the rest at twice that. Every pair of centers is at
    // least class_separation apart (the inner group exactly so), giving a
    // confusable core plus distinct outliers, like real class structure.
    std::vector<double> radius(n_classes);
    for (int c = 0; c < n_classes; ++c)
        radius[c] = (class_separation / std::sqrt(2.0)) * (c < (n_classes + 1) / 2 ? 1.0 : 2.0);

    Dataset out;
    out.schema = schema;
    out.samples.reserve(n_samples);
    std::int64_t id = 0;
    for (int c = 0; c < n_classes; ++c) {
        int count = n_samples / n_classes + (c < n_samples % n_classes ? 1 : 0);
        for (int i = 0; i < count; ++i) {
            std::vector<double> x(n_features);
            for (int j = 0; j < n_features; ++j) x[j] = radius[c] * dirs[c][j] + rng.normal();
            out.samples.emplace_back(id++, std::move(x), c, c);
        }
    }
    return out;
}

namespace {

bool parse_double(const std::string& text, double& out) {
    if (text.empty()) return false;
    try {
        std::size_t used = 0;
        out = std::stod(text, &used);
        return used == text.size();
    } catch (...) {
        return false;
    }
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) {
        // trim surrounding whitespace
        auto b = field.find_first_not_of(" \t\r");
        auto e = field.find_last_not_of(" \t\r");
        fields.push_back(b == std::string::npos ? std::string() : field.substr(b, e - b + 1));
    }
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

}  // namespace

CsvLoadResult load_csv(const std::string& path, std::optional<DatasetSchema> declared) {
    std::ifstream in(path);
    if (!in) throw ParseError("csv: cannot open " + path);

    CsvLoadResult result;
    std::unordered_map<std::string, int> label_index;
    std::string line;
    int line_no = 0;
    int n_features = -1;
    std::int64_t id = 0;

    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto fields = split_csv_line(line);
        if (fields.size() < 2)
            throw ParseError("csv line " + std::to_string(line_no) + ": need features and a label");

        if (n_features < 0) {
            // Header detection: a non-numeric first feature column means header.
            double probe;
            if (!parse_double(fields[0], probe)) {
                result.had_header = true;
                n_features = static_cast<int>(fields.size()) - 1;
                continue;
            }
            n_features = static_cast<int>(fields.size()) - 1;
        }
        if (static_cast<int>(fields.size()) != n_features + 1)
            throw ParseError("csv line " + std::to_string(line_no) + ": expected " +
                             std::to_string(n_features + 1) + " columns, got " +
                             std::to_string(fields.size()));

        std::vector<double> features(n_features);
        for (int j = 0; j < n_features; ++j)
            if (!parse_double(fields[j], features[j]))
                throw ParseError("csv line " + std::to_string(line_no) + ": non-numeric feature '" +
                                 fields[j] + "'");

        const std::string& label_text = fields.back();
        auto it = label_index.find(label_text);
        if (it == label_index.end()) {
            it = label_index.emplace(label_text, static_cast<int>(result.label_names.size())).first;
            result.label_names.push_back(label_text);
        }
        result.dataset.samples.emplace_back(id++, std::move(features), it->second, it->second);
    }

    if (result.dataset.samples.empty()) throw ParseError("csv: no data rows in " + path);

    int n_classes = static_cast<int>(result.label_names.size());
    if (declared) {
        if (declared->n_features != n_features)
            throw SchemaError("csv: file has " + std::to_string(n_features) +
                              " features, schema declares " + std::to_string(declared->n_features));
        if (n_classes > declared->n_classes)
            throw SchemaError("csv: file has " + std::to_string(n_classes) +
                              " labels, schema declares " + std::to_string(declared->n_classes));
        n_classes = declared->n_classes;
    }
    result.dataset.schema = DatasetSchema{n_classes, n_features};
    result.dataset.schema.validate();
    return result;
}

void write_csv(const std::string& path, const Dataset& dataset,
               const std::vector<std::string>* label_names) {
    std::ofstream out(path);
    if (!out) throw ParseError("csv: cannot write " + path);
    out.precision(17);
    for (const Sample& s : dataset.samples) {
        for (double v : s.features()) out << v << ',';
        int label = s.given_label();
        if (label_names)
            out << (*label_names)[label] << '\n';
        else
            out << label << '\n';
    }
}

}  // namespace duolab
