#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <string>

#include "duolab/stream.hpp"

using namespace duolab;

namespace {

std::vector<Sample> labeled_pool(int n, int n_classes) {
    std::vector<Sample> out;
    for (int i = 0; i < n; ++i)
        out.emplace_back(i, std::vector<double>{double(i)}, i % n_classes, i % n_classes);
    return out;
}

struct TempFile {
    std::string path;
    explicit TempFile(const std::string& name) {
        path = (std::filesystem::temp_directory_path() / name).string();
    }
    ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("noise rate zero changes nothing") {
    auto samples = labeled_pool(500, 4);
    inject_noise(samples, 4, NoiseConfig{0.0, 123});
    for (const Sample& s : samples) CHECK(s.given_label() == ground_truth(s));
}

TEST_CASE("noise corruption fraction concentrates around the rate") {
    auto samples = labeled_pool(100000, 10);
    inject_noise(samples, 10, NoiseConfig{0.3, 7});
    int corrupted = 0;
    for (const Sample& s : samples) {
        if (s.given_label() != ground_truth(s)) ++corrupted;
        CHECK(ground_truth(s) == s.id() % 10);  // truth untouched
    }
    double fraction = corrupted / 100000.0;
    CHECK(fraction >= 0.29);
    CHECK(fraction <= 0.31);
}

TEST_CASE("every corrupted label differs from the truth") {
    auto samples = labeled_pool(20000, 3);
    auto before = samples;
    inject_noise(samples, 3, NoiseConfig{0.6, 99});
    int corrupted = 0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        CHECK(ground_truth(samples[i]) == ground_truth(before[i]));
        if (samples[i].given_label() != before[i].given_label()) {
            ++corrupted;
            CHECK(samples[i].given_label() != ground_truth(samples[i]));
        }
    }
    CHECK(corrupted > 0);
}

TEST_CASE("noise injection is deterministic given the seed") {
    auto a = labeled_pool(5000, 5);
    auto b = labeled_pool(5000, 5);
    inject_noise(a, 5, NoiseConfig{0.4, 42});
    inject_noise(b, 5, NoiseConfig{0.4, 42});
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].given_label() == b[i].given_label());
}

TEST_CASE("make_stream partitions the dataset") {
    Dataset dataset{DatasetSchema{4, 1}, labeled_pool(1000, 4)};
    StreamPlan plan{100, 50, 30, 5, 200};  // 100+50+200+150 = 500 of 1000
    Stream stream = make_stream(dataset, plan, NoiseConfig{0.5, 3}, 11);

    std::set<std::int64_t> ids;
    auto collect = [&ids](const std::vector<Sample>& part) {
        for (const Sample& s : part) CHECK(ids.insert(s.id()).second);
    };
    collect(stream.initial);
    collect(stream.validation);
    collect(stream.test);
    REQUIRE(stream.batches.size() == 5);
    for (const auto& batch : stream.batches) {
        CHECK(batch.size() == 30);
        collect(batch);
    }
    CHECK(ids.size() == 500);

    // Clean splits really are clean.
    for (const Sample& s : stream.initial) CHECK(s.given_label() == ground_truth(s));
    for (const Sample& s : stream.validation) CHECK(s.given_label() == ground_truth(s));
    for (const Sample& s : stream.test) CHECK(s.given_label() == ground_truth(s));
}

TEST_CASE("make_stream is deterministic and rejects short datasets") {
    Dataset dataset{DatasetSchema{3, 1}, labeled_pool(300, 3)};
    StreamPlan plan{50, 30, 20, 4, 100};  // needs 260

    Stream a = make_stream(dataset, plan, NoiseConfig{0.3, 5}, 17);
    Stream b = make_stream(dataset, plan, NoiseConfig{0.3, 5}, 17);
    for (std::size_t t = 0; t < a.batches.size(); ++t)
        for (std::size_t i = 0; i < a.batches[t].size(); ++i) {
            CHECK(a.batches[t][i].id() == b.batches[t][i].id());
            CHECK(a.batches[t][i].given_label() == b.batches[t][i].given_label());
        }

    StreamPlan too_big{200, 50, 20, 4, 100};  // needs 430
    CHECK_THROWS_AS(make_stream(dataset, too_big, NoiseConfig{0.3, 5}, 17), ConfigError);
}

TEST_CASE("gaussian blobs are balanced and deterministic") {
    Dataset a = generate_gaussian_blobs(3, 4, 1000, 5.0, 9);
    Dataset b = generate_gaussian_blobs(3, 4, 1000, 5.0, 9);
    REQUIRE(a.samples.size() == 1000);

    std::vector<int> counts(3, 0);
    for (const Sample& s : a.samples) ++counts[ground_truth(s)];
    int lo = *std::min_element(counts.begin(), counts.end());
    int hi = *std::max_element(counts.begin(), counts.end());
    CHECK(hi - lo <= 1);

    for (std::size_t i = 0; i < a.samples.size(); ++i)
        CHECK(a.samples[i].features() == b.samples[i].features());
}

TEST_CASE("well-separated blobs are solvable by nearest centroid") {
    Dataset dataset = generate_gaussian_blobs(4, 6, 4000, 20.0, 31);

    // Independent oracle: per-class feature means, then nearest-centroid.
    std::vector<std::vector<double>> centroids(4, std::vector<double>(6, 0.0));
    std::vector<int> counts(4, 0);
    for (const Sample& s : dataset.samples) {
        int c = ground_truth(s);
        ++counts[c];
        for (int j = 0; j < 6; ++j) centroids[c][j] += s.features()[j];
    }
    for (int c = 0; c < 4; ++c)
        for (int j = 0; j < 6; ++j) centroids[c][j] /= counts[c];

    int correct = 0;
    for (const Sample& s : dataset.samples) {
        int best = 0;
        double best_d = 1e300;
        for (int c = 0; c < 4; ++c) {
            double d = 0.0;
            for (int j = 0; j < 6; ++j) {
                double diff = s.features()[j] - centroids[c][j];
                d += diff * diff;
            }
            if (d < best_d) {
                best_d = d;
                best = c;
            }
        }
        if (best == ground_truth(s)) ++correct;
    }
    CHECK(correct / 4000.0 > 0.99);
}

TEST_CASE("blob center placement requires enough dimensions") {
    CHECK_THROWS_AS(generate_gaussian_blobs(5, 2, 100, 3.0, 0), ConfigError);
}

TEST_CASE("csv loading") {
    TempFile file("duolab_test_basic.csv");
    std::ofstream(file.path) << "1.5,2.5,cat\n-1.0,0.25,dog\n3.0,4.0,cat\n";

    CsvLoadResult result = load_csv(file.path);
    CHECK_FALSE(result.had_header);
    CHECK(result.dataset.schema.n_features == 2);
    CHECK(result.dataset.schema.n_classes == 2);
    REQUIRE(result.dataset.samples.size() == 3);
    CHECK(result.label_names == std::vector<std::string>{"cat", "dog"});
    CHECK(result.dataset.samples[0].given_label() == 0);
    CHECK(result.dataset.samples[1].given_label() == 1);
    CHECK(result.dataset.samples[2].given_label() == 0);
    CHECK(result.dataset.samples[1].features() == std::vector<double>{-1.0, 0.25});
}

TEST_CASE("csv header auto-detection") {
    TempFile file("duolab_test_header.csv");
    std::ofstream(file.path) << "x1,x2,label\n1.0,2.0,a\n3.0,4.0,b\n";
    CsvLoadResult result = load_csv(file.path);
    CHECK(result.had_header);
    CHECK(result.dataset.samples.size() == 2);
}

TEST_CASE("csv parse errors name the line") {
    TempFile file("duolab_test_bad.csv");
    std::ofstream(file.path) << "1.0,2.0,a\n1.0,oops,b\n";
    try {
        load_csv(file.path);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
}

TEST_CASE("csv declared schema mismatches") {
    TempFile file("duolab_test_schema.csv");
    std::ofstream(file.path) << "1.0,2.0,a\n3.0,4.0,b\n5.0,6.0,c\n";
    CHECK_THROWS_AS(load_csv(file.path, DatasetSchema{2, 2}), SchemaError);  // 3 labels > 2
    CHECK_THROWS_AS(load_csv(file.path, DatasetSchema{3, 5}), SchemaError);  // wrong d
    CHECK(load_csv(file.path, DatasetSchema{5, 2}).dataset.schema.n_classes == 5);
}

TEST_CASE("csv write/read round-trip preserves values") {
    Dataset dataset = generate_gaussian_blobs(3, 3, 50, 4.0, 77);
    TempFile file("duolab_test_roundtrip.csv");
    write_csv(file.path, dataset);
    CsvLoadResult result = load_csv(file.path);
    REQUIRE(result.dataset.samples.size() == dataset.samples.size());
    for (std::size_t i = 0; i < dataset.samples.size(); ++i) {
        CHECK(result.dataset.samples[i].features() == dataset.samples[i].features());
        // Integer labels 0..N-1 appear in order, so the mapping is identity.
        CHECK(result.dataset.samples[i].given_label() == dataset.samples[i].given_label());
    }
}
