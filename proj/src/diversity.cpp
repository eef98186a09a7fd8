#include "duolab/diversity.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <numeric>

#include "duolab/rng.hpp"

namespace duolab {

double bvsb(const PredictionDistribution& dist) {
    if (dist.probs.size() < 2) throw SchemaError("bvsb: need at least 2 classes");
    double best = -1.0, second = -1.0;
    for (double p : dist.probs) {
        if (p > best) {
            second = best;
            best = p;
        } else if (p > second) {
            second = p;
        }
    }
    return best - second;
}

namespace {

double squared_distance(const std::vector<double>& a, const std::vector<double>& b) {
    double acc = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) {
        double diff = a[j] - b[j];
        acc += diff * diff;
    }
    return acc;
}

// argmin distance; ties go to the lowest cluster index.
int nearest_centroid(const std::vector<double>& point,
                     const std::vector<std::vector<double>>& centroids, double* d2_out = nullptr) {
    int best = 0;
    double best_d2 = std::numeric_limits<double>::infinity();
    for (int c = 0; c < static_cast<int>(centroids.size()); ++c) {
        double d2 = squared_distance(point, centroids[c]);
        if (d2 < best_d2) {
            best_d2 = d2;
            best = c;
        }
    }
    if (d2_out) *d2_out = best_d2;
    return best;
}

std::vector<std::vector<double>> seed_plusplus(const std::vector<std::vector<double>>& points,
                                               int k, Rng& rng) {
    std::vector<std::vector<double>> centroids;
    centroids.reserve(k);
    centroids.push_back(points[rng.uniform_int(static_cast<std::int64_t>(points.size()))]);

    std::vector<double> d2(points.size());
    while (static_cast<int>(centroids.size()) < k) {
        double total = 0.0;
        for (std::size_t i = 0; i < points.size(); ++i) {
            nearest_centroid(points[i], centroids, &d2[i]);
            total += d2[i];
        }
        std::size_t pick;
        if (total <= 0.0) {
            // All mass at existing centroids (duplicate points); fall back to uniform.
            pick = static_cast<std::size_t>(rng.uniform_int(static_cast<std::int64_t>(points.size())));
        } else {
            double target = rng.uniform01() * total;
            pick = points.size() - 1;
            double acc = 0.0;
            for (std::size_t i = 0; i < points.size(); ++i) {
                acc += d2[i];
                if (acc >= target) {
                    pick = i;
                    break;
                }
            }
        }
        centroids.push_back(points[pick]);
    }
    return centroids;
}

std::vector<std::vector<double>> seed_random(const std::vector<std::vector<double>>& points,
                                             int k, Rng& rng) {
    // Sample k distinct indices by shuffling a prefix.
    std::vector<std::size_t> idx(points.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    rng.shuffle(idx);
    std::vector<std::vector<double>> centroids;
    centroids.reserve(k);
    for (int c = 0; c < k; ++c) centroids.push_back(points[idx[c]]);
    return centroids;
}

}  // namespace

ClusteringResult kmeans(const std::vector<std::vector<double>>& points, int k, std::uint64_t seed,
                        int max_iter, double tol, bool plusplus_seeding) {
    if (points.empty()) throw ConfigError("kmeans: no points");
    if (k < 1) throw ConfigError("kmeans: k must be >= 1");
    if (k > static_cast<int>(points.size())) {
        std::cerr << "kmeans: clamping k from " << k << " to " << points.size() << " points\n";
        k = static_cast<int>(points.size());
    }
    const std::size_t n = points.size();
    const std::size_t dim = points[0].size();

    Rng rng(seed);
    ClusteringResult result;
    result.centroids = plusplus_seeding ? seed_plusplus(points, k, rng) : seed_random(points, k, rng);
    result.assignments.assign(n, 0);

    for (int iter = 0; iter < max_iter; ++iter) {
        // Assignment step.
        double inertia = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double d2 = 0.0;
            result.assignments[i] = nearest_centroid(points[i], result.centroids, &d2);
            inertia += d2;
        }
        result.inertia = inertia;
        result.inertia_history.push_back(inertia);
        result.n_iterations = iter + 1;

        // Update step.
        std::vector<std::vector<double>> next(k, std::vector<double>(dim, 0.0));
        std::vector<int> counts(k, 0);
        for (std::size_t i = 0; i < n; ++i) {
            int c = result.assignments[i];
            ++counts[c];
            for (std::size_t j = 0; j < dim; ++j) next[c][j] += points[i][j];
        }
        for (int c = 0; c < k; ++c) {
            if (counts[c] > 0) {
                for (std::size_t j = 0; j < dim; ++j) next[c][j] /= counts[c];
            } else {
                // Reseed an emptied cluster at the point farthest from its
                // assigned centroid.
                std::size_t farthest = 0;
                double far_d2 = -1.0;
                for (std::size_t i = 0; i < n; ++i) {
                    double d2 = squared_distance(points[i], result.centroids[result.assignments[i]]);
                    if (d2 > far_d2) {
                        far_d2 = d2;
                        farthest = i;
                    }
                }
                next[c] = points[farthest];
            }
        }

        double max_shift = 0.0;
        for (int c = 0; c < k; ++c)
            max_shift = std::max(max_shift, squared_distance(result.centroids[c], next[c]));
        result.centroids = std::move(next);
        if (std::sqrt(max_shift) < tol) break;
    }

    // Final assignment against the final centroids.
    double inertia = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double d2 = 0.0;
        result.assignments[i] = nearest_centroid(points[i], result.centroids, &d2);
        inertia += d2;
    }
    result.inertia = inertia;
    result.inertia_history.push_back(inertia);
    return result;
}

namespace {

// Ascending score, ties toward the lower sample id.
struct ScoreOrder {
    std::span<const double> scores;
    std::span<const std::int64_t> ids;
    bool operator()(int a, int b) const {
        if (scores[a] != scores[b]) return scores[a] < scores[b];
        return ids[a] < ids[b];
    }
};

}  // namespace

std::vector<int> select_top_k_per_cluster(const ClusteringResult& clustering,
                                          std::span<const double> scores,
                                          std::span<const std::int64_t> ids, int per_cluster_top) {
    if (per_cluster_top < 1) throw ConfigError("selection: per_cluster_top must be >= 1");
    if (scores.size() != clustering.assignments.size() || scores.size() != ids.size())
        throw SchemaError("select_top_k_per_cluster: size mismatch");

    int k = static_cast<int>(clustering.centroids.size());
    std::vector<std::vector<int>> members(k);
    for (int i = 0; i < static_cast<int>(scores.size()); ++i)
        members[clustering.assignments[i]].push_back(i);

    ScoreOrder order{scores, ids};
    std::vector<int> selected;
    for (auto& cluster : members) {
        std::sort(cluster.begin(), cluster.end(), order);
        int keep = std::min<int>(per_cluster_top, static_cast<int>(cluster.size()));
        selected.insert(selected.end(), cluster.begin(), cluster.begin() + keep);
    }
    std::sort(selected.begin(), selected.end(), order);
    return selected;
}

std::vector<int> rank_suspicious_no_clustering(std::span<const double> scores,
                                               std::span<const std::int64_t> ids) {
    if (scores.size() != ids.size())
        throw SchemaError("rank_suspicious_no_clustering: size mismatch");
    std::vector<int> order(scores.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), ScoreOrder{scores, ids});
    return order;
}

}  // namespace duolab
