// Kmeans clustering of suspicious-sample features and best-versus-second-best
// informativeness ranking, producing the ordered candidate set K.
#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "duolab/types.hpp"

namespace duolab {

// Best-versus-second-best margin p_best - p_second_best in [0,1].
// Smaller = more informative. Throws SchemaError for fewer than 2 classes.
double bvsb(const PredictionDistribution& dist);

struct ClusteringResult {
    std::vector<std::vector<double>> centroids;
    std::vector<int> assignments;  // index-aligned with the input points
    int n_iterations = 0;
    double inertia = 0.0;                 // sum of squared distances to assigned centroid
    std::vector<double> inertia_history;  // after each assignment step; non-increasing
};

// Lloyd's algorithm. kmeans++ seeding by default, plain random seeding behind
// the flag. Stops when the largest centroid shift drops below tol or after
// max_iter iterations. k > |points| is clamped (with a warning on stderr);
// an emptied cluster is reseeded at the point farthest from its centroid.
ClusteringResult kmeans(const std::vector<std::vector<double>>& points, int k, std::uint64_t seed,
                        int max_iter = 100, double tol = 1e-6, bool plusplus_seeding = true);

// Per cluster, keep the per_cluster_top samples with the smallest scores
// (ties: lower id), then merge and sort globally by ascending score (ties:
// lower id). Returns positional indices, most informative first.
std::vector<int> select_top_k_per_cluster(const ClusteringResult& clustering,
                                          std::span<const double> scores,
                                          std::span<const std::int64_t> ids, int per_cluster_top);

// Clustering-off variant: every candidate, sorted by ascending score
// (ties: lower id).
std::vector<int> rank_suspicious_no_clustering(std::span<const double> scores,
                                               std::span<const std::int64_t> ids);

}  // namespace duolab
