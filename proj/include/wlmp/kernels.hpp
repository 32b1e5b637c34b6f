#pragma once

// Data-parallel inner loops of the pipeline. The functions in `kernels`
// fan out with OpenMP; `kernels::serial` holds straightforward single-thread
// references with identical results, kept for equivalence tests and
// benchmarks. Reductions are arranged so the parallel result does not
// depend on the thread count.

#include <span>

#include <Eigen/Dense>

namespace wlmp::kernels {

/// Euclidean distance between every pair of rows of `points` (M×d).
Eigen::MatrixXd pairwise_distances(const Eigen::MatrixXd& points);

/// Mean of the squared entries, (1/n²) Σᵢⱼ mᵢⱼ² for an n×n matrix.
double mean_square(const Eigen::MatrixXd& m);

/// exp(−dᵢⱼ²/σ²) off the diagonal, 0 on it.
Eigen::MatrixXd gaussian_similarity(const Eigen::MatrixXd& distances, double sigma2);

/// Distance between row i of `nodes` (column j multiplied by signs[j]) and
/// row k of `positions`.
Eigen::MatrixXd embedded_distances(const Eigen::MatrixXd& nodes, const Eigen::MatrixXd& positions,
                                   std::span<const int> signs);

namespace serial {

Eigen::MatrixXd pairwise_distances(const Eigen::MatrixXd& points);
double mean_square(const Eigen::MatrixXd& m);
Eigen::MatrixXd gaussian_similarity(const Eigen::MatrixXd& distances, double sigma2);
Eigen::MatrixXd embedded_distances(const Eigen::MatrixXd& nodes, const Eigen::MatrixXd& positions,
                                   std::span<const int> signs);

}  // namespace serial
}  // namespace wlmp::kernels
