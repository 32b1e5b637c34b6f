#pragma once

#include <Eigen/Dense>

namespace wlmp {

/// Symmetric M×M matrix of pairwise distances with a zero diagonal.
/// Holds either RSSI-derived estimates or exact blueprint distances.
class MeasurementMatrix {
 public:
  /// Validates symmetry, zero diagonal, non-negativity and finiteness;
  /// throws Error(invalid_argument) otherwise.
  explicit MeasurementMatrix(Eigen::MatrixXd entries);

  const Eigen::MatrixXd& entries() const noexcept { return entries_; }
  Eigen::Index size() const noexcept { return entries_.rows(); }
  double operator()(Eigen::Index i, Eigen::Index j) const { return entries_(i, j); }

 private:
  Eigen::MatrixXd entries_;
};

/// Gaussian-kernel similarity: symmetric, zero diagonal, entries in [0, 1].
class SimilarityMatrix {
 public:
  explicit SimilarityMatrix(Eigen::MatrixXd entries);

  const Eigen::MatrixXd& entries() const noexcept { return entries_; }
  Eigen::Index size() const noexcept { return entries_.rows(); }

 private:
  Eigen::MatrixXd entries_;
};

/// Square matrix of finite, non-negative assignment costs (row = node,
/// column = position).
class CostMatrix {
 public:
  explicit CostMatrix(Eigen::MatrixXd entries);

  const Eigen::MatrixXd& entries() const noexcept { return entries_; }
  Eigen::Index size() const noexcept { return entries_.rows(); }
  double operator()(Eigen::Index i, Eigen::Index j) const { return entries_(i, j); }

 private:
  Eigen::MatrixXd entries_;
};

}  // namespace wlmp
