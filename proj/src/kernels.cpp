#include "wlmp/kernels.hpp"

#include <cmath>
#include <vector>

#include "wlmp/error.hpp"

namespace wlmp::kernels {
namespace {

inline double row_distance(const Eigen::MatrixXd& a, Eigen::Index i, const Eigen::MatrixXd& b,
                           Eigen::Index j) {
  double sum = 0.0;
  for (Eigen::Index k = 0; k < a.cols(); ++k) {
    const double diff = a(i, k) - b(j, k);
    sum += diff * diff;
  }
  return std::sqrt(sum);
}

inline double signed_row_distance(const Eigen::MatrixXd& a, Eigen::Index i,
                                  const Eigen::MatrixXd& b, Eigen::Index j,
                                  std::span<const int> signs) {
  double sum = 0.0;
  for (Eigen::Index k = 0; k < a.cols(); ++k) {
    const double diff = signs[static_cast<std::size_t>(k)] * a(i, k) - b(j, k);
    sum += diff * diff;
  }
  return std::sqrt(sum);
}

inline double column_square_sum(const Eigen::MatrixXd& m, Eigen::Index j) {
  double sum = 0.0;
  for (Eigen::Index i = 0; i < m.rows(); ++i) sum += m(i, j) * m(i, j);
  return sum;
}

void check_embedded_shapes(const Eigen::MatrixXd& nodes, const Eigen::MatrixXd& positions,
                           std::span<const int> signs) {
  if (nodes.cols() != positions.cols() ||
      static_cast<std::size_t>(nodes.cols()) != signs.size()) {
    throw Error(ErrorCode::shape_mismatch, "embedding column counts and sign vector disagree");
  }
}

}  // namespace

Eigen::MatrixXd pairwise_distances(const Eigen::MatrixXd& points) {
  const Eigen::Index n = points.rows();
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, n);
#pragma omp parallel for schedule(dynamic, 16)
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < j; ++i) {
      const double d = row_distance(points, i, points, j);
      out(i, j) = d;
      out(j, i) = d;
    }
  }
  return out;
}

double mean_square(const Eigen::MatrixXd& m) {
  const Eigen::Index cols = m.cols();
  std::vector<double> partial(static_cast<std::size_t>(cols));
#pragma omp parallel for schedule(static)
  for (Eigen::Index j = 0; j < cols; ++j) partial[static_cast<std::size_t>(j)] = column_square_sum(m, j);
  double total = 0.0;
  for (double p : partial) total += p;
  return total / static_cast<double>(m.size());
}

Eigen::MatrixXd gaussian_similarity(const Eigen::MatrixXd& distances, double sigma2) {
  const Eigen::Index n = distances.rows();
  Eigen::MatrixXd out(n, n);
#pragma omp parallel for schedule(static)
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      const double d = distances(i, j);
      out(i, j) = i == j ? 0.0 : std::exp(-d * d / sigma2);
    }
  }
  return out;
}

Eigen::MatrixXd embedded_distances(const Eigen::MatrixXd& nodes, const Eigen::MatrixXd& positions,
                                   std::span<const int> signs) {
  check_embedded_shapes(nodes, positions, signs);
  Eigen::MatrixXd out(nodes.rows(), positions.rows());
#pragma omp parallel for schedule(static)
  for (Eigen::Index j = 0; j < positions.rows(); ++j) {
    for (Eigen::Index i = 0; i < nodes.rows(); ++i) {
      out(i, j) = signed_row_distance(nodes, i, positions, j, signs);
    }
  }
  return out;
}

namespace serial {

Eigen::MatrixXd pairwise_distances(const Eigen::MatrixXd& points) {
  const Eigen::Index n = points.rows();
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      out(i, j) = out(j, i) = row_distance(points, i, points, j);
    }
  }
  return out;
}

double mean_square(const Eigen::MatrixXd& m) {
  double total = 0.0;
  for (Eigen::Index j = 0; j < m.cols(); ++j) total += column_square_sum(m, j);
  return total / static_cast<double>(m.size());
}

Eigen::MatrixXd gaussian_similarity(const Eigen::MatrixXd& distances, double sigma2) {
  const Eigen::Index n = distances.rows();
  Eigen::MatrixXd out(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const double d = distances(i, j);
      out(i, j) = i == j ? 0.0 : std::exp(-d * d / sigma2);
    }
  }
  return out;
}

Eigen::MatrixXd embedded_distances(const Eigen::MatrixXd& nodes, const Eigen::MatrixXd& positions,
                                   std::span<const int> signs) {
  check_embedded_shapes(nodes, positions, signs);
  Eigen::MatrixXd out(nodes.rows(), positions.rows());
  for (Eigen::Index i = 0; i < nodes.rows(); ++i) {
    for (Eigen::Index j = 0; j < positions.rows(); ++j) {
      out(i, j) = signed_row_distance(nodes, i, positions, j, signs);
    }
  }
  return out;
}

}  // namespace serial
}  // namespace wlmp::kernels
