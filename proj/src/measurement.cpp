#include "wlmp/measurement.hpp"

#include <cmath>
#include <string>

#include "wlmp/error.hpp"

namespace wlmp {
namespace {

void require_square(const Eigen::MatrixXd& m, const char* what) {
  if (m.rows() != m.cols()) {
    throw Error(ErrorCode::shape_mismatch,
                std::string(what) + " must be square, got " + std::to_string(m.rows()) + "x" +
                    std::to_string(m.cols()));
  }
}

void require_symmetric_zero_diagonal(const Eigen::MatrixXd& m, const char* what) {
  const double tol = 1e-12 * std::max(1.0, m.cwiseAbs().maxCoeff());
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    if (m(j, j) != 0.0) {
      throw Error(ErrorCode::invalid_argument,
                  std::string(what) + " has non-zero diagonal at " + std::to_string(j));
    }
    for (Eigen::Index i = j + 1; i < m.rows(); ++i) {
      if (std::abs(m(i, j) - m(j, i)) > tol) {
        throw Error(ErrorCode::invalid_argument, std::string(what) + " is not symmetric at (" +
                                                     std::to_string(i) + "," + std::to_string(j) +
                                                     ")");
      }
    }
  }
}

void require_finite_nonnegative(const Eigen::MatrixXd& m, const char* what) {
  if (!m.allFinite()) {
    throw Error(ErrorCode::invalid_argument, std::string(what) + " has non-finite entries");
  }
  if (m.size() > 0 && m.minCoeff() < 0.0) {
    throw Error(ErrorCode::invalid_argument, std::string(what) + " has negative entries");
  }
}

}  // namespace

MeasurementMatrix::MeasurementMatrix(Eigen::MatrixXd entries) : entries_(std::move(entries)) {
  require_square(entries_, "measurement matrix");
  require_finite_nonnegative(entries_, "measurement matrix");
  require_symmetric_zero_diagonal(entries_, "measurement matrix");
}

SimilarityMatrix::SimilarityMatrix(Eigen::MatrixXd entries) : entries_(std::move(entries)) {
  require_square(entries_, "similarity matrix");
  require_finite_nonnegative(entries_, "similarity matrix");
  require_symmetric_zero_diagonal(entries_, "similarity matrix");
  if (entries_.size() > 0 && entries_.maxCoeff() > 1.0) {
    throw Error(ErrorCode::invalid_argument, "similarity matrix has entries above 1");
  }
}

CostMatrix::CostMatrix(Eigen::MatrixXd entries) : entries_(std::move(entries)) {
  require_square(entries_, "cost matrix");
  require_finite_nonnegative(entries_, "cost matrix");
}

}  // namespace wlmp
