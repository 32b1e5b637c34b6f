#include "wlmp/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "wlmp/error.hpp"
#include "wlmp/kernels.hpp"
#include "wlmp/log.hpp"

namespace wlmp {

double kernel_bandwidth(const MeasurementMatrix& distances) {
  const double sigma2 = kernels::mean_square(distances.entries());
  if (!(sigma2 > 0.0)) {
    throw Error(ErrorCode::degenerate_input, "all distances are zero; kernel bandwidth is 0");
  }
  return sigma2;
}

SimilarityMatrix similarity(const MeasurementMatrix& distances, double sigma2) {
  if (!(sigma2 > 0.0) || !std::isfinite(sigma2)) {
    throw Error(ErrorCode::invalid_argument, "kernel bandwidth must be positive and finite");
  }
  return SimilarityMatrix(kernels::gaussian_similarity(distances.entries(), sigma2));
}

namespace {

Eigen::VectorXd checked_degrees(const SimilarityMatrix& similarity) {
  const Eigen::VectorXd degree = similarity.entries().rowwise().sum();
  for (Eigen::Index i = 0; i < degree.size(); ++i) {
    if (!(degree(i) > 0.0)) {
      throw Error(ErrorCode::disconnected,
                  fmt::format("node {} has zero degree; the similarity graph is disconnected", i));
    }
  }
  return degree;
}

// Makes the largest-magnitude entry positive. Symmetric layouts often have
// entries of equal magnitude and opposite sign; those count as tied and the
// lowest index wins, so rounding noise cannot flip the choice.
void canonicalize_sign(Eigen::Ref<Eigen::VectorXd> v) {
  const double peak = v.cwiseAbs().maxCoeff();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v(i)) >= peak * (1.0 - 1e-8)) {
      if (v(i) < 0.0) v = -v;
      return;
    }
  }
}

}  // namespace

Eigen::MatrixXd random_walk_laplacian(const SimilarityMatrix& similarity) {
  const Eigen::VectorXd degree = checked_degrees(similarity);
  Eigen::MatrixXd laplacian = -(degree.cwiseInverse().asDiagonal() * similarity.entries());
  laplacian.diagonal().setOnes();
  return laplacian;
}

SpectralDecomposition normalized_laplacian(const SimilarityMatrix& similarity) {
  const Eigen::VectorXd degree = checked_degrees(similarity);
  const Eigen::Index n = similarity.size();
  const Eigen::VectorXd inv_sqrt = degree.cwiseSqrt().cwiseInverse();

  Eigen::MatrixXd conjugate = inv_sqrt.asDiagonal() * similarity.entries() * inv_sqrt.asDiagonal();
  conjugate = 0.5 * (conjugate + conjugate.transpose()).eval();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(conjugate);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::degenerate_input, "symmetric eigensolver did not converge");
  }

  // eigenvalue μ of the conjugate maps to λ = 1 − μ of L; Eigen sorts μ
  // ascending, so walk it backwards.
  SpectralDecomposition out;
  out.eigenvalues.resize(n);
  out.eigenvectors.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const Eigen::Index src = n - 1 - k;
    out.eigenvalues(k) = 1.0 - solver.eigenvalues()(src);
    Eigen::VectorXd v = inv_sqrt.cwiseProduct(solver.eigenvectors().col(src));
    v.normalize();
    canonicalize_sign(v);
    out.eigenvectors.col(k) = v;
  }

  const double scale = out.eigenvalues.cwiseAbs().maxCoeff();
  if (n > 1 && std::abs(out.eigenvalues(1)) < 1e-9 * scale) {
    out.near_disconnected = true;
    logger()->warn("second-smallest Laplacian eigenvalue {:.3g} is numerically zero; "
                   "the similarity graph is close to disconnected",
                   out.eigenvalues(1));
  }
  return out;
}

SpectralDecomposition diffusion_spectrum(const MeasurementMatrix& distances) {
  return normalized_laplacian(similarity(distances, kernel_bandwidth(distances)));
}

Embedding embed(const SpectralDecomposition& spectrum, std::span<const int> selected) {
  const auto n = spectrum.eigenvectors.cols();
  if (selected.empty()) throw Error(ErrorCode::invalid_argument, "no eigenvectors selected");
  Embedding out;
  out.coords.resize(spectrum.eigenvectors.rows(), static_cast<Eigen::Index>(selected.size()));
  out.eigenvalues.resize(static_cast<Eigen::Index>(selected.size()));
  for (std::size_t j = 0; j < selected.size(); ++j) {
    const int rank = selected[j];
    if (rank < 1 || rank > n - 1) {
      throw Error(ErrorCode::out_of_range,
                  fmt::format("eigenvector {} is out of range; valid ranks are 1..{}", rank, n - 1));
    }
    if (std::find(selected.begin(), selected.begin() + static_cast<std::ptrdiff_t>(j), rank) !=
        selected.begin() + static_cast<std::ptrdiff_t>(j)) {
      throw Error(ErrorCode::invalid_argument, fmt::format("eigenvector {} selected twice", rank));
    }
    out.coords.col(static_cast<Eigen::Index>(j)) = spectrum.eigenvectors.col(rank);
    out.eigenvalues(static_cast<Eigen::Index>(j)) = spectrum.eigenvalues(rank);
  }
  out.selected.assign(selected.begin(), selected.end());
  return out;
}

Embedding embed(const MeasurementMatrix& distances, std::span<const int> selected) {
  return embed(diffusion_spectrum(distances), selected);
}

std::vector<int> leading_ranks(int k) {
  std::vector<int> ranks(static_cast<std::size_t>(std::max(k, 0)));
  for (int i = 0; i < k; ++i) ranks[static_cast<std::size_t>(i)] = i + 1;
  return ranks;
}

EigenvectorSelection select_eigenvectors(const Embedding& candidates, int dimension,
                                         double resolution) {
  const Eigen::Index m = candidates.size();
  const int kmax = static_cast<int>(candidates.dimension());
  if (dimension < 1 || dimension > kmax) {
    throw Error(ErrorCode::invalid_argument,
                fmt::format("need at least {} candidate eigenvectors, got {}", dimension, kmax));
  }
  if (candidates.selected != leading_ranks(kmax)) {
    throw Error(ErrorCode::invalid_argument, "candidates must hold eigenvectors 1..kmax in order");
  }
  if (!(resolution > 0.0)) throw Error(ErrorCode::invalid_argument, "resolution must be positive");

  // typical spacing: median nearest-neighbor distance over all candidates,
  // ignoring points the candidates cannot separate at all
  const Eigen::MatrixXd full = kernels::pairwise_distances(candidates.coords);
  const double coincident = 1e-9 * full.maxCoeff();
  std::vector<double> nearest(static_cast<std::size_t>(m), std::numeric_limits<double>::infinity());
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) {
      if (i != j && full(i, j) > coincident) {
        nearest[static_cast<std::size_t>(i)] = std::min(nearest[static_cast<std::size_t>(i)], full(i, j));
      }
    }
  }
  auto mid = nearest.begin() + static_cast<std::ptrdiff_t>(nearest.size() / 2);
  std::nth_element(nearest.begin(), mid, nearest.end());
  const double limit = resolution * *mid;

  EigenvectorSelection best;
  std::size_t best_count = std::numeric_limits<std::size_t>::max();
  for (int k = dimension; k <= kmax; ++k) {
    const Eigen::MatrixXd sub = kernels::pairwise_distances(candidates.coords.leftCols(k));
    std::vector<std::pair<std::size_t, std::size_t>> collisions;
    for (Eigen::Index i = 0; i < m; ++i) {
      for (Eigen::Index j = i + 1; j < m; ++j) {
        if (sub(i, j) <= limit) {
          collisions.emplace_back(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
        }
      }
    }
    if (collisions.size() < best_count) {
      best_count = collisions.size();
      best.selected = leading_ranks(k);
      best.unresolved_pairs = std::move(collisions);
      best.resolved = best_count == 0;
      if (best.resolved) break;
    }
  }
  if (!best.resolved) {
    logger()->warn("{} position pairs remain unresolved with eigenvectors 1..{}",
                   best.unresolved_pairs.size(), best.selected.size());
  }
  return best;
}

void write_spectrum_csv(const SpectralDecomposition& spectrum, std::ostream& out,
                        std::size_t count) {
  const auto n = spectrum.eigenvectors.cols();
  const Eigen::Index cols =
      count == 0 ? n : std::min<Eigen::Index>(n, static_cast<Eigen::Index>(count));
  for (Eigen::Index k = 0; k < cols; ++k) {
    out << (k ? "," : "") << fmt::format("{}", spectrum.eigenvalues(k));
  }
  out << '\n';
  for (Eigen::Index i = 0; i < spectrum.eigenvectors.rows(); ++i) {
    for (Eigen::Index k = 0; k < cols; ++k) {
      out << (k ? "," : "") << fmt::format("{}", spectrum.eigenvectors(i, k));
    }
    out << '\n';
  }
}

}  // namespace wlmp
