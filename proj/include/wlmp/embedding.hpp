#pragma once

#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "wlmp/measurement.hpp"

namespace wlmp {

/// Eigenpairs of the random-walk Laplacian L = I − D⁻¹C, eigenvalues
/// ascending. Column k of `eigenvectors` is the unit-norm right eigenvector
/// for eigenvalues[k], signed so its largest-magnitude entry is positive.
struct SpectralDecomposition {
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXd eigenvectors;
  /// Set when the second-smallest eigenvalue is also numerically zero.
  bool near_disconnected = false;
};

/// Diffusion coordinates: row i holds the coordinates of node/position i.
struct Embedding {
  Eigen::MatrixXd coords;
  /// 1-based ranks among the non-trivial eigenvectors (1 = smallest non-zero
  /// eigenvalue), one per column of `coords`.
  std::vector<int> selected;
  /// Eigenvalue of each selected column.
  Eigen::VectorXd eigenvalues;

  Eigen::Index size() const noexcept { return coords.rows(); }
  Eigen::Index dimension() const noexcept { return coords.cols(); }
};

/// σ² = (1/M²) Σᵢⱼ Dᵢⱼ², diagonal included. Throws degenerate_input when 0.
double kernel_bandwidth(const MeasurementMatrix& distances);

/// Cᵢⱼ = exp(−Dᵢⱼ²/σ²) for i ≠ j, Cᵢᵢ = 0.
SimilarityMatrix similarity(const MeasurementMatrix& distances, double sigma2);

/// The random-walk Laplacian as an explicit matrix; used for residual checks.
Eigen::MatrixXd random_walk_laplacian(const SimilarityMatrix& similarity);

/// Full eigendecomposition of the random-walk Laplacian, computed through
/// the symmetric conjugate I − D^{-1/2} C D^{-1/2}. Throws disconnected when
/// some node has zero degree.
SpectralDecomposition normalized_laplacian(const SimilarityMatrix& similarity);

/// Kernel, Laplacian and eigendecomposition in one go.
SpectralDecomposition diffusion_spectrum(const MeasurementMatrix& distances);

/// Picks eigenvectors by rank (1-based, trivial eigenvector excluded).
/// Throws out_of_range for ranks outside [1, M−1].
Embedding embed(const SpectralDecomposition& spectrum, std::span<const int> selected);
Embedding embed(const MeasurementMatrix& distances, std::span<const int> selected);

/// Ranks 1..k.
std::vector<int> leading_ranks(int k);

struct EigenvectorSelection {
  std::vector<int> selected;
  bool resolved = false;
  /// Position pairs that still collide under `selected`.
  std::vector<std::pair<std::size_t, std::size_t>> unresolved_pairs;
};

/// Chooses the eigenvectors that resolve every position of a blueprint.
/// `candidates` must hold ranks 1..kmax in order. Tries {1..d}, {1..d+1},
/// ... {1..kmax}; a pair collides under a prefix when its distance there is
/// at most resolution × s, with s the median nearest-neighbor distance over
/// all kmax candidates. Returns the first collision-free prefix, or the
/// shortest prefix with the fewest collisions together with those collisions.
EigenvectorSelection select_eigenvectors(const Embedding& candidates, int dimension,
                                         double resolution = 0.1);

/// Debug dump: one column per eigenvector, first row eigenvalues, then one
/// row per node. `count` limits the number of leading eigenvectors (0 = all).
void write_spectrum_csv(const SpectralDecomposition& spectrum, std::ostream& out,
                        std::size_t count = 0);

}  // namespace wlmp
