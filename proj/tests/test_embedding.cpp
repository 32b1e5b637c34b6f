#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include <Eigen/Eigenvalues>
#include <gtest/gtest.h>

#include "test_util.hpp"
#include "wlmp/embedding.hpp"
#include "wlmp/geometry.hpp"

using namespace wlmp;

namespace {

MeasurementMatrix unit_pair() {
  Eigen::MatrixXd d(2, 2);
  d << 0, 1, 1, 0;
  return MeasurementMatrix(d);
}

// Eigenvalues of the random-walk Laplacian through the general
// (non-symmetric) eigensolver, sorted ascending.
std::vector<double> oracle_eigenvalues(const SimilarityMatrix& c) {
  const Eigen::VectorXd degree = c.entries().rowwise().sum();
  const Eigen::MatrixXd l =
      Eigen::MatrixXd::Identity(c.size(), c.size()) - degree.cwiseInverse().asDiagonal() * c.entries();
  Eigen::EigenSolver<Eigen::MatrixXd> solver(l);
  std::vector<double> out;
  for (Eigen::Index i = 0; i < l.rows(); ++i) {
    EXPECT_NEAR(solver.eigenvalues()(i).imag(), 0.0, 1e-10);
    out.push_back(solver.eigenvalues()(i).real());
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST(Kernel, BandwidthAndSimilarityOfTwoNodes) {
  const MeasurementMatrix d = unit_pair();
  EXPECT_DOUBLE_EQ(kernel_bandwidth(d), 0.5);
  const SimilarityMatrix c = similarity(d, 0.5);
  EXPECT_DOUBLE_EQ(c.entries()(0, 1), std::exp(-2.0));
  EXPECT_EQ(c.entries()(1, 1), 0.0);
  EXPECT_WLMP_ERROR(kernel_bandwidth(MeasurementMatrix(Eigen::MatrixXd::Zero(3, 3))), ErrorCode::degenerate_input);
}

TEST(Laplacian, CompleteGraphOnThreeNodes) {
  Eigen::MatrixXd d = Eigen::MatrixXd::Ones(3, 3);
  d.diagonal().setZero();
  const SpectralDecomposition s = diffusion_spectrum(MeasurementMatrix(d));
  EXPECT_NEAR(s.eigenvalues(0), 0.0, 1e-12);
  EXPECT_NEAR(s.eigenvalues(1), 1.5, 1e-12);
  EXPECT_NEAR(s.eigenvalues(2), 1.5, 1e-12);
  // trivial eigenvector is constant
  EXPECT_NEAR(s.eigenvectors.col(0).maxCoeff() - s.eigenvectors.col(0).minCoeff(), 0.0, 1e-12);
}

TEST(Laplacian, MatchesGeneralEigensolverOnLayouts) {
  for (LayoutKind kind : all_layout_kinds()) {
    const MeasurementMatrix d = pairwise_distances(generate_layout(kind));
    const SimilarityMatrix c = similarity(d, kernel_bandwidth(d));
    const SpectralDecomposition s = normalized_laplacian(c);
    const std::vector<double> expected = oracle_eigenvalues(c);
    const Eigen::MatrixXd l = random_walk_laplacian(c);
    for (Eigen::Index k = 0; k < s.eigenvalues.size(); ++k) {
      EXPECT_NEAR(s.eigenvalues(k), expected[static_cast<std::size_t>(k)], 1e-9) << to_string(kind) << " k=" << k;
      const Eigen::VectorXd v = s.eigenvectors.col(k);
      EXPECT_NEAR(v.norm(), 1.0, 1e-12);
      EXPECT_LE((l * v - s.eigenvalues(k) * v).norm(), 1e-9);
    }
    EXPECT_FALSE(s.near_disconnected);
  }
}

TEST(Laplacian, ZeroDegreeNodeIsDisconnected) {
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(3, 3);
  c(0, 1) = c(1, 0) = 0.5;
  EXPECT_WLMP_ERROR(normalized_laplacian(SimilarityMatrix(c)), ErrorCode::disconnected);
}

TEST(Laplacian, WeaklyLinkedBlocksAreNearlyDisconnected) {
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(4, 4);
  c(0, 1) = c(1, 0) = 1.0;
  c(2, 3) = c(3, 2) = 1.0;
  c(1, 2) = c(2, 1) = 1e-14;
  const SpectralDecomposition s = normalized_laplacian(SimilarityMatrix(c));
  EXPECT_TRUE(s.near_disconnected);
  EXPECT_NEAR(s.eigenvalues(1), 0.0, 1e-12);
}

TEST(Embed, LargestEntryIsPositive) {
  const SpectralDecomposition s = diffusion_spectrum(pairwise_distances(generate_layout(LayoutKind::random2d)));
  for (Eigen::Index k = 0; k < s.eigenvectors.cols(); ++k) {
    Eigen::Index arg = 0;
    s.eigenvectors.col(k).cwiseAbs().maxCoeff(&arg);
    EXPECT_GT(s.eigenvectors(arg, k), 0.0);
  }
}

TEST(Embed, SelectsRanksAndValidates) {
  const MeasurementMatrix d = pairwise_distances(generate_layout(LayoutKind::grid2d));
  const SpectralDecomposition s = diffusion_spectrum(d);
  const std::vector<int> ranks{1, 4};
  const Embedding e = embed(s, ranks);
  EXPECT_EQ(e.dimension(), 2);
  EXPECT_EQ(e.coords.col(1), s.eigenvectors.col(4));
  EXPECT_DOUBLE_EQ(e.eigenvalues(0), s.eigenvalues(1));
  const std::vector<int> zero{0}, too_big{80}, twice{2, 2};
  EXPECT_WLMP_ERROR(embed(s, zero), ErrorCode::out_of_range);
  EXPECT_WLMP_ERROR(embed(s, too_big), ErrorCode::out_of_range);
  EXPECT_WLMP_ERROR(embed(s, twice), ErrorCode::invalid_argument);
  EXPECT_EQ(leading_ranks(3), (std::vector<int>{1, 2, 3}));
}

TEST(Embed, InvariantToDistanceScale) {
  const MeasurementMatrix d = pairwise_distances(generate_layout(LayoutKind::factory));
  const std::vector<int> ranks = leading_ranks(4);
  const Embedding base = embed(d, ranks);
  for (double factor : {1e-6, 0.01, 42.0, 1e6}) {
    EXPECT_LT((embed(MeasurementMatrix(d.entries() * factor), ranks).coords - base.coords).cwiseAbs().maxCoeff(),
              1e-10)
        << factor;
  }
}

TEST(Embed, GridEigenvectorsFollowTheAxes) {
  // eigenvector 1 tracks the long axis, eigenvector 2 the short one
  const PositionSet grid = generate_layout(LayoutKind::grid2d);
  const Embedding e = embed(pairwise_distances(grid), leading_ranks(2));
  auto correlation = [](const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    const Eigen::VectorXd x = a.array() - a.mean();
    const Eigen::VectorXd y = b.array() - b.mean();
    return x.dot(y) / (x.norm() * y.norm());
  };
  EXPECT_GT(std::abs(correlation(e.coords.col(0), grid.coords().col(0))), 0.95);
  EXPECT_GT(std::abs(correlation(e.coords.col(1), grid.coords().col(1))), 0.95);
  EXPECT_LT(std::abs(correlation(e.coords.col(0), grid.coords().col(1))), 1e-8);
}

TEST(Selection, StripNeedsTheCrossStripEigenvector) {
  const PositionSet strip = generate_layout(LayoutKind::strip);
  const Embedding candidates = embed(pairwise_distances(strip), leading_ranks(8));
  const EigenvectorSelection choice = select_eigenvectors(candidates, 2);
  EXPECT_TRUE(choice.resolved);
  EXPECT_EQ(choice.selected, (std::vector<int>{1, 2, 3, 4}));

  // independent check of the collision rule for the chosen prefix
  const Eigen::Index m = candidates.size();
  const Eigen::Index k = static_cast<Eigen::Index>(choice.selected.size());
  std::vector<double> nearest;
  for (Eigen::Index i = 0; i < m; ++i) {
    double best = INFINITY;
    for (Eigen::Index j = 0; j < m; ++j)
      if (i != j) best = std::min(best, (candidates.coords.row(i) - candidates.coords.row(j)).norm());
    nearest.push_back(best);
  }
  std::sort(nearest.begin(), nearest.end());
  const double typical = nearest[nearest.size() / 2];
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = i + 1; j < m; ++j) {
      const double full = (candidates.coords.row(i) - candidates.coords.row(j)).norm();
      const double prefix = (candidates.coords.row(i).head(k) - candidates.coords.row(j).head(k)).norm();
      EXPECT_GT(prefix, 0.1 * std::min(typical, full)) << i << "," << j;
    }
  }

}

TEST(Selection, ReportsPairsNoCandidateSeparates) {
  // a grid plus a point almost on top of grid point 0
  const PositionSet grid = generate_layout(LayoutKind::grid2d, {20});
  Eigen::MatrixXd coords(21, 2);
  coords.topRows(20) = grid.coords();
  coords.row(20) = grid.coords().row(0) + Eigen::RowVector2d(1e-5, 0.0);
  std::vector<std::string> labels = grid.labels();
  labels.push_back("twin");
  const Embedding candidates = embed(pairwise_distances(PositionSet(labels, coords)), leading_ranks(6));
  const EigenvectorSelection choice = select_eigenvectors(candidates, 2);
  EXPECT_FALSE(choice.resolved);
  ASSERT_EQ(choice.unresolved_pairs.size(), 1u);
  EXPECT_EQ(choice.unresolved_pairs[0], (std::pair<std::size_t, std::size_t>{0, 20}));
}

TEST(Selection, TwoDimensionalGridUsesTwo) {
  const Embedding candidates = embed(pairwise_distances(generate_layout(LayoutKind::grid2d)), leading_ranks(8));
  EXPECT_EQ(select_eigenvectors(candidates, 2).selected, (std::vector<int>{1, 2}));
  const std::vector<int> gap{1, 3};
  EXPECT_WLMP_ERROR(select_eigenvectors(embed(pairwise_distances(generate_layout(LayoutKind::grid2d)), gap), 2),
                    ErrorCode::invalid_argument);
}

TEST(Selection, ThreeDimensionalGridUsesThree) {
  const Embedding candidates = embed(pairwise_distances(generate_layout(LayoutKind::grid3d)), leading_ranks(8));
  EXPECT_EQ(select_eigenvectors(candidates, 3).selected, (std::vector<int>{1, 2, 3}));
}

TEST(SpectrumCsv, WritesEigenvaluesThenRows) {
  Eigen::MatrixXd d = Eigen::MatrixXd::Ones(3, 3);
  d.diagonal().setZero();
  std::ostringstream out;
  write_spectrum_csv(diffusion_spectrum(MeasurementMatrix(d)), out, 2);
  std::istringstream in(out.str());
  std::string line;
  int rows = 0;
  while (std::getline(in, line)) {
    EXPECT_EQ(std::count(line.begin(), line.end(), ','), 1) << line;
    ++rows;
  }
  EXPECT_EQ(rows, 4);
}
