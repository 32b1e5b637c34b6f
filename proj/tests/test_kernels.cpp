#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>
#include <omp.h>

#include "wlmp/kernels.hpp"

using namespace wlmp;

namespace {

Eigen::MatrixXd random_points(Eigen::Index m, Eigen::Index d, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::MatrixXd p(m, d);
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = 0; j < d; ++j) p(i, j) = u(rng);
  return p;
}

class ThreadCount : public ::testing::TestWithParam<int> {
 protected:
  void SetUp() override {
    saved_ = omp_get_max_threads();
    omp_set_num_threads(GetParam());
  }
  void TearDown() override { omp_set_num_threads(saved_); }

 private:
  int saved_ = 1;
};

}  // namespace

TEST(Kernels, PairwiseDistancesByHand) {
  Eigen::MatrixXd p(3, 2);
  p << 0, 0, 3, 4, 6, 8;
  const Eigen::MatrixXd d = kernels::pairwise_distances(p);
  EXPECT_DOUBLE_EQ(d(0, 1), 5.0);
  EXPECT_DOUBLE_EQ(d(0, 2), 10.0);
  EXPECT_DOUBLE_EQ(d(2, 1), 5.0);
  EXPECT_EQ(d(1, 1), 0.0);
}

TEST(Kernels, MeanSquareAndGaussian) {
  Eigen::MatrixXd d(2, 2);
  d << 0, 1, 1, 0;
  EXPECT_DOUBLE_EQ(kernels::mean_square(d), 0.5);
  const Eigen::MatrixXd c = kernels::gaussian_similarity(d, 0.5);
  EXPECT_DOUBLE_EQ(c(0, 1), std::exp(-2.0));
  EXPECT_EQ(c(0, 0), 0.0);
}

TEST(Kernels, EmbeddedDistancesApplySigns) {
  Eigen::MatrixXd n(1, 2), p(1, 2);
  n << 1, 2;
  p << -1, 2;
  const std::vector<int> flip{-1, 1};
  const std::vector<int> keep{1, 1};
  EXPECT_DOUBLE_EQ(kernels::embedded_distances(n, p, flip)(0, 0), 0.0);
  EXPECT_DOUBLE_EQ(kernels::embedded_distances(n, p, keep)(0, 0), 2.0);
}

TEST_P(ThreadCount, ParallelMatchesSerialExactly) {
  const Eigen::MatrixXd pts = random_points(157, 3, 11);
  const Eigen::MatrixXd d = kernels::pairwise_distances(pts);
  EXPECT_EQ(d, kernels::serial::pairwise_distances(pts));
  EXPECT_EQ(kernels::mean_square(d), kernels::serial::mean_square(d));
  EXPECT_EQ(kernels::gaussian_similarity(d, 0.3), kernels::serial::gaussian_similarity(d, 0.3));

  const Eigen::MatrixXd other = random_points(157, 3, 12);
  const std::vector<int> signs{1, -1, -1};
  EXPECT_EQ(kernels::embedded_distances(pts, other, signs), kernels::serial::embedded_distances(pts, other, signs));
}

INSTANTIATE_TEST_SUITE_P(Threads, ThreadCount, ::testing::Values(1, 2, 3, 8));
