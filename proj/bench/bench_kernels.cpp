// Parallel vs serial kernels, plus the two O(M³) stages of the pipeline.

#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "wlmp/embedding.hpp"
#include "wlmp/geometry.hpp"
#include "wlmp/kernels.hpp"
#include "wlmp/matching.hpp"

using namespace wlmp;

namespace {

Eigen::MatrixXd points(Eigen::Index m, Eigen::Index d = 2) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Eigen::MatrixXd p(m, d);
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = 0; j < d; ++j) p(i, j) = u(rng);
  return p;
}

template <Eigen::MatrixXd (*Fn)(const Eigen::MatrixXd&)>
void BM_PairwiseDistances(benchmark::State& state) {
  const Eigen::MatrixXd p = points(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(Fn(p));
}

template <Eigen::MatrixXd (*Fn)(const Eigen::MatrixXd&, double)>
void BM_GaussianSimilarity(benchmark::State& state) {
  const Eigen::MatrixXd d = kernels::serial::pairwise_distances(points(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(Fn(d, 0.2));
}

template <Eigen::MatrixXd (*Fn)(const Eigen::MatrixXd&, const Eigen::MatrixXd&, std::span<const int>)>
void BM_EmbeddedDistances(benchmark::State& state) {
  const Eigen::MatrixXd n = points(state.range(0), 3);
  const Eigen::MatrixXd p = n.reverse();
  const std::vector<int> signs{1, -1, 1};
  for (auto _ : state) benchmark::DoNotOptimize(Fn(n, p, signs));
}

void BM_Spectrum(benchmark::State& state) {
  const MeasurementMatrix d(kernels::serial::pairwise_distances(points(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(diffusion_spectrum(d));
}

void BM_Hungarian(benchmark::State& state) {
  const Eigen::MatrixXd n = points(state.range(0));
  const std::vector<int> signs{1, 1};
  const CostMatrix c(kernels::serial::embedded_distances(n, points(state.range(0)).reverse(), signs));
  for (auto _ : state) benchmark::DoNotOptimize(hungarian(c));
}

}  // namespace

BENCHMARK_TEMPLATE(BM_PairwiseDistances, kernels::pairwise_distances)->Arg(500)->Arg(2000);
BENCHMARK_TEMPLATE(BM_PairwiseDistances, kernels::serial::pairwise_distances)->Arg(500)->Arg(2000);
BENCHMARK_TEMPLATE(BM_GaussianSimilarity, kernels::gaussian_similarity)->Arg(500)->Arg(2000);
BENCHMARK_TEMPLATE(BM_GaussianSimilarity, kernels::serial::gaussian_similarity)->Arg(500)->Arg(2000);
BENCHMARK_TEMPLATE(BM_EmbeddedDistances, kernels::embedded_distances)->Arg(500)->Arg(2000);
BENCHMARK_TEMPLATE(BM_EmbeddedDistances, kernels::serial::embedded_distances)->Arg(500)->Arg(2000);
BENCHMARK(BM_Spectrum)->Arg(100)->Arg(500)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Hungarian)->Arg(100)->Arg(500)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
