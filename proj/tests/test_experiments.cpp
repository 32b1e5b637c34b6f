#include <cmath>
#include <set>

#include <gtest/gtest.h>

#include "test_util.hpp"
#include "wlmp/experiments.hpp"

using namespace wlmp;

TEST(Accuracy, CountsCorrectPairs) {
  Assignment a;
  a.pairs = {0, 2, 1, 3};
  EXPECT_DOUBLE_EQ(accuracy(a, GroundTruth::identity(4)), 0.5);
  EXPECT_DOUBLE_EQ(accuracy(a, GroundTruth({0, 2, 1, 3})), 1.0);
  EXPECT_WLMP_ERROR(accuracy(a, GroundTruth::identity(3)), ErrorCode::size_mismatch);
}

TEST(Seeds, DistinctAndStable) {
  std::set<std::uint64_t> seen;
  for (std::uint64_t s = 0; s < 20; ++s)
    for (std::uint64_t r = 0; r < 100; ++r) seen.insert(derive_seed(1, s, r));
  EXPECT_EQ(seen.size(), 2000u);
  EXPECT_EQ(derive_seed(7, 3, 4), derive_seed(7, 3, 4));
  EXPECT_NE(derive_seed(7, 3, 4), derive_seed(8, 3, 4));
  EXPECT_NE(derive_seed(7, 3, 4), derive_seed(7, 4, 3));
}

TEST(LogGrid, EndpointsAndConstantRatio) {
  const std::vector<double> g = log_grid();
  ASSERT_EQ(g.size(), 20u);
  EXPECT_DOUBLE_EQ(g.front(), 1.0);
  EXPECT_NEAR(g.back(), 100.0, 1e-12);
  for (std::size_t i = 1; i < g.size(); ++i) EXPECT_NEAR(g[i] / g[i - 1], std::pow(100.0, 1.0 / 19.0), 1e-12);
  EXPECT_WLMP_ERROR(log_grid(0.0, 1.0, 3), ErrorCode::invalid_argument);
}

TEST(ConfidenceInterval, NormalApproximationClippedToUnitRange) {
  const std::vector<double> mixed{0.9, 1.0, 0.8, 1.0, 0.95};
  double mean = 0.0;
  for (double x : mixed) mean += x / 5.0;
  double ss = 0.0;
  for (double x : mixed) ss += (x - mean) * (x - mean);
  const double expected = 2.576 * std::sqrt(ss / 4.0) / std::sqrt(5.0);
  EXPECT_NEAR(ci_half_width(mixed, mean), std::min(expected, 1.0 - mean), 1e-12);
  EXPECT_DOUBLE_EQ(ci_half_width({0.0, 1.0, 0.0, 1.0}, 0.5), 0.5);
  EXPECT_DOUBLE_EQ(ci_half_width({1.0, 1.0, 1.0}, 1.0), 0.0);
}

TEST(Spearman, AgreesWithReferenceValues) {
  EXPECT_DOUBLE_EQ(spearman({1, 2, 3, 4}, {10, 20, 30, 40}), 1.0);
  EXPECT_DOUBLE_EQ(spearman({1, 2, 3, 4}, {4, 3, 2, 1}), -1.0);
  // reference values from an independent statistics package
  EXPECT_NEAR(spearman({1, 2, 3, 4, 5}, {1, 2, 2, 3, 5}), 0.9746794344808964, 1e-12);
  EXPECT_NEAR(spearman({3, 1, 2, 5, 4, 6}, {1, 1, 1, 2, 2, 9}), 0.9258200997725515, 1e-12);
  EXPECT_DOUBLE_EQ(spearman({1, 2, 3}, {5, 5, 5}), 0.0);
  EXPECT_WLMP_ERROR(spearman({1, 2}, {1, 2, 3}), ErrorCode::size_mismatch);
}

TEST(Trial, NoiselessRunsAreExact) {
  const PositionSet grid = generate_layout(LayoutKind::grid2d, {20});
  const GroundTruth truth(test::random_permutation(20, 5));
  for (Alignment alignment : {Alignment::anchor, Alignment::orientation_search}) {
    TrialConfig config{grid, truth};
    config.alignment = alignment;
    config.snr = std::numeric_limits<double>::infinity();
    config.eigenvectors = std::vector<int>{1, 2};
    const TrialResult r = run_trial(config);
    EXPECT_DOUBLE_EQ(r.accuracy, 1.0) << to_string(alignment);
    EXPECT_EQ(r.assignment.pairs, truth.permutation());
  }
}

TEST(Trial, RejectsMismatchedTruth) {
  TrialConfig config{generate_layout(LayoutKind::grid2d, {20}), GroundTruth::identity(19)};
  EXPECT_WLMP_ERROR(run_trial(config), ErrorCode::size_mismatch);
}

TEST(Blueprint, SymmetricLayoutsRecordTheirSymmetries) {
  const Blueprint grid = prepare_blueprint(generate_layout(LayoutKind::grid2d), std::nullopt);
  EXPECT_EQ(grid.embedding.selected, (std::vector<int>{1, 2}));
  EXPECT_EQ(grid.symmetries.size(), 4u);
  EXPECT_TRUE(grid.resolved);
  const Blueprint factory = prepare_blueprint(generate_layout(LayoutKind::factory), std::vector<int>{1, 2});
  EXPECT_EQ(factory.symmetries.size(), 1u);
}

TEST(Sweep, ParallelMatchesSerialAndIsSeeded) {
  const SweepConfig config = sweep_config(CurveRecipe{"grid", LayoutKind::grid2d, {20}, std::vector<int>{1, 2}});
  const std::vector<double> grid{2.0, 8.0};
  const SweepResult serial = run_sweep_serial(config, grid, 6, 42);
  for (int jobs : {1, 3}) {
    const SweepResult parallel = run_sweep(config, grid, 6, 42, jobs);
    ASSERT_EQ(parallel.points.size(), 2u);
    for (std::size_t s = 0; s < 2; ++s) {
      EXPECT_EQ(parallel.points[s].mean, serial.points[s].mean);
      EXPECT_EQ(parallel.points[s].ci_half_width, serial.points[s].ci_half_width);
      for (std::size_t r = 0; r < 6; ++r) {
        EXPECT_EQ(parallel.points[s].trials[r].seed, derive_seed(42, s, r));
        EXPECT_EQ(parallel.points[s].trials[r].accuracy, serial.points[s].trials[r].accuracy);
        EXPECT_EQ(parallel.points[s].trials[r].total_cost, serial.points[s].trials[r].total_cost);
      }
    }
  }
  EXPECT_EQ(serial.eigenvectors, (std::vector<int>{1, 2}));
  EXPECT_WLMP_ERROR(run_sweep(config, grid, 1, 42), ErrorCode::invalid_argument);
  EXPECT_WLMP_ERROR(run_sweep(config, {}, 4, 42), ErrorCode::invalid_argument);
}

TEST(Sweep, AccuracyRisesWithSnr) {
  const SweepConfig config = sweep_config(CurveRecipe{"factory", LayoutKind::factory, {}, std::vector<int>{1, 2}});
  const SweepResult r = run_sweep(config, {1.0, 100.0}, 10, 3);
  EXPECT_LT(r.points[0].mean, r.points[1].mean);
  EXPECT_DOUBLE_EQ(r.points[1].mean, 1.0);
}

TEST(Presets, FiguresHaveTheExpectedCurves) {
  EXPECT_EQ(figure_names(), (std::vector<std::string>{"fig1", "fig2", "fig3", "fig4", "fig5"}));
  const FigureRecipe fig3 = figure_recipe("fig3");
  ASSERT_EQ(fig3.curves.size(), 3u);
  EXPECT_EQ(fig3.curves[1].eigenvectors, (std::vector<int>{1, 4}));
  EXPECT_EQ(fig3.realizations, 100u);
  EXPECT_EQ(fig3.snr_grid, log_grid());
  const FigureRecipe fig4 = figure_recipe("fig4");
  ASSERT_EQ(fig4.curves.size(), 4u);
  EXPECT_DOUBLE_EQ(fig4.curves[2].params.shift, 0.5);
  EXPECT_EQ(figure_recipe("fig5").curves[1].kind, LayoutKind::random3d);
  EXPECT_WLMP_ERROR(figure_recipe("fig6"), ErrorCode::invalid_argument);
}
