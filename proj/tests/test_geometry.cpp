#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "test_util.hpp"
#include "wlmp/geometry.hpp"

using namespace wlmp;

namespace {

PositionSet triangle() {
  Eigen::MatrixXd c(3, 2);
  c << 0, 0, 3, 0, 0, 4;
  return PositionSet({"a", "b", "c"}, c);
}

// Minimum pairwise distance by direct double loop.
double min_spacing(const PositionSet& p) {
  double best = INFINITY;
  for (Eigen::Index i = 0; i < p.coords().rows(); ++i)
    for (Eigen::Index j = i + 1; j < p.coords().rows(); ++j)
      best = std::min(best, (p.coords().row(i) - p.coords().row(j)).norm());
  return best;
}

}  // namespace

TEST(PositionSet, RejectsInvalidInput) {
  Eigen::MatrixXd two(2, 2);
  two << 0, 0, 1, 1;
  EXPECT_WLMP_ERROR(PositionSet({"a"}, two), ErrorCode::shape_mismatch);
  EXPECT_WLMP_ERROR(PositionSet({"a"}, Eigen::MatrixXd::Zero(1, 2)), ErrorCode::invalid_argument);
  EXPECT_WLMP_ERROR(PositionSet({"a", "b"}, Eigen::MatrixXd::Zero(2, 4)), ErrorCode::invalid_argument);
  EXPECT_WLMP_ERROR(PositionSet({"a", "a"}, two), ErrorCode::invalid_argument);
  two(1, 1) = NAN;
  EXPECT_WLMP_ERROR(PositionSet({"a", "b"}, two), ErrorCode::invalid_argument);
}

TEST(PositionSet, FindsLabels) {
  const PositionSet p = triangle();
  EXPECT_EQ(p.find("b"), 1u);
  EXPECT_FALSE(p.find("z").has_value());
  EXPECT_EQ(p.dimension(), 2);
}

TEST(PairwiseDistances, MatchesHandComputedTriangle) {
  const MeasurementMatrix d = pairwise_distances(triangle());
  EXPECT_DOUBLE_EQ(d(0, 1), 3.0);
  EXPECT_DOUBLE_EQ(d(0, 2), 4.0);
  EXPECT_DOUBLE_EQ(d(1, 2), 5.0);
  EXPECT_DOUBLE_EQ(d(2, 1), 5.0);
  EXPECT_EQ(d(1, 1), 0.0);
}

TEST(GroundTruth, InverseAndValidation) {
  const GroundTruth t({2, 0, 1});
  EXPECT_EQ(t.position_of(0), 2u);
  EXPECT_EQ(t.node_at(2), 0u);
  EXPECT_EQ(t.node_at(1), 2u);
  EXPECT_WLMP_ERROR(GroundTruth({0, 0, 1}), ErrorCode::invalid_argument);
  EXPECT_WLMP_ERROR(GroundTruth({0, 3, 1}), ErrorCode::invalid_argument);
  EXPECT_EQ(GroundTruth::identity(4).position_of(3), 3u);
}

TEST(Layouts, DefaultCountsAndUnitExtent) {
  for (LayoutKind kind : all_layout_kinds()) {
    const PositionSet p = generate_layout(kind);
    EXPECT_EQ(p.size(), default_count(kind)) << to_string(kind);
    const Eigen::VectorXd extent = p.coords().colwise().maxCoeff() - p.coords().colwise().minCoeff();
    EXPECT_LE(extent.maxCoeff(), 1.0 + 1e-12) << to_string(kind);
    EXPECT_GT(min_spacing(p), 0.0) << to_string(kind);
    EXPECT_EQ(parse_layout_kind(to_string(kind)), kind);
  }
  EXPECT_EQ(default_count(LayoutKind::factory), 58u);
  EXPECT_EQ(default_count(LayoutKind::strip), 40u);
  EXPECT_EQ(default_count(LayoutKind::grid3d), 120u);
  EXPECT_WLMP_ERROR(parse_layout_kind("hexagon"), ErrorCode::invalid_argument);
}

TEST(Layouts, GridsAreRegularLattices) {
  const PositionSet g = generate_layout(LayoutKind::grid2d);
  std::set<double> xs, ys;
  for (Eigen::Index i = 0; i < g.coords().rows(); ++i) {
    xs.insert(g.coords()(i, 0));
    ys.insert(g.coords()(i, 1));
  }
  EXPECT_EQ(xs.size() * ys.size(), 80u);
  EXPECT_NEAR(min_spacing(g), 1.0 / (static_cast<double>(std::max(xs.size(), ys.size())) - 1), 1e-12);

  const PositionSet g3 = generate_layout(LayoutKind::grid3d);
  EXPECT_EQ(g3.dimension(), 3);
  std::set<double> zs;
  for (Eigen::Index i = 0; i < g3.coords().rows(); ++i) zs.insert(g3.coords()(i, 2));
  EXPECT_GE(zs.size(), 2u);
}

TEST(Layouts, StripShiftMovesOnlyTheSecondRow) {
  const PositionSet a = generate_layout(LayoutKind::strip, {std::nullopt, 0.0});
  const PositionSet b = generate_layout(LayoutKind::strip, {std::nullopt, 0.5});
  const double spacing = 1.0 / 19.0;
  for (Eigen::Index i = 0; i < 20; ++i) {
    EXPECT_EQ(a.coords().row(i), b.coords().row(i));
    EXPECT_NEAR(b.coords()(20 + i, 0) - a.coords()(20 + i, 0), 0.5 * spacing, 1e-12);
  }
  EXPECT_WLMP_ERROR(generate_layout(LayoutKind::strip, {7, 0.0}), ErrorCode::invalid_argument);
}

TEST(Layouts, BiaxialPointsLieOnTheAxes) {
  for (LayoutKind kind : {LayoutKind::biaxial_uniform, LayoutKind::biaxial_random}) {
    const PositionSet p = generate_layout(kind);
    for (Eigen::Index i = 0; i < p.coords().rows(); ++i) {
      EXPECT_EQ(p.coords()(i, 0) * p.coords()(i, 1), 0.0) << to_string(kind) << " row " << i;
    }
  }
}

TEST(Layouts, RandomLayoutsAreSeeded) {
  const PositionSet a = generate_layout(LayoutKind::random2d, {}, 7);
  const PositionSet b = generate_layout(LayoutKind::random2d, {}, 7);
  const PositionSet c = generate_layout(LayoutKind::random2d, {}, 8);
  EXPECT_TRUE(a == b);
  EXPECT_FALSE(a == c);
  EXPECT_WLMP_ERROR(generate_layout(LayoutKind::factory, {57}), ErrorCode::invalid_argument);
}

TEST(Layouts, FactoryMatchesShippedData) {
  const PositionSet shipped = load_layout(std::filesystem::path(WLMP_DATA_DIR) / "factory58.csv");
  EXPECT_TRUE(shipped == generate_layout(LayoutKind::factory));
}

TEST(LayoutIo, CsvAndJsonRoundTrip) {
  const PositionSet p = generate_layout(LayoutKind::random3d, {10}, 3);
  std::stringstream csv, json;
  write_layout_csv(p, csv);
  write_layout_json(p, json);
  EXPECT_TRUE(read_layout_csv(csv) == p);
  EXPECT_TRUE(read_layout_json(json) == p);

  const auto dir = std::filesystem::temp_directory_path() / "wlmp_test_geometry";
  std::filesystem::create_directories(dir);
  save_layout(p, dir / "x.json");
  save_layout(p, dir / "x.csv");
  EXPECT_TRUE(load_layout(dir / "x.json") == p);
  EXPECT_TRUE(load_layout(dir / "x.csv") == p);
  std::filesystem::remove_all(dir);
}

TEST(LayoutIo, CsvErrorsCarryLineNumbers) {
  std::istringstream mixed("label,x,y\na,0,0\nb,1,2,3\n");
  try {
    read_layout_csv(mixed);
    FAIL() << "mixed dimensionality accepted";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::parse);
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
  }
  std::istringstream dup("label,x,y\na,0,0\na,1,1\n");
  EXPECT_WLMP_ERROR(read_layout_csv(dup), ErrorCode::parse);
  std::istringstream bad("label,x,y\na,0,zero\nb,1,1\n");
  EXPECT_WLMP_ERROR(read_layout_csv(bad), ErrorCode::parse);
  std::istringstream bom("\xEF\xBB\xBFlabel,x,y\r\na,0,0\r\nb,1,1\r\n");
  EXPECT_EQ(read_layout_csv(bom).size(), 2u);
  EXPECT_WLMP_ERROR(load_layout("/nonexistent/layout.csv"), ErrorCode::io);
}
