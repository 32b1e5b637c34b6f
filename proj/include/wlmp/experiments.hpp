#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wlmp/channel.hpp"
#include "wlmp/embedding.hpp"
#include "wlmp/geometry.hpp"
#include "wlmp/matching.hpp"

namespace wlmp {

enum class Alignment {
  /// Signs fixed from one node with known position.
  anchor,
  /// Best of all 2^k orientations; layouts with orientation symmetries fall
  /// back to the one-known-node test among the equivalent orientations.
  orientation_search,
};

std::string_view to_string(Alignment alignment) noexcept;

/// Fraction of nodes assigned to their true position.
double accuracy(const Assignment& assignment, const GroundTruth& truth);

/// Everything about a blueprint that a trial needs and that does not depend
/// on the noise: its embedding, orientation symmetries and anchor.
struct Blueprint {
  PositionSet positions;
  MeasurementMatrix distances;
  Embedding embedding;
  std::vector<SignVector> symmetries;
  /// Position whose embedded coordinates are farthest from zero in every
  /// column; the known node used for alignment.
  std::size_t anchor_position = 0;
  bool resolved = true;
};

inline constexpr int kDefaultMaxEigenvectors = 8;
inline constexpr double kDefaultResolution = 0.1;

/// Embeds `positions`, choosing eigenvectors with select_eigenvectors when
/// `eigenvectors` is empty.
Blueprint prepare_blueprint(PositionSet positions, std::optional<std::vector<int>> eigenvectors,
                            int max_eigenvectors = kDefaultMaxEigenvectors,
                            double resolution = kDefaultResolution);

struct TrialConfig {
  PositionSet layout;
  GroundTruth truth;
  PropagationModel model = PropagationModel::layout_relative();
  /// nullopt = choose automatically from the blueprint.
  std::optional<std::vector<int>> eigenvectors;
  Alignment alignment = Alignment::orientation_search;
  double snr = 10.0;
  std::uint64_t seed = 0;
};

struct TrialResult {
  Assignment assignment;
  double accuracy = 0.0;
  std::vector<int> eigenvectors;
};

/// Noisy measurements of nodes placed per `truth`, embedded and matched
/// against the blueprint.
TrialResult run_trial(const TrialConfig& config);

/// Same, against an already prepared blueprint.
TrialResult run_trial(const Blueprint& blueprint, const GroundTruth& truth,
                      const PropagationModel& model, Alignment alignment, double snr,
                      std::uint64_t seed);

/// splitmix64-based seed for trial (snr_index, realization) of a sweep.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t snr_index,
                          std::uint64_t realization) noexcept;

/// `count` points spaced logarithmically from `lo` to `hi` inclusive.
std::vector<double> log_grid(double lo = 1.0, double hi = 100.0, std::size_t count = 20);

struct SweepConfig {
  std::string label;
  PositionSet layout;
  PropagationModel model = PropagationModel::layout_relative();
  std::optional<std::vector<int>> eigenvectors;
  Alignment alignment = Alignment::orientation_search;
};

struct TrialRecord {
  std::uint64_t seed = 0;
  double accuracy = 0.0;
  double total_cost = 0.0;
  bool ambiguous = false;
};

struct SweepPoint {
  double snr = 0.0;
  std::vector<TrialRecord> trials;
  double mean = 0.0;
  /// 99% normal-approximation half width, clipped to keep mean ± hw in [0, 1].
  double ci_half_width = 0.0;
};

struct SweepResult {
  std::string label;
  std::vector<int> eigenvectors;
  std::vector<SweepPoint> points;
};

inline constexpr double kZ99 = 2.576;

/// 2.576·s/√R with s the sample standard deviation, clipped to [0, 1].
double ci_half_width(const std::vector<double>& samples, double mean);

/// Runs `realizations` trials per grid point with seeds from derive_seed and
/// a uniformly random ground truth per trial, fanned out over `jobs` OpenMP
/// threads (0 = runtime default). Results do not depend on `jobs`.
SweepResult run_sweep(const SweepConfig& config, const std::vector<double>& snr_grid,
                      std::size_t realizations, std::uint64_t master_seed, int jobs = 0);

/// Single-thread reference of run_sweep.
SweepResult run_sweep_serial(const SweepConfig& config, const std::vector<double>& snr_grid,
                             std::size_t realizations, std::uint64_t master_seed);

/// One curve of a figure preset.
struct CurveRecipe {
  std::string label;
  LayoutKind kind;
  LayoutParams params;
  std::optional<std::vector<int>> eigenvectors;
  Alignment alignment = Alignment::orientation_search;
};

struct FigureRecipe {
  std::string name;
  std::vector<CurveRecipe> curves;
  std::vector<double> snr_grid;
  std::size_t realizations = 100;
};

/// Presets fig1..fig5. Throws invalid_argument for unknown names.
FigureRecipe figure_recipe(std::string_view name);
std::vector<std::string> figure_names();

/// Builds the sweep configuration for a curve; `layout_seed` feeds the
/// random layouts.
SweepConfig sweep_config(const CurveRecipe& curve, std::uint64_t layout_seed = 1);

/// Spearman rank correlation with average ranks for ties.
double spearman(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace wlmp
