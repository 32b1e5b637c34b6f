#include "wlmp/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numeric>
#include <random>

#include <fmt/format.h>
#include <omp.h>

#include "wlmp/error.hpp"
#include "wlmp/log.hpp"

#include <spdlog/spdlog.h>

namespace wlmp {

std::string_view to_string(Alignment alignment) noexcept {
  return alignment == Alignment::anchor ? "anchor" : "orientation_search";
}

double accuracy(const Assignment& assignment, const GroundTruth& truth) {
  if (assignment.pairs.size() != truth.size()) {
    throw Error(ErrorCode::size_mismatch,
                fmt::format("assignment has {} nodes but ground truth has {}",
                            assignment.pairs.size(), truth.size()));
  }
  if (truth.size() == 0) return 1.0;
  std::size_t correct = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (assignment.pairs[i] == truth.position_of(i)) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(truth.size());
}

namespace {

std::size_t pick_anchor(const Embedding& embedding) {
  std::size_t best = 0;
  double best_margin = -1.0;
  for (Eigen::Index i = 0; i < embedding.size(); ++i) {
    const double margin = embedding.coords.row(i).cwiseAbs().minCoeff();
    if (margin > best_margin) {
      best_margin = margin;
      best = static_cast<std::size_t>(i);
    }
  }
  return best;
}

std::uint64_t splitmix(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

Blueprint prepare_blueprint(PositionSet positions, std::optional<std::vector<int>> eigenvectors,
                            int max_eigenvectors, double resolution) {
  MeasurementMatrix distances = pairwise_distances(positions);
  const SpectralDecomposition spectrum = diffusion_spectrum(distances);
  bool resolved = true;
  std::vector<int> selected;
  if (eigenvectors) {
    selected = *eigenvectors;
  } else {
    const int m = static_cast<int>(positions.size());
    const int kmax = std::max(positions.dimension(), std::min(max_eigenvectors, m - 1));
    const auto choice =
        select_eigenvectors(embed(spectrum, leading_ranks(kmax)), positions.dimension(), resolution);
    selected = choice.selected;
    resolved = choice.resolved;
  }
  Embedding embedding = embed(spectrum, selected);
  std::vector<SignVector> symmetries;
  if (embedding.dimension() <= static_cast<Eigen::Index>(kMaxSearchColumns)) {
    symmetries = orientation_symmetries(embedding);
  }
  const std::size_t anchor = pick_anchor(embedding);
  return Blueprint{std::move(positions), std::move(distances), std::move(embedding),
                   std::move(symmetries), anchor, resolved};
}

TrialResult run_trial(const Blueprint& blueprint, const GroundTruth& truth,
                      const PropagationModel& model, Alignment alignment, double snr,
                      std::uint64_t seed) {
  const std::size_t m = blueprint.positions.size();
  if (truth.size() != m) {
    throw Error(ErrorCode::size_mismatch, "ground truth size differs from the blueprint");
  }
  Eigen::MatrixXd node_distances(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      node_distances(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = blueprint.distances(
          static_cast<Eigen::Index>(truth.position_of(i)), static_cast<Eigen::Index>(truth.position_of(j)));
    }
  }
  const MeasurementMatrix noisy =
      noisy_distance_matrix(MeasurementMatrix(std::move(node_distances)), model, NoiseSpec{snr, seed});
  const Embedding nodes = embed(noisy, blueprint.embedding.selected);

  const std::size_t anchor_position = blueprint.anchor_position;
  const std::size_t anchor_node = truth.node_at(anchor_position);
  TrialResult out;
  if (alignment == Alignment::anchor) {
    out.assignment = match_with_anchor(nodes, blueprint.embedding, anchor_node, anchor_position, 0.0);
  } else {
    out.assignment = match_with_orientation_search(nodes, blueprint.embedding);
    if (blueprint.symmetries.size() > 1 || out.assignment.ambiguous) {
      out.assignment = disambiguate_with_anchor(nodes, blueprint.embedding, out.assignment,
                                                blueprint.symmetries, anchor_node, anchor_position);
    }
  }
  out.accuracy = accuracy(out.assignment, truth);
  out.eigenvectors = blueprint.embedding.selected;
  return out;
}

TrialResult run_trial(const TrialConfig& config) {
  const Blueprint blueprint = prepare_blueprint(config.layout, config.eigenvectors);
  return run_trial(blueprint, config.truth, config.model, config.alignment, config.snr, config.seed);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t snr_index,
                          std::uint64_t realization) noexcept {
  return splitmix(splitmix(splitmix(master) ^ snr_index) ^ realization);
}

std::vector<double> log_grid(double lo, double hi, std::size_t count) {
  if (!(lo > 0.0) || !(hi >= lo) || count == 0) {
    throw Error(ErrorCode::invalid_argument, "log grid needs 0 < lo <= hi and count >= 1");
  }
  std::vector<double> grid(count);
  if (count == 1) {
    grid[0] = lo;
    return grid;
  }
  const double step = std::log10(hi / lo) / static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) grid[i] = lo * std::pow(10.0, step * static_cast<double>(i));
  grid.back() = hi;
  return grid;
}

double ci_half_width(const std::vector<double>& samples, double mean) {
  if (samples.size() < 2) return 0.0;
  double ss = 0.0;
  for (double s : samples) ss += (s - mean) * (s - mean);
  const double sd = std::sqrt(ss / static_cast<double>(samples.size() - 1));
  const double hw = kZ99 * sd / std::sqrt(static_cast<double>(samples.size()));
  return std::max(0.0, std::min({hw, mean, 1.0 - mean}));
}

namespace {

struct SweepPlan {
  Blueprint blueprint;
  std::vector<SweepPoint> points;
};

SweepPlan plan_sweep(const SweepConfig& config, const std::vector<double>& snr_grid,
                     std::size_t realizations) {
  if (realizations < 2) {
    throw Error(ErrorCode::invalid_argument, "a sweep needs at least 2 realizations per SNR");
  }
  if (snr_grid.empty()) throw Error(ErrorCode::invalid_argument, "empty SNR grid");
  SweepPlan plan{prepare_blueprint(config.layout, config.eigenvectors), {}};
  if (!plan.blueprint.resolved) {
    logger()->warn("sweep '{}': eigenvectors do not resolve every position", config.label);
  }
  plan.points.resize(snr_grid.size());
  for (std::size_t s = 0; s < snr_grid.size(); ++s) {
    plan.points[s].snr = snr_grid[s];
    plan.points[s].trials.resize(realizations);
  }
  return plan;
}

TrialRecord sweep_trial(const SweepConfig& config, const Blueprint& blueprint, double snr,
                        std::uint64_t seed) {
  std::vector<std::size_t> perm(blueprint.positions.size());
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  std::mt19937_64 rng(splitmix(seed ^ 0x5eedULL));
  std::shuffle(perm.begin(), perm.end(), rng);
  const GroundTruth truth(std::move(perm));
  const TrialResult r = run_trial(blueprint, truth, config.model, config.alignment, snr, seed);
  return TrialRecord{seed, r.accuracy, r.assignment.total_cost, r.assignment.ambiguous};
}

SweepResult finish_sweep(const SweepConfig& config, SweepPlan plan) {
  SweepResult out;
  out.label = config.label;
  out.eigenvectors = plan.blueprint.embedding.selected;
  for (auto& point : plan.points) {
    std::vector<double> samples;
    samples.reserve(point.trials.size());
    for (const auto& t : point.trials) samples.push_back(t.accuracy);
    double sum = 0.0;
    for (double s : samples) sum += s;
    point.mean = sum / static_cast<double>(samples.size());
    point.ci_half_width = ci_half_width(samples, point.mean);
  }
  out.points = std::move(plan.points);
  return out;
}

}  // namespace

SweepResult run_sweep(const SweepConfig& config, const std::vector<double>& snr_grid,
                      std::size_t realizations, std::uint64_t master_seed, int jobs) {
  SweepPlan plan = plan_sweep(config, snr_grid, realizations);
  const auto total = static_cast<std::ptrdiff_t>(snr_grid.size() * realizations);
  const int threads = jobs > 0 ? jobs : omp_get_max_threads();
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic) num_threads(threads)
  for (std::ptrdiff_t task = 0; task < total; ++task) {
    const auto s = static_cast<std::size_t>(task) / realizations;
    const auto r = static_cast<std::size_t>(task) % realizations;
    try {
      plan.points[s].trials[r] =
          sweep_trial(config, plan.blueprint, snr_grid[s], derive_seed(master_seed, s, r));
    } catch (...) {
#pragma omp critical(wlmp_sweep_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return finish_sweep(config, std::move(plan));
}

SweepResult run_sweep_serial(const SweepConfig& config, const std::vector<double>& snr_grid,
                             std::size_t realizations, std::uint64_t master_seed) {
  SweepPlan plan = plan_sweep(config, snr_grid, realizations);
  for (std::size_t s = 0; s < snr_grid.size(); ++s) {
    for (std::size_t r = 0; r < realizations; ++r) {
      plan.points[s].trials[r] =
          sweep_trial(config, plan.blueprint, snr_grid[s], derive_seed(master_seed, s, r));
    }
  }
  return finish_sweep(config, std::move(plan));
}

// ---------------------------------------------------------------------------
// Figure presets

namespace {

CurveRecipe curve(std::string label, LayoutKind kind, std::vector<int> eigenvectors,
                  double shift = 0.0) {
  return CurveRecipe{std::move(label), kind, LayoutParams{std::nullopt, shift},
                     std::move(eigenvectors), Alignment::orientation_search};
}

}  // namespace

std::vector<std::string> figure_names() { return {"fig1", "fig2", "fig3", "fig4", "fig5"}; }

FigureRecipe figure_recipe(std::string_view name) {
  FigureRecipe fig;
  fig.name = std::string(name);
  fig.snr_grid = log_grid(1.0, 100.0, 20);
  fig.realizations = 100;
  if (name == "fig1") {
    fig.curves = {curve("factory", LayoutKind::factory, {1, 2})};
  } else if (name == "fig2") {
    fig.curves = {curve("grid2d", LayoutKind::grid2d, {1, 2}),
                  curve("random2d", LayoutKind::random2d, {1, 2}),
                  curve("biaxial_uniform", LayoutKind::biaxial_uniform, {1, 2}),
                  curve("biaxial_random", LayoutKind::biaxial_random, {1, 2})};
  } else if (name == "fig3") {
    fig.curves = {curve("strip_ev123", LayoutKind::strip, {1, 2, 3}),
                  curve("strip_ev14", LayoutKind::strip, {1, 4}),
                  curve("strip_ev1234", LayoutKind::strip, {1, 2, 3, 4})};
  } else if (name == "fig4") {
    fig.curves = {curve("strip_shift0.01_ev1", LayoutKind::strip, {1}, 0.01),
                  curve("strip_shift0.01_ev14", LayoutKind::strip, {1, 4}, 0.01),
                  curve("strip_shift0.5_ev1", LayoutKind::strip, {1}, 0.5),
                  curve("strip_shift0.5_ev14", LayoutKind::strip, {1, 4}, 0.5)};
  } else if (name == "fig5") {
    fig.curves = {curve("grid3d", LayoutKind::grid3d, {1, 2, 3}),
                  curve("random3d", LayoutKind::random3d, {1, 2, 3})};
  } else {
    throw Error(ErrorCode::invalid_argument,
                fmt::format("unknown preset '{}'; expected fig1..fig5", name));
  }
  return fig;
}

SweepConfig sweep_config(const CurveRecipe& curve, std::uint64_t layout_seed) {
  return SweepConfig{curve.label, generate_layout(curve.kind, curve.params, layout_seed),
                     PropagationModel::layout_relative(), curve.eigenvectors, curve.alignment};
}

namespace {

std::vector<double> average_ranks(const std::vector<double>& v) {
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> ranks(v.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
    const double rank = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
    i = j + 1;
  }
  return ranks;
}

}  // namespace

double spearman(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw Error(ErrorCode::size_mismatch, "spearman needs two samples of equal size >= 2");
  }
  const auto rx = average_ranks(x);
  const auto ry = average_ranks(y);
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
  const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace wlmp
