#include "wlmp/matching.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include <fmt/format.h>

#include "wlmp/error.hpp"
#include "wlmp/kernels.hpp"

namespace wlmp {

CostMatrix cost_matrix(const Embedding& nodes, const Embedding& positions,
                       std::span<const int> signs) {
  if (nodes.size() != positions.size() || nodes.dimension() != positions.dimension()) {
    throw Error(ErrorCode::shape_mismatch,
                fmt::format("node embedding is {}x{} but position embedding is {}x{}", nodes.size(),
                            nodes.dimension(), positions.size(), positions.dimension()));
  }
  if (signs.size() != static_cast<std::size_t>(nodes.dimension())) {
    throw Error(ErrorCode::shape_mismatch, "sign vector length differs from embedding width");
  }
  for (int s : signs) {
    if (s != 1 && s != -1) throw Error(ErrorCode::invalid_argument, "signs must be +1 or -1");
  }
  return CostMatrix(kernels::embedded_distances(nodes.coords, positions.coords, signs));
}

SignVector align_with_anchor(const Embedding& nodes, const Embedding& positions,
                             std::size_t anchor_node, std::size_t anchor_position,
                             double noise_floor) {
  if (nodes.dimension() != positions.dimension()) {
    throw Error(ErrorCode::shape_mismatch, "embeddings have different widths");
  }
  if (anchor_node >= static_cast<std::size_t>(nodes.size()) ||
      anchor_position >= static_cast<std::size_t>(positions.size())) {
    throw Error(ErrorCode::out_of_range, "anchor index outside the embedding");
  }
  SignVector signs(static_cast<std::size_t>(nodes.dimension()));
  for (Eigen::Index j = 0; j < nodes.dimension(); ++j) {
    const double a = nodes.coords(static_cast<Eigen::Index>(anchor_node), j);
    const double b = positions.coords(static_cast<Eigen::Index>(anchor_position), j);
    if (std::abs(a) <= noise_floor || std::abs(b) <= noise_floor) {
      const int rank = j < static_cast<Eigen::Index>(positions.selected.size())
                           ? positions.selected[static_cast<std::size_t>(j)]
                           : static_cast<int>(j) + 1;
      throw Error(ErrorCode::ambiguous_anchor,
                  fmt::format("anchor coordinate on column {} (eigenvector {}) is within the noise "
                              "floor of zero; its sign cannot be resolved",
                              j, rank));
    }
    signs[static_cast<std::size_t>(j)] = (a > 0.0) == (b > 0.0) ? 1 : -1;
  }
  return signs;
}

Assignment match_with_anchor(const Embedding& nodes, const Embedding& positions,
                             std::size_t anchor_node, std::size_t anchor_position,
                             double noise_floor) {
  SignVector signs = align_with_anchor(nodes, positions, anchor_node, anchor_position, noise_floor);
  Assignment out = hungarian(cost_matrix(nodes, positions, signs));
  out.orientation = std::move(signs);
  return out;
}

std::vector<SignVector> all_orientations(std::size_t k) {
  const std::size_t count = std::size_t{1} << k;
  std::vector<SignVector> out(count, SignVector(k, 1));
  for (std::size_t mask = 0; mask < count; ++mask) {
    for (std::size_t j = 0; j < k; ++j) {
      if ((mask >> (k - 1 - j)) & 1U) out[mask][j] = -1;
    }
  }
  return out;
}

Assignment match_with_orientation_search(const Embedding& nodes, const Embedding& positions) {
  const auto k = static_cast<std::size_t>(nodes.dimension());
  if (k > kMaxSearchColumns) {
    throw Error(ErrorCode::invalid_argument,
                fmt::format("orientation search over {} columns needs 2^{} matchings; "
                            "supply an anchor instead",
                            k, k));
  }
  const auto orientations = all_orientations(k);
  std::vector<Assignment> results(orientations.size());
  const auto count = static_cast<std::ptrdiff_t>(orientations.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t o = 0; o < count; ++o) {
    const auto& signs = orientations[static_cast<std::size_t>(o)];
    results[static_cast<std::size_t>(o)] = hungarian(cost_matrix(nodes, positions, signs));
    results[static_cast<std::size_t>(o)].orientation = signs;
  }

  // tie-break after every cost is known so the answer does not depend on
  // which orientation finished first
  std::size_t best = 0;
  for (std::size_t o = 1; o < results.size(); ++o) {
    if (results[o].total_cost < results[best].total_cost) best = o;
  }
  const double tol = 1e-6 * results[best].total_cost + 1e-10;
  Assignment out = results[best];
  for (const auto& r : results) {
    if (r.total_cost - results[best].total_cost <= tol) out.tied_orientations.push_back(r.orientation);
  }
  out.ambiguous = out.tied_orientations.size() > 1;
  return out;
}

std::vector<SignVector> orientation_symmetries(const Embedding& positions, double tolerance) {
  const auto k = static_cast<std::size_t>(positions.dimension());
  if (k > kMaxSearchColumns) {
    throw Error(ErrorCode::invalid_argument, "too many columns for a symmetry scan");
  }
  const Eigen::Index m = positions.size();
  const Eigen::MatrixXd self = kernels::pairwise_distances(positions.coords);
  // Positions the embedding cannot tell apart sit at (numerically) the same
  // point; the typical spacing is measured between distinct points only.
  const double coincident = 1e-9 * self.maxCoeff();
  std::vector<double> nearest(static_cast<std::size_t>(m), std::numeric_limits<double>::infinity());
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) {
      if (i != j && self(i, j) > coincident) {
        nearest[static_cast<std::size_t>(i)] = std::min(nearest[static_cast<std::size_t>(i)], self(i, j));
      }
    }
  }
  auto mid = nearest.begin() + static_cast<std::ptrdiff_t>(nearest.size() / 2);
  std::nth_element(nearest.begin(), mid, nearest.end());
  const double limit = tolerance * *mid * static_cast<double>(m);

  std::vector<SignVector> out;
  for (const auto& signs : all_orientations(k)) {
    const Assignment a = hungarian(cost_matrix(positions, positions, signs));
    if (a.total_cost <= limit) out.push_back(signs);
  }
  return out;
}

Assignment disambiguate_with_anchor(const Embedding& nodes, const Embedding& positions,
                                    const Assignment& best,
                                    std::span<const SignVector> symmetries,
                                    std::size_t anchor_node, std::size_t anchor_position) {
  std::vector<SignVector> candidates;
  for (const auto& g : symmetries) {
    SignVector s = best.orientation;
    for (std::size_t j = 0; j < s.size() && j < g.size(); ++j) s[j] *= g[j];
    candidates.push_back(std::move(s));
  }
  for (const auto& t : best.tied_orientations) candidates.push_back(t);
  std::sort(candidates.begin(), candidates.end(), [](const SignVector& a, const SignVector& b) {
    // +1 sorts before −1
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(),
                                        [](int x, int y) { return x > y; });
  });
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
  if (candidates.size() <= 1) return best;

  // Prefer an orientation that puts the anchor exactly where it belongs.
  // Failing that (the anchor may share its embedded point with another
  // position), take the one landing it closest to its true embedded point.
  const Eigen::RowVectorXd target = positions.coords.row(static_cast<Eigen::Index>(anchor_position));
  std::optional<Assignment> closest;
  double closest_gap = std::numeric_limits<double>::infinity();
  for (const auto& signs : candidates) {
    Assignment a = signs == best.orientation ? best : hungarian(cost_matrix(nodes, positions, signs));
    a.orientation = signs;
    a.ambiguous = best.ambiguous;
    a.tied_orientations = best.tied_orientations;
    const std::size_t landed = a.pairs.at(anchor_node);
    if (landed == anchor_position) return a;
    const double gap = (positions.coords.row(static_cast<Eigen::Index>(landed)) - target).norm();
    if (gap < closest_gap) {
      closest_gap = gap;
      closest = std::move(a);
    }
  }
  return closest ? *closest : best;
}

}  // namespace wlmp
