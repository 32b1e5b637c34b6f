#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "wlmp/embedding.hpp"
#include "wlmp/measurement.hpp"

namespace wlmp {

/// One ±1 entry per embedding column.
using SignVector = std::vector<int>;

struct Assignment {
  /// pairs[node] = position.
  std::vector<std::size_t> pairs;
  std::vector<double> pair_costs;
  double total_cost = 0.0;
  SignVector orientation;
  /// Set when several orientations reach the minimum cost.
  bool ambiguous = false;
  std::vector<SignVector> tied_orientations;
};

/// Eᵢⱼ = ‖signs ⊙ nodes.row(i) − positions.row(j)‖.
CostMatrix cost_matrix(const Embedding& nodes, const Embedding& positions,
                       std::span<const int> signs);

/// Minimum-cost perfect matching (Kuhn–Munkres with potentials, O(M³)).
/// Among optimal matchings the lexicographically smallest `pairs` wins.
/// The returned orientation is empty.
Assignment hungarian(const CostMatrix& cost);

/// Per-column sign that makes the anchor node's coordinates agree with the
/// anchor position's. Throws ambiguous_anchor when either coordinate of some
/// column is within `noise_floor` of zero.
SignVector align_with_anchor(const Embedding& nodes, const Embedding& positions,
                             std::size_t anchor_node, std::size_t anchor_position,
                             double noise_floor = 1e-6);

/// Hungarian under the anchor-derived orientation.
Assignment match_with_anchor(const Embedding& nodes, const Embedding& positions,
                             std::size_t anchor_node, std::size_t anchor_position,
                             double noise_floor = 1e-6);

/// All 2^k sign vectors in lexicographic order, +1 before −1.
std::vector<SignVector> all_orientations(std::size_t k);

/// Largest column count accepted by the orientation search.
inline constexpr std::size_t kMaxSearchColumns = 8;

/// Runs the Hungarian algorithm for every orientation and keeps the cheapest;
/// exact ties go to the lexicographically smallest sign vector. Orientations
/// within 1e-6 relative of the best are reported as `tied_orientations` and
/// flag the result ambiguous. Refuses k > kMaxSearchColumns.
Assignment match_with_orientation_search(const Embedding& nodes, const Embedding& positions);

/// Sign vectors under which the blueprint embedding maps (almost) onto a
/// relabeling of itself: the optimal self-matching of signs ⊙ P against P has
/// mean pair cost at most `tolerance` × the median nearest-neighbor distance.
/// Always contains the all-(+1) vector.
std::vector<SignVector> orientation_symmetries(const Embedding& positions,
                                               double tolerance = 0.25);

/// Among `base ⊙ g` for g in `symmetries`, returns the first (lexicographic)
/// orientation whose assignment sends `anchor_node` to `anchor_position`, or
/// `best` unchanged when none does. This is the one-known-node test for
/// layouts whose orientation cannot be told apart from the cost alone.
Assignment disambiguate_with_anchor(const Embedding& nodes, const Embedding& positions,
                                    const Assignment& best,
                                    std::span<const SignVector> symmetries,
                                    std::size_t anchor_node, std::size_t anchor_position);

}  // namespace wlmp
