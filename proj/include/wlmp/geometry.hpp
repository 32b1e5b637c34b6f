#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "wlmp/measurement.hpp"

namespace wlmp {

/// The blueprint: M labeled candidate positions in 2D or 3D.
class PositionSet {
 public:
  /// `coords` is M×d with d ∈ {2, 3}; labels must be unique and M ≥ 2.
  PositionSet(std::vector<std::string> labels, Eigen::MatrixXd coords);

  std::size_t size() const noexcept { return labels_.size(); }
  int dimension() const noexcept { return static_cast<int>(coords_.cols()); }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  const std::string& label(std::size_t i) const { return labels_.at(i); }
  const Eigen::MatrixXd& coords() const noexcept { return coords_; }

  /// Index of `label`, or nullopt.
  std::optional<std::size_t> find(std::string_view label) const;

  friend bool operator==(const PositionSet&, const PositionSet&);

 private:
  std::vector<std::string> labels_;
  Eigen::MatrixXd coords_;
};

/// For each node index i, the index of the position it truly occupies.
class GroundTruth {
 public:
  explicit GroundTruth(std::vector<std::size_t> position_of_node);

  static GroundTruth identity(std::size_t m);

  std::size_t size() const noexcept { return position_of_node_.size(); }
  std::size_t position_of(std::size_t node) const { return position_of_node_.at(node); }
  std::size_t node_at(std::size_t position) const { return node_at_position_.at(position); }
  const std::vector<std::size_t>& permutation() const noexcept { return position_of_node_; }

 private:
  std::vector<std::size_t> position_of_node_;
  std::vector<std::size_t> node_at_position_;
};

/// D′ᵢⱼ = ‖pᵢ − pⱼ‖.
MeasurementMatrix pairwise_distances(const PositionSet& positions);

enum class LayoutKind {
  factory,
  grid2d,
  random2d,
  biaxial_uniform,
  biaxial_random,
  strip,
  grid3d,
  random3d,
};

std::string_view to_string(LayoutKind kind) noexcept;
LayoutKind parse_layout_kind(std::string_view name);
const std::vector<LayoutKind>& all_layout_kinds();

struct LayoutParams {
  /// Position count; the layout's default when unset.
  std::optional<std::size_t> count;
  /// Strip only: shift of the second row along the strip, in lattice spacings.
  double shift = 0.0;
};

/// Default counts: factory 58, grid2d/random2d 80, biaxial 81, strip 40,
/// grid3d/random3d 120.
std::size_t default_count(LayoutKind kind) noexcept;

/// Builds one of the built-in layouts. The longest bounding-box side is 1.
/// Deterministic for a fixed seed; non-random kinds ignore it.
PositionSet generate_layout(LayoutKind kind, const LayoutParams& params = {},
                            std::uint64_t seed = 1);

/// Layout files: CSV with header `label,x,y[,z]`, or JSON
/// `[{"label": ..., "coords": [...]}, ...]`, picked by the `.json` extension.
PositionSet load_layout(const std::filesystem::path& path);
void save_layout(const PositionSet& positions, const std::filesystem::path& path);

PositionSet read_layout_csv(std::istream& in);
void write_layout_csv(const PositionSet& positions, std::ostream& out);
PositionSet read_layout_json(std::istream& in);
void write_layout_json(const PositionSet& positions, std::ostream& out);

}  // namespace wlmp
