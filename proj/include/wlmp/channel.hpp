#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "wlmp/measurement.hpp"

namespace wlmp {

/// Log-distance path loss: RSSI(d) = P₀ − 10·n·log₁₀(d / d₀).
struct PropagationModel {
  double ref_power_dbm = -40.0;
  double ref_distance = 1.0;
  double path_loss_exponent = 2.0;

  /// Throws invalid_argument unless d₀ > 0, n > 0 and P₀ is finite.
  void validate() const;

  /// RSSI in dB relative to the power received one layout unit away
  /// (0 dB at d = 1, exponent 2). Used by the simulation harness, whose
  /// layouts have unit extent.
  static PropagationModel layout_relative() { return {0.0, 1.0, 2.0}; }
};

struct NoiseSpec {
  /// Mean |RSSI| over the noise standard deviation. May be +infinity.
  double snr = 1.0;
  std::uint64_t seed = 0;
  /// Draw two directional measurements per pair and average them instead of
  /// a single symmetric draw.
  bool average_two_draws = false;
};

double rssi_from_distance(double distance, const PropagationModel& model);
double distance_from_rssi(double rssi_dbm, const PropagationModel& model);

/// σ_noise = mean(|RSSIᵢⱼ|, i ≠ j) / snr for the noiseless RSSI of `truth`.
double noise_sigma(const MeasurementMatrix& truth, const PropagationModel& model, double snr);

/// Converts every off-diagonal distance to RSSI, adds N(0, σ_noise²) noise
/// once per unordered pair, and converts back. Deterministic per seed.
/// Throws degenerate_input for coincident nodes.
MeasurementMatrix noisy_distance_matrix(const MeasurementMatrix& truth,
                                        const PropagationModel& model, const NoiseSpec& noise);

/// Dense RSSI measurements read from CSV `node_a,node_b,rssi_dbm`.
struct RssiMeasurements {
  /// Node labels in order of first appearance.
  std::vector<std::string> nodes;
  /// Symmetric matrix of RSSI; both directions of a pair are averaged when
  /// both are present. Diagonal is 0 and unused.
  Eigen::MatrixXd rssi;
};

/// Throws parse for malformed rows and missing_pairs when some unordered
/// pair has no measurement.
RssiMeasurements read_rssi_csv(std::istream& in);
void write_rssi_csv(const std::vector<std::string>& nodes, const Eigen::MatrixXd& rssi,
                    std::ostream& out);

/// Distance matrix from measured RSSI through the inverse model.
MeasurementMatrix distances_from_rssi(const Eigen::MatrixXd& rssi, const PropagationModel& model);

/// Noiseless RSSI of every pair, for writing synthetic measurement files.
Eigen::MatrixXd rssi_matrix(const MeasurementMatrix& distances, const PropagationModel& model);

}  // namespace wlmp
