#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "wlmp/experiments.hpp"
#include "wlmp/matching.hpp"

namespace wlmp {

/// `node_label,position_label,pair_cost`, one row per node.
void write_assignment_csv(const Assignment& assignment, const std::vector<std::string>& node_labels,
                          const std::vector<std::string>& position_labels, std::ostream& out);

/// JSON summary {total_cost, orientation, ambiguous, eigenvectors[, accuracy]}.
struct AssignmentSummary {
  std::vector<int> eigenvectors;
  std::optional<double> accuracy;
  std::vector<SignVector> tied_orientations;
};
void write_assignment_json(const Assignment& assignment, const AssignmentSummary& summary,
                           std::ostream& out);

/// `snr,mean_accuracy,ci_half_width,realizations`.
void write_sweep_csv(const SweepResult& result, std::ostream& out);

/// `snr,seed,accuracy,total_cost,ambiguous`.
void write_trials_csv(const SweepResult& result, std::ostream& out);

/// Accuracy-vs-SNR chart with a log SNR axis, one line per curve and a
/// shaded band for the confidence interval.
void write_sweep_svg(const std::vector<SweepResult>& curves, const std::string& title,
                     std::ostream& out);

}  // namespace wlmp
