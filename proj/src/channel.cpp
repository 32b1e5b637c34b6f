#include "wlmp/channel.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <random>
#include <unordered_map>

#include <fmt/format.h>

#include "wlmp/error.hpp"

namespace wlmp {

void PropagationModel::validate() const {
  if (!(ref_distance > 0.0) || !std::isfinite(ref_distance)) {
    throw Error(ErrorCode::invalid_argument, "reference distance must be positive");
  }
  if (!(path_loss_exponent > 0.0) || !std::isfinite(path_loss_exponent)) {
    throw Error(ErrorCode::invalid_argument, "path loss exponent must be positive");
  }
  if (!std::isfinite(ref_power_dbm)) {
    throw Error(ErrorCode::invalid_argument, "reference power must be finite");
  }
}

double rssi_from_distance(double distance, const PropagationModel& model) {
  if (!(distance > 0.0)) {
    throw Error(ErrorCode::invalid_argument,
                fmt::format("RSSI is undefined for distance {}", distance));
  }
  return model.ref_power_dbm -
         10.0 * model.path_loss_exponent * std::log10(distance / model.ref_distance);
}

double distance_from_rssi(double rssi_dbm, const PropagationModel& model) {
  if (!std::isfinite(rssi_dbm)) throw Error(ErrorCode::invalid_argument, "RSSI must be finite");
  return model.ref_distance *
         std::pow(10.0, (model.ref_power_dbm - rssi_dbm) / (10.0 * model.path_loss_exponent));
}

Eigen::MatrixXd rssi_matrix(const MeasurementMatrix& distances, const PropagationModel& model) {
  model.validate();
  const Eigen::Index m = distances.size();
  Eigen::MatrixXd rssi = Eigen::MatrixXd::Zero(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = i + 1; j < m; ++j) {
      if (!(distances(i, j) > 0.0)) {
        throw Error(ErrorCode::degenerate_input,
                    fmt::format("nodes {} and {} coincide; RSSI is undefined", i, j));
      }
      rssi(i, j) = rssi(j, i) = rssi_from_distance(distances(i, j), model);
    }
  }
  return rssi;
}

namespace {

double mean_abs_off_diagonal(const Eigen::MatrixXd& rssi) {
  const Eigen::Index m = rssi.rows();
  double sum = 0.0;
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = i + 1; j < m; ++j) sum += std::abs(rssi(i, j));
  }
  return sum / (0.5 * static_cast<double>(m) * static_cast<double>(m - 1));
}

double sigma_for(const Eigen::MatrixXd& rssi, double snr) {
  if (!(snr > 0.0)) throw Error(ErrorCode::invalid_argument, "SNR must be positive");
  return std::isinf(snr) ? 0.0 : mean_abs_off_diagonal(rssi) / snr;
}

}  // namespace

double noise_sigma(const MeasurementMatrix& truth, const PropagationModel& model, double snr) {
  return sigma_for(rssi_matrix(truth, model), snr);
}

MeasurementMatrix noisy_distance_matrix(const MeasurementMatrix& truth,
                                        const PropagationModel& model, const NoiseSpec& noise) {
  const Eigen::MatrixXd rssi = rssi_matrix(truth, model);
  const double sigma = sigma_for(rssi, noise.snr);
  const Eigen::Index m = truth.size();

  std::mt19937_64 rng(noise.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = i + 1; j < m; ++j) {
      double perturbation = gauss(rng);
      if (noise.average_two_draws) perturbation = 0.5 * (perturbation + gauss(rng));
      out(i, j) = out(j, i) = distance_from_rssi(rssi(i, j) + sigma * perturbation, model);
    }
  }
  return MeasurementMatrix(std::move(out));
}

MeasurementMatrix distances_from_rssi(const Eigen::MatrixXd& rssi, const PropagationModel& model) {
  model.validate();
  if (rssi.rows() != rssi.cols()) throw Error(ErrorCode::shape_mismatch, "RSSI matrix must be square");
  const Eigen::Index m = rssi.rows();
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = i + 1; j < m; ++j) {
      out(i, j) = out(j, i) = distance_from_rssi(rssi(i, j), model);
    }
  }
  return MeasurementMatrix(std::move(out));
}

// ---------------------------------------------------------------------------
// RSSI files

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  return s.substr(first, s.find_last_not_of(" \t\r") - first + 1);
}

[[noreturn]] void parse_error(std::size_t line_no, std::string_view what) {
  throw Error(ErrorCode::parse, fmt::format("line {}: {}", line_no, what));
}

}  // namespace

RssiMeasurements read_rssi_csv(std::istream& in) {
  struct Reading {
    double sum = 0.0;
    int count = 0;
  };
  std::unordered_map<std::string, std::size_t> index;
  RssiMeasurements out;
  std::map<std::pair<std::size_t, std::size_t>, Reading> readings;

  std::string line;
  std::size_t line_no = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
    const std::string_view view = trim(line);
    if (view.empty()) continue;
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
      const auto comma = view.find(',', start);
      fields.push_back(trim(view.substr(start, comma - start)));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (!header) {
      if (fields.size() != 3 || fields[0] != "node_a" || fields[1] != "node_b" || fields[2] != "rssi_dbm") {
        parse_error(line_no, "expected header 'node_a,node_b,rssi_dbm'");
      }
      header = true;
      continue;
    }
    if (fields.size() != 3) parse_error(line_no, fmt::format("expected 3 fields, found {}", fields.size()));
    if (fields[0].empty() || fields[1].empty()) parse_error(line_no, "empty node label");
    if (fields[0] == fields[1]) parse_error(line_no, "a node cannot measure itself");
    double value = 0.0;
    const auto* end = fields[2].data() + fields[2].size();
    const auto [ptr, ec] = std::from_chars(fields[2].data(), end, value);
    if (fields[2].empty() || ec != std::errc() || ptr != end || !std::isfinite(value)) {
      parse_error(line_no, fmt::format("'{}' is not a finite RSSI value", fields[2]));
    }
    auto id = [&](std::string_view label) {
      auto [it, inserted] = index.try_emplace(std::string(label), out.nodes.size());
      if (inserted) out.nodes.emplace_back(label);
      return it->second;
    };
    const std::size_t a = id(fields[0]);
    const std::size_t b = id(fields[1]);
    auto& r = readings[{std::min(a, b), std::max(a, b)}];
    r.sum += value;
    ++r.count;
  }
  if (!header) throw Error(ErrorCode::parse, "measurement file is empty");

  const std::size_t m = out.nodes.size();
  if (m < 2) throw Error(ErrorCode::missing_pairs, "need measurements among at least 2 nodes");
  out.rssi = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
  std::size_t missing = 0;
  std::string first_missing;
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = a + 1; b < m; ++b) {
      const auto it = readings.find({a, b});
      if (it == readings.end()) {
        if (missing++ == 0) first_missing = out.nodes[a] + "-" + out.nodes[b];
        continue;
      }
      const double mean = it->second.sum / it->second.count;
      out.rssi(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = mean;
      out.rssi(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(a)) = mean;
    }
  }
  if (missing > 0) {
    throw Error(ErrorCode::missing_pairs,
                fmt::format("{} node pairs have no RSSI measurement (first: {})", missing, first_missing));
  }
  return out;
}

void write_rssi_csv(const std::vector<std::string>& nodes, const Eigen::MatrixXd& rssi,
                    std::ostream& out) {
  out << "node_a,node_b,rssi_dbm\n";
  for (std::size_t a = 0; a < nodes.size(); ++a) {
    for (std::size_t b = a + 1; b < nodes.size(); ++b) {
      out << nodes[a] << ',' << nodes[b] << ','
          << fmt::format("{}", rssi(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b))) << '\n';
    }
  }
}

}  // namespace wlmp
