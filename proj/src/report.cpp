#include "wlmp/report.hpp"

#include <limits>
#include <algorithm>
#include <array>
#include <cmath>
#include <ostream>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "wlmp/error.hpp"

namespace wlmp {

void write_assignment_csv(const Assignment& assignment, const std::vector<std::string>& node_labels,
                          const std::vector<std::string>& position_labels, std::ostream& out) {
  if (node_labels.size() != assignment.pairs.size() || position_labels.size() != assignment.pairs.size()) {
    throw Error(ErrorCode::size_mismatch, "label lists do not match the assignment size");
  }
  out << "node_label,position_label,pair_cost\n";
  for (std::size_t i = 0; i < assignment.pairs.size(); ++i) {
    out << node_labels[i] << ',' << position_labels[assignment.pairs[i]] << ','
        << fmt::format("{}", assignment.pair_costs[i]) << '\n';
  }
}

void write_assignment_json(const Assignment& assignment, const AssignmentSummary& summary,
                           std::ostream& out) {
  nlohmann::ordered_json doc;
  doc["total_cost"] = assignment.total_cost;
  doc["orientation"] = assignment.orientation;
  doc["ambiguous"] = assignment.ambiguous;
  if (!summary.tied_orientations.empty()) doc["tied_orientations"] = summary.tied_orientations;
  doc["eigenvectors"] = summary.eigenvectors;
  if (summary.accuracy) doc["accuracy"] = *summary.accuracy;
  out << doc.dump(2) << '\n';
}

void write_sweep_csv(const SweepResult& result, std::ostream& out) {
  out << "snr,mean_accuracy,ci_half_width,realizations\n";
  for (const auto& p : result.points) {
    out << fmt::format("{},{},{},{}\n", p.snr, p.mean, p.ci_half_width, p.trials.size());
  }
}

void write_trials_csv(const SweepResult& result, std::ostream& out) {
  out << "snr,seed,accuracy,total_cost,ambiguous\n";
  for (const auto& p : result.points) {
    for (const auto& t : p.trials) {
      out << fmt::format("{},{},{},{},{}\n", p.snr, t.seed, t.accuracy, t.total_cost,
                         t.ambiguous ? "true" : "false");
    }
  }
}

namespace {

constexpr std::array<const char*, 8> kPalette{"#1f77b4", "#d62728", "#2ca02c", "#000000",
                                              "#9467bd", "#ff7f0e", "#8c564b", "#17becf"};

std::string escape_xml(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

void write_sweep_svg(const std::vector<SweepResult>& curves, const std::string& title,
                     std::ostream& out) {
  constexpr double width = 640, height = 420;
  constexpr double left = 70, right = 190, top = 40, bottom = 60;
  const double plot_w = width - left - right;
  const double plot_h = height - top - bottom;

  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (const auto& c : curves) {
    for (const auto& p : c.points) {
      lo = std::min(lo, p.snr);
      hi = std::max(hi, p.snr);
    }
  }
  if (!(lo > 0.0) || !std::isfinite(lo)) {
    lo = 1.0;
    hi = 100.0;
  }
  double log_lo = std::floor(std::log10(lo));
  double log_hi = std::ceil(std::log10(hi));
  if (log_hi <= log_lo) log_hi = log_lo + 1.0;

  auto sx = [&](double snr) { return left + (std::log10(snr) - log_lo) / (log_hi - log_lo) * plot_w; };
  auto sy = [&](double acc) { return top + (1.0 - acc) * plot_h; };

  out << fmt::format(R"(<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{}" viewBox="0 0 {} {}">)",
                     width, height, width, height)
      << '\n';
  out << R"(<rect width="100%" height="100%" fill="white"/>)" << '\n';
  out << fmt::format(R"(<text x="{}" y="24" font-family="sans-serif" font-size="15" text-anchor="middle">{}</text>)",
                     left + plot_w / 2, escape_xml(title))
      << '\n';

  // axes and grid
  for (int e = static_cast<int>(log_lo); e <= static_cast<int>(log_hi); ++e) {
    const double x = sx(std::pow(10.0, e));
    out << fmt::format(R"(<line x1="{:.2f}" y1="{}" x2="{:.2f}" y2="{}" stroke="#ddd"/>)", x, top, x, top + plot_h)
        << '\n';
    out << fmt::format(R"(<text x="{:.2f}" y="{}" font-family="sans-serif" font-size="12" text-anchor="middle">1e{}</text>)",
                       x, top + plot_h + 18, e)
        << '\n';
  }
  for (int k = 0; k <= 5; ++k) {
    const double acc = k / 5.0;
    const double y = sy(acc);
    out << fmt::format(R"(<line x1="{}" y1="{:.2f}" x2="{}" y2="{:.2f}" stroke="#ddd"/>)", left, y, left + plot_w, y)
        << '\n';
    out << fmt::format(R"(<text x="{}" y="{:.2f}" font-family="sans-serif" font-size="12" text-anchor="end">{:.1f}</text>)",
                       left - 6, y + 4, acc)
        << '\n';
  }
  out << fmt::format(R"(<rect x="{}" y="{}" width="{}" height="{}" fill="none" stroke="black"/>)", left, top,
                     plot_w, plot_h)
      << '\n';
  out << fmt::format(R"(<text x="{}" y="{}" font-family="sans-serif" font-size="13" text-anchor="middle">SNR</text>)",
                     left + plot_w / 2, height - 18)
      << '\n';
  out << fmt::format(R"svg(<text x="18" y="{}" font-family="sans-serif" font-size="13" text-anchor="middle" transform="rotate(-90 18 {})">accuracy</text>)svg",
                     top + plot_h / 2, top + plot_h / 2)
      << '\n';

  for (std::size_t c = 0; c < curves.size(); ++c) {
    const auto& curve = curves[c];
    const char* color = kPalette[c % kPalette.size()];
    if (curve.points.empty()) continue;
    std::string band;
    for (const auto& p : curve.points) {
      band += fmt::format("{:.2f},{:.2f} ", sx(p.snr), sy(std::min(1.0, p.mean + p.ci_half_width)));
    }
    for (auto it = curve.points.rbegin(); it != curve.points.rend(); ++it) {
      band += fmt::format("{:.2f},{:.2f} ", sx(it->snr), sy(std::max(0.0, it->mean - it->ci_half_width)));
    }
    out << fmt::format(R"(<polygon points="{}" fill="{}" fill-opacity="0.2" stroke="none"/>)", band, color) << '\n';
    std::string line;
    for (const auto& p : curve.points) line += fmt::format("{:.2f},{:.2f} ", sx(p.snr), sy(p.mean));
    out << fmt::format(R"(<polyline points="{}" fill="none" stroke="{}" stroke-width="2"/>)", line, color) << '\n';
    const double ly = top + 14 + 20.0 * static_cast<double>(c);
    out << fmt::format(R"(<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="{}" stroke-width="2"/>)", left + plot_w + 12,
                       ly, left + plot_w + 34, ly, color)
        << '\n';
    out << fmt::format(R"(<text x="{}" y="{}" font-family="sans-serif" font-size="12">{}</text>)",
                       left + plot_w + 40, ly + 4, escape_xml(curve.label))
        << '\n';
  }
  out << "</svg>\n";
}

}  // namespace wlmp
