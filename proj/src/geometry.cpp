#include "wlmp/geometry.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <unordered_set>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "wlmp/error.hpp"
#include "wlmp/kernels.hpp"

namespace wlmp {

PositionSet::PositionSet(std::vector<std::string> labels, Eigen::MatrixXd coords)
    : labels_(std::move(labels)), coords_(std::move(coords)) {
  if (labels_.size() != static_cast<std::size_t>(coords_.rows())) {
    throw Error(ErrorCode::shape_mismatch, "label count does not match coordinate rows");
  }
  if (labels_.size() < 2) {
    throw Error(ErrorCode::invalid_argument, "a position set needs at least 2 positions");
  }
  if (coords_.cols() != 2 && coords_.cols() != 3) {
    throw Error(ErrorCode::invalid_argument, "positions must be 2D or 3D");
  }
  if (!coords_.allFinite()) {
    throw Error(ErrorCode::invalid_argument, "position coordinates must be finite");
  }
  std::unordered_set<std::string_view> seen;
  for (const auto& label : labels_) {
    if (!seen.insert(label).second) {
      throw Error(ErrorCode::invalid_argument, "duplicate position label '" + label + "'");
    }
  }
}

std::optional<std::size_t> PositionSet::find(std::string_view label) const {
  const auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - labels_.begin());
}

bool operator==(const PositionSet& a, const PositionSet& b) {
  return a.labels_ == b.labels_ && a.coords_.rows() == b.coords_.rows() &&
         a.coords_.cols() == b.coords_.cols() && a.coords_ == b.coords_;
}

GroundTruth::GroundTruth(std::vector<std::size_t> position_of_node)
    : position_of_node_(std::move(position_of_node)),
      node_at_position_(position_of_node_.size(), position_of_node_.size()) {
  const std::size_t m = position_of_node_.size();
  for (std::size_t node = 0; node < m; ++node) {
    const std::size_t pos = position_of_node_[node];
    if (pos >= m || node_at_position_[pos] != m) {
      throw Error(ErrorCode::invalid_argument, "ground truth is not a permutation");
    }
    node_at_position_[pos] = node;
  }
}

GroundTruth GroundTruth::identity(std::size_t m) {
  std::vector<std::size_t> perm(m);
  for (std::size_t i = 0; i < m; ++i) perm[i] = i;
  return GroundTruth(std::move(perm));
}

MeasurementMatrix pairwise_distances(const PositionSet& positions) {
  return MeasurementMatrix(kernels::pairwise_distances(positions.coords()));
}

// ---------------------------------------------------------------------------
// Layout generators

namespace {

constexpr std::array<std::pair<LayoutKind, std::string_view>, 8> kKindNames{{
    {LayoutKind::factory, "factory"},
    {LayoutKind::grid2d, "grid2d"},
    {LayoutKind::random2d, "random2d"},
    {LayoutKind::biaxial_uniform, "biaxial_uniform"},
    {LayoutKind::biaxial_random, "biaxial_random"},
    {LayoutKind::strip, "strip"},
    {LayoutKind::grid3d, "grid3d"},
    {LayoutKind::random3d, "random3d"},
}};

// Shop floor of 1.0 x 0.78: three assembly lines with a central aisle,
// storage racks on the east side, wall-mounted sensors, offices and columns.
constexpr std::array<std::array<double, 2>, 58> kFactory{{
    {0.05, 0.08}, {0.16, 0.08}, {0.27, 0.08}, {0.38, 0.08}, {0.53, 0.08}, {0.64, 0.08},
    {0.10, 0.26}, {0.21, 0.26}, {0.32, 0.26}, {0.47, 0.26}, {0.58, 0.26}, {0.69, 0.26},
    {0.05, 0.44}, {0.16, 0.44}, {0.27, 0.44}, {0.38, 0.44}, {0.53, 0.44}, {0.64, 0.44},
    {0.82, 0.04}, {0.94, 0.04}, {0.82, 0.17}, {0.94, 0.17},
    {0.82, 0.30}, {0.94, 0.30}, {0.82, 0.43}, {0.94, 0.43},
    {0.00, 0.78}, {0.11, 0.78}, {0.21, 0.78}, {0.34, 0.78}, {0.45, 0.78},
    {0.57, 0.78}, {0.66, 0.78}, {0.79, 0.78}, {0.90, 0.78}, {1.00, 0.78},
    {0.06, 0.64}, {0.20, 0.64}, {0.34, 0.64}, {0.62, 0.64}, {0.76, 0.64}, {0.92, 0.64},
    {0.00, 0.17}, {0.00, 0.35}, {0.00, 0.56},
    {0.46, 0.00}, {0.74, 0.00},
    {0.22, 0.17}, {0.44, 0.17}, {0.27, 0.35}, {0.50, 0.35}, {0.70, 0.17}, {0.72, 0.36},
    {0.30, 0.55}, {0.50, 0.55}, {0.80, 0.55}, {0.90, 0.55}, {1.00, 0.62},
}};

// Anisotropic boxes for the random layouts; an isotropic cloud has nearly
// degenerate leading eigenvalues.
constexpr double kRandom2dHeight = 0.75;
constexpr std::array<double, 3> kRandom3dBox{1.0, 0.8, 0.6};

std::vector<std::string> make_labels(std::size_t m) {
  std::vector<std::string> labels;
  labels.reserve(m);
  for (std::size_t i = 0; i < m; ++i) labels.push_back(fmt::format("p{}", i));
  return labels;
}

[[noreturn]] void reject_count(LayoutKind kind, std::size_t count, std::string_view why) {
  throw Error(ErrorCode::invalid_argument,
              fmt::format("{} layout cannot have {} positions: {}", to_string(kind), count, why));
}

/// a ≤ b, a·b = n, a as large as possible.
std::array<std::size_t, 2> square_factors(std::size_t n) {
  std::size_t a = static_cast<std::size_t>(std::sqrt(static_cast<double>(n)));
  while (a > 1 && n % a != 0) --a;
  return {a, n / a};
}

/// a ≤ b ≤ c, a·b·c = n, minimizing c − a.
std::array<std::size_t, 3> cube_factors(std::size_t n) {
  std::array<std::size_t, 3> best{1, 1, n};
  for (std::size_t a = 1; a * a * a <= n; ++a) {
    if (n % a != 0) continue;
    for (std::size_t b = a; a * b * b <= n; ++b) {
      if ((n / a) % b != 0) continue;
      const std::size_t c = n / a / b;
      if (c - a < best[2] - best[0]) best = {a, b, c};
    }
  }
  return best;
}

PositionSet factory_layout(std::size_t count) {
  if (count != kFactory.size()) reject_count(LayoutKind::factory, count, "the floor plan is fixed at 58");
  Eigen::MatrixXd coords(static_cast<Eigen::Index>(kFactory.size()), 2);
  for (std::size_t i = 0; i < kFactory.size(); ++i) {
    coords(static_cast<Eigen::Index>(i), 0) = kFactory[i][0];
    coords(static_cast<Eigen::Index>(i), 1) = kFactory[i][1];
  }
  return PositionSet(make_labels(kFactory.size()), std::move(coords));
}

PositionSet grid2d_layout(std::size_t count) {
  const auto [rows, cols] = square_factors(count);
  if (rows < 2) reject_count(LayoutKind::grid2d, count, "no factorization with both sides >= 2");
  const double spacing = 1.0 / static_cast<double>(cols - 1);
  Eigen::MatrixXd coords(static_cast<Eigen::Index>(count), 2);
  Eigen::Index k = 0;
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c, ++k) {
      coords(k, 0) = static_cast<double>(c) * spacing;
      coords(k, 1) = static_cast<double>(r) * spacing;
    }
  }
  return PositionSet(make_labels(count), std::move(coords));
}

PositionSet grid3d_layout(std::size_t count) {
  const auto [a, b, c] = cube_factors(count);
  if (a < 2) reject_count(LayoutKind::grid3d, count, "no factorization with all sides >= 2");
  const double spacing = 1.0 / static_cast<double>(c - 1);
  Eigen::MatrixXd coords(static_cast<Eigen::Index>(count), 3);
  Eigen::Index k = 0;
  for (std::size_t z = 0; z < a; ++z) {
    for (std::size_t y = 0; y < b; ++y) {
      for (std::size_t x = 0; x < c; ++x, ++k) {
        coords(k, 0) = static_cast<double>(x) * spacing;
        coords(k, 1) = static_cast<double>(y) * spacing;
        coords(k, 2) = static_cast<double>(z) * spacing;
      }
    }
  }
  return PositionSet(make_labels(count), std::move(coords));
}

PositionSet random_layout(std::size_t count, int dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Eigen::MatrixXd coords(static_cast<Eigen::Index>(count), dim);
  for (Eigen::Index i = 0; i < coords.rows(); ++i) {
    for (int d = 0; d < dim; ++d) {
      const double extent = dim == 2 ? (d == 0 ? 1.0 : kRandom2dHeight) : kRandom3dBox[static_cast<std::size_t>(d)];
      coords(i, d) = unit(rng) * extent;
    }
  }
  return PositionSet(make_labels(count), std::move(coords));
}

// Two arms of the unit square meeting at the origin: ceil(n/2) points on
// the x axis including the origin, the rest on the y axis.
PositionSet biaxial_layout(std::size_t count, bool random, std::uint64_t seed) {
  const LayoutKind kind = random ? LayoutKind::biaxial_random : LayoutKind::biaxial_uniform;
  if (count < 4) reject_count(kind, count, "need at least 4 positions");
  const std::size_t nx = (count + 1) / 2;
  const std::size_t ny = count - nx;
  Eigen::MatrixXd coords = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(count), 2);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (std::size_t i = 0; i < nx; ++i) {
    coords(static_cast<Eigen::Index>(i), 0) =
        random ? unit(rng) : static_cast<double>(i) / static_cast<double>(nx - 1);
  }
  for (std::size_t j = 0; j < ny; ++j) {
    // uniform arm reuses the x spacing so both arms share the lattice step
    coords(static_cast<Eigen::Index>(nx + j), 1) =
        random ? 1.0 - unit(rng) : static_cast<double>(j + 1) / static_cast<double>(nx - 1);
  }
  return PositionSet(make_labels(count), std::move(coords));
}

// 2 × n/2 lattice; rows two spacings apart, the second row shifted along x.
PositionSet strip_layout(std::size_t count, double shift) {
  if (count < 4 || count % 2 != 0) reject_count(LayoutKind::strip, count, "need an even count >= 4");
  if (!std::isfinite(shift)) throw Error(ErrorCode::invalid_argument, "strip shift must be finite");
  const std::size_t per_row = count / 2;
  const double spacing = 1.0 / static_cast<double>(per_row - 1);
  Eigen::MatrixXd coords(static_cast<Eigen::Index>(count), 2);
  for (std::size_t i = 0; i < per_row; ++i) {
    const auto a = static_cast<Eigen::Index>(i);
    const auto b = static_cast<Eigen::Index>(per_row + i);
    coords(a, 0) = static_cast<double>(i) * spacing;
    coords(a, 1) = 0.0;
    coords(b, 0) = (static_cast<double>(i) + shift) * spacing;
    coords(b, 1) = 2.0 * spacing;
  }
  return PositionSet(make_labels(count), std::move(coords));
}

}  // namespace

std::string_view to_string(LayoutKind kind) noexcept {
  for (const auto& [k, name] : kKindNames) {
    if (k == kind) return name;
  }
  return "unknown";
}

LayoutKind parse_layout_kind(std::string_view name) {
  for (const auto& [k, n] : kKindNames) {
    if (n == name) return k;
  }
  throw Error(ErrorCode::invalid_argument, fmt::format("unknown layout kind '{}'", name));
}

const std::vector<LayoutKind>& all_layout_kinds() {
  static const std::vector<LayoutKind> kinds = [] {
    std::vector<LayoutKind> out;
    for (const auto& [k, name] : kKindNames) out.push_back(k);
    return out;
  }();
  return kinds;
}

std::size_t default_count(LayoutKind kind) noexcept {
  switch (kind) {
    case LayoutKind::factory: return 58;
    case LayoutKind::grid2d:
    case LayoutKind::random2d: return 80;
    case LayoutKind::biaxial_uniform:
    case LayoutKind::biaxial_random: return 81;
    case LayoutKind::strip: return 40;
    case LayoutKind::grid3d:
    case LayoutKind::random3d: return 120;
  }
  return 0;
}

PositionSet generate_layout(LayoutKind kind, const LayoutParams& params, std::uint64_t seed) {
  const std::size_t count = params.count.value_or(default_count(kind));
  if (count < 2) reject_count(kind, count, "need at least 2 positions");
  switch (kind) {
    case LayoutKind::factory: return factory_layout(count);
    case LayoutKind::grid2d: return grid2d_layout(count);
    case LayoutKind::random2d: return random_layout(count, 2, seed);
    case LayoutKind::biaxial_uniform: return biaxial_layout(count, false, seed);
    case LayoutKind::biaxial_random: return biaxial_layout(count, true, seed);
    case LayoutKind::strip: return strip_layout(count, params.shift);
    case LayoutKind::grid3d: return grid3d_layout(count);
    case LayoutKind::random3d: return random_layout(count, 3, seed);
  }
  throw Error(ErrorCode::invalid_argument, "unknown layout kind");
}

// ---------------------------------------------------------------------------
// Layout files

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    fields.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

[[noreturn]] void parse_error(std::size_t line_no, std::string_view what) {
  throw Error(ErrorCode::parse, fmt::format("line {}: {}", line_no, what));
}

double parse_number(std::string_view field, std::size_t line_no) {
  double value = 0.0;
  const auto* end = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(field.data(), end, value);
  if (field.empty() || ec != std::errc() || ptr != end || !std::isfinite(value)) {
    parse_error(line_no, fmt::format("'{}' is not a finite decimal number", field));
  }
  return value;
}

PositionSet build_checked(std::vector<std::string> labels, std::vector<std::vector<double>> rows,
                          const std::vector<std::size_t>& line_numbers) {
  if (rows.empty()) throw Error(ErrorCode::parse, "layout has no positions");
  const std::size_t dim = rows.front().size();
  std::unordered_set<std::string> seen;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != dim) {
      parse_error(line_numbers[i], fmt::format("expected {} coordinates, found {} (mixed dimensionality)",
                                               dim, rows[i].size()));
    }
    if (!seen.insert(labels[i]).second) {
      parse_error(line_numbers[i], fmt::format("duplicate label '{}'", labels[i]));
    }
  }
  if (dim != 2 && dim != 3) parse_error(line_numbers.front(), "positions must have 2 or 3 coordinates");
  Eigen::MatrixXd coords(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(dim));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t d = 0; d < dim; ++d) {
      coords(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(d)) = rows[i][d];
    }
  }
  try {
    return PositionSet(std::move(labels), std::move(coords));
  } catch (const Error& e) {
    throw Error(ErrorCode::parse, e.what());
  }
}

}  // namespace

PositionSet read_layout_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  std::size_t header_dim = 0;
  std::vector<std::string> labels;
  std::vector<std::vector<double>> rows;
  std::vector<std::size_t> line_numbers;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1 && line.starts_with("\xEF\xBB\xBF")) line.erase(0, 3);
    const std::string_view view = trim(line);
    if (view.empty()) continue;
    const auto fields = split_fields(view);
    if (header_dim == 0) {
      const bool ok = fields.size() >= 3 && fields.size() <= 4 && fields[0] == "label" &&
                      fields[1] == "x" && fields[2] == "y" && (fields.size() == 3 || fields[3] == "z");
      if (!ok) parse_error(line_no, "expected header 'label,x,y' or 'label,x,y,z'");
      header_dim = fields.size() - 1;
      continue;
    }
    if (fields.size() < 3 || fields.size() > 4) {
      parse_error(line_no, fmt::format("expected 3 or 4 fields, found {}", fields.size()));
    }
    if (fields[0].empty()) parse_error(line_no, "empty label");
    std::vector<double> coords;
    for (std::size_t k = 1; k < fields.size(); ++k) coords.push_back(parse_number(fields[k], line_no));
    if (coords.size() != header_dim) {
      parse_error(line_no, fmt::format("expected {} coordinates, found {} (mixed dimensionality)",
                                       header_dim, coords.size()));
    }
    labels.emplace_back(fields[0]);
    rows.push_back(std::move(coords));
    line_numbers.push_back(line_no);
  }
  if (header_dim == 0) throw Error(ErrorCode::parse, "layout file is empty");
  return build_checked(std::move(labels), std::move(rows), line_numbers);
}

void write_layout_csv(const PositionSet& positions, std::ostream& out) {
  out << (positions.dimension() == 3 ? "label,x,y,z\n" : "label,x,y\n");
  const auto& c = positions.coords();
  for (std::size_t i = 0; i < positions.size(); ++i) {
    out << positions.label(i);
    for (Eigen::Index d = 0; d < c.cols(); ++d) out << ',' << fmt::format("{}", c(static_cast<Eigen::Index>(i), d));
    out << '\n';
  }
}

PositionSet read_layout_json(std::istream& in) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::parse, fmt::format("invalid JSON layout: {}", e.what()));
  }
  if (!doc.is_array()) throw Error(ErrorCode::parse, "JSON layout must be an array");
  std::vector<std::string> labels;
  std::vector<std::vector<double>> rows;
  std::vector<std::size_t> entries;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const auto& item = doc[i];
    // "line" numbers for JSON are 1-based entry indices
    if (!item.is_object() || !item.contains("label") || !item.contains("coords") ||
        !item["label"].is_string() || !item["coords"].is_array()) {
      parse_error(i + 1, "entry must be {\"label\": string, \"coords\": [numbers]}");
    }
    std::vector<double> coords;
    for (const auto& v : item["coords"]) {
      if (!v.is_number()) parse_error(i + 1, "coordinates must be numbers");
      coords.push_back(v.get<double>());
    }
    labels.push_back(item["label"].get<std::string>());
    rows.push_back(std::move(coords));
    entries.push_back(i + 1);
  }
  return build_checked(std::move(labels), std::move(rows), entries);
}

void write_layout_json(const PositionSet& positions, std::ostream& out) {
  nlohmann::json doc = nlohmann::json::array();
  const auto& c = positions.coords();
  for (std::size_t i = 0; i < positions.size(); ++i) {
    std::vector<double> coords(static_cast<std::size_t>(c.cols()));
    for (Eigen::Index d = 0; d < c.cols(); ++d) coords[static_cast<std::size_t>(d)] = c(static_cast<Eigen::Index>(i), d);
    doc.push_back({{"label", positions.label(i)}, {"coords", coords}});
  }
  out << doc.dump(2) << '\n';
}

namespace {
bool is_json_path(const std::filesystem::path& path) { return path.extension() == ".json"; }
}  // namespace

PositionSet load_layout(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io, fmt::format("cannot open layout '{}'", path.string()));
  return is_json_path(path) ? read_layout_json(in) : read_layout_csv(in);
}

void save_layout(const PositionSet& positions, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::io, fmt::format("cannot write layout '{}'", path.string()));
  if (is_json_path(path)) {
    write_layout_json(positions, out);
  } else {
    write_layout_csv(positions, out);
  }
  if (!out) throw Error(ErrorCode::io, fmt::format("failed writing layout '{}'", path.string()));
}

}  // namespace wlmp
