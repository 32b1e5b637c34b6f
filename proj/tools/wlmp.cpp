// wlmp: command-line front end for diffusion-map localization matching.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <unordered_map>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "wlmp/channel.hpp"
#include "wlmp/embedding.hpp"
#include "wlmp/error.hpp"
#include "wlmp/experiments.hpp"
#include "wlmp/geometry.hpp"
#include "wlmp/matching.hpp"
#include "wlmp/report.hpp"

namespace fs = std::filesystem;
using namespace wlmp;

namespace {

struct ModelFlags {
  PropagationModel model;
  void add(CLI::App* cmd) {
    cmd->add_option("--ref-power", model.ref_power_dbm, "RSSI at the reference distance (dBm)")
        ->capture_default_str();
    cmd->add_option("--ref-distance", model.ref_distance, "reference distance")->capture_default_str();
    cmd->add_option("--exponent", model.path_loss_exponent, "path loss exponent")->capture_default_str();
  }
};

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::io, fmt::format("cannot write '{}'", path.string()));
  return out;
}

std::optional<std::vector<int>> parse_eigenvectors(const std::string& spec) {
  if (spec == "auto") return std::nullopt;
  std::vector<int> ranks;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      const int rank = std::stoi(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
      ranks.push_back(rank);
    } catch (const std::exception&) {
      throw Error(ErrorCode::invalid_argument,
                  fmt::format("--eigenvectors expects 'auto' or a list like 1,4; got '{}'", spec));
    }
  }
  if (ranks.empty()) throw Error(ErrorCode::invalid_argument, "--eigenvectors list is empty");
  return ranks;
}

std::vector<double> parse_snr_list(const std::string& spec) {
  std::vector<double> grid;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      grid.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw Error(ErrorCode::invalid_argument, fmt::format("bad SNR value '{}'", item));
    }
    if (!(grid.back() > 0.0)) throw Error(ErrorCode::invalid_argument, "SNR values must be positive");
  }
  return grid;
}

std::pair<std::string, std::string> split_pair(const std::string& spec, char sep, const char* what) {
  const auto at = spec.find(sep);
  if (at == std::string::npos || at == 0 || at + 1 == spec.size()) {
    throw Error(ErrorCode::invalid_argument, fmt::format("{} must look like NODE{}POSITION", what, sep));
  }
  return {spec.substr(0, at), spec.substr(at + 1)};
}

void write_text(const std::optional<fs::path>& path, const std::string& text) {
  if (path) {
    auto out = open_output(*path);
    out << text;
  } else {
    std::cout << text;
  }
}

// ---------------------------------------------------------------------------

struct GenerateArgs {
  std::string kind;
  std::optional<std::size_t> count;
  double shift = 0.0;
  std::uint64_t seed = 1;
  std::optional<fs::path> out;
  std::string format = "csv";
};

int cmd_generate(const GenerateArgs& a) {
  const PositionSet layout = generate_layout(parse_layout_kind(a.kind), LayoutParams{a.count, a.shift}, a.seed);
  if (a.out) {
    save_layout(layout, *a.out);
    return 0;
  }
  std::ostringstream text;
  if (a.format == "json") {
    write_layout_json(layout, text);
  } else {
    write_layout_csv(layout, text);
  }
  std::cout << text.str();
  return 0;
}

struct SimulateArgs {
  fs::path positions;
  double snr = std::numeric_limits<double>::infinity();
  std::uint64_t seed = 1;
  fs::path measurements_out;
  std::optional<fs::path> truth_out;
  bool shuffle = true;
  ModelFlags model;
};

int cmd_simulate(const SimulateArgs& a) {
  const PositionSet layout = load_layout(a.positions);
  const std::size_t m = layout.size();
  std::vector<std::size_t> perm(m);
  for (std::size_t i = 0; i < m; ++i) perm[i] = i;
  if (a.shuffle) {
    std::mt19937_64 rng(a.seed);
    std::shuffle(perm.begin(), perm.end(), rng);
  }
  const GroundTruth truth(perm);
  const MeasurementMatrix blueprint = pairwise_distances(layout);
  Eigen::MatrixXd nodes(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      nodes(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          blueprint(static_cast<Eigen::Index>(perm[i]), static_cast<Eigen::Index>(perm[j]));
    }
  }
  a.model.model.validate();
  const MeasurementMatrix noisy =
      noisy_distance_matrix(MeasurementMatrix(std::move(nodes)), a.model.model, NoiseSpec{a.snr, a.seed + 1});
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < m; ++i) labels.push_back(fmt::format("n{}", i));
  {
    auto out = open_output(a.measurements_out);
    write_rssi_csv(labels, rssi_matrix(noisy, a.model.model), out);
  }
  if (a.truth_out) {
    auto out = open_output(*a.truth_out);
    out << "node_label,position_label\n";
    for (std::size_t i = 0; i < m; ++i) out << labels[i] << ',' << layout.label(perm[i]) << '\n';
  }
  return 0;
}

GroundTruth read_truth(const fs::path& path, const std::vector<std::string>& nodes,
                       const PositionSet& positions) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io, fmt::format("cannot open '{}'", path.string()));
  std::unordered_map<std::string, std::size_t> node_index;
  for (std::size_t i = 0; i < nodes.size(); ++i) node_index[nodes[i]] = i;
  std::vector<std::size_t> perm(nodes.size(), nodes.size());
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line_no == 1) continue;
    const auto [node, pos] = split_pair(line, ',', "truth row");
    const auto n = node_index.find(node);
    const auto p = positions.find(pos);
    if (n == node_index.end() || !p) {
      throw Error(ErrorCode::unknown_label, fmt::format("truth line {}: unknown label in '{}'", line_no, line));
    }
    perm[n->second] = *p;
  }
  try {
    return GroundTruth(perm);
  } catch (const Error&) {
    throw Error(ErrorCode::parse, "truth file does not pair every node with a distinct position");
  }
}

struct MatchArgs {
  fs::path positions;
  fs::path measurements;
  std::string eigenvectors = "auto";
  std::optional<std::string> anchor;
  std::optional<fs::path> truth;
  std::optional<fs::path> out;
  std::string format = "json";
  int max_eigenvectors = kDefaultMaxEigenvectors;
  double resolution = kDefaultResolution;
  ModelFlags model;
};

int cmd_match(const MatchArgs& a) {
  const PositionSet layout = load_layout(a.positions);
  std::ifstream in(a.measurements);
  if (!in) throw Error(ErrorCode::io, fmt::format("cannot open '{}'", a.measurements.string()));
  const RssiMeasurements measured = read_rssi_csv(in);
  if (measured.nodes.size() != layout.size()) {
    throw Error(ErrorCode::size_mismatch, fmt::format("{} measured nodes but {} positions",
                                                      measured.nodes.size(), layout.size()));
  }
  const Blueprint blueprint =
      prepare_blueprint(layout, parse_eigenvectors(a.eigenvectors), a.max_eigenvectors, a.resolution);
  const Embedding nodes = embed(distances_from_rssi(measured.rssi, a.model.model), blueprint.embedding.selected);

  Assignment assignment;
  AssignmentSummary summary;
  summary.eigenvectors = blueprint.embedding.selected;
  if (a.anchor) {
    const auto [node_label, pos_label] = split_pair(*a.anchor, '=', "--anchor");
    const auto node = std::find(measured.nodes.begin(), measured.nodes.end(), node_label);
    const auto pos = layout.find(pos_label);
    if (node == measured.nodes.end() || !pos) {
      throw Error(ErrorCode::unknown_label, fmt::format("--anchor refers to unknown label in '{}'", *a.anchor));
    }
    assignment = match_with_anchor(nodes, blueprint.embedding,
                                   static_cast<std::size_t>(node - measured.nodes.begin()), *pos);
  } else {
    assignment = match_with_orientation_search(nodes, blueprint.embedding);
    if (blueprint.symmetries.size() > 1) {
      // the blueprint itself cannot tell these orientations apart
      for (const auto& g : blueprint.symmetries) {
        SignVector s = assignment.orientation;
        for (std::size_t j = 0; j < s.size(); ++j) s[j] *= g[j];
        if (std::find(assignment.tied_orientations.begin(), assignment.tied_orientations.end(), s) ==
            assignment.tied_orientations.end()) {
          assignment.tied_orientations.push_back(s);
        }
      }
      assignment.ambiguous = true;
    }
    if (assignment.ambiguous) {
      std::cerr << "warning: orientation is ambiguous for this blueprint; pass --anchor NODE=POSITION\n";
    }
  }
  if (assignment.ambiguous) summary.tied_orientations = assignment.tied_orientations;
  if (a.truth) summary.accuracy = accuracy(assignment, read_truth(*a.truth, measured.nodes, layout));

  std::ostringstream csv, json;
  write_assignment_csv(assignment, measured.nodes, layout.labels(), csv);
  write_assignment_json(assignment, summary, json);
  if (a.out) {
    write_text(fs::path(a.out->string() + ".csv"), csv.str());
    write_text(fs::path(a.out->string() + ".json"), json.str());
  }
  std::cout << (a.format == "csv" ? csv.str() : json.str());
  return 0;
}

struct SweepArgs {
  std::optional<std::string> preset;
  std::optional<std::string> kind;
  std::optional<std::size_t> count;
  double shift = 0.0;
  std::string eigenvectors = "auto";
  std::string alignment = "orientation_search";
  std::optional<std::string> snr;
  std::optional<std::size_t> realizations;
  std::uint64_t seed = 1;
  std::uint64_t layout_seed = 1;
  int jobs = 0;
  fs::path out;
  bool plot = false;
  bool detail = false;
};

int cmd_sweep(const SweepArgs& a) {
  FigureRecipe fig;
  if (a.preset) {
    fig = figure_recipe(*a.preset);
  } else {
    const LayoutKind kind = parse_layout_kind(*a.kind);
    if (a.alignment != "anchor" && a.alignment != "orientation_search") {
      throw Error(ErrorCode::invalid_argument, "--alignment must be anchor or orientation_search");
    }
    fig.name = std::string(to_string(kind));
    fig.snr_grid = log_grid();
    fig.curves = {CurveRecipe{fig.name, kind, LayoutParams{a.count, a.shift}, parse_eigenvectors(a.eigenvectors),
                              a.alignment == "anchor" ? Alignment::anchor : Alignment::orientation_search}};
  }
  if (a.snr) fig.snr_grid = parse_snr_list(*a.snr);
  if (a.realizations) fig.realizations = *a.realizations;

  std::error_code ec;
  fs::create_directories(a.out, ec);
  if (ec) throw Error(ErrorCode::io, fmt::format("cannot create '{}': {}", a.out.string(), ec.message()));

  std::vector<SweepResult> results;
  for (const auto& curve : fig.curves) {
    const SweepConfig config = sweep_config(curve, a.layout_seed);
    results.push_back(run_sweep(config, fig.snr_grid, fig.realizations, a.seed, a.jobs));
    {
      auto out = open_output(a.out / (curve.label + ".csv"));
      write_sweep_csv(results.back(), out);
    }
    if (a.detail) {
      auto out = open_output(a.out / (curve.label + ".trials.csv"));
      write_trials_csv(results.back(), out);
    }
    std::cerr << fmt::format("{}: eigenvectors {} done\n", curve.label, fmt::join(results.back().eigenvectors, ","));
  }
  if (a.plot) {
    auto out = open_output(a.out / (fig.name + ".svg"));
    write_sweep_svg(results, fig.name, out);
  }
  return 0;
}

struct EmbedArgs {
  std::optional<fs::path> positions;
  std::optional<fs::path> measurements;
  std::size_t count = 0;
  std::optional<fs::path> out;
  ModelFlags model;
};

int cmd_embed(const EmbedArgs& a) {
  std::optional<MeasurementMatrix> distances;
  if (a.positions) {
    distances = pairwise_distances(load_layout(*a.positions));
  } else {
    std::ifstream in(*a.measurements);
    if (!in) throw Error(ErrorCode::io, fmt::format("cannot open '{}'", a.measurements->string()));
    distances = distances_from_rssi(read_rssi_csv(in).rssi, a.model.model);
  }
  std::ostringstream text;
  write_spectrum_csv(diffusion_spectrum(*distances), text, a.count);
  write_text(a.out, text.str());
  return 0;
}

struct InspectArgs {
  fs::path positions;
  int max_eigenvectors = kDefaultMaxEigenvectors;
  double resolution = kDefaultResolution;
  std::string format = "json";
};

int cmd_inspect(const InspectArgs& a) {
  const PositionSet layout = load_layout(a.positions);
  const SpectralDecomposition spectrum = diffusion_spectrum(pairwise_distances(layout));
  const int m = static_cast<int>(layout.size());
  const int kmax = std::max(layout.dimension(), std::min(a.max_eigenvectors, m - 1));
  const Embedding candidates = embed(spectrum, leading_ranks(kmax));
  const EigenvectorSelection choice = select_eigenvectors(candidates, layout.dimension(), a.resolution);
  const Embedding chosen = embed(spectrum, choice.selected);
  const auto symmetries = chosen.dimension() <= static_cast<Eigen::Index>(kMaxSearchColumns)
                              ? orientation_symmetries(chosen)
                              : std::vector<SignVector>{};

  std::vector<double> eigenvalues;
  for (int k = 0; k <= kmax; ++k) eigenvalues.push_back(spectrum.eigenvalues(k));
  std::vector<std::array<std::string, 2>> pairs;
  for (const auto& [i, j] : choice.unresolved_pairs) pairs.push_back({layout.label(i), layout.label(j)});

  if (a.format == "csv") {
    std::cout << "key,value\n";
    std::cout << "positions," << m << "\ndimension," << layout.dimension() << '\n';
    std::cout << "selected," << fmt::format("{}", fmt::join(choice.selected, " ")) << '\n';
    std::cout << "resolved," << (choice.resolved ? "true" : "false") << '\n';
    std::cout << "unresolved_pairs," << pairs.size() << '\n';
    std::cout << "orientation_symmetries," << symmetries.size() << '\n';
    return 0;
  }
  nlohmann::ordered_json doc;
  doc["positions"] = m;
  doc["dimension"] = layout.dimension();
  doc["eigenvalues"] = eigenvalues;
  doc["near_disconnected"] = spectrum.near_disconnected;
  doc["selected"] = choice.selected;
  doc["resolved"] = choice.resolved;
  doc["unresolved_pairs"] = pairs;
  doc["orientation_symmetries"] = symmetries;
  doc["ambiguous"] = symmetries.size() > 1;
  std::cout << doc.dump(2) << '\n';
  return 0;
}

int fail(int code, std::string_view kind, std::string_view message) {
  std::string flat(message);
  std::replace(flat.begin(), flat.end(), '\n', ' ');
  std::cerr << "error: " << kind << ": " << flat << '\n';
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Match wireless nodes to blueprint positions with diffusion maps"};
  app.require_subcommand(1);
  std::string format;

  GenerateArgs gen;
  auto* generate = app.add_subcommand("generate", "write a built-in layout");
  generate->add_option("--kind", gen.kind, "factory|grid2d|random2d|biaxial_uniform|biaxial_random|strip|grid3d|random3d")
      ->required();
  generate->add_option("--count", gen.count, "number of positions (layout default when omitted)");
  generate->add_option("--shift", gen.shift, "strip: second-row shift in lattice spacings");
  generate->add_option("--seed", gen.seed, "seed for random layouts")->capture_default_str();
  generate->add_option("--out", gen.out, "output file (.csv or .json); stdout when omitted");
  generate->add_option("--format", gen.format, "stdout format")->check(CLI::IsMember({"csv", "json"}));

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "write synthetic RSSI measurements for a layout");
  simulate->add_option("--positions", sim.positions, "layout file")->required();
  simulate->add_option("--snr", sim.snr, "signal-to-noise ratio (omit for noiseless)");
  simulate->add_option("--seed", sim.seed, "seed for node placement and noise")->capture_default_str();
  simulate->add_option("--out", sim.measurements_out, "measurement CSV to write")->required();
  simulate->add_option("--truth", sim.truth_out, "also write node_label,position_label ground truth");
  simulate->add_flag("!--no-shuffle", sim.shuffle, "place node i at position i");
  sim.model.add(simulate);

  MatchArgs match;
  auto* match_cmd = app.add_subcommand("match", "assign measured nodes to blueprint positions");
  match_cmd->add_option("--positions", match.positions, "blueprint layout file")->required();
  match_cmd->add_option("--measurements", match.measurements, "RSSI CSV node_a,node_b,rssi_dbm")->required();
  match_cmd->add_option("--eigenvectors", match.eigenvectors, "'auto' or a list such as 1,4")->capture_default_str();
  match_cmd->add_option("--anchor", match.anchor, "known placement NODE=POSITION");
  match_cmd->add_option("--truth", match.truth, "ground truth CSV; reports accuracy");
  match_cmd->add_option("--out", match.out, "write PREFIX.csv and PREFIX.json");
  match_cmd->add_option("--format", match.format, "stdout format")->check(CLI::IsMember({"csv", "json"}));
  match_cmd->add_option("--max-eigenvectors", match.max_eigenvectors, "candidates for auto selection")
      ->capture_default_str();
  match_cmd->add_option("--resolution", match.resolution, "auto selection resolution")->capture_default_str();
  match.model.add(match_cmd);

  SweepArgs sw;
  auto* sweep = app.add_subcommand("sweep", "accuracy-vs-SNR Monte-Carlo sweep");
  auto* preset_opt = sweep->add_option("--preset", sw.preset, "fig1|fig2|fig3|fig4|fig5");
  auto* kind_opt = sweep->add_option("--kind", sw.kind, "layout kind for a custom sweep");
  preset_opt->excludes(kind_opt);
  sweep->add_option("--count", sw.count, "custom sweep: position count")->needs(kind_opt);
  sweep->add_option("--shift", sw.shift, "custom sweep: strip shift")->needs(kind_opt);
  sweep->add_option("--eigenvectors", sw.eigenvectors, "custom sweep: 'auto' or list")->needs(kind_opt);
  sweep->add_option("--alignment", sw.alignment, "custom sweep: anchor|orientation_search")->needs(kind_opt);
  sweep->add_option("--snr", sw.snr, "comma-separated SNR grid (default: 20 log-spaced points 1..100)");
  sweep->add_option("--realizations", sw.realizations, "trials per SNR (default 100)");
  sweep->add_option("--seed", sw.seed, "master seed")->capture_default_str();
  sweep->add_option("--layout-seed", sw.layout_seed, "seed for random layouts")->capture_default_str();
  sweep->add_option("--jobs", sw.jobs, "worker threads (0 = all)")->capture_default_str();
  sweep->add_option("--out", sw.out, "output directory")->required();
  sweep->add_flag("--plot", sw.plot, "also write an SVG chart");
  sweep->add_flag("--detail", sw.detail, "also write per-trial CSVs");

  EmbedArgs em;
  auto* embed_cmd = app.add_subcommand("embed", "dump the Laplacian eigendecomposition as CSV");
  auto* em_pos = embed_cmd->add_option("--positions", em.positions, "layout file");
  auto* em_meas = embed_cmd->add_option("--measurements", em.measurements, "RSSI CSV");
  em_pos->excludes(em_meas);
  embed_cmd->add_option("--count", em.count, "leading eigenvectors to write (0 = all)");
  embed_cmd->add_option("--out", em.out, "output CSV; stdout when omitted");
  em.model.add(embed_cmd);

  InspectArgs ins;
  auto* inspect = app.add_subcommand("inspect", "eigenvector resolution diagnostics for a blueprint");
  inspect->add_option("--positions", ins.positions, "layout file")->required();
  inspect->add_option("--max-eigenvectors", ins.max_eigenvectors, "candidates to consider")->capture_default_str();
  inspect->add_option("--resolution", ins.resolution, "relative separation threshold")->capture_default_str();
  inspect->add_option("--format", ins.format, "json or csv")->check(CLI::IsMember({"csv", "json"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail(static_cast<int>(ErrorCode::invalid_argument), "usage", e.what());
  }

  try {
    if (*generate) return cmd_generate(gen);
    if (*simulate) return cmd_simulate(sim);
    if (*match_cmd) return cmd_match(match);
    if (*sweep) {
      if (!sw.preset && !sw.kind) throw Error(ErrorCode::invalid_argument, "sweep needs --preset or --kind");
      return cmd_sweep(sw);
    }
    if (*embed_cmd) {
      if (!em.positions && !em.measurements) {
        throw Error(ErrorCode::invalid_argument, "embed needs --positions or --measurements");
      }
      return cmd_embed(em);
    }
    if (*inspect) return cmd_inspect(ins);
  } catch (const Error& e) {
    return fail(static_cast<int>(e.code()), to_string(e.code()), e.what());
  } catch (const std::exception& e) {
    return fail(1, "internal", e.what());
  }
  return 0;
}
