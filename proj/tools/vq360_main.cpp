// Copyright 2026 The vq360 Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "vq360/errors.hpp"
#include "vq360/metrics.hpp"
#include "vq360/playlist.hpp"
#include "vq360/report.hpp"
#include "vq360/subjective.hpp"
#include "vq360/sweep.hpp"
#include "vq360/video_io.hpp"

namespace {

using vq360::Error;
using vq360::ParseError;

// ---------------------------------------------------------------------
// Configuration file + precedence (flags > environment > config file).

std::map<std::string, std::string> load_config(const std::string& path) {
  std::map<std::string, std::string> values;
  if (path.empty()) {
    return values;
  }
  std::ifstream in(path);
  if (!in) {
    throw ParseError("cannot open config file " + path);
  }
  const auto trim = [](std::string s) {
    const auto begin = s.find_first_not_of(" \t");
    const auto end = s.find_last_not_of(" \t\r");
    return begin == std::string::npos ? std::string()
                                      : s.substr(begin, end - begin + 1);
  };
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') {
      continue;
    }
    const auto eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw ParseError(path + " line " + std::to_string(line_no) +
                       ": expected 'key = value'");
    }
    values[trim(stripped.substr(0, eq))] = trim(stripped.substr(eq + 1));
  }
  return values;
}

void value_from_string(const std::string& raw, std::string& out) { out = raw; }

void value_from_string(const std::string& raw, int& out) {
  std::size_t pos = 0;
  out = std::stoi(raw, &pos);
  if (pos != raw.size()) {
    throw std::invalid_argument(raw);
  }
}

void value_from_string(const std::string& raw, std::uint64_t& out) {
  std::size_t pos = 0;
  out = std::stoull(raw, &pos);
  if (pos != raw.size()) {
    throw std::invalid_argument(raw);
  }
}

void value_from_string(const std::string& raw, double& out) {
  std::size_t pos = 0;
  out = std::stod(raw, &pos);
  if (pos != raw.size()) {
    throw std::invalid_argument(raw);
  }
}

void value_from_string(const std::string& raw, std::vector<std::string>& out) {
  out.clear();
  std::stringstream ss(raw);
  std::string item;
  while (std::getline(ss, item, ',')) {
    out.push_back(item);
  }
}

/// Applies the documented precedence to one option after parsing: a flag
/// given on the command line wins; otherwise the environment variable
/// (when one is documented for the option); otherwise the config file.
/// Config keys are the long flag names without the leading dashes.
struct Resolver {
  const std::map<std::string, std::string>& config;

  template <typename T>
  void operator()(const CLI::App* sc, const std::string& key, T& value,
                  const char* env_name = nullptr) const {
    if (sc->get_option("--" + key)->count() > 0) {
      return;
    }
    std::string raw;
    bool found = false;
    if (env_name != nullptr) {
      if (const char* env = std::getenv(env_name); env != nullptr && *env != '\0') {
        raw = env;
        found = true;
      }
    }
    if (!found) {
      const auto it = config.find(key);
      if (it == config.end()) {
        return;
      }
      raw = it->second;
    }
    try {
      value_from_string(raw, value);
    } catch (const std::logic_error&) {
      throw ParseError("config value for '" + key + "' is malformed: " + raw);
    }
  }
};

// ---------------------------------------------------------------------
// Small shared helpers.

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) {
    parts.push_back(item);
  }
  return parts;
}

std::pair<int, int> parse_qp_range(const std::string& raw) {
  const auto parts = split(raw, ':');
  try {
    if (parts.size() == 2) {
      return {std::stoi(parts[0]), std::stoi(parts[1])};
    }
  } catch (const std::logic_error&) {
  }
  throw ParseError("QP range must look like '1:51', got '" + raw + "'");
}

std::vector<double> parse_double_list(const std::string& raw) {
  std::vector<double> values;
  for (const std::string& part : split(raw, ',')) {
    try {
      values.push_back(std::stod(part));
    } catch (const std::logic_error&) {
      throw ParseError("malformed number '" + part + "' in list '" + raw + "'");
    }
  }
  return values;
}

void emit(const std::string& out_path, const std::string& content) {
  if (out_path.empty() || out_path == "-") {
    std::cout << content;
  } else {
    vq360::write_text_file(out_path, content);
  }
}

nlohmann::json load_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ParseError("cannot open " + path);
  }
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path + " is not valid JSON: " + e.what());
  }
}

std::vector<vq360::QualityCurve> load_curves(const std::string& path) {
  const nlohmann::json j = load_json_file(path);
  if (j.is_array()) {
    return vq360::curves_from_json(j);
  }
  return {vq360::curve_from_json(j)};
}

std::vector<vq360::AnchorSet> load_anchor_sets(const std::string& path) {
  const nlohmann::json j = load_json_file(path);
  std::vector<vq360::AnchorSet> sets;
  if (j.is_array()) {
    for (const auto& item : j) {
      sets.push_back(vq360::anchor_set_from_json(item));
    }
  } else {
    sets.push_back(vq360::anchor_set_from_json(j));
  }
  return sets;
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() &&
         s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

// ---------------------------------------------------------------------
// Subcommand: sweep

struct SweepArgs {
  std::vector<std::string> srcs;
  std::vector<std::string> contents;
  std::string qp_range = "1:51";
  std::string metric = "vmaf";
  std::string encoder_cmd;
  std::string vmaf_cmd;
  std::string work_dir = "vq360_work";
  std::string suffix = ".hevc";
  int parallelism = 0;
  int sphere_samples = 65536;
  double monotone_epsilon = -1.0;
  std::string out = "-";
};

CLI::App* add_sweep(CLI::App& app, SweepArgs& a) {
  CLI::App* sc = app.add_subcommand(
      "sweep", "Encode sources across a QP range and build quality curves");
  sc->add_option("--src", a.srcs, "Source clip path (Y4M), repeatable");
  sc->add_option("--content", a.contents,
                 "Content id per source (defaults to the file stem), repeatable");
  sc->add_option("--qp", a.qp_range, "Inclusive QP range min:max")
      ->capture_default_str();
  sc->add_option("--metric", a.metric,
                 "Scoring metric: vmaf, psnr, ws_psnr, s_psnr")
      ->capture_default_str();
  sc->add_option(
      "--encoder-cmd", a.encoder_cmd,
      "Encoder command template with {in} {out} {qp} (env VQ360_ENCODER_CMD)");
  sc->add_option(
      "--vmaf-cmd", a.vmaf_cmd,
      "Scoring command template with {ref} {dist} {log} (env VQ360_VMAF_CMD)");
  sc->add_option("--work-dir", a.work_dir,
                 "Directory for encoded PVSs and temp logs (env VQ360_TMPDIR)")
      ->capture_default_str();
  sc->add_option("--suffix", a.suffix, "Container suffix for encoder outputs")
      ->capture_default_str();
  sc->add_option("--parallelism", a.parallelism, "Worker count (0 = logical CPUs)")
      ->capture_default_str();
  sc->add_option("--sphere-samples", a.sphere_samples,
                 "Sphere sample count for s_psnr")
      ->capture_default_str();
  sc->add_option("--monotone-epsilon", a.monotone_epsilon,
                 "Also check curve monotonicity with this tolerance and print "
                 "violations to stderr");
  sc->add_option("--out", a.out, "Curve JSON output path (- = stdout)")
      ->capture_default_str();
  return sc;
}

int run_sweep(SweepArgs& a, const CLI::App* sc, const Resolver& resolve) {
  resolve(sc, "src", a.srcs);
  resolve(sc, "content", a.contents);
  resolve(sc, "qp", a.qp_range);
  resolve(sc, "metric", a.metric);
  resolve(sc, "encoder-cmd", a.encoder_cmd, "VQ360_ENCODER_CMD");
  resolve(sc, "vmaf-cmd", a.vmaf_cmd, "VQ360_VMAF_CMD");
  resolve(sc, "work-dir", a.work_dir, "VQ360_TMPDIR");
  resolve(sc, "suffix", a.suffix);
  resolve(sc, "parallelism", a.parallelism);
  resolve(sc, "sphere-samples", a.sphere_samples);
  resolve(sc, "out", a.out);
  if (a.srcs.empty()) {
    throw vq360::InvalidArgument(
        "at least one source is required (--src or config src)");
  }

  if (a.encoder_cmd.empty()) {
    throw vq360::InvalidArgument(
        "an encoder command template is required (--encoder-cmd, "
        "VQ360_ENCODER_CMD, or config encoder-cmd)");
  }

  vq360::SweepConfig config;
  const auto [qp_min, qp_max] = parse_qp_range(a.qp_range);
  config.qp_min = qp_min;
  config.qp_max = qp_max;
  config.metric = a.metric;
  config.encoder_template = a.encoder_cmd;
  config.vmaf_template = a.vmaf_cmd;
  config.work_dir = a.work_dir;
  config.output_suffix = a.suffix;
  config.parallelism = a.parallelism > 0
                           ? a.parallelism
                           : static_cast<int>(std::thread::hardware_concurrency());
  config.sphere_samples = static_cast<std::size_t>(a.sphere_samples);
  if (!a.contents.empty() && a.contents.size() != a.srcs.size()) {
    throw vq360::InvalidArgument("--content count must match --src count");
  }
  for (std::size_t i = 0; i < a.srcs.size(); ++i) {
    const std::string content =
        i < a.contents.size() ? a.contents[i]
                              : std::filesystem::path(a.srcs[i]).stem().string();
    config.sources.push_back(vq360::SweepSource{content, a.srcs[i]});
  }

  const std::vector<vq360::QualityCurve> curves = vq360::build_curves(config);
  if (a.monotone_epsilon >= 0.0) {
    for (const vq360::QualityCurve& curve : curves) {
      for (const vq360::MonotoneViolation& v :
           vq360::check_monotone(curve, a.monotone_epsilon)) {
        std::cerr << "monotonicity violation in '" << curve.content_id
                  << "': score rises by " << v.delta << " from QP " << v.qp_a
                  << " to QP " << v.qp_b << "\n";
      }
    }
  }
  emit(a.out, vq360::curves_to_json(curves).dump(2) + "\n");
  return 0;
}

// ---------------------------------------------------------------------
// Subcommand: metric

struct MetricArgs {
  std::string ref;
  std::string dist;
  std::string metric;
  int sphere_samples = 65536;
  int width = 0;
  int height = 0;
  int bit_depth = 8;
  int max_frames = 0;
  int threads = 1;
  std::string per_frame_out;
  std::string out = "-";
};

CLI::App* add_metric(CLI::App& app, MetricArgs& a) {
  CLI::App* sc = app.add_subcommand(
      "metric", "Score a reference/distorted pair with an in-house metric");
  sc->add_option("--ref", a.ref, "Reference clip (Y4M, or raw with --width/--height)");
  sc->add_option("--dist", a.dist, "Distorted clip (unused for si/ti)");
  sc->add_option("--metric", a.metric, "psnr, ws_psnr, s_psnr, si, or ti");
  sc->add_option("--sphere-samples", a.sphere_samples,
                 "Sphere sample count for s_psnr")
      ->capture_default_str();
  sc->add_option("--width", a.width, "Raw input width (required for .yuv)");
  sc->add_option("--height", a.height, "Raw input height (required for .yuv)");
  sc->add_option("--bit-depth", a.bit_depth, "Raw input bit depth (8 or 10)")
      ->capture_default_str();
  sc->add_option("--frames", a.max_frames, "Read at most this many frames");
  sc->add_option("--threads", a.threads, "Frame-scoring worker count")
      ->capture_default_str();
  sc->add_option("--per-frame", a.per_frame_out, "Per-frame CSV output path");
  sc->add_option("--out", a.out, "Pooled CSV output path (- = stdout)")
      ->capture_default_str();
  return sc;
}

vq360::Video load_clip(const MetricArgs& a, const std::string& path) {
  const std::size_t max_frames = a.max_frames > 0
                                     ? static_cast<std::size_t>(a.max_frames)
                                     : vq360::kAllFrames;
  if (ends_with(path, ".y4m")) {
    return vq360::read_y4m_file(path, max_frames);
  }
  if (a.width <= 0 || a.height <= 0) {
    throw vq360::InvalidArgument(
        "raw input needs --width and --height (only .y4m is self-describing)");
  }
  return vq360::read_raw_yuv(path, a.width, a.height, a.bit_depth, max_frames);
}

int run_metric(MetricArgs& a, const CLI::App* sc, const Resolver& resolve) {
  resolve(sc, "ref", a.ref);
  resolve(sc, "dist", a.dist);
  resolve(sc, "metric", a.metric);
  resolve(sc, "sphere-samples", a.sphere_samples);
  resolve(sc, "width", a.width);
  resolve(sc, "height", a.height);
  resolve(sc, "bit-depth", a.bit_depth);
  resolve(sc, "frames", a.max_frames);
  resolve(sc, "threads", a.threads);
  resolve(sc, "per-frame", a.per_frame_out);
  resolve(sc, "out", a.out);
  if (a.ref.empty() || a.metric.empty()) {
    throw vq360::InvalidArgument("--ref and --metric are required");
  }
  const vq360::Video ref = load_clip(a, a.ref);
  std::vector<double> frames;
  double pooled = 0.0;
  std::size_t frame_count = ref.frame_count();

  if (a.metric == "si") {
    pooled = vq360::si(ref);
  } else if (a.metric == "ti") {
    pooled = vq360::ti(ref);
  } else {
    if (a.dist.empty()) {
      throw vq360::InvalidArgument("--dist is required for " + a.metric);
    }
    const vq360::Video dist = load_clip(a, a.dist);
    if (a.metric == "psnr") {
      frames = vq360::psnr_frames(ref, dist, vq360::kPsnrCap, a.threads);
    } else if (a.metric == "ws_psnr") {
      frames = vq360::ws_psnr_frames(ref, dist, vq360::kPsnrCap, a.threads);
    } else if (a.metric == "s_psnr") {
      const auto samples =
          vq360::sphere_sample_set(static_cast<std::size_t>(a.sphere_samples));
      frames = vq360::s_psnr_frames(ref, dist, samples, vq360::kPsnrCap, a.threads);
    } else {
      throw vq360::InvalidArgument("unknown metric '" + a.metric +
                                   "' (expected psnr, ws_psnr, s_psnr, si, ti)");
    }
    pooled = vq360::pool_mean(frames);
  }

  if (!a.per_frame_out.empty()) {
    if (frames.empty()) {
      throw vq360::InvalidArgument("per-frame output is not defined for " +
                                   a.metric);
    }
    vq360::write_text_file(a.per_frame_out,
                           vq360::frame_scores_csv(a.metric, frames));
  }
  emit(a.out, vq360::pooled_score_csv(a.metric, pooled, frame_count));
  return 0;
}

// ---------------------------------------------------------------------
// Subcommand: anchors

struct AnchorArgs {
  std::string curves_path;
  std::string targets = "90,80,70,50,30";
  double min_score = 92.0;
  double bitrate_hint = -1.0;
  std::string out = "-";
};

CLI::App* add_anchors(CLI::App& app, AnchorArgs& a) {
  CLI::App* sc = app.add_subcommand(
      "anchors", "Select the reference and anchor PVSs from quality curves");
  sc->add_option("--curves", a.curves_path, "Curve JSON from the sweep");
  sc->add_option("--targets", a.targets, "Anchor target scores, best first")
      ->capture_default_str();
  sc->add_option("--min-score", a.min_score, "Reference qualification threshold")
      ->capture_default_str();
  sc->add_option("--bitrate-hint", a.bitrate_hint,
                 "Prefer the qualifying point with bitrate closest to this");
  sc->add_option("--out", a.out, "Anchor JSON output path (- = stdout)")
      ->capture_default_str();
  return sc;
}

int run_anchors(AnchorArgs& a, const CLI::App* sc, const Resolver& resolve) {
  resolve(sc, "curves", a.curves_path);
  resolve(sc, "targets", a.targets);
  resolve(sc, "min-score", a.min_score);
  resolve(sc, "bitrate-hint", a.bitrate_hint);
  resolve(sc, "out", a.out);
  if (a.curves_path.empty()) {
    throw vq360::InvalidArgument("--curves is required");
  }
  const std::vector<vq360::QualityCurve> curves = load_curves(a.curves_path);
  const std::vector<double> targets = parse_double_list(a.targets);
  const std::optional<double> hint =
      a.bitrate_hint >= 0.0 ? std::optional<double>(a.bitrate_hint) : std::nullopt;
  nlohmann::ordered_json out = nlohmann::ordered_json::array();
  for (const vq360::QualityCurve& curve : curves) {
    out.push_back(vq360::anchor_set_to_json(
        vq360::select_anchor_set(curve, targets, a.min_score, hint)));
  }
  emit(a.out, out.dump(2) + "\n");
  return 0;
}

// ---------------------------------------------------------------------
// Subcommands: mos / dmos / screen

struct VotesArgs {
  std::string votes_path;
  double threshold = 0.75;
  std::string out = "-";
};

CLI::App* add_votes_command(CLI::App& app, const std::string& name,
                            const std::string& description, VotesArgs& a,
                            bool with_threshold) {
  CLI::App* sc = app.add_subcommand(name, description);
  sc->add_option("--votes", a.votes_path, "Vote CSV path");
  if (with_threshold) {
    sc->add_option("--threshold", a.threshold, "Flag subjects with r below this")
        ->capture_default_str();
  }
  sc->add_option("--out", a.out, "CSV output path (- = stdout)")
      ->capture_default_str();
  return sc;
}

void resolve_votes(VotesArgs& a, const CLI::App* sc, const Resolver& resolve,
                   bool with_threshold) {
  resolve(sc, "votes", a.votes_path);
  if (with_threshold) {
    resolve(sc, "threshold", a.threshold);
  }
  resolve(sc, "out", a.out);
  if (a.votes_path.empty()) {
    throw vq360::InvalidArgument("--votes is required");
  }
}

std::vector<std::pair<std::string, std::string>> cells_of(
    std::span<const vq360::Vote> votes) {
  std::map<std::string, std::map<std::string, bool>> seen;
  for (const vq360::Vote& v : votes) {
    seen[v.content_id][v.quality_label] = true;
  }
  std::vector<std::pair<std::string, std::string>> cells;
  for (const auto& [content, labels] : seen) {
    for (const auto& [label, unused] : labels) {
      cells.emplace_back(content, label);
    }
  }
  return cells;
}

int run_mos(VotesArgs& a, const CLI::App* sc, const Resolver& resolve) {
  resolve_votes(a, sc, resolve, false);
  const std::vector<vq360::Vote> votes = vq360::parse_votes_csv_file(a.votes_path);
  std::vector<vq360::MosResult> rows;
  for (const auto& [content, label] : cells_of(votes)) {
    rows.push_back(vq360::mos(votes, content, label));
  }
  emit(a.out, vq360::mos_table_csv(rows));
  return 0;
}

int run_dmos(VotesArgs& a, const CLI::App* sc, const Resolver& resolve) {
  resolve_votes(a, sc, resolve, false);
  const std::vector<vq360::Vote> votes = vq360::parse_votes_csv_file(a.votes_path);
  std::vector<vq360::DmosResult> rows;
  for (const auto& [content, label] : cells_of(votes)) {
    rows.push_back(vq360::dmos(votes, content, label));
  }
  emit(a.out, vq360::dmos_table_csv(rows));
  return 0;
}

int run_screen(VotesArgs& a, const CLI::App* sc, const Resolver& resolve) {
  resolve_votes(a, sc, resolve, true);
  const std::vector<vq360::Vote> votes = vq360::parse_votes_csv_file(a.votes_path);
  emit(a.out, vq360::screening_csv(vq360::screen_subjects(votes, a.threshold)));
  return 0;
}

// ---------------------------------------------------------------------
// Subcommand: agree

struct AgreeArgs {
  std::string votes_path;
  std::string anchors_path;
  std::string normalization = "proportional";
  double affine_floor_in = 1.0;
  double affine_floor_out = 0.0;
  std::string dmos_out;
  std::string out = "-";
};

CLI::App* add_agree(CLI::App& app, AgreeArgs& a) {
  CLI::App* sc = app.add_subcommand(
      "agree",
      "Objective/subjective agreement (PLCC, RMSE) from votes and anchors");
  sc->add_option("--votes", a.votes_path, "Vote CSV path");
  sc->add_option("--anchors", a.anchors_path, "Anchor JSON from 'anchors'");
  sc->add_option("--normalization", a.normalization,
                 "DMOS normalization: proportional or affine")
      ->capture_default_str();
  sc->add_option("--affine-floor-in", a.affine_floor_in,
                 "Affine mode: DMOS pinned to the floor score")
      ->capture_default_str();
  sc->add_option("--affine-floor-out", a.affine_floor_out,
                 "Affine mode: score the floor DMOS maps to")
      ->capture_default_str();
  sc->add_option("--dmos-out", a.dmos_out,
                 "Also write normalized DMOS per anchor as CSV "
                 "(content,quality,qp,dmos_norm)");
  sc->add_option("--out", a.out, "Agreement CSV output path (- = stdout)")
      ->capture_default_str();
  return sc;
}

int run_agree(AgreeArgs& a, const CLI::App* sc, const Resolver& resolve) {
  resolve(sc, "votes", a.votes_path);
  resolve(sc, "anchors", a.anchors_path);
  resolve(sc, "normalization", a.normalization);
  resolve(sc, "affine-floor-in", a.affine_floor_in);
  resolve(sc, "affine-floor-out", a.affine_floor_out);
  resolve(sc, "dmos-out", a.dmos_out);
  resolve(sc, "out", a.out);
  if (a.votes_path.empty() || a.anchors_path.empty()) {
    throw vq360::InvalidArgument("--votes and --anchors are required");
  }
  const std::vector<vq360::Vote> votes = vq360::parse_votes_csv_file(a.votes_path);
  const std::vector<vq360::AnchorSet> sets = load_anchor_sets(a.anchors_path);
  const bool affine = a.normalization == "affine";
  if (!affine && a.normalization != "proportional") {
    throw vq360::InvalidArgument("normalization must be proportional or affine, got '" +
                                 a.normalization + "'");
  }

  std::ostringstream dmos_csv;
  dmos_csv << "content,quality,qp,dmos_norm\n";
  std::vector<vq360::AgreementInput> inputs;
  for (const vq360::AnchorSet& set : sets) {
    const double vmaf_ref = set.reference_score;
    const auto normalize = [&](double d) {
      return affine ? vq360::normalize_dmos_affine(d, vmaf_ref, a.affine_floor_in,
                                                   a.affine_floor_out)
                    : vq360::normalize_dmos(d, vmaf_ref);
    };
    vq360::AgreementInput input;
    input.content_id = set.content_id;
    const double ref_dmos =
        vq360::dmos(votes, set.content_id, "A").dmos;  // exactly 5
    dmos_csv << set.content_id << ",A," << set.reference_qp << ","
             << vq360::format_double(normalize(ref_dmos), 6) << "\n";
    for (const vq360::AnchorChoice& anchor : set.anchors) {
      const double d = vq360::dmos(votes, set.content_id, anchor.label).dmos;
      const double normalized = normalize(d);
      input.objective[anchor.label] = anchor.score;
      input.normalized_dmos[anchor.label] = normalized;
      dmos_csv << set.content_id << "," << anchor.label << "," << anchor.qp << ","
               << vq360::format_double(normalized, 6) << "\n";
    }
    inputs.push_back(std::move(input));
  }

  const std::vector<vq360::AgreementRow> rows = vq360::agreement_table(inputs);
  if (!a.dmos_out.empty()) {
    vq360::write_text_file(a.dmos_out, dmos_csv.str());
  }
  emit(a.out, vq360::agreement_csv(rows));
  return 0;
}

// ---------------------------------------------------------------------
// Subcommand: playlist

struct PlaylistArgs {
  std::string contents;
  std::string qualities = "A,B,C,D,E,F";
  std::string pool_path;
  std::uint64_t seed = 0;
  std::string session;
  std::string out = "-";
  std::string csv_out;
};

CLI::App* add_playlist(CLI::App& app, PlaylistArgs& a) {
  CLI::App* sc = app.add_subcommand(
      "playlist", "Generate a randomized session order without content repeats");
  sc->add_option("--contents", a.contents, "Comma-separated content ids");
  sc->add_option("--qualities", a.qualities, "Comma-separated quality labels")
      ->capture_default_str();
  sc->add_option("--pool", a.pool_path,
                 "Pool JSON path ({items:[{content,quality}]}) instead of "
                 "--contents x --qualities");
  sc->add_option("--seed", a.seed, "Randomization seed")->capture_default_str();
  sc->add_option("--session", a.session, "Session id (default s<seed>)");
  sc->add_option("--out", a.out, "Playlist JSON output path (- = stdout)")
      ->capture_default_str();
  sc->add_option("--csv-out", a.csv_out, "Also write the order as CSV");
  return sc;
}

int run_playlist(PlaylistArgs& a, const CLI::App* sc, const Resolver& resolve) {
  resolve(sc, "contents", a.contents);
  resolve(sc, "qualities", a.qualities);
  resolve(sc, "pool", a.pool_path);
  resolve(sc, "seed", a.seed);
  resolve(sc, "session", a.session);
  resolve(sc, "out", a.out);
  resolve(sc, "csv-out", a.csv_out);
  std::vector<vq360::PvsId> pool;
  if (!a.pool_path.empty()) {
    const nlohmann::json j = load_json_file(a.pool_path);
    if (!j.contains("items") || !j["items"].is_array()) {
      throw ParseError("pool JSON needs an items array");
    }
    for (const auto& item : j["items"]) {
      pool.push_back(vq360::PvsId{item.at("content").get<std::string>(),
                                  item.at("quality").get<std::string>()});
    }
  } else {
    if (a.contents.empty()) {
      throw vq360::InvalidArgument("either --pool or --contents is required");
    }
    for (const std::string& content : split(a.contents, ',')) {
      for (const std::string& quality : split(a.qualities, ',')) {
        pool.push_back(vq360::PvsId{content, quality});
      }
    }
  }
  const std::string session =
      a.session.empty() ? "s" + std::to_string(a.seed) : a.session;
  const vq360::Playlist playlist = vq360::generate_playlist(pool, a.seed, session);
  emit(a.out, vq360::playlist_to_json(playlist).dump(2) + "\n");
  if (!a.csv_out.empty()) {
    std::ostringstream csv;
    vq360::write_playlist_csv(playlist, csv);
    vq360::write_text_file(a.csv_out, csv.str());
  }
  return 0;
}

// ---------------------------------------------------------------------
// Subcommand: report

struct ReportArgs {
  std::string curves_path;
  std::string anchors_path;
  std::string dmos_path;
  std::string out_dir = ".";
};

CLI::App* add_report(CLI::App& app, ReportArgs& a) {
  CLI::App* sc = app.add_subcommand(
      "report", "Emit curve and comparison plots (SVG) with CSV twins");
  sc->add_option("--curves", a.curves_path, "Curve JSON from the sweep");
  sc->add_option("--anchors", a.anchors_path, "Anchor JSON to overlay");
  sc->add_option("--dmos", a.dmos_path,
                 "Normalized DMOS CSV (content,quality,qp,dmos_norm) for "
                 "per-content comparison plots");
  sc->add_option("--out-dir", a.out_dir, "Artifact directory")
      ->capture_default_str();
  return sc;
}

std::map<std::string, std::map<int, double>> load_dmos_csv(
    const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ParseError("cannot open " + path);
  }
  std::string line;
  if (!std::getline(in, line) ||
      (line != "content,quality,qp,dmos_norm" &&
       line != "content,quality,qp,dmos_norm\r")) {
    throw ParseError(path + " line 1: expected header content,quality,qp,dmos_norm");
  }
  std::map<std::string, std::map<int, double>> by_content;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') {
      line.pop_back();
    }
    if (line.empty()) {
      continue;
    }
    const auto fields = split(line, ',');
    if (fields.size() != 4) {
      throw ParseError(path + " line " + std::to_string(line_no) +
                       ": expected 4 fields");
    }
    try {
      by_content[fields[0]][std::stoi(fields[2])] = std::stod(fields[3]);
    } catch (const std::logic_error&) {
      throw ParseError(path + " line " + std::to_string(line_no) +
                       ": malformed number");
    }
  }
  return by_content;
}

int run_report(ReportArgs& a, const CLI::App* sc, const Resolver& resolve) {
  resolve(sc, "curves", a.curves_path);
  resolve(sc, "anchors", a.anchors_path);
  resolve(sc, "dmos", a.dmos_path);
  resolve(sc, "out-dir", a.out_dir);
  if (a.curves_path.empty()) {
    throw vq360::InvalidArgument("--curves is required");
  }
  const std::vector<vq360::QualityCurve> curves = load_curves(a.curves_path);
  std::vector<vq360::AnchorSet> anchors;
  if (!a.anchors_path.empty()) {
    anchors = load_anchor_sets(a.anchors_path);
  }
  std::filesystem::create_directories(a.out_dir);
  const auto path_in_dir = [&](const std::string& name) {
    return (std::filesystem::path(a.out_dir) / name).string();
  };

  const std::string svg_path = path_in_dir("curves.svg");
  vq360::write_text_file(svg_path, vq360::curve_plot_svg(curves, anchors));
  vq360::write_sidecar(svg_path, {{"source", a.curves_path}});
  const std::string csv_path = path_in_dir("curves.csv");
  vq360::write_text_file(csv_path, vq360::curve_plot_csv(curves));
  vq360::write_sidecar(csv_path, {{"source", a.curves_path}});

  if (!a.dmos_path.empty()) {
    const auto dmos_by_content = load_dmos_csv(a.dmos_path);
    for (const vq360::QualityCurve& curve : curves) {
      const auto it = dmos_by_content.find(curve.content_id);
      if (it == dmos_by_content.end()) {
        continue;
      }
      const std::string cmp_svg =
          path_in_dir("comparison_" + curve.content_id + ".svg");
      vq360::write_text_file(cmp_svg,
                             vq360::comparison_plot_svg(curve, it->second));
      vq360::write_sidecar(cmp_svg, {{"source", a.dmos_path}});
      const std::string cmp_csv =
          path_in_dir("comparison_" + curve.content_id + ".csv");
      vq360::write_text_file(cmp_csv,
                             vq360::comparison_plot_csv(curve, it->second));
      vq360::write_sidecar(cmp_csv, {{"source", a.dmos_path}});
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"360VR quality toolkit: QP sweep curves, sphere-aware metrics, "
               "and ACR-HR vote analysis"};
  app.require_subcommand(1);
  std::string config_path;
  app.add_option("--config", config_path,
                 "Key = value config file mirroring long flag names "
                 "(precedence: flags > environment > config)");

  SweepArgs sweep_args;
  MetricArgs metric_args;
  AnchorArgs anchor_args;
  VotesArgs mos_args;
  VotesArgs dmos_args;
  VotesArgs screen_args;
  AgreeArgs agree_args;
  PlaylistArgs playlist_args;
  ReportArgs report_args;

  CLI::App* sweep_cmd = add_sweep(app, sweep_args);
  CLI::App* metric_cmd = add_metric(app, metric_args);
  CLI::App* anchors_cmd = add_anchors(app, anchor_args);
  CLI::App* mos_cmd =
      add_votes_command(app, "mos", "Mean opinion scores per (content, quality)",
                        mos_args, false);
  CLI::App* dmos_cmd = add_votes_command(
      app, "dmos", "Differential MOS against the hidden reference", dmos_args,
      false);
  CLI::App* screen_cmd = add_votes_command(
      app, "screen", "Leave-one-out Pearson screening of subjects", screen_args,
      true);
  CLI::App* agree_cmd = add_agree(app, agree_args);
  CLI::App* playlist_cmd = add_playlist(app, playlist_args);
  CLI::App* report_cmd = add_report(app, report_args);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    std::cerr << "Run '" << (argc > 0 ? argv[0] : "vq360")
              << " --help' for usage.\n";
    return 2;
  }

  try {
    const std::map<std::string, std::string> config = load_config(config_path);
    const Resolver resolve{config};
    if (*sweep_cmd) {
      return run_sweep(sweep_args, sweep_cmd, resolve);
    }
    if (*metric_cmd) {
      return run_metric(metric_args, metric_cmd, resolve);
    }
    if (*anchors_cmd) {
      return run_anchors(anchor_args, anchors_cmd, resolve);
    }
    if (*mos_cmd) {
      return run_mos(mos_args, mos_cmd, resolve);
    }
    if (*dmos_cmd) {
      return run_dmos(dmos_args, dmos_cmd, resolve);
    }
    if (*screen_cmd) {
      return run_screen(screen_args, screen_cmd, resolve);
    }
    if (*agree_cmd) {
      return run_agree(agree_args, agree_cmd, resolve);
    }
    if (*playlist_cmd) {
      return run_playlist(playlist_args, playlist_cmd, resolve);
    }
    if (*report_cmd) {
      return run_report(report_args, report_cmd, resolve);
    }
    std::cerr << "no subcommand selected\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
}
