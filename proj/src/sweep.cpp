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

#include "vq360/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <memory>
#include <mutex>

#include "parallel.hpp"
#include "vq360/errors.hpp"
#include "vq360/metrics.hpp"
#include "vq360/subprocess.hpp"
#include "vq360/video_io.hpp"
#include "vq360/vmaf.hpp"

namespace vq360 {

namespace {

void require_qp(int qp) {
  if (qp < 1 || qp > 51) {
    throw InvalidArgument("QP must be in [1, 51], got " + std::to_string(qp));
  }
}

void require_qp_range(const SweepConfig& config) {
  if (config.qp_min < 1 || config.qp_min > config.qp_max || config.qp_max > 51) {
    throw InvalidArgument("QP range must satisfy 1 <= min <= max <= 51, got " +
                          std::to_string(config.qp_min) + ".." +
                          std::to_string(config.qp_max));
  }
}

}  // namespace

EncodedPvs encode_pvs(const std::string& src_path, int qp,
                      const std::string& encoder_template,
                      const std::string& work_dir, const std::string& content_id,
                      double duration_seconds, const std::string& output_suffix) {
  require_qp(qp);
  if (!std::filesystem::exists(src_path)) {
    throw InvalidArgument("source does not exist: " + src_path);
  }
  if (duration_seconds <= 0.0) {
    throw InvalidArgument("clip duration must be positive");
  }
  std::filesystem::create_directories(work_dir);
  const std::filesystem::path out =
      std::filesystem::path(work_dir) /
      (content_id + "_qp" + std::to_string(qp) + output_suffix);

  const std::string command =
      substitute_template(encoder_template, {{"in", shell_quote(src_path)},
                                             {"out", shell_quote(out.string())},
                                             {"qp", std::to_string(qp)}});
  const CommandResult result = run_command(command);
  if (result.exit_code != 0) {
    throw EncodeError("encoder exited " + std::to_string(result.exit_code) +
                      " for: " + command + "\n" + result.output);
  }
  std::error_code ec;
  const auto size = std::filesystem::file_size(out, ec);
  if (ec || size == 0) {
    throw EncodeError("encoder exited 0 but produced no output at " +
                      out.string());
  }
  const double bitrate =
      static_cast<double>(size) * 8.0 / duration_seconds;
  return EncodedPvs{out.string(), bitrate};
}

Scorer make_scorer(const SweepConfig& config) {
  if (config.metric == "vmaf") {
    if (config.vmaf_template.empty()) {
      throw InvalidArgument("vmaf metric needs a scoring command template");
    }
    const std::string tmpl = config.vmaf_template;
    const std::string log_dir = config.work_dir;
    return [tmpl, log_dir](const std::string& ref, const std::string& dist) {
      VmafRun run;
      run.reference_path = ref;
      run.distorted_path = dist;
      run.command_template = tmpl;
      run.log_dir = log_dir;
      return run_vmaf(run).pooled;
    };
  }
  if (config.metric == "psnr") {
    return [](const std::string& ref, const std::string& dist) {
      return pool_mean(psnr_frames(read_y4m_file(ref), read_y4m_file(dist)));
    };
  }
  if (config.metric == "ws_psnr") {
    return [](const std::string& ref, const std::string& dist) {
      return pool_mean(ws_psnr_frames(read_y4m_file(ref), read_y4m_file(dist)));
    };
  }
  if (config.metric == "s_psnr") {
    // The lattice depends only on the configured count; share it across
    // every scoring call.
    auto samples = std::make_shared<std::vector<SpherePoint>>(
        sphere_sample_set(config.sphere_samples));
    return [samples](const std::string& ref, const std::string& dist) {
      return s_psnr(read_y4m_file(ref), read_y4m_file(dist), *samples);
    };
  }
  throw InvalidArgument("unknown metric '" + config.metric +
                        "' (expected vmaf, psnr, ws_psnr, or s_psnr)");
}

namespace {

struct JobResult {
  bool ok = false;
  CurvePoint point;
  std::string error;
};

/// Encode + score one (source, qp) cell; never throws.
JobResult run_job(const SweepSource& source, int qp, const SweepConfig& config,
                  double duration_seconds, const Scorer& scorer) {
  JobResult r;
  try {
    EncodedPvs pvs =
        encode_pvs(source.path, qp, config.encoder_template, config.work_dir,
                   source.content_id, duration_seconds, config.output_suffix);
    const double score = scorer(source.path, pvs.path);
    r.point = CurvePoint{qp, score, pvs.bitrate_bps, pvs.path};
    r.ok = true;
  } catch (const std::exception& e) {
    // Workers must not throw; failures become recorded holes.
    r.error = e.what();
  }
  return r;
}

QualityCurve assemble_curve(const SweepSource& source, const SweepConfig& config,
                            const std::vector<JobResult>& results) {
  QualityCurve curve;
  curve.content_id = source.content_id;
  for (std::size_t i = 0; i < results.size(); ++i) {
    const int qp = config.qp_min + static_cast<int>(i);
    if (results[i].ok) {
      curve.points.emplace(qp, results[i].point);
    } else {
      curve.holes.push_back(CurveHole{qp, results[i].error});
    }
  }
  if (curve.points.empty()) {
    throw CurveError("every QP failed for content '" + source.content_id +
                     "'; first error: " + curve.holes.front().error);
  }
  return curve;
}

}  // namespace

QualityCurve build_curve(const SweepSource& source, const SweepConfig& config) {
  require_qp_range(config);
  const double duration = probe_y4m_file(source.path).duration_seconds();
  const Scorer scorer = make_scorer(config);
  const std::size_t n = static_cast<std::size_t>(config.qp_max - config.qp_min + 1);
  std::vector<JobResult> results(n);
  detail::for_each_index(n, config.parallelism, [&](std::size_t i) {
    results[i] =
        run_job(source, config.qp_min + static_cast<int>(i), config, duration,
                scorer);
  });
  return assemble_curve(source, config, results);
}

std::vector<QualityCurve> build_curves(const SweepConfig& config) {
  require_qp_range(config);
  if (config.sources.empty()) {
    throw InvalidArgument("sweep needs at least one source");
  }
  std::vector<double> durations;
  durations.reserve(config.sources.size());
  for (const SweepSource& s : config.sources) {
    durations.push_back(probe_y4m_file(s.path).duration_seconds());
  }
  const Scorer scorer = make_scorer(config);

  // One flat job grid so a single worker pool covers all sources.
  const std::size_t per_source =
      static_cast<std::size_t>(config.qp_max - config.qp_min + 1);
  const std::size_t total = per_source * config.sources.size();
  std::vector<JobResult> results(total);
  detail::for_each_index(total, config.parallelism, [&](std::size_t i) {
    const std::size_t s = i / per_source;
    const int qp = config.qp_min + static_cast<int>(i % per_source);
    results[i] = run_job(config.sources[s], qp, config, durations[s], scorer);
  });

  std::vector<QualityCurve> curves;
  curves.reserve(config.sources.size());
  for (std::size_t s = 0; s < config.sources.size(); ++s) {
    const std::vector<JobResult> slice(
        results.begin() + static_cast<std::ptrdiff_t>(s * per_source),
        results.begin() + static_cast<std::ptrdiff_t>((s + 1) * per_source));
    curves.push_back(assemble_curve(config.sources[s], config, slice));
  }
  return curves;
}

std::vector<MonotoneViolation> check_monotone(const QualityCurve& curve,
                                              double epsilon) {
  if (curve.points.size() < 2) {
    throw InvalidArgument("monotonicity needs at least 2 points, got " +
                          std::to_string(curve.points.size()));
  }
  std::vector<MonotoneViolation> violations;
  auto prev = curve.points.begin();
  for (auto it = std::next(prev); it != curve.points.end(); ++it, ++prev) {
    const double delta = it->second.score - prev->second.score;
    if (delta > epsilon) {
      violations.push_back(MonotoneViolation{prev->first, it->first, delta});
    }
  }
  return violations;
}

CurvePoint select_anchor(const QualityCurve& curve, double target) {
  if (curve.points.empty()) {
    throw InvalidArgument("cannot select an anchor from an empty curve");
  }
  const CurvePoint* best = nullptr;
  double best_distance = 0.0;
  for (const auto& [qp, point] : curve.points) {
    const double distance = std::abs(point.score - target);
    // Strict comparison keeps the first (lowest-QP) point on ties.
    if (best == nullptr || distance < best_distance) {
      best = &point;
      best_distance = distance;
    }
  }
  return *best;
}

CurvePoint select_reference(const QualityCurve& curve, double min_score,
                            std::optional<double> bitrate_hint) {
  if (curve.points.empty()) {
    throw InvalidArgument("cannot select a reference from an empty curve");
  }
  const CurvePoint* best = nullptr;
  double best_distance = 0.0;
  double max_score = curve.points.begin()->second.score;
  for (const auto& [qp, point] : curve.points) {
    max_score = std::max(max_score, point.score);
    if (point.score < min_score) {
      continue;
    }
    if (!bitrate_hint) {
      // No hint: the highest-QP (cheapest) qualifying point.
      best = &point;
      continue;
    }
    const double distance = std::abs(point.bitrate_bps - *bitrate_hint);
    // <= keeps the later (higher-QP, cheaper) point on bitrate ties.
    if (best == nullptr || distance <= best_distance) {
      best = &point;
      best_distance = distance;
    }
  }
  if (best == nullptr) {
    throw NoReferenceError("no point reaches the reference threshold " +
                               std::to_string(min_score) + "; best score is " +
                               std::to_string(max_score),
                           max_score);
  }
  return *best;
}

AnchorSet select_anchor_set(const QualityCurve& curve,
                            const std::vector<double>& targets, double min_score,
                            std::optional<double> bitrate_hint) {
  if (targets.empty() || targets.size() > 25) {
    throw InvalidArgument("anchor target count must be in [1, 25], got " +
                          std::to_string(targets.size()));
  }
  const CurvePoint reference = select_reference(curve, min_score, bitrate_hint);

  AnchorSet set;
  set.content_id = curve.content_id;
  set.reference_qp = reference.qp;
  set.reference_score = reference.score;

  std::vector<int> used_qps{reference.qp};
  double previous_score = reference.score;
  for (std::size_t i = 0; i < targets.size(); ++i) {
    const CurvePoint pick = select_anchor(curve, targets[i]);
    const std::string label(1, static_cast<char>('B' + i));
    if (std::find(used_qps.begin(), used_qps.end(), pick.qp) != used_qps.end()) {
      throw DegenerateAnchors("target " + std::to_string(targets[i]) +
                              " collapses onto already-used QP " +
                              std::to_string(pick.qp) + " for content '" +
                              curve.content_id + "'");
    }
    if (pick.score >= previous_score) {
      throw DegenerateAnchors("achieved scores not strictly decreasing at label " +
                              label + " (QP " + std::to_string(pick.qp) +
                              ") for content '" + curve.content_id + "'");
    }
    used_qps.push_back(pick.qp);
    previous_score = pick.score;
    set.anchors.push_back(AnchorChoice{label, targets[i], pick.qp, pick.score});
  }
  return set;
}

nlohmann::ordered_json curve_to_json(const QualityCurve& curve) {
  nlohmann::ordered_json j;
  j["content"] = curve.content_id;
  j["points"] = nlohmann::ordered_json::array();
  for (const auto& [qp, point] : curve.points) {
    j["points"].push_back({{"qp", qp},
                           {"score", point.score},
                           {"bitrate", point.bitrate_bps},
                           {"path", point.pvs_path}});
  }
  j["holes"] = nlohmann::ordered_json::array();
  for (const CurveHole& hole : curve.holes) {
    j["holes"].push_back({{"qp", hole.qp}, {"error", hole.error}});
  }
  return j;
}

nlohmann::ordered_json curves_to_json(const std::vector<QualityCurve>& curves) {
  nlohmann::ordered_json j = nlohmann::ordered_json::array();
  for (const QualityCurve& curve : curves) {
    j.push_back(curve_to_json(curve));
  }
  return j;
}

namespace {

template <typename T>
T field(const nlohmann::json& j, const char* key) {
  if (!j.contains(key)) {
    throw ParseError(std::string("missing field '") + key + "' in " + j.dump());
  }
  try {
    return j[key].get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ParseError(std::string("field '") + key + "' has the wrong type in " +
                     j.dump());
  }
}

}  // namespace

QualityCurve curve_from_json(const nlohmann::json& j) {
  QualityCurve curve;
  curve.content_id = field<std::string>(j, "content");
  for (const auto& p : field<nlohmann::json>(j, "points")) {
    CurvePoint point;
    point.qp = field<int>(p, "qp");
    point.score = field<double>(p, "score");
    point.bitrate_bps = p.contains("bitrate") ? field<double>(p, "bitrate") : 0.0;
    point.pvs_path = p.contains("path") ? field<std::string>(p, "path") : "";
    if (!curve.points.emplace(point.qp, point).second) {
      throw ParseError("duplicate QP " + std::to_string(point.qp) +
                       " in curve '" + curve.content_id + "'");
    }
  }
  if (j.contains("holes")) {
    for (const auto& h : j["holes"]) {
      curve.holes.push_back(
          CurveHole{field<int>(h, "qp"), field<std::string>(h, "error")});
    }
  }
  return curve;
}

std::vector<QualityCurve> curves_from_json(const nlohmann::json& j) {
  if (!j.is_array()) {
    throw ParseError("curve list must be a JSON array");
  }
  std::vector<QualityCurve> curves;
  curves.reserve(j.size());
  for (const auto& c : j) {
    curves.push_back(curve_from_json(c));
  }
  return curves;
}

nlohmann::ordered_json anchor_set_to_json(const AnchorSet& set) {
  nlohmann::ordered_json j;
  j["content"] = set.content_id;
  j["reference"] = {{"label", "A"},
                    {"qp", set.reference_qp},
                    {"score", set.reference_score}};
  j["anchors"] = nlohmann::ordered_json::array();
  for (const AnchorChoice& a : set.anchors) {
    j["anchors"].push_back({{"label", a.label},
                            {"target", a.target},
                            {"qp", a.qp},
                            {"score", a.score}});
  }
  return j;
}

AnchorSet anchor_set_from_json(const nlohmann::json& j) {
  AnchorSet set;
  set.content_id = field<std::string>(j, "content");
  const nlohmann::json ref = field<nlohmann::json>(j, "reference");
  set.reference_qp = field<int>(ref, "qp");
  set.reference_score = field<double>(ref, "score");
  for (const auto& a : field<nlohmann::json>(j, "anchors")) {
    set.anchors.push_back(AnchorChoice{field<std::string>(a, "label"),
                                       field<double>(a, "target"),
                                       field<int>(a, "qp"),
                                       field<double>(a, "score")});
  }
  return set;
}

}  // namespace vq360
