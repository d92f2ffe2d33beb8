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

#ifndef VQ360_SWEEP_HPP_
#define VQ360_SWEEP_HPP_

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace vq360 {

struct SweepSource {
  std::string content_id;
  std::string path;
};

/// Encode/measure sweep configuration. The encoder template receives
/// {in} {out} {qp}; the scoring side is either the external tool template
/// ({ref} {dist} {log}) or one of the in-house metrics, in which case the
/// encoder template must emit Y4M so the output can be read back.
struct SweepConfig {
  std::vector<SweepSource> sources;
  int qp_min = 1;
  int qp_max = 51;
  std::string encoder_template;
  std::string metric = "vmaf";  // vmaf | psnr | ws_psnr | s_psnr
  std::string vmaf_template;
  std::string work_dir = ".";
  std::string output_suffix = ".hevc";
  int parallelism = 1;
  double reference_min_score = 92.0;
  std::vector<double> anchor_targets = {90, 80, 70, 50, 30};
  std::optional<double> bitrate_hint;
  std::size_t sphere_samples = 65536;
};

struct CurvePoint {
  int qp = 0;
  double score = 0.0;
  double bitrate_bps = 0.0;
  std::string pvs_path;
};

struct CurveHole {
  int qp = 0;
  std::string error;
};

/// Per-content QP-to-score mapping. Failed QPs appear as holes, never as
/// silent omissions.
struct QualityCurve {
  std::string content_id;
  std::map<int, CurvePoint> points;
  std::vector<CurveHole> holes;
};

struct MonotoneViolation {
  int qp_a = 0;
  int qp_b = 0;      // qp_b > qp_a, adjacent in the curve
  double delta = 0;  // score(qp_b) - score(qp_a), positive
};

struct AnchorChoice {
  std::string label;  // B..F
  double target = 0.0;
  int qp = 0;
  double score = 0.0;
};

/// Reference PVS (label A) plus the distorted anchors, achieved scores
/// strictly decreasing from A to F.
struct AnchorSet {
  std::string content_id;
  int reference_qp = 0;
  double reference_score = 0.0;
  std::vector<AnchorChoice> anchors;
};

struct EncodedPvs {
  std::string path;
  double bitrate_bps = 0.0;
};

/// Runs the encoder template on one source. The output path is
/// `{work_dir}/{content}_qp{qp}{suffix}`; bitrate is output bytes * 8
/// over `duration_seconds`. Throws EncodeError on a non-zero exit or a
/// missing output, InvalidArgument for a QP outside [1, 51].
EncodedPvs encode_pvs(const std::string& src_path, int qp,
                      const std::string& encoder_template,
                      const std::string& work_dir, const std::string& content_id,
                      double duration_seconds,
                      const std::string& output_suffix = ".hevc");

/// Pooled score of one reference/distorted pair, as configured by
/// `config.metric`.
using Scorer =
    std::function<double(const std::string& ref_path, const std::string& dist_path)>;
Scorer make_scorer(const SweepConfig& config);

/// Sweeps one source across the QP range: encode, score, collect. Jobs
/// run on a worker pool of `config.parallelism` threads and merge into
/// the curve keyed by QP, so the result is schedule-independent. Throws
/// CurveError when every QP failed.
QualityCurve build_curve(const SweepSource& source, const SweepConfig& config);

/// All sources, sharing one worker pool across the full job grid.
std::vector<QualityCurve> build_curves(const SweepConfig& config);

/// Reports every adjacent pair (by ascending QP) whose score rises by
/// more than `epsilon`.
std::vector<MonotoneViolation> check_monotone(const QualityCurve& curve,
                                              double epsilon = 0.5);

/// Point minimizing |score - target|; ties break toward the lower QP.
CurvePoint select_anchor(const QualityCurve& curve, double target);

/// Among points with score >= min_score: the one with bitrate closest to
/// the hint when given, otherwise the highest-QP qualifying point. Throws
/// NoReferenceError (carrying the best achievable score) when no point
/// qualifies.
CurvePoint select_reference(const QualityCurve& curve, double min_score = 92.0,
                            std::optional<double> bitrate_hint = std::nullopt);

/// Reference plus one anchor per target, labels A..F in target order.
/// Throws DegenerateAnchors when two selections collapse onto one QP or
/// the achieved scores fail to decrease strictly.
AnchorSet select_anchor_set(const QualityCurve& curve,
                            const std::vector<double>& targets = {90, 80, 70, 50,
                                                                  30},
                            double min_score = 92.0,
                            std::optional<double> bitrate_hint = std::nullopt);

// JSON round-trip. Emission preserves documented key order.
nlohmann::ordered_json curve_to_json(const QualityCurve& curve);
nlohmann::ordered_json curves_to_json(const std::vector<QualityCurve>& curves);
QualityCurve curve_from_json(const nlohmann::json& j);
std::vector<QualityCurve> curves_from_json(const nlohmann::json& j);
nlohmann::ordered_json anchor_set_to_json(const AnchorSet& set);
AnchorSet anchor_set_from_json(const nlohmann::json& j);

}  // namespace vq360

#endif  // VQ360_SWEEP_HPP_
