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

#ifndef VQ360_REPORT_HPP_
#define VQ360_REPORT_HPP_

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "vq360/subjective.hpp"
#include "vq360/sweep.hpp"

namespace vq360 {

// All emitters below are byte-deterministic for fixed inputs: no
// timestamps, no environment lookups, fixed formatting. Timestamps live
// only in the sidecar written by write_sidecar.

/// Shortest-of %g with the given significant digits, locale-independent.
std::string format_double(double value, int significant_digits = 10);

std::string frame_scores_csv(const std::string& metric,
                             std::span<const double> scores);
std::string pooled_score_csv(const std::string& metric, double pooled,
                             std::size_t frames);

std::string mos_table_csv(std::span<const MosResult> rows);
std::string dmos_table_csv(std::span<const DmosResult> rows);
std::string screening_csv(const ScreeningReport& report);

/// Agreement table at 3 decimals, matching the precision the analysis is
/// reported at.
std::string agreement_csv(std::span<const AgreementRow> rows);

/// One line series per content over the QP axis, legend labeled by
/// content id, series broken at hole QPs. Anchor sets, when given,
/// overlay their reference and anchor points as distinct markers. Every
/// data marker carries data-qp/data-score attributes holding the same
/// 6-significant-digit rendering the CSV twin uses.
std::string curve_plot_svg(const std::vector<QualityCurve>& curves,
                           const std::vector<AnchorSet>& anchors = {});

/// CSV twin of curve_plot_svg: header `content,qp,score`, one row per
/// curve point, 6 significant digits.
std::string curve_plot_csv(const std::vector<QualityCurve>& curves);

/// Per-content overlay of the full objective curve and the normalized
/// DMOS markers at the anchor QPs. Every DMOS QP must exist in the
/// curve; a fully disjoint QP set raises MismatchedSeries.
std::string comparison_plot_svg(const QualityCurve& curve,
                                const std::map<int, double>& normalized_dmos);

/// CSV twin of comparison_plot_svg: header `qp,score,dmos_norm`, the
/// dmos_norm column blank at non-anchor QPs.
std::string comparison_plot_csv(const QualityCurve& curve,
                                const std::map<int, double>& normalized_dmos);

void write_text_file(const std::string& path, const std::string& content);

/// Writes `<artifact_path>.meta.json` with a UTC generation timestamp
/// and caller-supplied fields. The artifact itself stays deterministic.
void write_sidecar(const std::string& artifact_path,
                   const nlohmann::ordered_json& extra);

}  // namespace vq360

#endif  // VQ360_REPORT_HPP_
