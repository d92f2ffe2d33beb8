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

#include "vq360/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "vq360/errors.hpp"

namespace vq360 {

namespace {

// Fixed plot geometry; all emitted coordinates derive from it.
constexpr double kCanvasW = 960.0;
constexpr double kCanvasH = 600.0;
constexpr double kPlotL = 60.0;
constexpr double kPlotR = 800.0;
constexpr double kPlotT = 20.0;
constexpr double kPlotB = 550.0;
constexpr double kQpMaxAxis = 52.0;

constexpr const char* kPalette[] = {
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b",
    "#e377c2", "#7f7f7f", "#bcbd22", "#17becf", "#393b79", "#8c6d31",
};
constexpr std::size_t kPaletteSize = sizeof(kPalette) / sizeof(kPalette[0]);

std::string fmt(const char* format, double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), format, value);
  return buf;
}

std::string px(double value) { return fmt("%.2f", value); }

double x_of_qp(double qp) {
  return kPlotL + qp / kQpMaxAxis * (kPlotR - kPlotL);
}

double y_of_score(double score, double y_max) {
  return kPlotB - score / y_max * (kPlotB - kPlotT);
}

void svg_open(std::ostringstream& svg) {
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kCanvasW
      << "\" height=\"" << kCanvasH << "\" viewBox=\"0 0 " << kCanvasW << " "
      << kCanvasH << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  svg << "<rect width=\"" << kCanvasW << "\" height=\"" << kCanvasH
      << "\" fill=\"white\"/>\n";
}

void svg_axes(std::ostringstream& svg, double y_max, const std::string& x_label,
              const std::string& y_label) {
  svg << "<line x1=\"" << px(kPlotL) << "\" y1=\"" << px(kPlotB) << "\" x2=\""
      << px(kPlotR) << "\" y2=\"" << px(kPlotB)
      << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
  svg << "<line x1=\"" << px(kPlotL) << "\" y1=\"" << px(kPlotT) << "\" x2=\""
      << px(kPlotL) << "\" y2=\"" << px(kPlotB)
      << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
  for (int qp = 0; qp <= 50; qp += 10) {
    const double x = x_of_qp(qp);
    svg << "<line x1=\"" << px(x) << "\" y1=\"" << px(kPlotB) << "\" x2=\""
        << px(x) << "\" y2=\"" << px(kPlotB + 5)
        << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
    svg << "<text x=\"" << px(x) << "\" y=\"" << px(kPlotB + 20)
        << "\" text-anchor=\"middle\">" << qp << "</text>\n";
  }
  for (double s = 0.0; s <= y_max + 1e-9; s += 10.0) {
    const double y = y_of_score(s, y_max);
    svg << "<line x1=\"" << px(kPlotL - 5) << "\" y1=\"" << px(y) << "\" x2=\""
        << px(kPlotL) << "\" y2=\"" << px(y)
        << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
    svg << "<text x=\"" << px(kPlotL - 10) << "\" y=\"" << px(y + 4)
        << "\" text-anchor=\"end\">" << static_cast<int>(s) << "</text>\n";
  }
  svg << "<text x=\"" << px((kPlotL + kPlotR) / 2) << "\" y=\""
      << px(kPlotB + 40) << "\" text-anchor=\"middle\">" << x_label
      << "</text>\n";
  svg << "<text x=\"15\" y=\"" << px((kPlotT + kPlotB) / 2)
      << "\" text-anchor=\"middle\" transform=\"rotate(-90 15 "
      << px((kPlotT + kPlotB) / 2) << ")\">" << y_label << "</text>\n";
}

/// Consecutive curve points are connected unless a recorded hole QP lies
/// between them.
std::vector<std::vector<const CurvePoint*>> segments_of(const QualityCurve& curve) {
  std::set<int> hole_qps;
  for (const CurveHole& hole : curve.holes) {
    hole_qps.insert(hole.qp);
  }
  std::vector<std::vector<const CurvePoint*>> segments;
  const CurvePoint* prev = nullptr;
  for (const auto& [qp, point] : curve.points) {
    bool broken = prev == nullptr;
    if (prev != nullptr) {
      const auto it = hole_qps.lower_bound(prev->qp + 1);
      broken = it != hole_qps.end() && *it < qp;
    }
    if (broken || segments.empty()) {
      segments.emplace_back();
    }
    segments.back().push_back(&point);
    prev = &point;
  }
  return segments;
}

void svg_series(std::ostringstream& svg, const QualityCurve& curve,
                const char* color, double y_max) {
  for (const auto& segment : segments_of(curve)) {
    if (segment.size() > 1) {
      svg << "<polyline fill=\"none\" stroke=\"" << color
          << "\" stroke-width=\"1.5\" points=\"";
      for (std::size_t i = 0; i < segment.size(); ++i) {
        if (i > 0) {
          svg << " ";
        }
        svg << px(x_of_qp(segment[i]->qp)) << ","
            << px(y_of_score(segment[i]->score, y_max));
      }
      svg << "\"/>\n";
    }
  }
  for (const auto& [qp, point] : curve.points) {
    svg << "<circle cx=\"" << px(x_of_qp(qp)) << "\" cy=\""
        << px(y_of_score(point.score, y_max)) << "\" r=\"3\" fill=\"" << color
        << "\" data-content=\"" << curve.content_id << "\" data-qp=\"" << qp
        << "\" data-score=\"" << format_double(point.score, 6) << "\"/>\n";
  }
}

double max_curve_score(const std::vector<QualityCurve>& curves) {
  double best = 0.0;
  for (const QualityCurve& curve : curves) {
    for (const auto& [qp, point] : curve.points) {
      best = std::max(best, point.score);
    }
  }
  return best;
}

}  // namespace

std::string format_double(double value, int significant_digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*g", significant_digits, value);
  return buf;
}

std::string frame_scores_csv(const std::string& metric,
                             std::span<const double> scores) {
  std::ostringstream out;
  out << "frame_index,metric,value\n";
  for (std::size_t i = 0; i < scores.size(); ++i) {
    out << i << "," << metric << "," << format_double(scores[i]) << "\n";
  }
  return out.str();
}

std::string pooled_score_csv(const std::string& metric, double pooled,
                             std::size_t frames) {
  std::ostringstream out;
  out << "metric,pooled_value,frames\n";
  out << metric << "," << format_double(pooled) << "," << frames << "\n";
  return out.str();
}

std::string mos_table_csv(std::span<const MosResult> rows) {
  std::ostringstream out;
  out << "content,quality,mos,ci95,n\n";
  for (const MosResult& r : rows) {
    out << r.content_id << "," << r.quality_label << "," << format_double(r.mos)
        << "," << format_double(r.ci95) << "," << r.n << "\n";
  }
  return out.str();
}

std::string dmos_table_csv(std::span<const DmosResult> rows) {
  std::ostringstream out;
  out << "content,quality,dmos,ci95,n\n";
  for (const DmosResult& r : rows) {
    out << r.content_id << "," << r.quality_label << "," << format_double(r.dmos)
        << "," << format_double(r.ci95) << "," << r.n << "\n";
  }
  return out.str();
}

std::string screening_csv(const ScreeningReport& report) {
  std::ostringstream out;
  out << "subject,r,flagged\n";
  for (const SubjectScreen& s : report.subjects) {
    out << s.subject_id << "," << format_double(s.r) << ","
        << (s.flagged ? "true" : "false") << "\n";
  }
  return out.str();
}

std::string agreement_csv(std::span<const AgreementRow> rows) {
  std::ostringstream out;
  out << "content,plcc_BF,plcc_BE,rmse_BF,rmse_BE\n";
  for (const AgreementRow& r : rows) {
    out << r.content_id << "," << fmt("%.3f", r.plcc_BF) << ","
        << fmt("%.3f", r.plcc_BE) << "," << fmt("%.3f", r.rmse_BF) << ","
        << fmt("%.3f", r.rmse_BE) << "\n";
  }
  return out.str();
}

std::string curve_plot_svg(const std::vector<QualityCurve>& curves,
                           const std::vector<AnchorSet>& anchors) {
  std::size_t total_points = 0;
  for (const QualityCurve& curve : curves) {
    total_points += curve.points.size();
  }
  if (curves.empty() || total_points == 0) {
    throw InvalidArgument("curve plot needs at least one curve point");
  }
  const double y_max = std::max(100.0, max_curve_score(curves));

  std::ostringstream svg;
  svg_open(svg);
  svg_axes(svg, y_max, "QP", "score");
  for (std::size_t i = 0; i < curves.size(); ++i) {
    svg_series(svg, curves[i], kPalette[i % kPaletteSize], y_max);
  }
  for (const AnchorSet& set : anchors) {
    const double rx = x_of_qp(set.reference_qp);
    const double ry = y_of_score(set.reference_score, y_max);
    svg << "<rect x=\"" << px(rx - 4) << "\" y=\"" << px(ry - 4)
        << "\" width=\"8\" height=\"8\" fill=\"none\" stroke=\"black\""
        << " data-content=\"" << set.content_id << "\" data-label=\"A\""
        << " data-qp=\"" << set.reference_qp << "\" data-score=\""
        << format_double(set.reference_score, 6) << "\"/>\n";
    for (const AnchorChoice& a : set.anchors) {
      const double ax = x_of_qp(a.qp);
      const double ay = y_of_score(a.score, y_max);
      svg << "<rect x=\"" << px(ax - 4) << "\" y=\"" << px(ay - 4)
          << "\" width=\"8\" height=\"8\" fill=\"none\" stroke=\"black\""
          << " transform=\"rotate(45 " << px(ax) << " " << px(ay) << ")\""
          << " data-content=\"" << set.content_id << "\" data-label=\""
          << a.label << "\" data-qp=\"" << a.qp << "\" data-score=\""
          << format_double(a.score, 6) << "\"/>\n";
    }
  }
  for (std::size_t i = 0; i < curves.size(); ++i) {
    const double y = 40.0 + 18.0 * static_cast<double>(i);
    svg << "<line x1=\"810\" y1=\"" << px(y - 4) << "\" x2=\"830\" y2=\""
        << px(y - 4) << "\" stroke=\"" << kPalette[i % kPaletteSize]
        << "\" stroke-width=\"1.5\"/>\n";
    svg << "<text x=\"836\" y=\"" << px(y) << "\">" << curves[i].content_id
        << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

std::string curve_plot_csv(const std::vector<QualityCurve>& curves) {
  std::ostringstream out;
  out << "content,qp,score\n";
  for (const QualityCurve& curve : curves) {
    for (const auto& [qp, point] : curve.points) {
      out << curve.content_id << "," << qp << "," << format_double(point.score, 6)
          << "\n";
    }
  }
  return out.str();
}

namespace {

void require_comparison_inputs(const QualityCurve& curve,
                               const std::map<int, double>& normalized_dmos) {
  if (curve.points.empty() || normalized_dmos.empty()) {
    throw InvalidArgument("comparison plot needs a curve and DMOS markers");
  }
  for (const auto& [qp, value] : normalized_dmos) {
    if (curve.points.find(qp) == curve.points.end()) {
      throw MismatchedSeries("DMOS QP " + std::to_string(qp) +
                             " is not on the curve for content '" +
                             curve.content_id + "'");
    }
  }
}

}  // namespace

std::string comparison_plot_svg(const QualityCurve& curve,
                                const std::map<int, double>& normalized_dmos) {
  require_comparison_inputs(curve, normalized_dmos);
  double y_max = std::max(100.0, max_curve_score({curve}));
  for (const auto& [qp, value] : normalized_dmos) {
    y_max = std::max(y_max, value);
  }

  std::ostringstream svg;
  svg_open(svg);
  svg_axes(svg, y_max, "QP", "score");
  svg << "<text x=\"" << px(kPlotL + 10) << "\" y=\"" << px(kPlotT + 14)
      << "\" font-weight=\"bold\">" << curve.content_id << "</text>\n";
  svg_series(svg, curve, kPalette[0], y_max);
  for (const auto& [qp, value] : normalized_dmos) {
    svg << "<rect x=\"" << px(x_of_qp(qp) - 4) << "\" y=\""
        << px(y_of_score(value, y_max) - 4)
        << "\" width=\"8\" height=\"8\" fill=\"" << kPalette[3]
        << "\" data-content=\"" << curve.content_id << "\" data-qp=\"" << qp
        << "\" data-dmos=\"" << format_double(value, 6) << "\"/>\n";
  }
  svg << "<line x1=\"810\" y1=\"36\" x2=\"830\" y2=\"36\" stroke=\""
      << kPalette[0] << "\" stroke-width=\"1.5\"/>\n";
  svg << "<text x=\"836\" y=\"40\">objective</text>\n";
  svg << "<rect x=\"812\" y=\"50\" width=\"8\" height=\"8\" fill=\""
      << kPalette[3] << "\"/>\n";
  svg << "<text x=\"836\" y=\"58\">normalized DMOS</text>\n";
  svg << "</svg>\n";
  return svg.str();
}

std::string comparison_plot_csv(const QualityCurve& curve,
                                const std::map<int, double>& normalized_dmos) {
  require_comparison_inputs(curve, normalized_dmos);
  std::ostringstream out;
  out << "qp,score,dmos_norm\n";
  for (const auto& [qp, point] : curve.points) {
    out << qp << "," << format_double(point.score, 6) << ",";
    const auto it = normalized_dmos.find(qp);
    if (it != normalized_dmos.end()) {
      out << format_double(it->second, 6);
    }
    out << "\n";
  }
  return out.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error("cannot open " + path + " for writing");
  }
  out << content;
  if (!out) {
    throw Error("failed writing " + path);
  }
}

void write_sidecar(const std::string& artifact_path,
                   const nlohmann::ordered_json& extra) {
  std::time_t now = std::time(nullptr);
  std::tm tm_utc;
  gmtime_r(&now, &tm_utc);
  char stamp[32];
  std::strftime(stamp, sizeof(stamp), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);

  nlohmann::ordered_json meta;
  meta["artifact"] = std::filesystem::path(artifact_path).filename().string();
  meta["generated_at"] = stamp;
  for (const auto& [key, value] : extra.items()) {
    meta[key] = value;
  }
  write_text_file(artifact_path + ".meta.json", meta.dump(2) + "\n");
}

}  // namespace vq360
