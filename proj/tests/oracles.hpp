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
//
// Brute-force reference implementations the tests compare against. These
// are written for obviousness, not speed: plain loops, long double
// accumulation, no shared code with the library internals.

#ifndef VQ360_TESTS_ORACLES_HPP_
#define VQ360_TESTS_ORACLES_HPP_

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "vq360/metrics.hpp"
#include "vq360/subjective.hpp"
#include "vq360/sweep.hpp"
#include "vq360/types.hpp"

namespace oracle {

inline double db_of(long double mse, int bit_depth, double cap) {
  if (mse <= 0.0L) {
    return cap;
  }
  const long double peak = (1 << bit_depth) - 1;
  return static_cast<double>(10.0L * std::log10(peak * peak / mse));
}

inline double psnr(const vq360::Plane& ref, const vq360::Plane& dist,
                   double cap = 100.0) {
  long double sum = 0.0L;
  for (int r = 0; r < ref.height(); ++r) {
    for (int c = 0; c < ref.width(); ++c) {
      const long double d =
          static_cast<long double>(ref.at(c, r)) - dist.at(c, r);
      sum += d * d;
    }
  }
  const long double n =
      static_cast<long double>(ref.width()) * ref.height();
  return db_of(sum / n, ref.bit_depth(), cap);
}

inline double ws_psnr(const vq360::Plane& ref, const vq360::Plane& dist,
                      double cap = 100.0) {
  const long double pi = 3.14159265358979323846264338327950288L;
  long double num = 0.0L;
  long double den = 0.0L;
  for (int r = 0; r < ref.height(); ++r) {
    const long double w = std::cos((r + 0.5L - ref.height() / 2.0L) * pi /
                                   ref.height());
    for (int c = 0; c < ref.width(); ++c) {
      const long double d =
          static_cast<long double>(ref.at(c, r)) - dist.at(c, r);
      num += w * d * d;
      den += w;
    }
  }
  return db_of(num / den, ref.bit_depth(), cap);
}

/// Consumes the published sample positions but maps and accumulates on
/// its own.
inline double s_psnr(const vq360::Plane& ref, const vq360::Plane& dist,
                     std::span<const vq360::SpherePoint> samples,
                     double cap = 100.0) {
  const double pi = 3.14159265358979323846264338327950288;
  long double sum = 0.0L;
  for (const vq360::SpherePoint& p : samples) {
    int col = static_cast<int>(
        std::floor((p.lon / (2.0 * pi) + 0.5) * ref.width()));
    int row = static_cast<int>(std::floor((0.5 - p.lat / pi) * ref.height()));
    col = std::clamp(col, 0, ref.width() - 1);
    row = std::clamp(row, 0, ref.height() - 1);
    const long double d =
        static_cast<long double>(ref.at(col, row)) - dist.at(col, row);
    sum += d * d;
  }
  return db_of(sum / static_cast<long double>(samples.size()),
               ref.bit_depth(), cap);
}

inline double population_stddev(const std::vector<long double>& values) {
  long double mean = 0.0L;
  for (const long double v : values) {
    mean += v;
  }
  mean /= values.size();
  long double var = 0.0L;
  for (const long double v : values) {
    var += (v - mean) * (v - mean);
  }
  return static_cast<double>(std::sqrt(var / values.size()));
}

inline double si(const vq360::Video& video) {
  const int kx[3][3] = {{-1, 0, 1}, {-2, 0, 2}, {-1, 0, 1}};
  const int ky[3][3] = {{-1, -2, -1}, {0, 0, 0}, {1, 2, 1}};
  double best = 0.0;
  for (std::size_t f = 0; f < video.frame_count(); ++f) {
    const vq360::Plane& p = video.luma(f);
    std::vector<long double> mags;
    for (int r = 1; r < p.height() - 1; ++r) {
      for (int c = 1; c < p.width() - 1; ++c) {
        long double gx = 0.0L;
        long double gy = 0.0L;
        for (int dr = -1; dr <= 1; ++dr) {
          for (int dc = -1; dc <= 1; ++dc) {
            gx += kx[dr + 1][dc + 1] * static_cast<long double>(
                                           p.at(c + dc, r + dr));
            gy += ky[dr + 1][dc + 1] * static_cast<long double>(
                                           p.at(c + dc, r + dr));
          }
        }
        mags.push_back(std::sqrt(gx * gx + gy * gy));
      }
    }
    best = std::max(best, population_stddev(mags));
  }
  return best;
}

inline double ti(const vq360::Video& video) {
  double best = 0.0;
  for (std::size_t f = 1; f < video.frame_count(); ++f) {
    const vq360::Plane& a = video.luma(f - 1);
    const vq360::Plane& b = video.luma(f);
    std::vector<long double> diffs;
    for (int r = 0; r < a.height(); ++r) {
      for (int c = 0; c < a.width(); ++c) {
        diffs.push_back(static_cast<long double>(b.at(c, r)) - a.at(c, r));
      }
    }
    best = std::max(best, population_stddev(diffs));
  }
  return best;
}

inline double mean(std::span<const double> values) {
  long double sum = 0.0L;
  for (const double v : values) {
    sum += v;
  }
  return static_cast<double>(sum / values.size());
}

inline double sample_stddev(std::span<const double> values) {
  const long double m = mean(values);
  long double var = 0.0L;
  for (const double v : values) {
    var += (v - m) * (v - m);
  }
  return static_cast<double>(std::sqrt(var / (values.size() - 1)));
}

inline double ci95(std::span<const double> values) {
  return 1.96 * sample_stddev(values) /
         std::sqrt(static_cast<double>(values.size()));
}

inline double mos(std::span<const vq360::Vote> votes, const std::string& content,
                  const std::string& quality) {
  long double sum = 0.0L;
  long double n = 0.0L;
  for (const vq360::Vote& v : votes) {
    if (v.content_id == content && v.quality_label == quality) {
      sum += v.rating;
      n += 1.0L;
    }
  }
  return static_cast<double>(sum / n);
}

/// Per-subject differential score, subject means taken longhand.
inline std::vector<double> dv_per_subject(std::span<const vq360::Vote> votes,
                                          const std::string& content,
                                          const std::string& quality) {
  std::set<std::string> subjects;
  for (const vq360::Vote& v : votes) {
    if (v.content_id == content && v.quality_label == quality) {
      subjects.insert(v.subject_id);
    }
  }
  std::vector<double> dvs;
  for (const std::string& s : subjects) {
    long double pvs_sum = 0.0L, pvs_n = 0.0L, ref_sum = 0.0L, ref_n = 0.0L;
    for (const vq360::Vote& v : votes) {
      if (v.subject_id != s || v.content_id != content) {
        continue;
      }
      if (v.quality_label == quality) {
        pvs_sum += v.rating;
        pvs_n += 1.0L;
      }
      if (v.quality_label == "A") {
        ref_sum += v.rating;
        ref_n += 1.0L;
      }
    }
    dvs.push_back(static_cast<double>(pvs_sum / pvs_n - ref_sum / ref_n + 5.0L));
  }
  return dvs;
}

inline double dmos(std::span<const vq360::Vote> votes, const std::string& content,
                   const std::string& quality) {
  return mean(dv_per_subject(votes, content, quality));
}

/// Pearson r via the sum-of-products arrangement (the library uses
/// centered sums).
inline double pearson(std::span<const double> x, std::span<const double> y) {
  const long double n = static_cast<long double>(x.size());
  long double sx = 0.0L, sy = 0.0L, sxx = 0.0L, syy = 0.0L, sxy = 0.0L;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += static_cast<long double>(x[i]) * x[i];
    syy += static_cast<long double>(y[i]) * y[i];
    sxy += static_cast<long double>(x[i]) * y[i];
  }
  const long double num = n * sxy - sx * sy;
  const long double den =
      std::sqrt(n * sxx - sx * sx) * std::sqrt(n * syy - sy * sy);
  return static_cast<double>(num / den);
}

inline double rmse(std::span<const double> x, std::span<const double> y) {
  long double sum = 0.0L;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const long double d = static_cast<long double>(x[i]) - y[i];
    sum += d * d;
  }
  return static_cast<double>(
      std::sqrt(sum / static_cast<long double>(x.size())));
}

struct SubjectR {
  std::string subject_id;
  double r = 0.0;
};

/// Leave-one-out screening recomputed from scratch: per-subject mean
/// rating per (content, quality) cell in sorted cell order, correlated
/// against the mean vector of everyone else.
inline std::vector<SubjectR> screen(std::span<const vq360::Vote> votes) {
  std::set<std::pair<std::string, std::string>> cell_set;
  std::set<std::string> subject_set;
  for (const vq360::Vote& v : votes) {
    cell_set.insert({v.content_id, v.quality_label});
    subject_set.insert(v.subject_id);
  }
  const std::vector<std::pair<std::string, std::string>> cells(cell_set.begin(),
                                                               cell_set.end());
  const std::vector<std::string> subjects(subject_set.begin(),
                                          subject_set.end());

  std::map<std::string, std::vector<double>> vectors;
  for (const std::string& s : subjects) {
    std::vector<double> vec;
    for (const auto& [content, quality] : cells) {
      long double sum = 0.0L, n = 0.0L;
      for (const vq360::Vote& v : votes) {
        if (v.subject_id == s && v.content_id == content &&
            v.quality_label == quality) {
          sum += v.rating;
          n += 1.0L;
        }
      }
      vec.push_back(static_cast<double>(sum / n));
    }
    vectors[s] = std::move(vec);
  }

  std::vector<SubjectR> out;
  for (const std::string& s : subjects) {
    std::vector<double> others(cells.size(), 0.0);
    for (std::size_t i = 0; i < cells.size(); ++i) {
      long double sum = 0.0L;
      for (const std::string& t : subjects) {
        if (t != s) {
          sum += vectors[t][i];
        }
      }
      others[i] = static_cast<double>(
          sum / static_cast<long double>(subjects.size() - 1));
    }
    out.push_back(SubjectR{s, pearson(vectors[s], others)});
  }
  return out;
}

/// Exhaustive nearest-to-target scan; ties keep the first (lowest) QP.
inline vq360::CurvePoint select_anchor(const vq360::QualityCurve& curve,
                                       double target) {
  const vq360::CurvePoint* best = nullptr;
  double best_dist = 0.0;
  for (const auto& [qp, point] : curve.points) {
    const double dist = std::fabs(point.score - target);
    if (best == nullptr || dist < best_dist) {
      best = &point;
      best_dist = dist;
    }
  }
  return *best;
}

}  // namespace oracle

#endif  // VQ360_TESTS_ORACLES_HPP_
