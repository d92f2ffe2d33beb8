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

#include "vq360/metrics.hpp"

#include <cmath>
#include <cstdint>
#include <numbers>

#include "parallel.hpp"

namespace vq360 {

namespace {

void require_same_shape(const Plane& ref, const Plane& dist) {
  if (!ref.same_shape(dist)) {
    throw ShapeError("plane shape mismatch: " + std::to_string(ref.width()) + "x" +
                     std::to_string(ref.height()) + "/" +
                     std::to_string(ref.bit_depth()) + "b vs " +
                     std::to_string(dist.width()) + "x" +
                     std::to_string(dist.height()) + "/" +
                     std::to_string(dist.bit_depth()) + "b");
  }
}

void require_matched(const Video& ref, const Video& dist) {
  if (ref.frame_count() != dist.frame_count()) {
    throw ShapeError("frame count mismatch: " + std::to_string(ref.frame_count()) +
                     " vs " + std::to_string(dist.frame_count()));
  }
  require_same_shape(ref.luma(0), dist.luma(0));
}

std::uint64_t squared_error(std::uint16_t a, std::uint16_t b) {
  const std::int64_t d = static_cast<std::int64_t>(a) - b;
  return static_cast<std::uint64_t>(d * d);
}

double db_from_mse(double mse_value, double peak, double cap) {
  if (mse_value == 0.0) {
    return cap;
  }
  return 10.0 * std::log10(peak * peak / mse_value);
}

template <typename FrameFn>
std::vector<double> score_frames(const Video& ref, const Video& dist, int threads,
                                 FrameFn&& frame_fn) {
  require_matched(ref, dist);
  std::vector<double> scores(ref.frame_count());
  detail::for_each_index(ref.frame_count(), threads, [&](std::size_t i) {
    scores[i] = frame_fn(ref.luma(i), dist.luma(i));
  });
  return scores;
}

/// Population standard deviation, two-pass for accuracy.
double population_stddev(std::span<const double> values) {
  double sum = 0.0;
  for (double v : values) {
    sum += v;
  }
  const double mean = sum / static_cast<double>(values.size());
  double acc = 0.0;
  for (double v : values) {
    const double d = v - mean;
    acc += d * d;
  }
  return std::sqrt(acc / static_cast<double>(values.size()));
}

}  // namespace

double mse(const Plane& ref, const Plane& dist) {
  require_same_shape(ref, dist);
  const auto a = ref.samples();
  const auto b = dist.samples();
  std::uint64_t sse = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sse += squared_error(a[i], b[i]);
  }
  return static_cast<double>(sse) / static_cast<double>(a.size());
}

double psnr(const Plane& ref, const Plane& dist, double cap) {
  return db_from_mse(mse(ref, dist), static_cast<double>(ref.peak()), cap);
}

std::vector<double> ws_weights(int height) {
  if (height < 2 || height % 2 != 0) {
    throw InvalidDimensions("weight rows must be even and >= 2, got " +
                            std::to_string(height));
  }
  std::vector<double> weights(static_cast<std::size_t>(height));
  const double h = static_cast<double>(height);
  for (int j = 0; j < height / 2; ++j) {
    // Mirrored halves are assigned the same double, so the symmetry
    // invariant holds bit for bit.
    const double w = std::cos((h / 2.0 - j - 0.5) * std::numbers::pi / h);
    weights[static_cast<std::size_t>(j)] = w;
    weights[static_cast<std::size_t>(height - 1 - j)] = w;
  }
  return weights;
}

double ws_psnr_frame(const Plane& ref, const Plane& dist, double cap) {
  require_same_shape(ref, dist);
  const std::vector<double> weights = ws_weights(ref.height());
  const double width = static_cast<double>(ref.width());
  double numerator = 0.0;
  double denominator = 0.0;
  for (int j = 0; j < ref.height(); ++j) {
    const auto ra = ref.row(j);
    const auto rb = dist.row(j);
    std::uint64_t row_sse = 0;
    for (int i = 0; i < ref.width(); ++i) {
      row_sse += squared_error(ra[static_cast<std::size_t>(i)],
                               rb[static_cast<std::size_t>(i)]);
    }
    const double w = weights[static_cast<std::size_t>(j)];
    numerator += w * static_cast<double>(row_sse);
    denominator += w * width;
  }
  if (numerator == 0.0) {
    return cap;
  }
  return db_from_mse(numerator / denominator, static_cast<double>(ref.peak()), cap);
}

std::vector<SpherePoint> sphere_sample_set(std::size_t n) {
  if (n == 0) {
    throw InvalidArgument("sphere sample count must be >= 1");
  }
  // Golden-angle longitude spiral over latitudes uniform in sin(lat):
  // each of the n equal-area latitude bands holds exactly one point.
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  const double golden_angle = std::numbers::pi * (3.0 - std::sqrt(5.0));
  std::vector<SpherePoint> points(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double z =
        1.0 - (2.0 * static_cast<double>(i) + 1.0) / static_cast<double>(n);
    double lon = std::fmod(static_cast<double>(i) * golden_angle, kTwoPi) -
                 std::numbers::pi;
    if (lon >= std::numbers::pi) {
      lon -= kTwoPi;
    }
    points[i] = SpherePoint{lon, std::asin(z)};
  }
  return points;
}

PixelCoord sphere_to_equirect(const SpherePoint& point, int width, int height) {
  const double u =
      (point.lon / (2.0 * std::numbers::pi) + 0.5) * static_cast<double>(width);
  const double v =
      (0.5 - point.lat / std::numbers::pi) * static_cast<double>(height);
  const auto clamp_to = [](double x, int hi) {
    const double f = std::floor(x);
    if (f < 0.0) {
      return 0;
    }
    if (f > static_cast<double>(hi)) {
      return hi;
    }
    return static_cast<int>(f);
  };
  return PixelCoord{clamp_to(u, width - 1), clamp_to(v, height - 1)};
}

double s_psnr_frame(const Plane& ref, const Plane& dist,
                    std::span<const PixelCoord> pixels, double cap) {
  require_same_shape(ref, dist);
  if (pixels.empty()) {
    throw InvalidArgument("sample set must be non-empty");
  }
  std::uint64_t sse = 0;
  for (const PixelCoord& p : pixels) {
    if (p.col < 0 || p.col >= ref.width() || p.row < 0 || p.row >= ref.height()) {
      throw IndexError("sample pixel (" + std::to_string(p.col) + ", " +
                       std::to_string(p.row) + ") outside " +
                       std::to_string(ref.width()) + "x" +
                       std::to_string(ref.height()));
    }
    sse += squared_error(ref.at(p.col, p.row), dist.at(p.col, p.row));
  }
  const double mse_value =
      static_cast<double>(sse) / static_cast<double>(pixels.size());
  return db_from_mse(mse_value, static_cast<double>(ref.peak()), cap);
}

std::vector<double> psnr_frames(const Video& ref, const Video& dist, double cap,
                                int threads) {
  return score_frames(ref, dist, threads, [cap](const Plane& a, const Plane& b) {
    return psnr(a, b, cap);
  });
}

std::vector<double> ws_psnr_frames(const Video& ref, const Video& dist, double cap,
                                   int threads) {
  return score_frames(ref, dist, threads, [cap](const Plane& a, const Plane& b) {
    return ws_psnr_frame(a, b, cap);
  });
}

std::vector<double> s_psnr_frames(const Video& ref, const Video& dist,
                                  std::span<const SpherePoint> samples, double cap,
                                  int threads) {
  require_matched(ref, dist);
  if (samples.empty()) {
    throw InvalidArgument("sample set must be non-empty");
  }
  // The sphere-to-pixel mapping depends only on the geometry, so it is
  // resolved once and shared by every frame.
  std::vector<PixelCoord> pixels(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    pixels[i] = sphere_to_equirect(samples[i], ref.width(), ref.height());
  }
  return score_frames(ref, dist, threads, [&](const Plane& a, const Plane& b) {
    return s_psnr_frame(a, b, pixels, cap);
  });
}

double s_psnr(const Video& ref, const Video& dist,
              std::span<const SpherePoint> samples, double cap, int threads) {
  const std::vector<double> frames = s_psnr_frames(ref, dist, samples, cap, threads);
  return pool_mean(frames);
}

namespace {

double sobel_stddev(const Plane& plane) {
  if (plane.width() < 3 || plane.height() < 3) {
    throw InvalidDimensions("Sobel needs at least 3x3, got " +
                            std::to_string(plane.width()) + "x" +
                            std::to_string(plane.height()));
  }
  std::vector<double> magnitudes;
  magnitudes.reserve(static_cast<std::size_t>(plane.width() - 2) *
                     static_cast<std::size_t>(plane.height() - 2));
  for (int y = 1; y < plane.height() - 1; ++y) {
    for (int x = 1; x < plane.width() - 1; ++x) {
      const auto s = [&](int dx, int dy) {
        return static_cast<std::int64_t>(plane.at(x + dx, y + dy));
      };
      const std::int64_t gx = (s(1, -1) + 2 * s(1, 0) + s(1, 1)) -
                              (s(-1, -1) + 2 * s(-1, 0) + s(-1, 1));
      const std::int64_t gy = (s(-1, 1) + 2 * s(0, 1) + s(1, 1)) -
                              (s(-1, -1) + 2 * s(0, -1) + s(1, -1));
      magnitudes.push_back(
          std::sqrt(static_cast<double>(gx * gx + gy * gy)));
    }
  }
  return population_stddev(magnitudes);
}

double diff_stddev(const Plane& cur, const Plane& prev) {
  std::vector<double> diffs;
  const auto a = cur.samples();
  const auto b = prev.samples();
  diffs.reserve(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    diffs.push_back(static_cast<double>(a[i]) - static_cast<double>(b[i]));
  }
  return population_stddev(diffs);
}

}  // namespace

double si(const Video& video) {
  double max_value = 0.0;
  for (std::size_t i = 0; i < video.frame_count(); ++i) {
    max_value = std::max(max_value, sobel_stddev(video.luma(i)));
  }
  return max_value;
}

double ti(const Video& video) {
  if (video.frame_count() < 2) {
    throw InsufficientFrames("temporal information needs >= 2 frames, got " +
                             std::to_string(video.frame_count()));
  }
  double max_value = 0.0;
  for (std::size_t i = 1; i < video.frame_count(); ++i) {
    max_value = std::max(max_value, diff_stddev(video.luma(i), video.luma(i - 1)));
  }
  return max_value;
}

double pool_mean(std::span<const double> per_frame) {
  if (per_frame.empty()) {
    throw InvalidArgument("cannot pool an empty score list");
  }
  double sum = 0.0;
  for (double v : per_frame) {
    sum += v;
  }
  return sum / static_cast<double>(per_frame.size());
}

}  // namespace vq360
