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

#ifndef VQ360_METRICS_HPP_
#define VQ360_METRICS_HPP_

#include <cstddef>
#include <span>
#include <vector>

#include "vq360/types.hpp"

namespace vq360 {

inline constexpr double kPsnrCap = 100.0;

/// Mean squared sample difference. Squared errors are accumulated as
/// 64-bit integers, so the sum is exact and independent of pixel order.
double mse(const Plane& ref, const Plane& dist);

/// 10*log10(peak^2 / MSE) with peak = 2^bit_depth - 1; returns `cap`
/// when the planes are identical.
double psnr(const Plane& ref, const Plane& dist, double cap = kPsnrCap);

/// Per-row latitude weights for an equirectangular plane of `height`
/// rows: w(j) = cos((j + 0.5 - height/2) * pi / height). Symmetric about
/// the equator, maximal at the two middle rows, all in (0, 1].
std::vector<double> ws_weights(int height);

/// Latitude-weighted PSNR of one equirectangular frame. The weighted MSE
/// is row-factored, WMSE = sum_j(w_j * SSE_j) / sum_j(w_j * width), with
/// both sums accumulated in ascending row order; a squared-error field
/// that is constant across rows therefore cancels the weights and
/// reproduces plain PSNR.
double ws_psnr_frame(const Plane& ref, const Plane& dist, double cap = kPsnrCap);

struct SpherePoint {
  double lon = 0.0;  // radians in [-pi, pi)
  double lat = 0.0;  // radians in [-pi/2, pi/2]
};

/// Deterministic quasi-uniform sphere sampling via the Fibonacci lattice:
/// latitudes are uniform in sin(lat), so equal-area latitude bands receive
/// equal point counts; longitudes advance by the golden angle. Same n
/// always yields the same list.
std::vector<SpherePoint> sphere_sample_set(std::size_t n);

struct PixelCoord {
  int col = 0;
  int row = 0;
};

/// Nearest-pixel equirectangular lookup: u = (lon/2pi + 0.5)*width,
/// v = (0.5 - lat/pi)*height, pixel = (clamp(floor(u)), clamp(floor(v))).
PixelCoord sphere_to_equirect(const SpherePoint& point, int width, int height);

/// PSNR over the given pixel sample positions only. With a sample list
/// covering every pixel exactly once this equals plain psnr() bit for bit
/// (both reduce to the same integer SSE over the same pixel multiset).
double s_psnr_frame(const Plane& ref, const Plane& dist,
                    std::span<const PixelCoord> pixels, double cap = kPsnrCap);

/// Per-frame metric series over matched videos. `threads` > 1 scores
/// frames on a worker pool; results are gathered in frame order, so the
/// output is identical for any worker count.
std::vector<double> psnr_frames(const Video& ref, const Video& dist,
                                double cap = kPsnrCap, int threads = 1);
std::vector<double> ws_psnr_frames(const Video& ref, const Video& dist,
                                   double cap = kPsnrCap, int threads = 1);
std::vector<double> s_psnr_frames(const Video& ref, const Video& dist,
                                  std::span<const SpherePoint> samples,
                                  double cap = kPsnrCap, int threads = 1);

/// Sphere-sampled PSNR pooled over frames with the arithmetic mean.
double s_psnr(const Video& ref, const Video& dist,
              std::span<const SpherePoint> samples, double cap = kPsnrCap,
              int threads = 1);

/// Spatial information: max over frames of the spatial standard deviation
/// of the Sobel gradient magnitude, border pixels excluded. Population
/// (divide by N) standard deviation.
double si(const Video& video);

/// Temporal information: max over successive frame pairs of the spatial
/// standard deviation of the sample difference field.
double ti(const Video& video);

/// Arithmetic mean accumulated in frame order.
double pool_mean(std::span<const double> per_frame);

}  // namespace vq360

#endif  // VQ360_METRICS_HPP_
