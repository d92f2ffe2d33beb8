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

#ifndef VQ360_TYPES_HPP_
#define VQ360_TYPES_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "vq360/errors.hpp"

namespace vq360 {

struct Fraction {
  int num = 25;
  int den = 1;

  double to_double() const { return static_cast<double>(num) / den; }
  bool operator==(const Fraction&) const = default;
};

/// Single-component pixel grid (luma). Samples are stored row-major in
/// 16-bit containers regardless of bit depth; every value must fit in
/// [0, 2^bit_depth - 1]. Height must be even and >= 2: the spherical
/// metrics assume a vertical extent symmetric about the equator.
class Plane {
 public:
  Plane(int width, int height, int bit_depth)
      : Plane(width, height, bit_depth,
              std::vector<std::uint16_t>(
                  static_cast<std::size_t>(width) * height, 0)) {}

  Plane(int width, int height, int bit_depth, std::vector<std::uint16_t> samples)
      : width_(width),
        height_(height),
        bit_depth_(bit_depth),
        samples_(std::move(samples)) {
    if (bit_depth_ != 8 && bit_depth_ != 10) {
      throw InvalidArgument("plane bit depth must be 8 or 10, got " +
                            std::to_string(bit_depth_));
    }
    if (width_ < 1 || height_ < 2 || height_ % 2 != 0) {
      throw InvalidDimensions("plane must be at least 1x2 with even height, got " +
                              std::to_string(width_) + "x" + std::to_string(height_));
    }
    if (samples_.size() != static_cast<std::size_t>(width_) * height_) {
      throw ShapeError("sample count " + std::to_string(samples_.size()) +
                       " does not match " + std::to_string(width_) + "x" +
                       std::to_string(height_));
    }
    const std::uint16_t max = peak();
    for (std::uint16_t s : samples_) {
      if (s > max) {
        throw InvalidArgument("sample " + std::to_string(s) + " exceeds peak " +
                              std::to_string(max));
      }
    }
  }

  int width() const { return width_; }
  int height() const { return height_; }
  int bit_depth() const { return bit_depth_; }
  std::uint16_t peak() const {
    return static_cast<std::uint16_t>((1u << bit_depth_) - 1u);
  }

  std::span<const std::uint16_t> samples() const { return samples_; }
  std::span<const std::uint16_t> row(int r) const {
    return {samples_.data() + static_cast<std::size_t>(r) * width_,
            static_cast<std::size_t>(width_)};
  }

  std::uint16_t at(int col, int r) const {
    return samples_[static_cast<std::size_t>(r) * width_ + col];
  }
  void set(int col, int r, std::uint16_t value) {
    samples_[static_cast<std::size_t>(r) * width_ + col] = value;
  }

  bool same_shape(const Plane& other) const {
    return width_ == other.width_ && height_ == other.height_ &&
           bit_depth_ == other.bit_depth_;
  }

  bool operator==(const Plane&) const = default;

 private:
  int width_;
  int height_;
  int bit_depth_;
  std::vector<std::uint16_t> samples_;
};

/// One decoded frame: metric kernels consume the luma plane only; the
/// chroma arrays are kept verbatim for pass-through writing and never
/// interpreted (their geometry would not satisfy Plane's invariants).
struct Frame {
  Plane luma;
  std::vector<std::uint16_t> chroma_u;
  std::vector<std::uint16_t> chroma_v;
};

/// Ordered frame sequence with a shared geometry. Immutable after
/// construction; safe to share read-only across parallel workers.
class Video {
 public:
  Video(std::vector<Frame> frames, Fraction frame_rate)
      : frames_(std::move(frames)), frame_rate_(frame_rate) {
    if (frames_.empty()) {
      throw InvalidArgument("video must contain at least one frame");
    }
    const Plane& first = frames_.front().luma;
    for (const Frame& f : frames_) {
      if (!f.luma.same_shape(first)) {
        throw ShapeError("all frames must share width/height/bit depth");
      }
    }
  }

  std::size_t frame_count() const { return frames_.size(); }
  int width() const { return frames_.front().luma.width(); }
  int height() const { return frames_.front().luma.height(); }
  int bit_depth() const { return frames_.front().luma.bit_depth(); }
  Fraction frame_rate() const { return frame_rate_; }
  double duration_seconds() const {
    return static_cast<double>(frames_.size()) / frame_rate_.to_double();
  }

  const Frame& frame(std::size_t i) const { return frames_[i]; }
  const Plane& luma(std::size_t i) const { return frames_[i].luma; }

 private:
  std::vector<Frame> frames_;
  Fraction frame_rate_;
};

/// Returns the luma component of one frame, untouched.
const Plane& luma_plane(const Video& video, std::size_t frame_index);

}  // namespace vq360

#endif  // VQ360_TYPES_HPP_
