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

#ifndef VQ360_VIDEO_IO_HPP_
#define VQ360_VIDEO_IO_HPP_

#include <cstddef>
#include <iosfwd>
#include <limits>
#include <optional>
#include <string>

#include "vq360/types.hpp"

namespace vq360 {

struct Y4mHeader {
  int width = 0;
  int height = 0;
  Fraction frame_rate;
  int bit_depth = 8;
  std::string colorspace = "420";
};

/// Sequential Y4M (YUV4MPEG2) frame reader, 4:2:0 colorspaces only
/// (C420/C420jpeg/C420paldv/C420mpeg2 at 8 bit, C420p10 at 10 bit).
/// Streams one frame at a time so 4K inputs never have to fit in memory.
class Y4mReader {
 public:
  explicit Y4mReader(std::istream& stream);

  const Y4mHeader& header() const { return header_; }

  /// Next frame, or nullopt at end of stream. Throws TruncationError when
  /// the payload ends mid-frame.
  std::optional<Frame> next_frame();

 private:
  std::istream& stream_;
  Y4mHeader header_;
  int frames_read_ = 0;
};

/// Sequential raw planar I420 reader (Y then U then V per frame);
/// 10-bit samples are little-endian 16-bit containers.
class RawYuvReader {
 public:
  RawYuvReader(std::istream& stream, int width, int height, int bit_depth);

  std::optional<Frame> next_frame();

 private:
  std::istream& stream_;
  int width_;
  int height_;
  int bit_depth_;
  int frames_read_ = 0;
};

constexpr std::size_t kAllFrames = std::numeric_limits<std::size_t>::max();

Video read_y4m(std::istream& stream, std::size_t max_frames = kAllFrames);
Video read_y4m_file(const std::string& path, std::size_t max_frames = kAllFrames);

/// Raw I420 file. Rejects files whose size is not a whole number of
/// frames, and odd dimensions.
Video read_raw_yuv(const std::string& path, int width, int height, int bit_depth,
                   std::size_t max_frames = kAllFrames);

void write_y4m(const Video& video, std::ostream& stream);
void write_y4m_file(const Video& video, const std::string& path);
void write_raw_yuv(const Video& video, const std::string& path);

/// Frame count and rate from a Y4M header plus a sequential scan; used to
/// derive clip duration without decoding into memory.
struct Y4mProbe {
  int width = 0;
  int height = 0;
  Fraction frame_rate;
  std::size_t frame_count = 0;
  double duration_seconds() const {
    return static_cast<double>(frame_count) / frame_rate.to_double();
  }
};
Y4mProbe probe_y4m_file(const std::string& path);

}  // namespace vq360

#endif  // VQ360_VIDEO_IO_HPP_
