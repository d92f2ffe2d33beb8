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

#include "vq360/video_io.hpp"

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

namespace vq360 {

namespace {

constexpr char kY4mMagic[] = "YUV4MPEG2";
constexpr char kFrameMagic[] = "FRAME";

bool is_c420(const std::string& cs) {
  return cs == "420" || cs == "420jpeg" || cs == "420paldv" || cs == "420mpeg2";
}

std::size_t luma_samples(int w, int h) {
  return static_cast<std::size_t>(w) * h;
}

std::size_t chroma_samples(int w, int h) {
  return static_cast<std::size_t>(w / 2) * (h / 2);
}

// Reads `count` samples; 8-bit as single bytes, 10-bit as little-endian
// 16-bit containers. Returns false on EOF before the first byte; throws
// on a partial read.
bool read_samples(std::istream& in, std::size_t count, int bit_depth,
                  std::vector<std::uint16_t>& out, int frame_index) {
  const std::size_t bytes_per = bit_depth > 8 ? 2 : 1;
  std::vector<char> buf(count * bytes_per);
  in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
  const std::size_t got = static_cast<std::size_t>(in.gcount());
  if (got == 0) {
    return false;
  }
  if (got < buf.size()) {
    throw TruncationError("frame " + std::to_string(frame_index) +
                              " payload truncated (" + std::to_string(got) + " of " +
                              std::to_string(buf.size()) + " bytes)",
                          frame_index);
  }
  out.resize(count);
  if (bytes_per == 1) {
    for (std::size_t i = 0; i < count; ++i) {
      out[i] = static_cast<std::uint8_t>(buf[i]);
    }
  } else {
    for (std::size_t i = 0; i < count; ++i) {
      const auto lo = static_cast<std::uint8_t>(buf[2 * i]);
      const auto hi = static_cast<std::uint8_t>(buf[2 * i + 1]);
      out[i] = static_cast<std::uint16_t>(lo | (hi << 8));
    }
  }
  return true;
}

Frame read_i420_frame(std::istream& in, int w, int h, int bit_depth,
                      int frame_index, bool luma_already_started) {
  std::vector<std::uint16_t> y;
  if (!read_samples(in, luma_samples(w, h), bit_depth, y, frame_index)) {
    if (luma_already_started) {
      throw TruncationError("frame " + std::to_string(frame_index) +
                                " header present but payload missing",
                            frame_index);
    }
    throw TruncationError("unexpected end of stream at frame " +
                              std::to_string(frame_index),
                          frame_index);
  }
  std::vector<std::uint16_t> u;
  std::vector<std::uint16_t> v;
  if (!read_samples(in, chroma_samples(w, h), bit_depth, u, frame_index) ||
      !read_samples(in, chroma_samples(w, h), bit_depth, v, frame_index)) {
    throw TruncationError("frame " + std::to_string(frame_index) +
                              " chroma payload truncated",
                          frame_index);
  }
  return Frame{Plane(w, h, bit_depth, std::move(y)), std::move(u), std::move(v)};
}

int parse_int(const std::string& val, const char* what) {
  try {
    std::size_t pos = 0;
    const int v = std::stoi(val, &pos);
    if (pos != val.size()) {
      throw ParseError(std::string("trailing characters in ") + what + " '" + val + "'");
    }
    return v;
  } catch (const std::logic_error&) {
    throw ParseError(std::string("malformed ") + what + " '" + val + "'");
  }
}

Y4mHeader parse_y4m_header(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) {
    throw ParseError("empty stream, expected YUV4MPEG2 signature");
  }
  std::istringstream tokens(line);
  std::string magic;
  tokens >> magic;
  if (magic != kY4mMagic) {
    throw ParseError("missing YUV4MPEG2 signature");
  }

  Y4mHeader h;
  bool have_w = false, have_h = false, have_f = false;
  std::string tok;
  while (tokens >> tok) {
    if (tok.size() < 2) {
      throw ParseError("malformed Y4M parameter '" + tok + "'");
    }
    const char tag = tok[0];
    const std::string val = tok.substr(1);
    switch (tag) {
      case 'W':
        h.width = parse_int(val, "width");
        have_w = true;
        break;
      case 'H':
        h.height = parse_int(val, "height");
        have_h = true;
        break;
      case 'F': {
        const auto colon = val.find(':');
        if (colon == std::string::npos) {
          throw ParseError("malformed frame rate '" + val + "'");
        }
        h.frame_rate.num = parse_int(val.substr(0, colon), "frame rate");
        h.frame_rate.den = parse_int(val.substr(colon + 1), "frame rate");
        if (h.frame_rate.num <= 0 || h.frame_rate.den <= 0) {
          throw ParseError("non-positive frame rate '" + val + "'");
        }
        have_f = true;
        break;
      }
      case 'I':
        if (val != "p") {
          throw UnsupportedFormat("interlaced Y4M streams are not supported (I" +
                                  val + ")");
        }
        break;
      case 'C': {
        std::string cs = val;
        if (cs == "420p10") {
          h.bit_depth = 10;
          h.colorspace = cs;
        } else if (is_c420(cs)) {
          h.bit_depth = 8;
          h.colorspace = cs;
        } else {
          throw UnsupportedFormat("colorspace C" + cs +
                                  " is not supported (4:2:0 family only)");
        }
        break;
      }
      case 'A':
      case 'X':
        break;  // aspect ratio and extensions: pass
      default:
        throw ParseError("unknown Y4M parameter '" + tok + "'");
    }
  }
  if (!have_w || !have_h) {
    throw ParseError("Y4M header missing width or height");
  }
  if (!have_f) {
    throw ParseError("Y4M header missing frame rate");
  }
  if (h.width < 1 || h.height < 2 || h.width % 2 != 0 || h.height % 2 != 0) {
    throw InvalidDimensions("Y4M dimensions must be positive and even, got " +
                            std::to_string(h.width) + "x" + std::to_string(h.height));
  }
  return h;
}

}  // namespace

Y4mReader::Y4mReader(std::istream& stream)
    : stream_(stream), header_(parse_y4m_header(stream)) {}

std::optional<Frame> Y4mReader::next_frame() {
  std::string line;
  if (!std::getline(stream_, line)) {
    return std::nullopt;
  }
  // FRAME may carry per-frame parameters after a space; ignore them.
  if (line.compare(0, 5, kFrameMagic) != 0 ||
      (line.size() > 5 && line[5] != ' ')) {
    throw ParseError("expected FRAME marker before frame " +
                     std::to_string(frames_read_));
  }
  Frame f = read_i420_frame(stream_, header_.width, header_.height,
                            header_.bit_depth, frames_read_,
                            /*luma_already_started=*/true);
  ++frames_read_;
  return f;
}

RawYuvReader::RawYuvReader(std::istream& stream, int width, int height,
                           int bit_depth)
    : stream_(stream), width_(width), height_(height), bit_depth_(bit_depth) {
  if (width < 2 || height < 2 || width % 2 != 0 || height % 2 != 0) {
    throw InvalidDimensions("raw YUV dimensions must be positive and even, got " +
                            std::to_string(width) + "x" + std::to_string(height));
  }
}

std::optional<Frame> RawYuvReader::next_frame() {
  std::vector<std::uint16_t> y;
  if (!read_samples(stream_, luma_samples(width_, height_), bit_depth_, y,
                    frames_read_)) {
    return std::nullopt;
  }
  std::vector<std::uint16_t> u;
  std::vector<std::uint16_t> v;
  if (!read_samples(stream_, chroma_samples(width_, height_), bit_depth_, u,
                    frames_read_) ||
      !read_samples(stream_, chroma_samples(width_, height_), bit_depth_, v,
                    frames_read_)) {
    throw TruncationError("frame " + std::to_string(frames_read_) +
                              " chroma payload truncated",
                          frames_read_);
  }
  Frame f{Plane(width_, height_, bit_depth_, std::move(y)), std::move(u),
          std::move(v)};
  ++frames_read_;
  return f;
}

Video read_y4m(std::istream& stream, std::size_t max_frames) {
  Y4mReader reader(stream);
  std::vector<Frame> frames;
  while (frames.size() < max_frames) {
    auto f = reader.next_frame();
    if (!f) {
      break;
    }
    frames.push_back(std::move(*f));
  }
  if (frames.empty()) {
    throw ParseError("Y4M stream contains no frames");
  }
  return Video(std::move(frames), reader.header().frame_rate);
}

Video read_y4m_file(const std::string& path, std::size_t max_frames) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ParseError("cannot open " + path);
  }
  return read_y4m(in, max_frames);
}

Video read_raw_yuv(const std::string& path, int width, int height, int bit_depth,
                   std::size_t max_frames) {
  if (width < 2 || height < 2 || width % 2 != 0 || height % 2 != 0) {
    throw InvalidDimensions("raw YUV dimensions must be positive and even, got " +
                            std::to_string(width) + "x" + std::to_string(height));
  }
  std::error_code ec;
  const auto size = std::filesystem::file_size(path, ec);
  if (ec) {
    throw ParseError("cannot stat " + path + ": " + ec.message());
  }
  const std::size_t bytes_per = bit_depth > 8 ? 2 : 1;
  const std::size_t frame_bytes =
      (luma_samples(width, height) + 2 * chroma_samples(width, height)) * bytes_per;
  if (size % frame_bytes != 0) {
    throw TruncationError("file size " + std::to_string(size) +
                          " is not a multiple of the frame size " +
                          std::to_string(frame_bytes));
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ParseError("cannot open " + path);
  }
  RawYuvReader reader(in, width, height, bit_depth);
  std::vector<Frame> frames;
  while (frames.size() < max_frames) {
    auto f = reader.next_frame();
    if (!f) {
      break;
    }
    frames.push_back(std::move(*f));
  }
  if (frames.empty()) {
    throw TruncationError("file " + path + " holds no complete frame");
  }
  return Video(std::move(frames), Fraction{25, 1});
}

namespace {

void write_samples(std::ostream& out, std::span<const std::uint16_t> samples,
                   int bit_depth) {
  if (bit_depth <= 8) {
    std::vector<char> buf(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
      buf[i] = static_cast<char>(samples[i] & 0xff);
    }
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  } else {
    std::vector<char> buf(samples.size() * 2);
    for (std::size_t i = 0; i < samples.size(); ++i) {
      buf[2 * i] = static_cast<char>(samples[i] & 0xff);
      buf[2 * i + 1] = static_cast<char>((samples[i] >> 8) & 0xff);
    }
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  }
}

}  // namespace

void write_y4m(const Video& video, std::ostream& out) {
  out << kY4mMagic << " W" << video.width() << " H" << video.height() << " F"
      << video.frame_rate().num << ":" << video.frame_rate().den << " Ip A1:1 C420"
      << (video.bit_depth() == 10 ? "p10" : "") << "\n";
  for (std::size_t i = 0; i < video.frame_count(); ++i) {
    const Frame& f = video.frame(i);
    out << kFrameMagic << "\n";
    write_samples(out, f.luma.samples(), video.bit_depth());
    write_samples(out, f.chroma_u, video.bit_depth());
    write_samples(out, f.chroma_v, video.bit_depth());
  }
}

void write_y4m_file(const Video& video, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw ParseError("cannot open " + path + " for writing");
  }
  write_y4m(video, out);
}

void write_raw_yuv(const Video& video, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw ParseError("cannot open " + path + " for writing");
  }
  for (std::size_t i = 0; i < video.frame_count(); ++i) {
    const Frame& f = video.frame(i);
    write_samples(out, f.luma.samples(), video.bit_depth());
    write_samples(out, f.chroma_u, video.bit_depth());
    write_samples(out, f.chroma_v, video.bit_depth());
  }
}

Y4mProbe probe_y4m_file(const std::string& path) {
  std::error_code ec;
  const auto file_size = std::filesystem::file_size(path, ec);
  if (ec) {
    throw ParseError("cannot stat " + path + ": " + ec.message());
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ParseError("cannot open " + path);
  }
  const Y4mHeader header = parse_y4m_header(in);
  const std::size_t bytes_per = header.bit_depth > 8 ? 2 : 1;
  const std::streamoff payload = static_cast<std::streamoff>(
      (luma_samples(header.width, header.height) +
       2 * chroma_samples(header.width, header.height)) *
      bytes_per);
  Y4mProbe probe{header.width, header.height, header.frame_rate, 0};
  std::string line;
  while (std::getline(in, line)) {
    if (line.compare(0, 5, kFrameMagic) != 0 ||
        (line.size() > 5 && line[5] != ' ')) {
      throw ParseError("expected FRAME marker before frame " +
                       std::to_string(probe.frame_count));
    }
    const std::streamoff pos = in.tellg();
    if (pos < 0 || pos + payload > static_cast<std::streamoff>(file_size)) {
      throw TruncationError("frame " + std::to_string(probe.frame_count) +
                                " payload truncated",
                            static_cast<int>(probe.frame_count));
    }
    in.seekg(payload, std::ios::cur);
    ++probe.frame_count;
  }
  if (probe.frame_count == 0) {
    throw ParseError("Y4M stream contains no frames");
  }
  return probe;
}

const Plane& luma_plane(const Video& video, std::size_t frame_index) {
  if (frame_index >= video.frame_count()) {
    throw IndexError("frame index " + std::to_string(frame_index) +
                     " out of range for " + std::to_string(video.frame_count()) +
                     " frames");
  }
  return video.luma(frame_index);
}

}  // namespace vq360
