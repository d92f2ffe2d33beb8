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

#include "vq360/vmaf.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "vq360/errors.hpp"
#include "vq360/metrics.hpp"
#include "vq360/subprocess.hpp"

namespace vq360 {

namespace {

// Tiny numeric excursions around the scale edges happen in real logs;
// anything beyond this margin is not a score log.
constexpr double kClampMargin = 1.0;

double frame_score(const nlohmann::json& frame, std::size_t index) {
  const nlohmann::json* value = nullptr;
  if (frame.contains("metrics") && frame["metrics"].contains("vmaf")) {
    value = &frame["metrics"]["vmaf"];
  } else if (frame.contains("vmaf")) {
    value = &frame["vmaf"];
  } else if (frame.contains("VMAF_score")) {
    value = &frame["VMAF_score"];
  } else {
    throw LogParseError("frame " + std::to_string(index) + " carries no score");
  }
  if (!value->is_number()) {
    throw LogParseError("frame " + std::to_string(index) +
                        " score is not numeric");
  }
  const double score = value->get<double>();
  if (score < -kClampMargin || score > 100.0 + kClampMargin) {
    throw LogParseError("frame " + std::to_string(index) + " score " +
                        std::to_string(score) + " outside the [0, 100] scale");
  }
  return std::min(100.0, std::max(0.0, score));
}

}  // namespace

std::vector<double> parse_vmaf_log(const std::string& log_bytes) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(log_bytes);
  } catch (const nlohmann::json::parse_error& e) {
    throw LogParseError(std::string("log is not valid JSON: ") + e.what());
  }
  if (!j.contains("frames") || !j["frames"].is_array()) {
    throw LogParseError("log has no frames array");
  }
  const auto& frames = j["frames"];
  if (frames.empty()) {
    throw LogParseError("log frames array is empty");
  }
  std::vector<double> scores;
  scores.reserve(frames.size());
  for (std::size_t i = 0; i < frames.size(); ++i) {
    scores.push_back(frame_score(frames[i], i));
  }
  return scores;
}

double pooled_vmaf(std::span<const double> scores) {
  return pool_mean(scores);
}

VmafResult run_vmaf(const VmafRun& run) {
  if (!std::filesystem::exists(run.reference_path)) {
    throw InvalidArgument("reference does not exist: " + run.reference_path);
  }
  if (!std::filesystem::exists(run.distorted_path)) {
    throw InvalidArgument("distorted does not exist: " + run.distorted_path);
  }
  const std::string log_dir =
      run.log_dir.empty() ? std::filesystem::temp_directory_path().string()
                          : run.log_dir;
  std::filesystem::create_directories(log_dir);
  const std::string log_path = unique_path(log_dir, "vmaf_log", ".json");

  const std::string command = substitute_template(
      run.command_template, {{"ref", shell_quote(run.reference_path)},
                             {"dist", shell_quote(run.distorted_path)},
                             {"log", shell_quote(log_path)}});
  const CommandResult result = run_command(command);
  if (result.exit_code == 127) {
    throw ToolNotFound("scoring tool not found for: " + command + "\n" +
                       result.output);
  }
  if (result.exit_code != 0) {
    // Log retained (if written) for diagnosis.
    throw NonZeroExit("scoring tool exited " + std::to_string(result.exit_code) +
                          " for: " + command + " (log kept at " + log_path + ")",
                      result.exit_code, result.output);
  }

  std::ifstream in(log_path, std::ios::binary);
  if (!in) {
    throw LogParseError("scoring tool exited 0 but wrote no log at " + log_path);
  }
  std::ostringstream bytes;
  bytes << in.rdbuf();
  in.close();

  VmafResult out;
  try {
    out.per_frame = parse_vmaf_log(bytes.str());
  } catch (const LogParseError& e) {
    throw LogParseError(std::string(e.what()) + " (log kept at " + log_path + ")");
  }
  out.pooled = pooled_vmaf(out.per_frame);
  std::error_code ec;
  std::filesystem::remove(log_path, ec);
  return out;
}

}  // namespace vq360
