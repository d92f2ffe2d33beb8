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

#ifndef VQ360_VMAF_HPP_
#define VQ360_VMAF_HPP_

#include <span>
#include <string>
#include <vector>

namespace vq360 {

/// One scoring invocation of the external tool. The command template
/// must contain each of {ref}, {dist}, {log} exactly once; the tool is
/// expected to write a JSON log with an ordered per-frame score array.
struct VmafRun {
  std::string reference_path;
  std::string distorted_path;
  std::string command_template;
  std::string model_tag;  // free-form label recorded in run metadata
  std::string log_dir;    // temp log location; system default when empty
};

struct VmafResult {
  std::vector<double> per_frame;  // each in [0, 100]
  double pooled = 0.0;
  std::string pooling = "mean";
};

/// Extracts per-frame scores, in frame order, from the tool's JSON log.
/// Accepts the score under frames[i].metrics.vmaf, frames[i].vmaf, or
/// frames[i].VMAF_score (layouts differ across tool generations). Scores
/// marginally outside [0, 100] are clamped; values past that margin mean
/// the log is not a score log and raise LogParseError.
std::vector<double> parse_vmaf_log(const std::string& log_bytes);

/// Arithmetic-mean temporal pooling, accumulated in frame order.
double pooled_vmaf(std::span<const double> scores);

/// Spawns the tool, waits, parses its log, and pools. The temp log is
/// deleted on success and retained on failure for diagnosis (its path is
/// embedded in the error message).
VmafResult run_vmaf(const VmafRun& run);

}  // namespace vq360

#endif  // VQ360_VMAF_HPP_
