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

#ifndef VQ360_SUBPROCESS_HPP_
#define VQ360_SUBPROCESS_HPP_

#include <string>
#include <utility>
#include <vector>

namespace vq360 {

struct CommandResult {
  int exit_code = 0;
  std::string output;  // interleaved stdout + stderr
};

/// Runs `command` through the shell, capturing stdout and stderr.
/// A command terminated by signal N reports exit code 128 + N; the
/// shell itself reports 127 for an unresolvable program.
CommandResult run_command(const std::string& command);

/// Replaces each {placeholder} with its substitution. Every placeholder
/// must occur exactly once in the template; throws InvalidArgument
/// otherwise. Substituted values are shell-quoted by the caller if needed.
std::string substitute_template(
    const std::string& command_template,
    const std::vector<std::pair<std::string, std::string>>& substitutions);

/// Single-quotes a string for POSIX shells.
std::string shell_quote(const std::string& value);

/// Unique path under `dir` combining `stem`, the process id, and a
/// monotonic counter. The file is not created.
std::string unique_path(const std::string& dir, const std::string& stem,
                        const std::string& suffix);

}  // namespace vq360

#endif  // VQ360_SUBPROCESS_HPP_
