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

#include "vq360/subprocess.hpp"

#include <sys/wait.h>
#include <unistd.h>

#include <array>
#include <atomic>
#include <cstdio>
#include <filesystem>

#include "vq360/errors.hpp"

namespace vq360 {

CommandResult run_command(const std::string& command) {
  // The subshell wrapping makes the stderr redirect cover compound
  // commands as well.
  const std::string wrapped = "( " + command + " ) 2>&1";
  FILE* pipe = ::popen(wrapped.c_str(), "r");
  if (pipe == nullptr) {
    throw Error("failed to spawn shell for: " + command);
  }
  std::string output;
  std::array<char, 4096> buffer;
  std::size_t got;
  while ((got = std::fread(buffer.data(), 1, buffer.size(), pipe)) > 0) {
    output.append(buffer.data(), got);
  }
  const int status = ::pclose(pipe);
  int exit_code = -1;
  if (status >= 0) {
    if (WIFEXITED(status)) {
      exit_code = WEXITSTATUS(status);
    } else if (WIFSIGNALED(status)) {
      exit_code = 128 + WTERMSIG(status);
    }
  }
  return CommandResult{exit_code, std::move(output)};
}

std::string substitute_template(
    const std::string& command_template,
    const std::vector<std::pair<std::string, std::string>>& substitutions) {
  std::string result = command_template;
  for (const auto& [name, value] : substitutions) {
    const std::string token = "{" + name + "}";
    const std::size_t first = result.find(token);
    if (first == std::string::npos) {
      throw InvalidArgument("template is missing placeholder " + token + ": " +
                            command_template);
    }
    if (result.find(token, first + token.size()) != std::string::npos) {
      throw InvalidArgument("template repeats placeholder " + token + ": " +
                            command_template);
    }
    result.replace(first, token.size(), value);
  }
  return result;
}

std::string shell_quote(const std::string& value) {
  std::string quoted = "'";
  for (char c : value) {
    if (c == '\'') {
      quoted += "'\\''";
    } else {
      quoted += c;
    }
  }
  quoted += "'";
  return quoted;
}

std::string unique_path(const std::string& dir, const std::string& stem,
                        const std::string& suffix) {
  static std::atomic<std::uint64_t> counter{0};
  const std::uint64_t n = counter.fetch_add(1);
  const std::filesystem::path p =
      std::filesystem::path(dir) /
      (stem + "_" + std::to_string(::getpid()) + "_" + std::to_string(n) + suffix);
  return p.string();
}

}  // namespace vq360
