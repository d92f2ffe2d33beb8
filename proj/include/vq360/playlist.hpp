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

#ifndef VQ360_PLAYLIST_HPP_
#define VQ360_PLAYLIST_HPP_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

namespace vq360 {

struct PvsId {
  std::string content_id;
  std::string quality_label;
  bool operator==(const PvsId&) const = default;
};

/// One session's presentation order: a permutation of the pool with no
/// two adjacent items sharing a content id. Quality labels may repeat
/// consecutively; only content adjacency is constrained.
struct Playlist {
  std::string session_id;
  std::uint64_t seed = 0;
  std::vector<PvsId> items;
};

/// Seeded constrained shuffle: at each position one item is drawn
/// uniformly among the remaining items that differ in content from the
/// previous pick and leave the remainder arrangeable; backtracking covers
/// the residual cases. Same seed, same playlist, on every platform.
/// Throws InfeasiblePool when no valid order exists (one content holding
/// more than half the pool, rounded up).
Playlist generate_playlist(const std::vector<PvsId>& pool, std::uint64_t seed,
                           const std::string& session_id = "");

enum class ViolationKind {
  kAdjacentContent,
  kMissingItem,
  kDuplicateItem,
  kForeignItem,
};

struct PlaylistViolation {
  ViolationKind kind;
  std::string detail;
  int position_a = -1;
  int position_b = -1;
};

/// Checks a playlist against its pool: exact permutation coverage and
/// the content-adjacency rule. Returns findings instead of throwing.
std::vector<PlaylistViolation> validate_playlist(const Playlist& playlist,
                                                 const std::vector<PvsId>& pool);

nlohmann::ordered_json playlist_to_json(const Playlist& playlist);
Playlist playlist_from_json(const nlohmann::json& j);

/// CSV for the external rating app: header `position,content,quality`.
void write_playlist_csv(const Playlist& playlist, std::ostream& stream);

}  // namespace vq360

#endif  // VQ360_PLAYLIST_HPP_
