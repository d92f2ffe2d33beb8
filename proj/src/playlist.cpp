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

#include "vq360/playlist.hpp"

#include <algorithm>
#include <map>
#include <ostream>

#include "vq360/errors.hpp"
#include "vq360/rng.hpp"

namespace vq360 {

namespace {

/// An arrangement with no two adjacent equal contents exists iff the
/// largest content count M satisfies 2M <= R + 1 for R remaining items;
/// when 2M == R + 1 the majority content must open the arrangement, so
/// it must differ from the previous pick.
bool arrangeable(const std::map<std::string, int>& counts, int remaining,
                 const std::string& prev) {
  int max_count = 0;
  const std::string* max_content = nullptr;
  for (const auto& [content, count] : counts) {
    if (count > max_count) {
      max_count = count;
      max_content = &content;
    }
  }
  if (2 * max_count > remaining + 1) {
    return false;
  }
  if (2 * max_count == remaining + 1 && max_content != nullptr &&
      *max_content == prev) {
    return false;
  }
  return true;
}

bool place_next(std::vector<const PvsId*>& remaining,
                std::map<std::string, int>& counts, const std::string& prev,
                Rng& rng, std::vector<PvsId>& out) {
  if (remaining.empty()) {
    return true;
  }
  // Candidates: remaining items whose content differs from the previous
  // pick and whose removal leaves the rest arrangeable. One is drawn
  // uniformly; the exact feasibility test makes backtracking a safety
  // net rather than the normal path.
  std::vector<std::size_t> candidates;
  for (std::size_t i = 0; i < remaining.size(); ++i) {
    const std::string& content = remaining[i]->content_id;
    if (content == prev) {
      continue;
    }
    counts[content] -= 1;
    const bool ok =
        arrangeable(counts, static_cast<int>(remaining.size()) - 1, content);
    counts[content] += 1;
    if (ok) {
      candidates.push_back(i);
    }
  }
  rng.shuffle(candidates);
  for (std::size_t pick : candidates) {
    const PvsId* item = remaining[pick];
    out.push_back(*item);
    counts[item->content_id] -= 1;
    std::swap(remaining[pick], remaining.back());
    remaining.pop_back();
    if (place_next(remaining, counts, item->content_id, rng, out)) {
      return true;
    }
    remaining.push_back(item);
    std::swap(remaining[pick], remaining.back());
    counts[item->content_id] += 1;
    out.pop_back();
  }
  return false;
}

}  // namespace

Playlist generate_playlist(const std::vector<PvsId>& pool, std::uint64_t seed,
                           const std::string& session_id) {
  if (pool.empty()) {
    throw InvalidArgument("playlist pool must be non-empty");
  }
  std::map<std::string, int> counts;
  for (const PvsId& item : pool) {
    counts[item.content_id] += 1;
  }
  if (!arrangeable(counts, static_cast<int>(pool.size()), "")) {
    int max_count = 0;
    for (const auto& [content, count] : counts) {
      max_count = std::max(max_count, count);
    }
    throw InfeasiblePool("one content holds " + std::to_string(max_count) +
                         " of " + std::to_string(pool.size()) +
                         " items; no adjacency-free order exists");
  }

  Rng rng(seed);
  std::vector<const PvsId*> remaining;
  remaining.reserve(pool.size());
  for (const PvsId& item : pool) {
    remaining.push_back(&item);
  }
  Playlist playlist;
  playlist.session_id = session_id;
  playlist.seed = seed;
  playlist.items.reserve(pool.size());
  if (!place_next(remaining, counts, "", rng, playlist.items)) {
    throw InfeasiblePool("no adjacency-free order exists for this pool");
  }
  return playlist;
}

std::vector<PlaylistViolation> validate_playlist(const Playlist& playlist,
                                                 const std::vector<PvsId>& pool) {
  std::vector<PlaylistViolation> violations;

  const auto key = [](const PvsId& item) {
    return item.content_id + "\x1f" + item.quality_label;
  };
  const auto pretty = [](const std::string& k) {
    const std::size_t sep = k.find('\x1f');
    return "(" + k.substr(0, sep) + ", " + k.substr(sep + 1) + ")";
  };
  std::map<std::string, int> wanted;
  for (const PvsId& item : pool) {
    wanted[key(item)] += 1;
  }
  std::map<std::string, int> seen;
  for (const PvsId& item : playlist.items) {
    seen[key(item)] += 1;
  }
  for (const auto& [k, want] : wanted) {
    const auto it = seen.find(k);
    const int have = it == seen.end() ? 0 : it->second;
    if (have < want) {
      violations.push_back(PlaylistViolation{
          ViolationKind::kMissingItem,
          "item " + pretty(k) + " appears " + std::to_string(have) +
              " times, pool holds " + std::to_string(want),
          -1, -1});
    }
  }
  for (const auto& [k, have] : seen) {
    const auto it = wanted.find(k);
    if (it == wanted.end()) {
      violations.push_back(PlaylistViolation{ViolationKind::kForeignItem,
                                             "item " + pretty(k) + " not in pool",
                                             -1, -1});
    } else if (have > it->second) {
      violations.push_back(PlaylistViolation{
          ViolationKind::kDuplicateItem,
          "item " + pretty(k) + " appears " + std::to_string(have) +
              " times, pool holds " + std::to_string(it->second),
          -1, -1});
    }
  }

  for (std::size_t i = 1; i < playlist.items.size(); ++i) {
    if (playlist.items[i].content_id == playlist.items[i - 1].content_id) {
      violations.push_back(PlaylistViolation{
          ViolationKind::kAdjacentContent,
          "positions " + std::to_string(i - 1) + " and " + std::to_string(i) +
              " both show content " + playlist.items[i].content_id,
          static_cast<int>(i - 1), static_cast<int>(i)});
    }
  }
  return violations;
}

nlohmann::ordered_json playlist_to_json(const Playlist& playlist) {
  nlohmann::ordered_json j;
  j["session_id"] = playlist.session_id;
  j["seed"] = playlist.seed;
  j["items"] = nlohmann::ordered_json::array();
  for (const PvsId& item : playlist.items) {
    j["items"].push_back(
        {{"content", item.content_id}, {"quality", item.quality_label}});
  }
  return j;
}

Playlist playlist_from_json(const nlohmann::json& j) {
  Playlist playlist;
  if (!j.contains("session_id") || !j.contains("seed") || !j.contains("items")) {
    throw ParseError("playlist JSON needs session_id, seed, and items");
  }
  playlist.session_id = j["session_id"].get<std::string>();
  playlist.seed = j["seed"].get<std::uint64_t>();
  for (const auto& item : j["items"]) {
    if (!item.contains("content") || !item.contains("quality")) {
      throw ParseError("playlist item needs content and quality");
    }
    playlist.items.push_back(PvsId{item["content"].get<std::string>(),
                                   item["quality"].get<std::string>()});
  }
  return playlist;
}

void write_playlist_csv(const Playlist& playlist, std::ostream& stream) {
  stream << "position,content,quality\n";
  for (std::size_t i = 0; i < playlist.items.size(); ++i) {
    stream << i << "," << playlist.items[i].content_id << ","
           << playlist.items[i].quality_label << "\n";
  }
}

}  // namespace vq360
