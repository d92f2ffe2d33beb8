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

#include <algorithm>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "vq360/errors.hpp"
#include "vq360/playlist.hpp"

using namespace vq360;

namespace {

/// The study-shaped pool: every content in every quality A..F.
std::vector<PvsId> study_pool(int contents = 9) {
  const std::vector<std::string> labels = {"A", "B", "C", "D", "E", "F"};
  std::vector<PvsId> pool;
  for (int c = 0; c < contents; ++c) {
    for (const std::string& label : labels) {
      pool.push_back(PvsId{"content" + std::to_string(c), label});
    }
  }
  return pool;
}

int count_kind(const std::vector<PlaylistViolation>& violations,
               ViolationKind kind) {
  return static_cast<int>(
      std::count_if(violations.begin(), violations.end(),
                    [&](const PlaylistViolation& v) { return v.kind == kind; }));
}

}  // namespace

TEST_SUITE_BEGIN("playlist");

TEST_CASE("generated playlists are valid permutations for many seeds") {
  const std::vector<PvsId> pool = study_pool();
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    CAPTURE(seed);
    const Playlist playlist = generate_playlist(pool, seed);
    CHECK(playlist.seed == seed);
    CHECK(playlist.items.size() == pool.size());
    CHECK(validate_playlist(playlist, pool).empty());
  }
}

TEST_CASE("same seed reproduces the same order, other seeds move it") {
  const std::vector<PvsId> pool = study_pool();
  const Playlist a = generate_playlist(pool, 42, "sess");
  const Playlist b = generate_playlist(pool, 42, "sess");
  CHECK(a.session_id == "sess");
  REQUIRE(a.items.size() == b.items.size());
  for (std::size_t i = 0; i < a.items.size(); ++i) {
    CHECK(a.items[i] == b.items[i]);
  }

  const Playlist c = generate_playlist(pool, 43);
  bool any_difference = false;
  for (std::size_t i = 0; i < a.items.size(); ++i) {
    if (!(a.items[i] == c.items[i])) {
      any_difference = true;
      break;
    }
  }
  CHECK(any_difference);
}

TEST_CASE("single-item pool yields itself") {
  const std::vector<PvsId> pool = {PvsId{"x", "A"}};
  const Playlist playlist = generate_playlist(pool, 7);
  REQUIRE(playlist.items.size() == 1);
  CHECK(playlist.items[0] == pool[0]);
  CHECK(validate_playlist(playlist, pool).empty());
}

TEST_CASE("two items of one content cannot be separated") {
  const std::vector<PvsId> pool = {PvsId{"x", "A"}, PvsId{"x", "B"}};
  CHECK_THROWS_AS(generate_playlist(pool, 1), InfeasiblePool);
}

TEST_CASE("empty pool is rejected") {
  CHECK_THROWS_AS(generate_playlist({}, 1), InvalidArgument);
}

TEST_CASE("majority content at the feasibility boundary still arranges") {
  // a holds 3 of 5 items: 2*3 == 5 + 1, so a-x-a-x-a is forced in shape.
  const std::vector<PvsId> pool = {PvsId{"a", "A"}, PvsId{"a", "B"},
                                   PvsId{"a", "C"}, PvsId{"b", "A"},
                                   PvsId{"b", "B"}};
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    CAPTURE(seed);
    const Playlist playlist = generate_playlist(pool, seed);
    CHECK(validate_playlist(playlist, pool).empty());
    CHECK(playlist.items[0].content_id == "a");
    CHECK(playlist.items[2].content_id == "a");
    CHECK(playlist.items[4].content_id == "a");
  }
}

TEST_CASE("majority content past the boundary is infeasible") {
  const std::vector<PvsId> pool = {PvsId{"a", "A"}, PvsId{"a", "B"},
                                   PvsId{"a", "C"}, PvsId{"b", "A"}};
  CHECK_THROWS_AS(generate_playlist(pool, 1), InfeasiblePool);
}

TEST_CASE("adjacent equal quality labels are permitted") {
  const std::vector<PvsId> pool = {PvsId{"x", "A"}, PvsId{"y", "A"}};
  const Playlist playlist = generate_playlist(pool, 3);
  CHECK(playlist.items.size() == 2);
  CHECK(validate_playlist(playlist, pool).empty());
  CHECK(playlist.items[0].quality_label == "A");
  CHECK(playlist.items[1].quality_label == "A");
}

TEST_CASE("validate_playlist reports content adjacency with positions") {
  const std::vector<PvsId> pool = {PvsId{"x", "A"}, PvsId{"x", "B"},
                                   PvsId{"y", "A"}};
  Playlist playlist;
  playlist.items = {PvsId{"x", "A"}, PvsId{"x", "B"}, PvsId{"y", "A"}};
  const std::vector<PlaylistViolation> violations =
      validate_playlist(playlist, pool);
  REQUIRE(violations.size() == 1);
  CHECK(violations[0].kind == ViolationKind::kAdjacentContent);
  CHECK(violations[0].position_a == 0);
  CHECK(violations[0].position_b == 1);
  CHECK(violations[0].detail.find("x") != std::string::npos);
}

TEST_CASE("validate_playlist reports missing, duplicate, and foreign items") {
  const std::vector<PvsId> pool = {PvsId{"x", "A"}, PvsId{"y", "A"},
                                   PvsId{"z", "A"}};

  SUBCASE("missing item") {
    Playlist playlist;
    playlist.items = {PvsId{"x", "A"}, PvsId{"y", "A"}};
    const auto violations = validate_playlist(playlist, pool);
    REQUIRE(violations.size() == 1);
    CHECK(violations[0].kind == ViolationKind::kMissingItem);
    CHECK(violations[0].detail.find("z") != std::string::npos);
  }

  SUBCASE("duplicate displaces another item") {
    Playlist playlist;
    playlist.items = {PvsId{"x", "A"}, PvsId{"y", "A"}, PvsId{"x", "A"}};
    const auto violations = validate_playlist(playlist, pool);
    CHECK(count_kind(violations, ViolationKind::kDuplicateItem) == 1);
    CHECK(count_kind(violations, ViolationKind::kMissingItem) == 1);
  }

  SUBCASE("foreign item") {
    Playlist playlist;
    playlist.items = {PvsId{"x", "A"}, PvsId{"y", "A"}, PvsId{"w", "A"}};
    const auto violations = validate_playlist(playlist, pool);
    CHECK(count_kind(violations, ViolationKind::kForeignItem) == 1);
    CHECK(count_kind(violations, ViolationKind::kMissingItem) == 1);
  }

  SUBCASE("a manually reordered complete permutation passes") {
    Playlist playlist;
    playlist.items = {PvsId{"z", "A"}, PvsId{"x", "A"}, PvsId{"y", "A"}};
    CHECK(validate_playlist(playlist, pool).empty());
  }
}

TEST_CASE("playlist JSON round-trip") {
  const Playlist playlist = generate_playlist(study_pool(3), 11, "pilot");
  const nlohmann::ordered_json j = playlist_to_json(playlist);
  CHECK(j["session_id"] == "pilot");
  CHECK(j["seed"] == 11);
  CHECK(j["items"].size() == playlist.items.size());
  CHECK(j["items"][0].contains("content"));
  CHECK(j["items"][0].contains("quality"));

  const Playlist back = playlist_from_json(j);
  CHECK(back.session_id == playlist.session_id);
  CHECK(back.seed == playlist.seed);
  REQUIRE(back.items.size() == playlist.items.size());
  for (std::size_t i = 0; i < back.items.size(); ++i) {
    CHECK(back.items[i] == playlist.items[i]);
  }
}

TEST_CASE("playlist JSON rejects incomplete documents") {
  CHECK_THROWS_AS(playlist_from_json(nlohmann::json::parse(R"({"seed":1})")),
                  ParseError);
  CHECK_THROWS_AS(playlist_from_json(nlohmann::json::parse(
                      R"({"session_id":"s","seed":1,"items":[{"content":"x"}]})")),
                  ParseError);
}

TEST_CASE("playlist CSV layout") {
  Playlist playlist;
  playlist.session_id = "s1";
  playlist.items = {PvsId{"porto", "B"}, PvsId{"lions", "A"}};
  std::ostringstream out;
  write_playlist_csv(playlist, out);
  CHECK(out.str() == "position,content,quality\n0,porto,B\n1,lions,A\n");
}

TEST_SUITE_END();
