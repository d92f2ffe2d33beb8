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

#ifndef VQ360_RNG_HPP_
#define VQ360_RNG_HPP_

#include <cstdint>
#include <random>
#include <vector>

namespace vq360 {

/// Seeded generator with fully specified output. mt19937_64 is bit-exact
/// per the standard, and the bounded draw below avoids the
/// implementation-defined std::uniform_int_distribution /
/// std::shuffle, so the same seed reproduces the same stream on every
/// platform. Session playlists are replayable in audits because of this.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next() { return gen_(); }

  /// Uniform draw in [0, bound) by rejection; bound must be > 0.
  std::uint64_t next_below(std::uint64_t bound) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t v;
    do {
      v = gen_();
    } while (v >= limit);
    return v % bound;
  }

  /// Fisher-Yates with the portable bounded draw.
  template <typename T>
  void shuffle(std::vector<T>& values) {
    for (std::size_t i = values.size(); i > 1; --i) {
      std::swap(values[i - 1], values[next_below(i)]);
    }
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace vq360

#endif  // VQ360_RNG_HPP_
