// Copyright 2026 The cynsel Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CYNSEL_RNG_HPP_
#define CYNSEL_RNG_HPP_

#include <cstdint>
#include <random>
#include <vector>

namespace cynsel {

// Deterministic RNG for sampling. mt19937_64 output is pinned by the
// standard; the std::* distributions are not, so bounded draws and unit
// doubles are derived here by hand to keep runs byte-identical across
// standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Unbiased draw in [0, n). n must be >= 1.
  std::uint64_t bounded(std::uint64_t n) {
    const std::uint64_t threshold = (0 - n) % n;  // 2^64 mod n
    for (;;) {
      const std::uint64_t r = engine_();
      if (r >= threshold) return r % n;
    }
  }

  // Uniform double in [0, 1) with 53 random bits.
  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Partial Fisher-Yates: after the call, the first `take` elements of
  // `items` are a uniform sample without replacement.
  template <typename T>
  void sample_prefix(std::vector<T>& items, std::size_t take) {
    const std::size_t n = items.size();
    if (take > n) take = n;
    for (std::size_t i = 0; i < take; ++i) {
      const std::size_t j = i + static_cast<std::size_t>(bounded(n - i));
      std::swap(items[i], items[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace cynsel

#endif  // CYNSEL_RNG_HPP_
