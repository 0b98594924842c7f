// Copyright 2026 The abx Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ABX_RANDOM_H_
#define ABX_RANDOM_H_

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace abx {

// The engine output is fixed by the standard; the helpers below avoid the
// library-specific distributions so that seeded runs agree across toolchains.
using Rng = std::mt19937_64;

// Uniform integer in [0, n). n must be positive.
inline uint64_t UniformIndex(Rng &rng, uint64_t n) {
  const uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % n;
}

// Uniform double in [0, 1) with 53 random bits.
inline double UniformUnit(Rng &rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double UniformRange(Rng &rng, double lo, double hi) {
  return lo + (hi - lo) * UniformUnit(rng);
}

// Fisher-Yates shuffle.
template <typename T>
void Shuffle(std::vector<T> &items, Rng &rng) {
  for (size_t i = items.size(); i > 1; --i) {
    const size_t j = UniformIndex(rng, i);
    std::swap(items[i - 1], items[j]);
  }
}

}  // namespace abx

#endif  // ABX_RANDOM_H_
