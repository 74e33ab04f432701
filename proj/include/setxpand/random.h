// Copyright 2026 The Setxpand Authors.
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

#ifndef SETXPAND_RANDOM_H_
#define SETXPAND_RANDOM_H_

#include <cstdint>
#include <algorithm>
#include <utility>
#include <vector>

namespace setxpand {

// SplitMix64 generator. Used wherever output must be byte-identical for a
// given seed.
class Rng {
 public:
  explicit Rng(uint64_t seed) : state_(seed) {}

  uint64_t Next() {
    uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  // Uniform in [0, 1).
  double Uniform() { return static_cast<double>(Next() >> 11) * 0x1.0p-53; }
  // Uniform in [0, n); n > 0.
  uint64_t Below(uint64_t n) { return Next() % n; }

  template <typename T>
  void Shuffle(std::vector<T> &items) {
    for (size_t i = items.size(); i > 1; --i) {
      std::swap(items[i - 1], items[Below(i)]);
    }
  }

  // k distinct elements of `items` in sampling order (all of them if k is
  // larger).
  template <typename T>
  std::vector<T> Sample(std::vector<T> items, size_t k) {
    k = std::min(k, items.size());
    for (size_t i = 0; i < k; ++i) {
      std::swap(items[i], items[i + Below(items.size() - i)]);
    }
    items.resize(k);
    return items;
  }

 private:
  uint64_t state_;
};

}  // namespace setxpand

#endif  // SETXPAND_RANDOM_H_
