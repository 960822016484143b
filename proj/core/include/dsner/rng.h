// Copyright 2026 The dsner Authors.
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


#ifndef DSNER_RNG_H_
#define DSNER_RNG_H_

#include <cstdint>
#include <random>
#include <string_view>
#include <utility>
#include <vector>

namespace dsner {

// Portable seeded generator. std::mt19937_64's output sequence is fixed by
// the standard, but the standard distributions and std::shuffle are not, so
// bounded draws and shuffling are defined here. Bump the version in
// kAlgorithm whenever the draw sequence changes.
class Rng {
 public:
  static constexpr std::string_view kAlgorithm = "mt19937_64+fisher-yates@1";

  explicit Rng(uint64_t seed) : engine_(seed) {}

  uint64_t Next() { return engine_(); }

  // Uniform in [0, bound) by rejection; bound > 0.
  uint64_t Uniform(uint64_t bound) {
    const uint64_t threshold = (0 - bound) % bound;
    while (true) {
      uint64_t r = engine_();
      if (r >= threshold) return r % bound;
    }
  }

  // Uniform in [0, 1) with 53 bits of precision.
  double UniformReal() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  template <typename T>
  void Shuffle(std::vector<T> &items) {
    for (size_t i = items.size(); i > 1; --i) {
      size_t j = static_cast<size_t>(Uniform(i));
      std::swap(items[i - 1], items[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace dsner

#endif  // DSNER_RNG_H_
