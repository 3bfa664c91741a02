// Copyright 2026 The inverscribe Authors.
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

#pragma once

#include <cstdint>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

namespace inverscribe {

// 64-bit FNV-1a. Stable across platforms; used for feature hashing and seeds.
std::uint64_t stable_hash(std::string_view bytes) noexcept;

// splitmix64 finalizer.
std::uint64_t mix64(std::uint64_t x) noexcept;

std::uint64_t combine_seed(std::uint64_t seed, std::string_view label) noexcept;

std::string hex64(std::uint64_t value);

// xoshiro256** with hand-written distributions, so sampled values are
// identical on every standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) noexcept;

  // Sub-stream keyed by a path of labels, e.g. derive(root, {"paraphrase", doc_id}).
  static Rng derive(std::uint64_t root, std::initializer_list<std::string_view> path) noexcept;

  std::uint64_t next() noexcept;

  // Uniform on [0, 1) with 53 bits of precision.
  double uniform() noexcept;

  // Uniform integer on [0, n). n must be positive.
  std::uint64_t below(std::uint64_t n) noexcept;

  // Beta(2, 1) on (0, 1]: inverse CDF of F(z) = z^2.
  double beta21() noexcept;

  // Standard normal via Box-Muller.
  double normal() noexcept;

  // k distinct indices from [0, n) in draw order (partial Fisher-Yates).
  std::vector<std::size_t> sample_indices(std::size_t n, std::size_t k);

  template <class T>
  void shuffle(std::vector<T>& items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(below(i));
      std::swap(items[i - 1], items[j]);
    }
  }

  using result_type = std::uint64_t;
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }
  result_type operator()() noexcept { return next(); }

 private:
  std::uint64_t state_[4];
};

}  // namespace inverscribe
