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

#include "inverscribe/common/vec.hpp"

#include <cmath>
#include <string>

#include "inverscribe/common/error.hpp"

namespace inverscribe {

double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw DataError("dimension mismatch: " + std::to_string(a.size()) + " vs " +
                    std::to_string(b.size()));
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += a[i] * b[i];
  return sum;
}

double l2_norm(std::span<const double> v) { return std::sqrt(dot(v, v)); }

Vector normalized(std::span<const double> v) {
  const double norm = l2_norm(v);
  if (!(norm > 0.0)) throw DataError("cannot normalize a zero vector");
  Vector out(v.begin(), v.end());
  for (double& x : out) x /= norm;
  return out;
}

Vector mean_pool(std::span<const Vector> vectors) {
  if (vectors.empty()) throw DataError("mean_pool of an empty set");
  Vector sum(vectors.front().size(), 0.0);
  for (const auto& v : vectors) {
    if (v.size() != sum.size()) throw DataError("dimension mismatch in mean_pool");
    for (std::size_t i = 0; i < v.size(); ++i) sum[i] += v[i];
  }
  for (double& x : sum) x /= static_cast<double>(vectors.size());
  return normalized(sum);
}

}  // namespace inverscribe
