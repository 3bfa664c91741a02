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

#include "inverscribe/backends/embedding.hpp"

#include <cmath>

#include "inverscribe/common/error.hpp"

namespace inverscribe::backends {

std::vector<Vector> EmbeddingBackend::embed(std::span<const std::string> texts) {
  std::vector<Vector> out;
  out.reserve(texts.size());
  const std::size_t limit = std::max<std::size_t>(batch_limit(), 1);
  const std::size_t d = dimension();
  for (std::size_t start = 0; start < texts.size(); start += limit) {
    const auto chunk = texts.subspan(start, std::min(limit, texts.size() - start));
    auto vectors = embed_batch(chunk);
    if (vectors.size() != chunk.size()) {
      throw BackendError(name() + ": expected " + std::to_string(chunk.size()) + " vectors, got " +
                         std::to_string(vectors.size()));
    }
    for (auto& v : vectors) {
      if (v.size() != d) {
        throw BackendError(name() + ": dimension mismatch, expected " + std::to_string(d) + ", got " +
                           std::to_string(v.size()));
      }
      const double norm = l2_norm(v);
      if (!(std::abs(norm - 1.0) <= kUnitNormTolerance)) {
        throw BackendError(name() + ": embedding is not unit norm (" + std::to_string(norm) + ")");
      }
      out.push_back(std::move(v));
    }
  }
  return out;
}

Vector EmbeddingBackend::embed_one(std::string_view text) {
  const std::string owned(text);
  return std::move(embed(std::span(&owned, 1)).front());
}

}  // namespace inverscribe::backends
