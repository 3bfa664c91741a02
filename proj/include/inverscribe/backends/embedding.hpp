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

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "inverscribe/common/vec.hpp"

namespace inverscribe::backends {

inline constexpr double kUnitNormTolerance = 1e-6;

// Text encoder contract: one unit-norm vector of dimension() per input,
// order preserved. Implementations must tolerate concurrent embed() calls.
class EmbeddingBackend {
 public:
  virtual ~EmbeddingBackend() = default;

  virtual std::string name() const = 0;
  virtual std::size_t dimension() const = 0;
  virtual std::size_t batch_limit() const { return 64; }

  // Splits into batch_limit() chunks and validates every returned vector.
  // Throws BackendError on a count, dimension or norm violation.
  std::vector<Vector> embed(std::span<const std::string> texts);
  Vector embed_one(std::string_view text);

 protected:
  virtual std::vector<Vector> embed_batch(std::span<const std::string> texts) = 0;
};

}  // namespace inverscribe::backends
