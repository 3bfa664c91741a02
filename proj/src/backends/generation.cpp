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

#include "inverscribe/backends/generation.hpp"

#include "inverscribe/common/error.hpp"

namespace inverscribe::backends {

std::vector<std::string> GenerationBackend::generate(const GenerationRequest& request) {
  if (request.n < 1) throw ConfigError("generation requires n >= 1");
  if (!(request.temperature >= 0.0)) throw ConfigError("temperature must be non-negative");
  auto completions = generate_raw(request);
  if (completions.size() != request.n) {
    throw BackendError(name() + ": expected " + std::to_string(request.n) + " completions, got " +
                       std::to_string(completions.size()));
  }
  for (auto& c : completions) {
    // Strip "prompt + continuation" echoes; a completion equal to the prompt is kept.
    if (!request.prompt.empty() && c.size() > request.prompt.size() && c.starts_with(request.prompt)) {
      c.erase(0, request.prompt.size());
    }
  }
  return completions;
}

}  // namespace inverscribe::backends
