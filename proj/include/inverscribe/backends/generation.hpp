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
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace inverscribe::backends {

// Prompt framing a generator expects. instruct wraps prompts in the
// "[INST] ... [/INST]\n###Output: " form used by fine-tuned inverters.
enum class PromptStyle { instruct, plain };

struct GenerationRequest {
  std::string prompt;
  std::size_t n = 1;
  double temperature = 0.7;
  std::size_t max_new_tokens = 192;
  std::optional<std::uint64_t> seed;
};

class GenerationBackend {
 public:
  virtual ~GenerationBackend() = default;

  virtual std::string name() const = 0;
  virtual std::size_t max_prompt_tokens() const { return 4096; }
  virtual PromptStyle prompt_style() const { return PromptStyle::plain; }

  // Exactly request.n completions. A completion that starts with the prompt
  // and continues past it has the prompt removed; one equal to the prompt is
  // kept. Empty completions are kept; callers decide what to do with them.
  std::vector<std::string> generate(const GenerationRequest& request);

 protected:
  virtual std::vector<std::string> generate_raw(const GenerationRequest& request) = 0;
};

}  // namespace inverscribe::backends
