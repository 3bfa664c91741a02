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

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "inverscribe/backends/generation.hpp"

namespace inverscribe::channel {

enum class PromptKind { paraphrase, untargeted_inversion, targeted_inversion, reddit_response };

std::string_view to_string(PromptKind kind) noexcept;

// A context document for targeted inversion. The plain prompt style shows
// paraphrase/original pairs, so it also needs the example's paraphrase.
struct ContextExample {
  std::string original;
  std::optional<std::string> paraphrase;
};

struct PromptSlots {
  std::optional<std::string> passage{};     // paraphrase
  std::optional<std::string> generation{};  // both inversion kinds
  std::optional<std::string> comment{};     // reddit_response
  std::vector<ContextExample> examples{};   // targeted_inversion, in sampled order
  // Training target appended after "###Output: " in the instruct style;
  // left empty when building inference prompts.
  std::optional<std::string> original{};
};

// Template text uses {passage}, {generation}, {comment}, {original} and
// {examples}; {examples} expands to example_block once per example.
struct PromptTemplate {
  PromptKind kind;
  backends::PromptStyle style;
  std::string text;
  std::string example_block;  // uses {example} or {paraphrase}/{original}
};

const PromptTemplate& prompt_template(PromptKind kind, backends::PromptStyle style);

// Throws ConfigError("missing slot '<name>'") when a required slot is absent.
std::string build_prompt(PromptKind kind, const PromptSlots& slots,
                         backends::PromptStyle style = backends::PromptStyle::instruct);

}  // namespace inverscribe::channel
