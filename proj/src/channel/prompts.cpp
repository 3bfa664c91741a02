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

#include "inverscribe/channel/prompts.hpp"

#include "inverscribe/common/error.hpp"

namespace inverscribe::channel {

using backends::PromptStyle;

std::string_view to_string(PromptKind kind) noexcept {
  switch (kind) {
    case PromptKind::paraphrase:
      return "paraphrase";
    case PromptKind::untargeted_inversion:
      return "untargeted_inversion";
    case PromptKind::targeted_inversion:
      return "targeted_inversion";
    case PromptKind::reddit_response:
      return "reddit_response";
  }
  return "paraphrase";
}

namespace {

const PromptTemplate kParaphrase{
    PromptKind::paraphrase, PromptStyle::instruct,
    "Rephrase the following passage: {passage}\n\n"
    "Only output the rephrased-passage, do not include any other details.\n\n"
    "Rephrased passage:",
    ""};

const PromptTemplate kUntargetedInstruct{
    PromptKind::untargeted_inversion, PromptStyle::instruct,
    "[INST] The following passage is a mix of human and machine text, recover the original human text: "
    "{generation} [/INST]\n###Output: {original}",
    ""};

const PromptTemplate kTargetedInstruct{
    PromptKind::targeted_inversion, PromptStyle::instruct,
    "[INST] Here are examples of the original author:\n"
    "{examples}"
    "The following passage is a mix of human and machine text, recover the original human text: "
    "{generation} [/INST]\n###Output: {original}",
    "Example: {example}\n-----\n"};

const PromptTemplate kUntargetedPlain{
    PromptKind::untargeted_inversion, PromptStyle::plain,
    "The following passage is a mix of human and machine text, recover the original human text:\n"
    "{generation}",
    ""};

const PromptTemplate kTargetedPlain{
    PromptKind::targeted_inversion, PromptStyle::plain,
    "Here are examples of paraphrases and their original:\n"
    "{examples}"
    "The following passage is a mix of human and machine text, recover the original human text:\n"
    "{generation}",
    "Paraphrase: {paraphrase}\nOriginal: {original}\n-----\n"};

const PromptTemplate kRedditResponse{PromptKind::reddit_response, PromptStyle::instruct,
                                     "Write a response to the following Reddit comment: {comment}", ""};

const std::string& require(const std::optional<std::string>& slot, const char* name) {
  if (!slot) throw ConfigError(std::string("missing slot '") + name + "'");
  return *slot;
}

// Substitutes slots in one pass over the template so that values containing
// brace markers are copied through verbatim.
std::string render(std::string_view tmpl, const std::vector<std::pair<std::string_view, std::string>>& values) {
  std::string out;
  std::size_t pos = 0;
  while (pos < tmpl.size()) {
    bool replaced = false;
    if (tmpl[pos] == '{') {
      for (const auto& [marker, value] : values) {
        if (tmpl.substr(pos, marker.size()) == marker) {
          out += value;
          pos += marker.size();
          replaced = true;
          break;
        }
      }
    }
    if (!replaced) out += tmpl[pos++];
  }
  return out;
}

}  // namespace

const PromptTemplate& prompt_template(PromptKind kind, PromptStyle style) {
  switch (kind) {
    case PromptKind::paraphrase:
      return kParaphrase;
    case PromptKind::untargeted_inversion:
      return style == PromptStyle::instruct ? kUntargetedInstruct : kUntargetedPlain;
    case PromptKind::targeted_inversion:
      return style == PromptStyle::instruct ? kTargetedInstruct : kTargetedPlain;
    case PromptKind::reddit_response:
      return kRedditResponse;
  }
  return kParaphrase;
}

std::string build_prompt(PromptKind kind, const PromptSlots& slots, PromptStyle style) {
  const PromptTemplate& tmpl = prompt_template(kind, style);
  switch (kind) {
    case PromptKind::paraphrase:
      return render(tmpl.text, {{"{passage}", require(slots.passage, "passage")}});
    case PromptKind::reddit_response:
      return render(tmpl.text, {{"{comment}", require(slots.comment, "comment")}});
    case PromptKind::untargeted_inversion:
      return render(tmpl.text, {{"{generation}", require(slots.generation, "generation")},
                                {"{original}", slots.original.value_or("")}});
    case PromptKind::targeted_inversion: {
      const std::string& generation = require(slots.generation, "generation");
      if (slots.examples.empty()) throw ConfigError("missing slot 'examples'");
      std::string examples;
      for (const auto& ex : slots.examples) {
        if (tmpl.style == PromptStyle::instruct) {
          examples += render(tmpl.example_block, {{"{example}", ex.original}});
        } else {
          examples += render(tmpl.example_block, {{"{paraphrase}", require(ex.paraphrase, "examples.paraphrase")},
                                                  {"{original}", ex.original}});
        }
      }
      return render(tmpl.text, {{"{examples}", examples},
                                {"{generation}", generation},
                                {"{original}", slots.original.value_or("")}});
    }
  }
  return {};
}

}  // namespace inverscribe::channel
