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
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "inverscribe/backends/embedding.hpp"
#include "inverscribe/backends/generation.hpp"
#include "inverscribe/backends/synonyms.hpp"

namespace inverscribe::backends {

// Feature-hashes character 3-grams (code points, FNV-1a) into `dimension`
// buckets and L2-normalizes. Texts shorter than three code points hash as a
// single gram; the empty text maps to e0.
Vector mock_embed(std::string_view text, std::size_t dimension = 256, bool lowercase = true);

class MockEmbeddingBackend final : public EmbeddingBackend {
 public:
  // lowercase=true models a semantic encoder; false keeps casing as a style cue.
  explicit MockEmbeddingBackend(std::size_t dimension = 256, bool lowercase = true,
                                std::string name = "mock-embed", std::size_t batch_limit = 64);

  std::string name() const override { return name_; }
  std::size_t dimension() const override { return dimension_; }
  std::size_t batch_limit() const override { return batch_limit_; }

 protected:
  std::vector<Vector> embed_batch(std::span<const std::string> texts) override;

 private:
  std::size_t dimension_;
  bool lowercase_;
  std::string name_;
  std::size_t batch_limit_;
};

// Markers that bracket the passage inside a rendered prompt. The passage is
// taken after the last `begin` occurrence and up to the following `end`.
struct PassageDelimiter {
  std::string begin;
  std::string end;
};

const std::vector<PassageDelimiter>& default_delimiters();

// Passage embedded in a prompt, or the whole prompt when no delimiter matches.
std::string extract_passage(std::string_view prompt,
                            const std::vector<PassageDelimiter>& delimiters = default_delimiters());

enum class MockBehavior { echo, synonym_noise, scripted };

struct MockGenerationOptions {
  MockBehavior behavior = MockBehavior::echo;
  std::string name = "mock-generate";
  PromptStyle style = PromptStyle::plain;
  // synonym_noise: per-token substitution probability is
  // clamp(rate + rate_per_temperature * temperature, 0, 1).
  double rate = 0.0;
  double rate_per_temperature = 0.0;
  SynonymTable table = default_synonyms();
  // scripted: passage (or full prompt) -> completions, cycled by index.
  std::map<std::string, std::vector<std::string>> script;
  std::vector<PassageDelimiter> delimiters = default_delimiters();
};

// Substitutes each table word with probability `rate`; draws are a pure
// function of (key, seed, index) and one uniform is consumed per token.
std::string synonym_noise(std::string_view passage, const SynonymTable& table, double rate,
                          std::uint64_t seed, std::string_view key, std::size_t index);

class MockGenerationBackend final : public GenerationBackend {
 public:
  explicit MockGenerationBackend(MockGenerationOptions options = {});

  std::string name() const override { return options_.name; }
  PromptStyle prompt_style() const override { return options_.style; }
  const MockGenerationOptions& options() const noexcept { return options_; }

 protected:
  std::vector<std::string> generate_raw(const GenerationRequest& request) override;

 private:
  MockGenerationOptions options_;
};

}  // namespace inverscribe::backends
