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
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "inverscribe/backends/embedding.hpp"
#include "inverscribe/backends/generation.hpp"
#include "inverscribe/channel/prompts.hpp"
#include "inverscribe/corpus/corpus.hpp"
#include "inverscribe/corpus/document.hpp"

namespace inverscribe::channel {

// ---------------------------------------------------------------------------
// Paraphrase channel

struct ParaphraseOptions {
  double temperature = 0.7;
  double sim_threshold = 0.7;  // inclusive
  std::size_t max_retries = 3;
  std::size_t max_new_tokens = 192;
  std::uint64_t seed = 0;
  std::size_t workers = 8;
};

// Gives each human/machine document one paraphrase that survives artifact
// cleaning and has cosine >= sim_threshold to its original under `semantic`.
// Originals that fail every attempt are dropped and logged in provenance.
// The result holds each kept original followed by its paraphrase
// (id "<original>/para", origin_id = original id).
corpus::Corpus paraphrase_corpus(const corpus::Corpus& originals, backends::GenerationBackend& generator,
                                 backends::EmbeddingBackend& semantic, const ParaphraseOptions& options);

struct ParaphrasePair {
  corpus::Document original;
  corpus::Document paraphrase;
};

// Matches every paraphrase document to its origin. Throws on a dangling origin.
std::vector<ParaphrasePair> paraphrase_pairs(const corpus::Corpus& corpus);

struct MachineResponseOptions {
  double temperature = 0.7;
  std::size_t max_new_tokens = 192;
  std::uint64_t seed = 0;
  std::size_t workers = 8;
};

// One machine response per human comment from a uniformly chosen generator.
// The response's author_id is the generator name; origin_id is the comment.
corpus::Corpus generate_machine_responses(const corpus::Corpus& comments,
                                          std::span<backends::GenerationBackend* const> generators,
                                          const MachineResponseOptions& options);

// ---------------------------------------------------------------------------
// Targeted context

struct ContextSample {
  std::string author_id;
  std::vector<std::string> example_doc_ids;  // draw order
  double z = 1.0;
  std::size_t m = 1;
};

// max(1, ceil(z * candidates)), capped at candidates.
std::size_t context_size(double z, std::size_t candidates);

// Documents by the same author as `target`, excluding it. Only human and
// machine documents qualify.
std::vector<corpus::Document> context_candidates(const corpus::Corpus& corpus, const corpus::Document& target);

// Draws z ~ Beta(2, 1) and a uniform subset of size M without replacement.
ContextSample sample_context(std::span<const corpus::Document> candidates, std::uint64_t seed,
                             std::string_view stream = "");

// ContextSample plus the example texts handed to the prompt.
struct TargetContext {
  ContextSample sample;
  std::vector<ContextExample> examples;
};

TargetContext make_target_context(std::span<const corpus::Document> candidates, const ContextSample& sample);

// ---------------------------------------------------------------------------
// Inversion

struct SamplingParams {
  std::size_t n = 100;
  double temperature = 0.7;
  std::uint64_t seed = 0;
  std::size_t max_new_tokens = 192;
  std::size_t chunk = 100;  // completions per backend request
};

struct InversionSet {
  std::string paraphrase_id;
  std::optional<std::string> target_author;  // set for targeted inversion
  std::vector<corpus::Document> inversions;
  SamplingParams params;
  std::vector<std::string> errors;  // backend failures; set is partial when non-empty

  bool complete() const noexcept { return errors.empty() && inversions.size() == params.n; }
};

// Samples params.n inversions of `paraphrase`, untargeted when context is null.
// Completions are artifact-cleaned; ones that clean to nothing are kept with
// meta["empty"] = "true". Backend failures produce a partial set.
InversionSet invert(const corpus::Document& paraphrase, const TargetContext* context,
                    backends::GenerationBackend& generator, const SamplingParams& params);

nlohmann::json inversion_set_record(const InversionSet& set);
InversionSet parse_inversion_set(const nlohmann::json& record);

}  // namespace inverscribe::channel
