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
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "inverscribe/corpus/document.hpp"

namespace inverscribe::corpus {

inline constexpr std::string_view kManifestSchema = "inverscribe.corpus";
inline constexpr int kManifestVersion = 1;

enum class InputFormat { jsonl };

// Identifies the run that wrote a manifest.
struct ManifestStamp {
  std::string config_hash;
  std::uint64_t seed = 0;
  std::string code_version;

  bool operator==(const ManifestStamp&) const = default;
};

// Reads JSONL records {"id","author_id","text","source_kind"?,"origin_id"?,"meta"?}.
// A leading manifest header line, as written by write_manifest, is accepted
// and restores provenance. Throws DataError naming the 1-based line number.
Corpus ingest(const std::filesystem::path& path, InputFormat format = InputFormat::jsonl);
Corpus parse_jsonl(std::istream& in, ManifestStamp* stamp = nullptr);

nlohmann::json document_record(const Document& doc);
// `line` only decorates error messages.
Document parse_document(const nlohmann::json& record, std::size_t line = 0);

void write_manifest(std::ostream& out, const Corpus& corpus, const ManifestStamp& stamp);
void save_manifest(const std::filesystem::path& path, const Corpus& corpus, const ManifestStamp& stamp);
Corpus load_manifest(const std::filesystem::path& path, ManifestStamp* stamp = nullptr);

using TokenCounter = std::function<std::size_t(std::string_view)>;

// Word tokenizer from the alignment module.
TokenCounter word_token_counter();

// Keeps documents with min_tokens <= count <= max_tokens.
Corpus filter_by_token_length(const Corpus& corpus, std::size_t min_tokens = 64,
                              std::size_t max_tokens = 128, const TokenCounter& counter = {});

// Drops authors with fewer than min_docs documents and samples sample_to of
// the rest uniformly without replacement. Input order is preserved.
Corpus cap_per_author(const Corpus& corpus, std::size_t min_docs = 10, std::size_t sample_to = 10,
                      std::uint64_t seed = 0);

struct ArtifactPattern {
  enum class Where {
    prefix,         // anchored at the start of the text
    suffix_sentence // a sentence starting with the phrase, through the end
  };
  Where where;
  std::string phrase;  // matched ASCII case-insensitively
};

const std::vector<ArtifactPattern>& default_artifact_patterns();

// Removes generation framing until no pattern applies, then trims. Idempotent.
// Throws DataError("document reduced to empty") when nothing is left.
std::string clean_artifacts(std::string_view text,
                            const std::vector<ArtifactPattern>& patterns = default_artifact_patterns());

}  // namespace inverscribe::corpus
