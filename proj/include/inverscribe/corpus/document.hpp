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

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace inverscribe::corpus {

enum class SourceKind { human, machine, paraphrase, inversion };

std::string_view to_string(SourceKind kind) noexcept;
std::optional<SourceKind> parse_source_kind(std::string_view name) noexcept;

struct Document {
  std::string id;
  std::string author_id;
  std::string text;
  SourceKind source_kind = SourceKind::human;
  std::optional<std::string> origin_id;
  std::map<std::string, std::string> meta;

  bool operator==(const Document&) const = default;
};

struct ProvenanceEntry {
  std::string step;
  std::string detail;

  bool operator==(const ProvenanceEntry&) const = default;
};

struct Corpus {
  std::vector<Document> documents;
  std::vector<ProvenanceEntry> provenance;

  std::size_t size() const noexcept { return documents.size(); }
  bool empty() const noexcept { return documents.empty(); }

  // Returns a copy with one more provenance entry.
  Corpus with_step(std::string step, std::string detail) const;

  bool operator==(const Corpus&) const = default;
};

// Checks id uniqueness, non-empty text, origin presence for derived kinds and
// that every origin_id resolves here or in `parent`. Throws DataError.
void validate(const Corpus& corpus, const Corpus* parent = nullptr);

}  // namespace inverscribe::corpus
