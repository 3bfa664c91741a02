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

#include "inverscribe/corpus/document.hpp"

#include <unordered_set>

#include "inverscribe/common/error.hpp"

namespace inverscribe::corpus {

std::string_view to_string(SourceKind kind) noexcept {
  switch (kind) {
    case SourceKind::human:
      return "human";
    case SourceKind::machine:
      return "machine";
    case SourceKind::paraphrase:
      return "paraphrase";
    case SourceKind::inversion:
      return "inversion";
  }
  return "human";
}

std::optional<SourceKind> parse_source_kind(std::string_view name) noexcept {
  if (name == "human") return SourceKind::human;
  if (name == "machine") return SourceKind::machine;
  if (name == "paraphrase") return SourceKind::paraphrase;
  if (name == "inversion") return SourceKind::inversion;
  return std::nullopt;
}

Corpus Corpus::with_step(std::string step, std::string detail) const {
  Corpus out = *this;
  out.provenance.push_back({std::move(step), std::move(detail)});
  return out;
}

void validate(const Corpus& corpus, const Corpus* parent) {
  std::unordered_set<std::string> ids;
  for (const auto& d : corpus.documents) {
    if (!ids.insert(d.id).second) throw DataError("duplicate id '" + d.id + "'");
    if (d.text.empty()) throw DataError("document '" + d.id + "' has empty text");
  }
  std::unordered_set<std::string> parent_ids;
  if (parent) {
    for (const auto& d : parent->documents) parent_ids.insert(d.id);
  }
  for (const auto& d : corpus.documents) {
    const bool derived = d.source_kind == SourceKind::paraphrase || d.source_kind == SourceKind::inversion;
    if (derived && (!d.origin_id || d.origin_id->empty())) {
      throw DataError("document '" + d.id + "' is derived but has no origin_id");
    }
    if (d.origin_id && !ids.contains(*d.origin_id) && !parent_ids.contains(*d.origin_id)) {
      throw DataError("document '" + d.id + "' references unknown origin '" + *d.origin_id + "'");
    }
  }
}

}  // namespace inverscribe::corpus
