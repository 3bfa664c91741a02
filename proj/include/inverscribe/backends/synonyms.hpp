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
#include <string>
#include <string_view>

namespace inverscribe::backends {

// Injective word substitution table whose keys and values are disjoint, so
// inverse() undoes forward substitution exactly.
class SynonymTable {
 public:
  SynonymTable() = default;
  explicit SynonymTable(std::map<std::string, std::string> forward);

  // Parses "word<TAB>replacement" lines; '#' starts a comment.
  static SynonymTable parse(std::string_view tsv);

  const std::string* lookup(std::string_view word) const;
  SynonymTable inverse() const;

  std::size_t size() const noexcept { return forward_.size(); }
  const std::map<std::string, std::string, std::less<>>& entries() const noexcept { return forward_; }

 private:
  std::map<std::string, std::string, std::less<>> forward_;
};

// The bundled table (data/synonyms.tsv).
const SynonymTable& default_synonyms();

}  // namespace inverscribe::backends
