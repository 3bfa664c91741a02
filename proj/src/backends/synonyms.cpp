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

#include "inverscribe/backends/synonyms.hpp"

#include <set>

#include "inverscribe/common/error.hpp"

namespace inverscribe::backends {

namespace detail {
std::string_view bundled_synonyms_tsv();
}  // namespace detail

SynonymTable::SynonymTable(std::map<std::string, std::string> forward) {
  std::set<std::string> values;
  for (auto& [k, v] : forward) {
    if (k.empty() || v.empty()) throw DataError("synonym table entries must be non-empty");
    if (!values.insert(v).second) throw DataError("synonym table is not injective at '" + v + "'");
    forward_.emplace(k, v);
  }
  for (const auto& v : values) {
    if (forward_.contains(v)) throw DataError("synonym '" + v + "' is also a key");
  }
}

SynonymTable SynonymTable::parse(std::string_view tsv) {
  std::map<std::string, std::string> forward;
  std::size_t line_no = 0;
  while (!tsv.empty()) {
    const std::size_t nl = tsv.find('\n');
    std::string_view line = tsv.substr(0, nl);
    tsv = nl == std::string_view::npos ? std::string_view{} : tsv.substr(nl + 1);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line.front() == '#') continue;
    const std::size_t tab = line.find('\t');
    if (tab == std::string_view::npos) {
      throw DataError("synonym table line " + std::to_string(line_no) + ": expected word<TAB>replacement");
    }
    auto [it, inserted] = forward.emplace(std::string(line.substr(0, tab)), std::string(line.substr(tab + 1)));
    if (!inserted) throw DataError("synonym table line " + std::to_string(line_no) + ": duplicate key");
  }
  return SynonymTable(std::move(forward));
}

const std::string* SynonymTable::lookup(std::string_view word) const {
  auto it = forward_.find(word);
  return it == forward_.end() ? nullptr : &it->second;
}

SynonymTable SynonymTable::inverse() const {
  std::map<std::string, std::string> reversed;
  for (const auto& [k, v] : forward_) reversed.emplace(v, k);
  return SynonymTable(std::move(reversed));
}

const SynonymTable& default_synonyms() {
  static const SynonymTable table = SynonymTable::parse(detail::bundled_synonyms_tsv());
  return table;
}

}  // namespace inverscribe::backends
