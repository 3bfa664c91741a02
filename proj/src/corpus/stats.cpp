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

#include "inverscribe/corpus/stats.hpp"

#include <set>
#include <unordered_map>

#include "inverscribe/common/error.hpp"

namespace inverscribe::corpus {

CorpusStats corpus_stats(const Corpus& corpus, const styling::SplitManifest& split) {
  std::unordered_map<std::string, std::size_t> docs_per_author;
  for (const auto& d : corpus.documents) ++docs_per_author[d.author_id];

  CorpusStats stats;
  stats.n_examples = corpus.size();
  stats.n_authors = docs_per_author.size();
  for (auto s : {styling::Split::train, styling::Split::valid, styling::Split::test}) {
    stats.per_split[std::string(styling::to_string(s))] = {};
  }
  for (const auto& [author, s] : split.splits) {
    auto it = docs_per_author.find(author);
    if (it == docs_per_author.end()) throw DataError("split references unknown author '" + author + "'");
    auto& counts = stats.per_split[std::string(styling::to_string(s))];
    counts.n_examples += it->second;
    ++counts.n_authors;
  }
  return stats;
}

}  // namespace inverscribe::corpus
