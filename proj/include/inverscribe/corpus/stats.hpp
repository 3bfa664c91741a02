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
#include <map>
#include <string>

#include "inverscribe/corpus/document.hpp"
#include "inverscribe/styling/styling.hpp"

namespace inverscribe::corpus {

struct SplitCounts {
  std::size_t n_examples = 0;
  std::size_t n_authors = 0;

  bool operator==(const SplitCounts&) const = default;
};

struct CorpusStats {
  std::size_t n_examples = 0;
  std::size_t n_authors = 0;
  std::map<std::string, SplitCounts> per_split;  // keyed by "train", "valid", "test"

  bool operator==(const CorpusStats&) const = default;
};

// Counts documents and authors overall and per split. Throws DataError when
// the split names an author absent from the corpus.
CorpusStats corpus_stats(const Corpus& corpus, const styling::SplitManifest& split);

}  // namespace inverscribe::corpus
