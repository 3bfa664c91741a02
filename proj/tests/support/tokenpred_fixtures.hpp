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

// Synthetic token-classification corpora for the token-prediction baseline.

#include <cctype>
#include <string>
#include <vector>

#include "inverscribe/common/rng.hpp"
#include "inverscribe/tokenpred/tokenpred.hpp"

namespace testsupport {

// Examples whose gold label is "machine" exactly when the token is uppercase.
// Words come from a random lowercase vocabulary; each occurrence is
// uppercased with probability 1/2, so identity features alone cannot separate
// the classes and the model has to pick up casing from character n-grams.
inline std::vector<inverscribe::tokenpred::TokenLabelExample> uppercase_corpus(std::size_t n_examples,
                                                                                std::uint64_t seed) {
  using namespace inverscribe;
  Rng rng(seed);
  std::vector<std::string> vocab;
  for (int w = 0; w < 300; ++w) {
    std::string word;
    const auto len = 3 + rng.below(6);
    for (std::uint64_t c = 0; c < len; ++c) word.push_back(static_cast<char>('a' + rng.below(26)));
    vocab.push_back(word);
  }
  std::vector<tokenpred::TokenLabelExample> out;
  for (std::size_t e = 0; e < n_examples; ++e) {
    std::vector<std::string> tokens;
    std::vector<tokenpred::TokenLabel> labels;
    const auto len = 8 + rng.below(25);
    for (std::uint64_t t = 0; t < len; ++t) {
      std::string w = vocab[rng.below(vocab.size())];
      const bool upper = rng.below(2) == 1;
      if (upper) {
        for (auto& ch : w) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
      }
      tokens.push_back(w);
      labels.push_back(upper ? tokenpred::TokenLabel::machine : tokenpred::TokenLabel::human);
    }
    out.push_back({"syn" + std::to_string(e), alignment::TokenSeq::from_tokens(tokens), labels});
  }
  return out;
}

}  // namespace testsupport
