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
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace inverscribe::alignment {

struct Span {
  std::size_t begin;
  std::size_t end;  // exclusive, in bytes

  bool operator==(const Span&) const = default;
};

// Token view of a text. spans[i] locates tokens[i] in the source bytes.
struct TokenSeq {
  std::vector<std::string> tokens;
  std::vector<Span> spans;

  std::size_t size() const noexcept { return tokens.size(); }
  bool empty() const noexcept { return tokens.empty(); }

  // Builds a sequence without a source text; spans index a single-space join.
  static TokenSeq from_tokens(std::vector<std::string> tokens);

  bool operator==(const TokenSeq&) const = default;
};

// Word-boundary segmentation over UTF-8:
//  - runs of letters, digits, marks and '_' (plus any non-ASCII code point
//    outside the known punctuation/space blocks) form a word;
//  - an apostrophe (U+0027 or U+2019) between two word characters stays
//    inside the word, so "don't" is one token;
//  - every other non-space code point is a single-character token;
//  - whitespace separates and never appears inside a token.
TokenSeq tokenize(std::string_view text);

std::size_t count_tokens(std::string_view text);

}  // namespace inverscribe::alignment
