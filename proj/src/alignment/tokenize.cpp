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

#include "inverscribe/alignment/tokenize.hpp"

#include "inverscribe/common/utf8.hpp"

namespace inverscribe::alignment {
namespace {

bool is_space(char32_t cp) {
  switch (cp) {
    case U' ':
    case U'\t':
    case U'\n':
    case U'\r':
    case U'\f':
    case U'\v':
    case 0x85:
    case 0xA0:
    case 0x1680:
    case 0x2028:
    case 0x2029:
    case 0x202F:
    case 0x205F:
    case 0x3000:
    case 0xFEFF:
      return true;
    default:
      return cp >= 0x2000 && cp <= 0x200B;
  }
}

bool is_apostrophe(char32_t cp) { return cp == U'\'' || cp == 0x2019; }

bool is_word(char32_t cp) {
  if (cp < 0x80) {
    return (cp >= U'a' && cp <= U'z') || (cp >= U'A' && cp <= U'Z') ||
           (cp >= U'0' && cp <= U'9') || cp == U'_';
  }
  if (is_space(cp)) return false;
  // Latin-1 punctuation and symbols, except the letter blocks.
  if (cp >= 0xA1 && cp <= 0xBF) return cp == 0xAA || cp == 0xB5 || cp == 0xBA;
  if (cp == 0xD7 || cp == 0xF7) return false;
  if (cp >= 0x2000 && cp <= 0x2BFF) return false;  // punctuation, symbols, arrows
  if (cp >= 0x3000 && cp <= 0x303F) return false;  // CJK punctuation
  if (cp >= 0xFE30 && cp <= 0xFE4F) return false;
  if (cp >= 0xFF01 && cp <= 0xFF0F) return false;
  if (cp >= 0x1F000 && cp <= 0x1FAFF) return false;  // emoji and pictographs
  return true;
}

}  // namespace

TokenSeq TokenSeq::from_tokens(std::vector<std::string> tokens) {
  TokenSeq seq;
  std::size_t offset = 0;
  for (const auto& t : tokens) {
    seq.spans.push_back({offset, offset + t.size()});
    offset += t.size() + 1;
  }
  seq.tokens = std::move(tokens);
  return seq;
}

TokenSeq tokenize(std::string_view text) {
  TokenSeq seq;
  const auto cps = utf8::decode(text);
  std::size_t i = 0;
  auto emit = [&](std::size_t begin, std::size_t end) {
    seq.tokens.emplace_back(text.substr(begin, end - begin));
    seq.spans.push_back({begin, end});
  };
  while (i < cps.size()) {
    const char32_t cp = cps[i].value;
    if (is_space(cp)) {
      ++i;
      continue;
    }
    if (!is_word(cp)) {
      emit(cps[i].offset, cps[i].offset + cps[i].length);
      ++i;
      continue;
    }
    std::size_t j = i + 1;
    while (j < cps.size()) {
      if (is_word(cps[j].value)) {
        ++j;
      } else if (is_apostrophe(cps[j].value) && j + 1 < cps.size() && is_word(cps[j + 1].value)) {
        j += 2;
      } else {
        break;
      }
    }
    emit(cps[i].offset, cps[j - 1].offset + cps[j - 1].length);
    i = j;
  }
  return seq;
}

std::size_t count_tokens(std::string_view text) { return tokenize(text).size(); }

}  // namespace inverscribe::alignment
