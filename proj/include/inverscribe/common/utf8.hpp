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
#include <vector>

namespace inverscribe::utf8 {

struct CodePoint {
  char32_t value;
  std::size_t offset;  // byte offset into the source
  std::size_t length;  // encoded length in bytes
};

// Malformed bytes decode to U+FFFD one byte at a time, so decoding never fails
// and offsets always cover the input.
std::vector<CodePoint> decode(std::string_view text);

void append(std::string& out, char32_t cp);

// Simple case mapping for ASCII, Latin-1, Greek and Cyrillic capitals.
char32_t to_lower(char32_t cp) noexcept;
bool is_upper(char32_t cp) noexcept;

std::string lowercase(std::string_view text);

}  // namespace inverscribe::utf8
