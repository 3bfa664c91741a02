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
#include <span>
#include <string>
#include <vector>

#include "inverscribe/alignment/tokenize.hpp"

namespace inverscribe::alignment {

enum class Label : unsigned char { paraphrased = 0, copied = 1 };

enum class EditKind : unsigned char { match, substitute, insert, erase };

// One step of an edit script turning `original` into `paraphrase`.
// original_index is meaningless for insert; paraphrase_index for erase.
struct EditStep {
  EditKind kind;
  std::size_t original_index;
  std::size_t paraphrase_index;

  bool operator==(const EditStep&) const = default;
};

// Per-paraphrase-token labels derived from one optimal edit script.
// A paraphrase token is copied iff it takes part in a match step.
struct AlignmentMask {
  std::vector<Label> labels;
  std::vector<EditStep> ops;
  std::size_t distance = 0;

  bool operator==(const AlignmentMask&) const = default;
};

// Unit-cost token Levenshtein distance; two-row DP over the shorter side.
std::size_t edit_distance(std::span<const std::string> a, std::span<const std::string> b);
std::size_t edit_distance(const TokenSeq& a, const TokenSeq& b);

// Full-matrix DP with a backtrace preferring match > substitute > erase > insert.
AlignmentMask align(std::span<const std::string> original, std::span<const std::string> paraphrase);
AlignmentMask align(const TokenSeq& original, const TokenSeq& paraphrase);

// Fraction of copied labels; 0 for an empty mask.
double mask_stats(const AlignmentMask& mask);

}  // namespace inverscribe::alignment
