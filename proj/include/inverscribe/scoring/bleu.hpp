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

#include <span>
#include <string>
#include <vector>

#include "inverscribe/alignment/tokenize.hpp"

namespace inverscribe::scoring {

inline constexpr std::size_t kBleuMaxOrder = 4;

// Sentence-level BLEU-4, uniform weights over the orders the candidate has
// n-grams for, clipped n-gram precision and brevity penalty exp(1 - r/c) for
// c < r, where r is the reference length closest to c (shorter on ties).
//
// Smoothing: an order n >= 2 with zero matches scores 1 / (total_n + 1). A
// candidate with no unigram match scores 0; an empty candidate scores 0.
double bleu(std::span<const std::string> candidate, std::span<const std::vector<std::string>> references);
double bleu(const alignment::TokenSeq& candidate, std::span<const alignment::TokenSeq> references);
double bleu(const alignment::TokenSeq& candidate, const alignment::TokenSeq& reference);

}  // namespace inverscribe::scoring
