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

#include "inverscribe/scoring/bleu.hpp"

#include <cmath>
#include <cstdlib>
#include <map>

#include "inverscribe/common/error.hpp"

namespace inverscribe::scoring {
namespace {

using NGramCounts = std::map<std::vector<std::string>, std::size_t>;

NGramCounts count_ngrams(std::span<const std::string> tokens, std::size_t n) {
  NGramCounts counts;
  for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
    ++counts[std::vector<std::string>(tokens.begin() + i, tokens.begin() + i + n)];
  }
  return counts;
}

}  // namespace

double bleu(std::span<const std::string> candidate, std::span<const std::vector<std::string>> references) {
  if (references.empty()) throw DataError("bleu needs at least one reference");
  if (candidate.empty()) return 0.0;

  const std::size_t c = candidate.size();
  std::size_t r = references.front().size();
  for (const auto& ref : references) {
    const auto diff = [c](std::size_t len) { return len > c ? len - c : c - len; };
    if (diff(ref.size()) < diff(r) || (diff(ref.size()) == diff(r) && ref.size() < r)) r = ref.size();
  }

  double log_sum = 0.0;
  std::size_t orders = 0;
  for (std::size_t n = 1; n <= kBleuMaxOrder && n <= c; ++n) {
    const NGramCounts cand = count_ngrams(candidate, n);
    // Clip each candidate n-gram count by its maximum count in any reference.
    NGramCounts max_ref;
    for (const auto& ref : references) {
      for (const auto& [gram, count] : count_ngrams(ref, n)) {
        auto& slot = max_ref[gram];
        slot = std::max(slot, count);
      }
    }
    std::size_t matches = 0;
    for (const auto& [gram, count] : cand) {
      auto it = max_ref.find(gram);
      if (it != max_ref.end()) matches += std::min(count, it->second);
    }
    const std::size_t total = c - n + 1;
    if (matches == 0 && n == 1) return 0.0;
    const double precision = matches == 0 ? 1.0 / static_cast<double>(total + 1)
                                          : static_cast<double>(matches) / static_cast<double>(total);
    log_sum += std::log(precision);
    ++orders;
  }

  const double brevity = c < r ? std::exp(1.0 - static_cast<double>(r) / static_cast<double>(c)) : 1.0;
  return brevity * std::exp(log_sum / static_cast<double>(orders));
}

double bleu(const alignment::TokenSeq& candidate, std::span<const alignment::TokenSeq> references) {
  std::vector<std::vector<std::string>> refs;
  refs.reserve(references.size());
  for (const auto& r : references) refs.push_back(r.tokens);
  return bleu(std::span(candidate.tokens), std::span<const std::vector<std::string>>(refs));
}

double bleu(const alignment::TokenSeq& candidate, const alignment::TokenSeq& reference) {
  return bleu(candidate, std::span(&reference, 1));
}

}  // namespace inverscribe::scoring
