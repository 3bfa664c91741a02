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

#include "inverscribe/alignment/alignment.hpp"

#include <algorithm>

namespace inverscribe::alignment {

std::size_t edit_distance(std::span<const std::string> a, std::span<const std::string> b) {
  if (a.size() < b.size()) std::swap(a, b);
  // b is the shorter side; rows run over a.
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t diag = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({diag, prev[j] + 1, cur[j - 1] + 1});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

std::size_t edit_distance(const TokenSeq& a, const TokenSeq& b) {
  return edit_distance(std::span(a.tokens), std::span(b.tokens));
}

AlignmentMask align(std::span<const std::string> original, std::span<const std::string> paraphrase) {
  const std::size_t n = original.size();
  const std::size_t m = paraphrase.size();
  const std::size_t width = m + 1;
  std::vector<std::size_t> dp((n + 1) * width);
  auto at = [&](std::size_t i, std::size_t j) -> std::size_t& { return dp[i * width + j]; };

  for (std::size_t i = 0; i <= n; ++i) at(i, 0) = i;
  for (std::size_t j = 0; j <= m; ++j) at(0, j) = j;
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = 1; j <= m; ++j) {
      const std::size_t diag = at(i - 1, j - 1) + (original[i - 1] == paraphrase[j - 1] ? 0 : 1);
      at(i, j) = std::min({diag, at(i - 1, j) + 1, at(i, j - 1) + 1});
    }
  }

  AlignmentMask mask;
  mask.distance = at(n, m);
  mask.labels.assign(m, Label::paraphrased);

  std::size_t i = n, j = m;
  while (i > 0 || j > 0) {
    const std::size_t here = at(i, j);
    if (i > 0 && j > 0 && original[i - 1] == paraphrase[j - 1] && at(i - 1, j - 1) == here) {
      mask.ops.push_back({EditKind::match, i - 1, j - 1});
      mask.labels[j - 1] = Label::copied;
      --i;
      --j;
    } else if (i > 0 && j > 0 && at(i - 1, j - 1) + 1 == here) {
      mask.ops.push_back({EditKind::substitute, i - 1, j - 1});
      --i;
      --j;
    } else if (i > 0 && at(i - 1, j) + 1 == here) {
      mask.ops.push_back({EditKind::erase, i - 1, j});
      --i;
    } else {
      mask.ops.push_back({EditKind::insert, i, j - 1});
      --j;
    }
  }
  std::reverse(mask.ops.begin(), mask.ops.end());
  return mask;
}

AlignmentMask align(const TokenSeq& original, const TokenSeq& paraphrase) {
  return align(std::span(original.tokens), std::span(paraphrase.tokens));
}

double mask_stats(const AlignmentMask& mask) {
  if (mask.labels.empty()) return 0.0;
  const auto copied = std::count(mask.labels.begin(), mask.labels.end(), Label::copied);
  return static_cast<double>(copied) / static_cast<double>(mask.labels.size());
}

}  // namespace inverscribe::alignment
