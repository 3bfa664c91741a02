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

#include "inverscribe/backends/mock.hpp"

#include <algorithm>

#include "inverscribe/alignment/tokenize.hpp"
#include "inverscribe/common/error.hpp"
#include "inverscribe/common/rng.hpp"
#include "inverscribe/common/utf8.hpp"

namespace inverscribe::backends {

Vector mock_embed(std::string_view text, std::size_t dimension, bool lowercase) {
  if (dimension < 1) throw ConfigError("mock embedding dimension must be positive");
  Vector v(dimension, 0.0);
  const std::string source = lowercase ? utf8::lowercase(text) : std::string(text);
  const auto cps = utf8::decode(source);
  if (cps.empty()) {
    v[0] = 1.0;
    return v;
  }
  auto bump = [&](std::size_t first, std::size_t count) {
    const std::size_t begin = cps[first].offset;
    const std::size_t end = cps[first + count - 1].offset + cps[first + count - 1].length;
    const auto gram = std::string_view(source).substr(begin, end - begin);
    v[stable_hash(gram) % dimension] += 1.0;
  };
  if (cps.size() < 3) {
    bump(0, cps.size());
  } else {
    for (std::size_t i = 0; i + 3 <= cps.size(); ++i) bump(i, 3);
  }
  return normalized(v);
}

MockEmbeddingBackend::MockEmbeddingBackend(std::size_t dimension, bool lowercase, std::string name,
                                           std::size_t batch_limit)
    : dimension_(dimension), lowercase_(lowercase), name_(std::move(name)), batch_limit_(batch_limit) {
  if (dimension_ < 2) throw ConfigError("embedding dimension must be at least 2");
}

std::vector<Vector> MockEmbeddingBackend::embed_batch(std::span<const std::string> texts) {
  std::vector<Vector> out;
  out.reserve(texts.size());
  for (const auto& t : texts) out.push_back(mock_embed(t, dimension_, lowercase_));
  return out;
}

const std::vector<PassageDelimiter>& default_delimiters() {
  static const std::vector<PassageDelimiter> delimiters = {
      {"Rephrase the following passage: ", "\n\nOnly output the rephrased-passage"},
      {"recover the original human text: ", " [/INST]"},
      {"recover the original human text:\n", ""},
      {"following Reddit comment: ", ""},
  };
  return delimiters;
}

std::string extract_passage(std::string_view prompt, const std::vector<PassageDelimiter>& delimiters) {
  const PassageDelimiter* best = nullptr;
  std::size_t best_pos = 0;
  for (const auto& d : delimiters) {
    const std::size_t pos = prompt.rfind(d.begin);
    if (pos == std::string_view::npos) continue;
    if (!best || pos > best_pos) {
      best = &d;
      best_pos = pos;
    }
  }
  if (!best) return std::string(prompt);
  const std::size_t start = best_pos + best->begin.size();
  std::size_t stop = best->end.empty() ? std::string_view::npos : prompt.find(best->end, start);
  if (stop == std::string_view::npos) stop = prompt.size();
  return std::string(prompt.substr(start, stop - start));
}

namespace {

std::string recase_like(const std::string& replacement, std::string_view model) {
  const auto cps = utf8::decode(model);
  const bool first_upper = !cps.empty() && utf8::is_upper(cps.front().value);
  const bool all_upper =
      cps.size() > 1 && std::all_of(cps.begin(), cps.end(), [](const auto& c) { return utf8::is_upper(c.value); });
  if (!first_upper) return replacement;
  std::string out;
  bool first = true;
  for (const auto& c : utf8::decode(replacement)) {
    char32_t cp = c.value;
    if ((first || all_upper) && cp >= U'a' && cp <= U'z') cp = cp - U'a' + U'A';
    utf8::append(out, cp);
    first = false;
  }
  return out;
}

}  // namespace

std::string synonym_noise(std::string_view passage, const SynonymTable& table, double rate, std::uint64_t seed,
                          std::string_view key, std::size_t index) {
  const auto seq = alignment::tokenize(passage);
  Rng rng = Rng::derive(seed, {"synonym_noise", key, std::to_string(index)});
  std::string out;
  out.reserve(passage.size());
  std::size_t cursor = 0;
  for (std::size_t t = 0; t < seq.size(); ++t) {
    const auto span = seq.spans[t];
    out.append(passage.substr(cursor, span.begin - cursor));
    cursor = span.end;
    const std::string& token = seq.tokens[t];
    const double u = rng.uniform();
    if (u < rate) {
      if (const std::string* exact = table.lookup(token)) {
        out += *exact;
        continue;
      }
      const std::string lower = utf8::lowercase(token);
      if (const std::string* folded = table.lookup(lower); folded && lower != token) {
        out += recase_like(*folded, token);
        continue;
      }
    }
    out += token;
  }
  out.append(passage.substr(cursor));
  return out;
}

MockGenerationBackend::MockGenerationBackend(MockGenerationOptions options) : options_(std::move(options)) {}

std::vector<std::string> MockGenerationBackend::generate_raw(const GenerationRequest& request) {
  const std::string passage = extract_passage(request.prompt, options_.delimiters);
  std::vector<std::string> out;
  out.reserve(request.n);
  switch (options_.behavior) {
    case MockBehavior::echo:
      out.assign(request.n, passage);
      break;
    case MockBehavior::synonym_noise: {
      const double rate = std::clamp(options_.rate + options_.rate_per_temperature * request.temperature, 0.0, 1.0);
      for (std::size_t k = 0; k < request.n; ++k) {
        out.push_back(synonym_noise(passage, options_.table, rate, request.seed.value_or(0), passage, k));
      }
      break;
    }
    case MockBehavior::scripted: {
      auto it = options_.script.find(request.prompt);
      if (it == options_.script.end()) it = options_.script.find(passage);
      if (it == options_.script.end() || it->second.empty()) {
        throw BackendError(options_.name + ": scripted table has no entry for passage '" + passage.substr(0, 60) +
                           "'");
      }
      for (std::size_t k = 0; k < request.n; ++k) out.push_back(it->second[k % it->second.size()]);
      break;
    }
  }
  return out;
}

}  // namespace inverscribe::backends
