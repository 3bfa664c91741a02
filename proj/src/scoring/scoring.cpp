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

#include "inverscribe/scoring/scoring.hpp"

#include <algorithm>

#include "inverscribe/alignment/tokenize.hpp"
#include "inverscribe/common/error.hpp"
#include "inverscribe/scoring/bleu.hpp"

namespace inverscribe::scoring {

double cosine(std::span<const double> a, std::span<const double> b) { return dot(a, b); }

std::string_view to_string(MeasureKind kind) noexcept {
  switch (kind) {
    case MeasureKind::bleu:
      return "bleu";
    case MeasureKind::semantic_cosine:
      return "semantic";
    case MeasureKind::stylistic_cosine:
      return "style";
  }
  return "bleu";
}

std::string_view to_string(Strategy strategy) noexcept {
  switch (strategy) {
    case Strategy::single:
      return "single";
    case Strategy::max:
      return "max";
    case Strategy::expectation:
      return "expectation";
    case Strategy::aggregate:
      return "aggregate";
  }
  return "single";
}

MeasureKind parse_measure(std::string_view name) {
  if (name == "bleu") return MeasureKind::bleu;
  if (name == "semantic") return MeasureKind::semantic_cosine;
  if (name == "style") return MeasureKind::stylistic_cosine;
  throw ConfigError("unknown measure '" + std::string(name) + "'");
}

Strategy parse_strategy(std::string_view name) {
  if (name == "single") return Strategy::single;
  if (name == "max") return Strategy::max;
  if (name == "expectation") return Strategy::expectation;
  if (name == "aggregate") return Strategy::aggregate;
  throw ConfigError("unknown strategy '" + std::string(name) + "'");
}

SimilarityMeasure SimilarityMeasure::bleu() { return {MeasureKind::bleu, nullptr}; }
SimilarityMeasure SimilarityMeasure::semantic(backends::EmbeddingBackend& backend) {
  return {MeasureKind::semantic_cosine, &backend};
}
SimilarityMeasure SimilarityMeasure::stylistic(backends::EmbeddingBackend& backend) {
  return {MeasureKind::stylistic_cosine, &backend};
}

double SimilarityMeasure::operator()(std::string_view candidate, std::string_view reference) const {
  if (kind_ == MeasureKind::bleu) {
    return scoring::bleu(alignment::tokenize(candidate), alignment::tokenize(reference));
  }
  return cosine(backend_->embed_one(candidate), backend_->embed_one(reference));
}

double CombinedScores::get(Strategy strategy) const {
  switch (strategy) {
    case Strategy::single:
      return single;
    case Strategy::max:
      return max;
    case Strategy::expectation:
      return expectation;
    case Strategy::aggregate:
      if (!aggregate) throw ConfigError("measure not aggregatable");
      return *aggregate;
  }
  return single;
}

CombinedScores combine_values(std::span<const double> scores) {
  if (scores.empty()) throw DataError("cannot combine an empty inversion set");
  CombinedScores out;
  out.single = scores.front();
  out.max = *std::max_element(scores.begin(), scores.end());
  out.min = *std::min_element(scores.begin(), scores.end());
  double sum = 0.0;
  for (double s : scores) sum += s;
  // Clamp guards the mean against rounding outside [min, max].
  out.expectation = std::clamp(sum / static_cast<double>(scores.size()), out.min, out.max);
  return out;
}

CombinedScores combine_vectors(std::span<const Vector> inversions, std::span<const double> original,
                               std::vector<double>* per_inversion) {
  std::vector<double> scores;
  scores.reserve(inversions.size());
  for (const auto& v : inversions) scores.push_back(cosine(v, original));
  CombinedScores out = combine_values(scores);
  out.aggregate = cosine(mean_pool(inversions), original);
  if (per_inversion) *per_inversion = std::move(scores);
  return out;
}

nlohmann::json ScoreReport::to_json() const {
  nlohmann::json j = {{"paraphrase_id", paraphrase_id}, {"measure", to_string(measure)},
                      {"scores", per_inversion},      {"single", combined.single},
                      {"max", combined.max},          {"expectation", combined.expectation},
                      {"min", combined.min}};
  if (combined.aggregate) j["aggregate"] = *combined.aggregate;
  return j;
}

ScoreReport combine(const channel::InversionSet& set, const corpus::Document& original,
                    const SimilarityMeasure& measure) {
  if (set.inversions.empty()) throw DataError("inversion set '" + set.paraphrase_id + "' is empty");
  ScoreReport report;
  report.paraphrase_id = set.paraphrase_id;
  report.measure = measure.kind();
  if (measure.kind() == MeasureKind::bleu) {
    const auto reference = alignment::tokenize(original.text);
    for (const auto& inv : set.inversions) {
      report.per_inversion.push_back(scoring::bleu(alignment::tokenize(inv.text), reference));
    }
    report.combined = combine_values(report.per_inversion);
    return report;
  }
  std::vector<std::string> texts;
  texts.reserve(set.inversions.size());
  for (const auto& inv : set.inversions) texts.push_back(inv.text);
  const auto vectors = measure.backend()->embed(texts);
  const Vector original_vec = measure.backend()->embed_one(original.text);
  report.combined = combine_vectors(vectors, original_vec, &report.per_inversion);
  return report;
}

ScoreReport score_single(const std::string& id, const corpus::Document& candidate, const corpus::Document& original,
                         const SimilarityMeasure& measure) {
  channel::InversionSet set;
  set.paraphrase_id = id;
  set.params.n = 1;
  set.inversions.push_back(candidate);
  return combine(set, original, measure);
}

}  // namespace inverscribe::scoring
