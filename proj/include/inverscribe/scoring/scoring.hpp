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

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "inverscribe/backends/embedding.hpp"
#include "inverscribe/channel/channel.hpp"
#include "inverscribe/common/vec.hpp"
#include "inverscribe/corpus/document.hpp"

namespace inverscribe::scoring {

// Dot product of unit vectors. Throws DataError on a dimension mismatch.
double cosine(std::span<const double> a, std::span<const double> b);

enum class MeasureKind { bleu, semantic_cosine, stylistic_cosine };
enum class Strategy { single, max, expectation, aggregate };

std::string_view to_string(MeasureKind kind) noexcept;
std::string_view to_string(Strategy strategy) noexcept;
MeasureKind parse_measure(std::string_view name);    // bleu | semantic | style
Strategy parse_strategy(std::string_view name);      // single | max | expectation | aggregate

// g(a, b). Embedding-backed kinds are aggregatable; BLEU is not.
class SimilarityMeasure {
 public:
  static SimilarityMeasure bleu();
  static SimilarityMeasure semantic(backends::EmbeddingBackend& backend);
  static SimilarityMeasure stylistic(backends::EmbeddingBackend& backend);

  MeasureKind kind() const noexcept { return kind_; }
  bool aggregatable() const noexcept { return kind_ != MeasureKind::bleu; }
  backends::EmbeddingBackend* backend() const noexcept { return backend_; }

  // g(candidate, reference).
  double operator()(std::string_view candidate, std::string_view reference) const;

 private:
  SimilarityMeasure(MeasureKind kind, backends::EmbeddingBackend* backend) : kind_(kind), backend_(backend) {}
  MeasureKind kind_;
  backends::EmbeddingBackend* backend_;
};

struct CombinedScores {
  double single = 0.0;
  double max = 0.0;
  double expectation = 0.0;
  double min = 0.0;
  std::optional<double> aggregate;

  // Throws ConfigError("measure not aggregatable") for a missing aggregate.
  double get(Strategy strategy) const;
};

// single = scores[0]; max, mean and min over all scores. Throws on empty input.
CombinedScores combine_values(std::span<const double> scores);

// Per-inversion cosines against `original` plus the aggregate: cosine of the
// re-normalized mean of the inversion vectors with `original`.
CombinedScores combine_vectors(std::span<const Vector> inversions, std::span<const double> original,
                               std::vector<double>* per_inversion = nullptr);

struct ScoreReport {
  std::string paraphrase_id;
  MeasureKind measure = MeasureKind::bleu;
  std::vector<double> per_inversion;
  CombinedScores combined;

  nlohmann::json to_json() const;
};

ScoreReport combine(const channel::InversionSet& set, const corpus::Document& original,
                    const SimilarityMeasure& measure);

// Scores a single document (e.g. the paraphrase itself) as a one-element set.
ScoreReport score_single(const std::string& id, const corpus::Document& candidate, const corpus::Document& original,
                         const SimilarityMeasure& measure);

}  // namespace inverscribe::scoring
