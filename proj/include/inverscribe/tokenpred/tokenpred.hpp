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
#include <cstdint>
#include <filesystem>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "inverscribe/alignment/alignment.hpp"
#include "inverscribe/alignment/tokenize.hpp"
#include "inverscribe/channel/channel.hpp"
#include "inverscribe/corpus/document.hpp"

namespace inverscribe::tokenpred {

enum class TokenLabel : unsigned char { human = 0, machine = 1 };

struct TokenLabelExample {
  std::string doc_id;
  alignment::TokenSeq tokens;
  std::vector<TokenLabel> labels;
  bool operator==(const TokenLabelExample&) const = default;
};

// A paraphrase pair plus the mask aligning the original to the paraphrase.
struct MaskedPair {
  channel::ParaphrasePair pair;
  alignment::AlignmentMask mask;
};

// Paraphrase tokens labelled copied -> human, paraphrased -> machine.
TokenLabelExample paraphrase_example(const MaskedPair& pair);
// Every token human.
TokenLabelExample human_example(const corpus::Document& doc);

// Samples round(fraction * |pairs|) pairs and the same number of human-kind
// documents from `human_docs`, skipping the originals of the selected pairs.
// Output: the paraphrase examples then the human examples, each in draw
// order. Throws DataError naming the required count when humans run short.
std::vector<TokenLabelExample> build_label_corpus(std::span<const MaskedPair> pairs, const corpus::Corpus& human_docs,
                                                  double fraction = 0.5, std::uint64_t seed = 0);

// Seeded split into (train, eval) with round(train_frac * n) training examples.
std::pair<std::vector<TokenLabelExample>, std::vector<TokenLabelExample>> train_eval_split(
    std::span<const TokenLabelExample> examples, double train_frac = 0.9, std::uint64_t seed = 0);

// ---------------------------------------------------------------------------
// Features

struct FeatureConfig {
  unsigned hash_bits = 16;        // 2^hash_bits weights
  std::size_t position_buckets = 10;
  std::size_t dimension() const noexcept { return std::size_t{1} << hash_bits; }
  bool operator==(const FeatureConfig&) const = default;
};

// Hashed feature indices for token i: bias, token identity, character
// 3-grams of "^token$", previous and next token, relative position bucket.
// Indices may repeat (counts add).
std::vector<std::uint32_t> token_features(const alignment::TokenSeq& seq, std::size_t i, const FeatureConfig& config);

struct FeaturizedToken {
  std::vector<std::uint32_t> features;
  double label;  // 1 = machine
};
std::vector<FeaturizedToken> featurize(std::span<const TokenLabelExample> examples, const FeatureConfig& config,
                                       std::size_t workers = 1);

// ---------------------------------------------------------------------------
// Model

struct TrainOptions {
  std::size_t epochs = 10;
  double learning_rate = 0.1;
  double l2 = 1e-6;
  std::uint64_t seed = 0;
};

struct TokenClassifier {
  FeatureConfig config;
  std::vector<double> weights;
  // Mean training objective after each epoch.
  std::vector<double> loss_history;

  double probability(std::span<const std::uint32_t> features) const;
  std::vector<TokenLabel> predict(const alignment::TokenSeq& seq) const;
  nlohmann::json checkpoint() const;
  static TokenClassifier from_checkpoint(const nlohmann::json& j);
};

// Objective = mean per-token binary cross-entropy + (l2 / 2) * ||w||^2.
// When `gradient` is non-null it receives the dense analytic gradient.
double loss_and_gradient(std::span<const double> weights, std::span<const FeaturizedToken> tokens, double l2,
                         std::vector<double>* gradient = nullptr);

// Seeded SGD over shuffled tokens. The l2 penalty is applied to the weights a
// step touches, scaled by 1/|tokens|. An epoch that raises the objective is
// rolled back and retried once with half the learning rate; if it still does
// not help, the weights stay and training stops early.
// Throws DataError for an empty or single-class corpus.
TokenClassifier train_baseline(std::span<const TokenLabelExample> examples, const TrainOptions& options,
                               const FeatureConfig& config = {});

// ---------------------------------------------------------------------------
// Metrics

struct TokenPredMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t tp = 0, fp = 0, fn = 0, tn = 0;
  std::size_t support = 0;  // gold machine tokens
  bool no_positive_predictions = false;  // precision defined as 0
  nlohmann::json to_json() const;
};

// Micro-averaged over tokens for the machine class. Throws DataError on a
// length mismatch.
TokenPredMetrics evaluate(std::span<const TokenLabel> predictions, std::span<const TokenLabel> gold);
TokenPredMetrics evaluate(std::span<const std::vector<TokenLabel>> predictions,
                          std::span<const std::vector<TokenLabel>> gold);
TokenPredMetrics evaluate(const TokenClassifier& model, std::span<const TokenLabelExample> examples);

// Label corpus JSONL: {"doc_id", "tokens": [...], "labels": [0|1]} with 1 = machine.
nlohmann::json example_record(const TokenLabelExample& example);
TokenLabelExample parse_example(const nlohmann::json& record);
void write_label_corpus(std::ostream& out, std::span<const TokenLabelExample> examples);
std::vector<TokenLabelExample> read_label_corpus(std::istream& in);

}  // namespace inverscribe::tokenpred
