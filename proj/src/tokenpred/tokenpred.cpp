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

#include "inverscribe/tokenpred/tokenpred.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <unordered_set>

#include "inverscribe/common/error.hpp"
#include "inverscribe/common/parallel.hpp"
#include "inverscribe/common/rng.hpp"
#include "inverscribe/common/utf8.hpp"

namespace inverscribe::tokenpred {

namespace {

constexpr std::string_view kCheckpointSchema = "inverscribe.tokenpred";
constexpr int kCheckpointVersion = 1;

double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// log(1 + exp(z)) without overflow.
double softplus(double z) { return z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

std::size_t rounded(double x) { return static_cast<std::size_t>(std::llround(x)); }

}  // namespace

TokenLabelExample paraphrase_example(const MaskedPair& pair) {
  TokenLabelExample ex;
  ex.doc_id = pair.pair.paraphrase.id;
  ex.tokens = alignment::tokenize(pair.pair.paraphrase.text);
  if (ex.tokens.size() != pair.mask.labels.size()) {
    throw DataError("mask for '" + ex.doc_id + "' has " + std::to_string(pair.mask.labels.size()) +
                    " labels but the paraphrase has " + std::to_string(ex.tokens.size()) + " tokens");
  }
  ex.labels.reserve(pair.mask.labels.size());
  for (auto l : pair.mask.labels) {
    ex.labels.push_back(l == alignment::Label::copied ? TokenLabel::human : TokenLabel::machine);
  }
  return ex;
}

TokenLabelExample human_example(const corpus::Document& doc) {
  TokenLabelExample ex;
  ex.doc_id = doc.id;
  ex.tokens = alignment::tokenize(doc.text);
  ex.labels.assign(ex.tokens.size(), TokenLabel::human);
  return ex;
}

std::vector<TokenLabelExample> build_label_corpus(std::span<const MaskedPair> pairs, const corpus::Corpus& human_docs,
                                                  double fraction, std::uint64_t seed) {
  if (!(fraction > 0.0 && fraction <= 1.0)) throw ConfigError("label corpus fraction must be in (0, 1]");
  const std::size_t take = std::min(pairs.size(), rounded(fraction * static_cast<double>(pairs.size())));

  Rng pair_rng = Rng::derive(seed, {"label_corpus", "pairs"});
  const auto picked = pair_rng.sample_indices(pairs.size(), take);

  std::unordered_set<std::string> excluded;
  for (auto i : picked) excluded.insert(pairs[i].pair.original.id);
  std::vector<const corpus::Document*> humans;
  for (const auto& d : human_docs.documents) {
    if (d.source_kind == corpus::SourceKind::human && !excluded.contains(d.id)) humans.push_back(&d);
  }
  if (humans.size() < take) {
    throw DataError("label corpus needs " + std::to_string(take) + " human documents to balance, found " +
                    std::to_string(humans.size()));
  }
  Rng human_rng = Rng::derive(seed, {"label_corpus", "humans"});
  const auto human_picked = human_rng.sample_indices(humans.size(), take);

  std::vector<TokenLabelExample> out;
  out.reserve(2 * take);
  for (auto i : picked) out.push_back(paraphrase_example(pairs[i]));
  for (auto i : human_picked) out.push_back(human_example(*humans[i]));
  return out;
}

std::pair<std::vector<TokenLabelExample>, std::vector<TokenLabelExample>> train_eval_split(
    std::span<const TokenLabelExample> examples, double train_frac, std::uint64_t seed) {
  if (!(train_frac > 0.0 && train_frac < 1.0)) throw ConfigError("train fraction must be in (0, 1)");
  std::vector<std::size_t> order(examples.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  Rng rng = Rng::derive(seed, {"label_corpus", "train_eval"});
  rng.shuffle(order);
  const std::size_t n_train = rounded(train_frac * static_cast<double>(examples.size()));
  std::pair<std::vector<TokenLabelExample>, std::vector<TokenLabelExample>> out;
  for (std::size_t k = 0; k < order.size(); ++k) {
    (k < n_train ? out.first : out.second).push_back(examples[order[k]]);
  }
  return out;
}

std::vector<std::uint32_t> token_features(const alignment::TokenSeq& seq, std::size_t i, const FeatureConfig& config) {
  const std::uint64_t mask = config.dimension() - 1;
  std::vector<std::uint32_t> f;
  auto add = [&](std::string_view key) { f.push_back(static_cast<std::uint32_t>(stable_hash(key) & mask)); };
  const std::string& tok = seq.tokens[i];
  add("b:");
  add("w:" + tok);
  const std::string framed = "^" + tok + "$";
  const auto cps = utf8::decode(framed);
  for (std::size_t k = 0; k + 3 <= cps.size(); ++k) {
    const std::size_t begin = cps[k].offset;
    const std::size_t end = cps[k + 2].offset + cps[k + 2].length;
    add("c:" + framed.substr(begin, end - begin));
  }
  add("p:" + (i > 0 ? seq.tokens[i - 1] : std::string("<s>")));
  add("n:" + (i + 1 < seq.size() ? seq.tokens[i + 1] : std::string("</s>")));
  const std::size_t buckets = std::max<std::size_t>(1, config.position_buckets);
  add("pos:" + std::to_string(i * buckets / std::max<std::size_t>(1, seq.size())));
  return f;
}

std::vector<FeaturizedToken> featurize(std::span<const TokenLabelExample> examples, const FeatureConfig& config,
                                       std::size_t workers) {
  std::vector<std::size_t> offsets(examples.size() + 1, 0);
  for (std::size_t e = 0; e < examples.size(); ++e) {
    if (examples[e].labels.size() != examples[e].tokens.size()) {
      throw DataError("example '" + examples[e].doc_id + "' has mismatched token and label counts");
    }
    offsets[e + 1] = offsets[e] + examples[e].tokens.size();
  }
  std::vector<FeaturizedToken> out(offsets.back());
  parallel_for(examples.size(), workers, [&](std::size_t e) {
    const auto& ex = examples[e];
    for (std::size_t i = 0; i < ex.tokens.size(); ++i) {
      out[offsets[e] + i] = {token_features(ex.tokens, i, config), ex.labels[i] == TokenLabel::machine ? 1.0 : 0.0};
    }
  });
  return out;
}

double TokenClassifier::probability(std::span<const std::uint32_t> features) const {
  double z = 0.0;
  for (auto f : features) z += weights[f];
  return sigmoid(z);
}

std::vector<TokenLabel> TokenClassifier::predict(const alignment::TokenSeq& seq) const {
  std::vector<TokenLabel> out;
  out.reserve(seq.size());
  for (std::size_t i = 0; i < seq.size(); ++i) {
    out.push_back(probability(token_features(seq, i, config)) >= 0.5 ? TokenLabel::machine : TokenLabel::human);
  }
  return out;
}

nlohmann::json TokenClassifier::checkpoint() const {
  return {{"schema", kCheckpointSchema},
          {"version", kCheckpointVersion},
          {"hash", "fnv1a64"},
          {"hash_bits", config.hash_bits},
          {"position_buckets", config.position_buckets},
          {"weights", weights},
          {"loss_history", loss_history}};
}

TokenClassifier TokenClassifier::from_checkpoint(const nlohmann::json& j) {
  try {
    if (j.at("schema").get<std::string>() != kCheckpointSchema || j.at("version").get<int>() != kCheckpointVersion) {
      throw DataError("unsupported token classifier checkpoint");
    }
    TokenClassifier m;
    m.config.hash_bits = j.at("hash_bits").get<unsigned>();
    m.config.position_buckets = j.at("position_buckets").get<std::size_t>();
    m.weights = j.at("weights").get<std::vector<double>>();
    if (j.contains("loss_history")) m.loss_history = j.at("loss_history").get<std::vector<double>>();
    if (m.weights.size() != m.config.dimension()) throw DataError("checkpoint weight count does not match hash_bits");
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed checkpoint: ") + e.what());
  }
}

double loss_and_gradient(std::span<const double> weights, std::span<const FeaturizedToken> tokens, double l2,
                         std::vector<double>* gradient) {
  if (tokens.empty()) throw DataError("loss over an empty batch");
  if (gradient) gradient->assign(weights.size(), 0.0);
  const double inv_n = 1.0 / static_cast<double>(tokens.size());
  double loss = 0.0;
  for (const auto& t : tokens) {
    double z = 0.0;
    for (auto f : t.features) z += weights[f];
    loss += softplus(z) - t.label * z;
    if (gradient) {
      const double g = (sigmoid(z) - t.label) * inv_n;
      for (auto f : t.features) (*gradient)[f] += g;
    }
  }
  loss *= inv_n;
  double sq = 0.0;
  for (std::size_t k = 0; k < weights.size(); ++k) {
    sq += weights[k] * weights[k];
    if (gradient) (*gradient)[k] += l2 * weights[k];
  }
  return loss + 0.5 * l2 * sq;
}

TokenClassifier train_baseline(std::span<const TokenLabelExample> examples, const TrainOptions& options,
                               const FeatureConfig& config) {
  if (options.learning_rate <= 0.0 || options.l2 < 0.0) throw ConfigError("learning_rate must be > 0 and l2 >= 0");
  const auto tokens = featurize(examples, config);
  if (tokens.empty()) throw DataError("token classifier needs a non-empty corpus");
  const bool any_machine = std::any_of(tokens.begin(), tokens.end(), [](const auto& t) { return t.label == 1.0; });
  const bool any_human = std::any_of(tokens.begin(), tokens.end(), [](const auto& t) { return t.label == 0.0; });
  if (!any_machine || !any_human) throw DataError("token classifier needs both human and machine tokens");

  TokenClassifier model;
  model.config = config;
  model.weights.assign(config.dimension(), 0.0);
  const double l2_step = options.l2 / static_cast<double>(tokens.size());
  std::vector<std::size_t> order(tokens.size());

  auto run_epoch = [&](std::vector<double>& w, double lr, std::size_t epoch, std::string_view attempt) {
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    Rng rng = Rng::derive(options.seed, {"tokenpred_sgd", std::to_string(epoch), attempt});
    rng.shuffle(order);
    for (auto idx : order) {
      const auto& t = tokens[idx];
      double z = 0.0;
      for (auto f : t.features) z += w[f];
      const double g = sigmoid(z) - t.label;
      for (auto f : t.features) w[f] -= lr * (g + l2_step * w[f]);
    }
  };

  double lr = options.learning_rate;
  double previous = loss_and_gradient(model.weights, tokens, options.l2);
  for (std::size_t epoch = 0; epoch < options.epochs; ++epoch) {
    std::vector<double> trial = model.weights;
    run_epoch(trial, lr, epoch, "a");
    double loss = loss_and_gradient(trial, tokens, options.l2);
    if (loss > previous) {
      lr *= 0.5;
      trial = model.weights;
      run_epoch(trial, lr, epoch, "b");
      loss = loss_and_gradient(trial, tokens, options.l2);
      if (loss > previous) break;
    }
    model.weights = std::move(trial);
    model.loss_history.push_back(loss);
    previous = loss;
  }
  return model;
}

nlohmann::json TokenPredMetrics::to_json() const {
  return {{"precision", precision}, {"recall", recall}, {"f1", f1},   {"tp", tp},
          {"fp", fp},               {"fn", fn},         {"tn", tn},   {"support", support},
          {"no_positive_predictions", no_positive_predictions}};
}

namespace {

void tally(TokenPredMetrics& m, std::span<const TokenLabel> predictions, std::span<const TokenLabel> gold) {
  if (predictions.size() != gold.size()) {
    throw DataError("prediction length " + std::to_string(predictions.size()) + " does not match gold length " +
                    std::to_string(gold.size()));
  }
  for (std::size_t i = 0; i < gold.size(); ++i) {
    const bool p = predictions[i] == TokenLabel::machine, g = gold[i] == TokenLabel::machine;
    if (p && g) ++m.tp;
    else if (p) ++m.fp;
    else if (g) ++m.fn;
    else ++m.tn;
  }
}

void finish(TokenPredMetrics& m) {
  m.support = m.tp + m.fn;
  m.no_positive_predictions = m.tp + m.fp == 0;
  m.precision = m.no_positive_predictions ? 0.0 : static_cast<double>(m.tp) / static_cast<double>(m.tp + m.fp);
  m.recall = m.support == 0 ? 0.0 : static_cast<double>(m.tp) / static_cast<double>(m.support);
  m.f1 = m.precision + m.recall == 0.0 ? 0.0 : 2.0 * m.precision * m.recall / (m.precision + m.recall);
}

}  // namespace

TokenPredMetrics evaluate(std::span<const TokenLabel> predictions, std::span<const TokenLabel> gold) {
  TokenPredMetrics m;
  tally(m, predictions, gold);
  finish(m);
  return m;
}

TokenPredMetrics evaluate(std::span<const std::vector<TokenLabel>> predictions,
                          std::span<const std::vector<TokenLabel>> gold) {
  if (predictions.size() != gold.size()) throw DataError("prediction and gold example counts differ");
  TokenPredMetrics m;
  for (std::size_t e = 0; e < gold.size(); ++e) tally(m, predictions[e], gold[e]);
  finish(m);
  return m;
}

TokenPredMetrics evaluate(const TokenClassifier& model, std::span<const TokenLabelExample> examples) {
  TokenPredMetrics m;
  for (const auto& ex : examples) tally(m, model.predict(ex.tokens), ex.labels);
  finish(m);
  return m;
}

nlohmann::json example_record(const TokenLabelExample& example) {
  std::vector<int> labels;
  for (auto l : example.labels) labels.push_back(static_cast<int>(l));
  return {{"doc_id", example.doc_id}, {"tokens", example.tokens.tokens}, {"labels", labels}};
}

TokenLabelExample parse_example(const nlohmann::json& record) {
  try {
    TokenLabelExample ex;
    ex.doc_id = record.at("doc_id").get<std::string>();
    ex.tokens = alignment::TokenSeq::from_tokens(record.at("tokens").get<std::vector<std::string>>());
    for (int l : record.at("labels").get<std::vector<int>>()) {
      if (l != 0 && l != 1) throw DataError("label must be 0 or 1");
      ex.labels.push_back(static_cast<TokenLabel>(l));
    }
    if (ex.labels.size() != ex.tokens.size()) throw DataError("example '" + ex.doc_id + "' token/label mismatch");
    return ex;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed label record: ") + e.what());
  }
}

void write_label_corpus(std::ostream& out, std::span<const TokenLabelExample> examples) {
  for (const auto& ex : examples) out << example_record(ex).dump() << '\n';
}

std::vector<TokenLabelExample> read_label_corpus(std::istream& in) {
  std::vector<TokenLabelExample> out;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(parse_example(nlohmann::json::parse(line)));
    } catch (const nlohmann::json::exception& e) {
      throw DataError("line " + std::to_string(n) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace inverscribe::tokenpred
