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

#include <cmath>
#include <sstream>

#include "doctest.h"
#include "test_support.hpp"
#include "tokenpred_fixtures.hpp"

#include "inverscribe/alignment/alignment.hpp"
#include "inverscribe/tokenpred/tokenpred.hpp"

using namespace inverscribe;
using namespace inverscribe::tokenpred;
using alignment::Label;
using corpus::Document;

namespace {

Document doc(std::string id, std::string text, corpus::SourceKind kind = corpus::SourceKind::human) {
  Document d;
  d.id = std::move(id);
  d.author_id = "a";
  d.text = std::move(text);
  d.source_kind = kind;
  return d;
}

MaskedPair masked(const std::string& id, const std::string& original, const std::string& paraphrase) {
  MaskedPair mp;
  mp.pair.original = doc(id, original);
  mp.pair.paraphrase = doc(id + "/para", paraphrase, corpus::SourceKind::paraphrase);
  mp.pair.paraphrase.origin_id = id;
  mp.mask = alignment::align(alignment::tokenize(original), alignment::tokenize(paraphrase));
  return mp;
}

std::vector<TokenLabel> labels_of(std::initializer_list<int> bits) {
  std::vector<TokenLabel> out;
  for (int b : bits) out.push_back(b ? TokenLabel::machine : TokenLabel::human);
  return out;
}

}  // namespace

TEST_CASE("label mapping") {
  auto mp = masked("d", "the cat", "the dog");
  REQUIRE(mp.mask.labels == std::vector<Label>{Label::copied, Label::paraphrased});
  auto ex = paraphrase_example(mp);
  CHECK(ex.labels == labels_of({0, 1}));
  CHECK(ex.doc_id == "d/para");

  auto h = human_example(doc("h", "All human tokens here."));
  CHECK(h.labels == std::vector<TokenLabel>(5, TokenLabel::human));

  mp.mask.labels.pop_back();
  CHECK_THROWS_AS(paraphrase_example(mp), DataError);
}

TEST_CASE("label corpus balance") {
  std::vector<MaskedPair> pairs;
  corpus::Corpus humans;
  for (int i = 0; i < 10; ++i) {
    const std::string id = "o" + std::to_string(i);
    pairs.push_back(masked(id, "an original text " + std::to_string(i), "a rewritten text " + std::to_string(i)));
    humans.documents.push_back(doc("h" + std::to_string(i), "human words " + std::to_string(i)));
  }
  auto all = build_label_corpus(pairs, humans, 1.0, 3);
  REQUIRE(all.size() == 20);
  for (std::size_t i = 0; i < 10; ++i) CHECK(all[i].doc_id.ends_with("/para"));
  for (std::size_t i = 10; i < 20; ++i) CHECK(all[i].doc_id[0] == 'h');

  auto half = build_label_corpus(pairs, humans, 0.5, 3);
  CHECK(half.size() == 10);
  CHECK(build_label_corpus(pairs, humans, 0.5, 3) == half);

  // Originals of selected pairs are excluded from the human side.
  corpus::Corpus originals;
  for (const auto& p : pairs) originals.documents.push_back(p.pair.original);
  CHECK_THROWS_AS(build_label_corpus(pairs, originals, 1.0, 3), DataError);
  auto mixed = build_label_corpus(pairs, originals, 0.5, 3);
  std::set<std::string> para_origins, human_ids;
  for (std::size_t i = 0; i < 5; ++i) para_origins.insert(mixed[i].doc_id.substr(0, mixed[i].doc_id.size() - 5));
  for (std::size_t i = 5; i < 10; ++i) human_ids.insert(mixed[i].doc_id);
  for (const auto& id : human_ids) CHECK(para_origins.count(id) == 0);

  // Non-human kinds never count as humans.
  corpus::Corpus machines{{doc("m", "text", corpus::SourceKind::machine)}, {}};
  try {
    build_label_corpus(pairs, machines, 0.1, 0);
    FAIL("expected DataError");
  } catch (const DataError& e) {
    CHECK(std::string(e.what()) == "label corpus needs 1 human documents to balance, found 0");
  }
  CHECK_THROWS_AS(build_label_corpus(pairs, humans, 0.0, 0), ConfigError);
}

TEST_CASE("train_eval_split") {
  auto corpus = testsupport::uppercase_corpus(50, 1);
  auto [train, eval] = train_eval_split(corpus, 0.9, 4);
  CHECK(train.size() == 45);
  CHECK(eval.size() == 5);
  std::set<std::string> ids;
  for (const auto& e : train) ids.insert(e.doc_id);
  for (const auto& e : eval) CHECK(ids.insert(e.doc_id).second);
  CHECK(train_eval_split(corpus, 0.9, 4).first == train);
  CHECK_THROWS_AS(train_eval_split(corpus, 1.0, 0), ConfigError);
}

TEST_CASE("features are hashed into range") {
  auto seq = alignment::tokenize("Hello wide world");
  FeatureConfig cfg{.hash_bits = 8};
  for (std::size_t i = 0; i < seq.size(); ++i) {
    auto f = token_features(seq, i, cfg);
    for (auto idx : f) CHECK(idx < 256u);
    // bias + word + 3-grams of "^tok$" + prev + next + position
    CHECK(f.size() == 1 + 1 + (seq.tokens[i].size() + 2 - 2) + 3);
  }
  CHECK(token_features(seq, 0, cfg) == token_features(seq, 0, cfg));
  CHECK(token_features(seq, 0, cfg) != token_features(seq, 2, cfg));
}

TEST_CASE("metrics") {
  auto gold = labels_of({1, 0, 1, 1, 0});
  auto perfect = evaluate(gold, gold);
  CHECK(perfect.precision == 1.0);
  CHECK(perfect.recall == 1.0);
  CHECK(perfect.f1 == 1.0);
  CHECK(perfect.support == 3);

  auto none = evaluate(labels_of({0, 0, 0, 0, 0}), gold);
  CHECK(none.recall == 0.0);
  CHECK(none.f1 == 0.0);
  CHECK(none.precision == 0.0);
  CHECK(none.no_positive_predictions);

  // TP 8, FP 2, FN 2, TN 3.
  std::vector<TokenLabel> p, g;
  auto push = [&](int pred, int truth, int count) {
    for (int i = 0; i < count; ++i) {
      p.push_back(pred ? TokenLabel::machine : TokenLabel::human);
      g.push_back(truth ? TokenLabel::machine : TokenLabel::human);
    }
  };
  push(1, 1, 8);
  push(1, 0, 2);
  push(0, 1, 2);
  push(0, 0, 3);
  auto m = evaluate(p, g);
  CHECK(m.tp == 8);
  CHECK(m.fp == 2);
  CHECK(m.fn == 2);
  CHECK(m.tn == 3);
  CHECK(m.precision == doctest::Approx(0.8));
  CHECK(m.recall == doctest::Approx(0.8));
  CHECK(m.f1 == doctest::Approx(0.8));
  CHECK(m.to_json()["f1"] == doctest::Approx(0.8));

  CHECK_THROWS_AS(evaluate(labels_of({1}), gold), DataError);
}

TEST_CASE("evaluate is order invariant and micro-averaged") {
  testsupport::Rng rng(6);
  std::vector<std::vector<TokenLabel>> preds, golds;
  std::vector<TokenLabel> flat_p, flat_g;
  for (int e = 0; e < 30; ++e) {
    std::vector<TokenLabel> p, g;
    for (std::uint64_t t = 0; t < 1 + rng.below(10); ++t) {
      p.push_back(static_cast<TokenLabel>(rng.below(2)));
      g.push_back(static_cast<TokenLabel>(rng.below(2)));
    }
    flat_p.insert(flat_p.end(), p.begin(), p.end());
    flat_g.insert(flat_g.end(), g.begin(), g.end());
    preds.push_back(p);
    golds.push_back(g);
  }
  auto per = evaluate(std::span<const std::vector<TokenLabel>>(preds), std::span<const std::vector<TokenLabel>>(golds));
  auto flat = evaluate(flat_p, flat_g);
  CHECK(per.f1 == flat.f1);
  CHECK(per.tp == flat.tp);
  std::reverse(preds.begin(), preds.end());
  std::reverse(golds.begin(), golds.end());
  auto rev = evaluate(std::span<const std::vector<TokenLabel>>(preds), std::span<const std::vector<TokenLabel>>(golds));
  CHECK(rev.f1 == per.f1);
  CHECK(rev.precision == per.precision);
}

TEST_CASE("analytic gradient matches central differences") {
  testsupport::Rng rng(12);
  auto corpus = testsupport::uppercase_corpus(4, 2);
  FeatureConfig cfg{.hash_bits = 7};
  auto tokens = featurize(corpus, cfg);
  for (double l2 : {0.0, 1e-3, 0.1}) {
    std::vector<double> w(cfg.dimension());
    for (auto& x : w) x = 0.3 * rng.normal();
    std::vector<double> grad;
    loss_and_gradient(w, tokens, l2, &grad);
    REQUIRE(grad.size() == w.size());
    double max_rel = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
      const double h = 1e-5;
      auto wp = w, wm = w;
      wp[i] += h;
      wm[i] -= h;
      const double numeric = (loss_and_gradient(wp, tokens, l2) - loss_and_gradient(wm, tokens, l2)) / (2 * h);
      const double rel = std::abs(grad[i] - numeric) / std::max({std::abs(grad[i]), std::abs(numeric), 1e-4});
      max_rel = std::max(max_rel, rel);
    }
    CHECK(max_rel <= 1e-5);
  }
}

TEST_CASE("baseline separates uppercase tokens") {
  auto corpus = testsupport::uppercase_corpus(400, 3);
  auto [train, eval] = train_eval_split(corpus, 0.9, 1);
  auto model = train_baseline(train, {.epochs = 10, .seed = 5});
  auto metrics = evaluate(model, eval);
  CHECK(metrics.f1 >= 0.95);

  REQUIRE_FALSE(model.loss_history.empty());
  for (std::size_t i = 1; i < model.loss_history.size(); ++i) CHECK(model.loss_history[i] <= model.loss_history[i - 1]);

  auto one = train_baseline(train, {.epochs = 1, .seed = 5});
  REQUIRE(one.loss_history.size() == 1);
  CHECK(model.loss_history.back() <= one.loss_history.front());

  auto again = train_baseline(train, {.epochs = 10, .seed = 5});
  CHECK(again.weights == model.weights);
}

TEST_CASE("baseline memorises a tiny corpus") {
  std::vector<TokenLabelExample> tiny;
  tiny.push_back({"a", alignment::tokenize("the quick brown fox jumps over the lazy dog"), labels_of({0, 1, 1, 0, 1, 0, 0, 1, 0})});
  tiny.push_back({"b", alignment::tokenize("a stitch in time saves nine"), labels_of({1, 0, 0, 1, 1, 0})});
  tiny.push_back({"c", alignment::tokenize("every cloud has a silver lining indeed"), labels_of({0, 0, 1, 1, 0, 1, 0})});
  std::size_t total = 0;
  for (const auto& e : tiny) total += e.tokens.size();
  REQUIRE(total <= 50);
  auto model = train_baseline(tiny, {.epochs = 200, .learning_rate = 0.5, .l2 = 0.0, .seed = 1});
  CHECK(evaluate(model, tiny).f1 == 1.0);
}

TEST_CASE("training rejects degenerate corpora") {
  CHECK_THROWS_AS(train_baseline(std::vector<TokenLabelExample>{}, {}), DataError);
  std::vector<TokenLabelExample> all_human{human_example(doc("h", "only human text"))};
  CHECK_THROWS_AS(train_baseline(all_human, {}), DataError);
  TokenLabelExample broken{"x", alignment::tokenize("two tokens"), labels_of({1})};
  CHECK_THROWS_AS(featurize(std::vector<TokenLabelExample>{broken}, {}), DataError);
}

TEST_CASE("checkpoint and label corpus round trip") {
  auto corpus = testsupport::uppercase_corpus(30, 8);
  auto model = train_baseline(corpus, {.epochs = 2, .seed = 1}, {.hash_bits = 10});
  auto back = TokenClassifier::from_checkpoint(nlohmann::json::parse(model.checkpoint().dump()));
  CHECK(back.config == model.config);
  CHECK(back.weights == model.weights);
  CHECK(back.loss_history == model.loss_history);
  CHECK(back.predict(corpus[0].tokens) == model.predict(corpus[0].tokens));
  auto bad = model.checkpoint();
  bad["schema"] = "other";
  CHECK_THROWS_AS(TokenClassifier::from_checkpoint(bad), DataError);
  auto short_w = model.checkpoint();
  short_w["weights"] = nlohmann::json::array({1.0});
  CHECK_THROWS_AS(TokenClassifier::from_checkpoint(short_w), DataError);

  std::stringstream buf;
  write_label_corpus(buf, corpus);
  auto read = read_label_corpus(buf);
  REQUIRE(read.size() == corpus.size());
  for (std::size_t i = 0; i < read.size(); ++i) {
    CHECK(read[i].doc_id == corpus[i].doc_id);
    CHECK(read[i].tokens.tokens == corpus[i].tokens.tokens);
    CHECK(read[i].labels == corpus[i].labels);
  }
  CHECK(example_record(corpus[0])["labels"].size() == corpus[0].labels.size());
  CHECK_THROWS_AS(parse_example(nlohmann::json{{"doc_id", "x"}, {"tokens", {"a"}}, {"labels", {3}}}), DataError);
}
