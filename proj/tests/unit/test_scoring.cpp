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

#include "doctest.h"
#include "test_support.hpp"

#include "inverscribe/scoring/bleu.hpp"
#include "inverscribe/scoring/scoring.hpp"

using namespace inverscribe;
using namespace inverscribe::scoring;
using testsupport::basis;
using testsupport::random_tokens;
using testsupport::TableEmbedding;
using Tokens = std::vector<std::string>;

namespace {

double bleu1(const Tokens& c, const Tokens& r) {
  std::vector<Tokens> refs{r};
  return bleu(std::span<const std::string>(c), std::span<const Tokens>(refs));
}

corpus::Document doc(std::string id, std::string text) {
  corpus::Document d;
  d.id = std::move(id);
  d.author_id = "a";
  d.text = std::move(text);
  return d;
}

channel::InversionSet set_of(const std::vector<std::string>& texts) {
  channel::InversionSet s;
  s.paraphrase_id = "p";
  s.params.n = texts.size();
  for (std::size_t i = 0; i < texts.size(); ++i) s.inversions.push_back(doc("i" + std::to_string(i), texts[i]));
  return s;
}

}  // namespace

TEST_CASE("BLEU examples") {
  Tokens x{"the", "cat", "sat", "on", "the", "mat"};
  CHECK(bleu1(x, x) == 1.0);
  CHECK(bleu1({"a", "b"}, {"c", "d"}) == 0.0);
  CHECK(bleu1({}, {"a"}) == 0.0);

  Tokens cand{"the", "cat", "the", "cat"}, ref{"the", "cat", "sat"};
  const double expected = std::pow(1.0 / 36.0, 0.25);
  CHECK(std::abs(bleu1(cand, ref) - expected) < 1e-12);
  CHECK(std::abs(testsupport::bleu_oracle(cand, {ref}) - expected) < 1e-12);

  // Brevity penalty: a 2-token prefix of a 4-token reference.
  Tokens longref{"a", "b", "c", "d"};
  CHECK(std::abs(bleu1({"a", "b"}, longref) - std::exp(1.0 - 2.0)) < 1e-12);

  // TokenSeq overloads tokenize the same way.
  CHECK(bleu(alignment::tokenize("the cat the cat"), alignment::tokenize("the cat sat")) ==
        doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("BLEU matches the n-gram counting oracle") {
  testsupport::Rng rng(31337);
  for (int t = 0; t < 200; ++t) {
    const auto alphabet = 1 + rng.below(20);
    auto c = random_tokens(rng, 30, alphabet, 1);
    std::vector<Tokens> refs;
    const auto nrefs = 1 + rng.below(3);
    for (std::uint64_t r = 0; r < nrefs; ++r) refs.push_back(random_tokens(rng, 30, alphabet, 1));
    const double got = bleu(std::span<const std::string>(c), std::span<const Tokens>(refs));
    const double want = testsupport::bleu_oracle(c, refs);
    REQUIRE(std::abs(got - want) <= 1e-9);
    REQUIRE(got >= 0.0);
    REQUIRE(got <= 1.0);
    REQUIRE(bleu1(c, c) == doctest::Approx(1.0).epsilon(1e-15));
  }
}

TEST_CASE("cosine examples") {
  testsupport::Rng r1(1);
  Vector v = testsupport::random_unit(r1, 8);
  CHECK(cosine(v, v) == doctest::Approx(1.0));
  CHECK(cosine(basis(3, 0), basis(3, 1)) == 0.0);
  Vector d{1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0)};
  CHECK(std::abs(cosine(basis(2, 0), d) - 1.0 / std::sqrt(2.0)) < 1e-12);
  CHECK_THROWS_AS(cosine(basis(2, 0), basis(3, 0)), DataError);
}

TEST_CASE("combine examples") {
  TableEmbedding emb(2);
  emb.set("orig", basis(2, 0));
  emb.set("e0", basis(2, 0));
  emb.set("e1", basis(2, 1));
  auto style = SimilarityMeasure::stylistic(emb);

  auto two = combine(set_of({"e0", "e1"}), doc("o", "orig"), style);
  CHECK(two.combined.max == 1.0);
  CHECK(two.combined.expectation == 0.5);
  CHECK(two.combined.min == 0.0);
  REQUIRE(two.combined.aggregate.has_value());
  CHECK(std::abs(*two.combined.aggregate - 1.0 / std::sqrt(2.0)) < 1e-9);
  CHECK(two.per_inversion == std::vector<double>{1.0, 0.0});
  CHECK(two.combined.get(Strategy::single) == 1.0);

  auto one = combine(set_of({"e1"}), doc("o", "orig"), style);
  CHECK(one.combined.single == one.combined.max);
  CHECK(one.combined.max == one.combined.expectation);
  CHECK(one.combined.expectation == *one.combined.aggregate);

  auto same = combine(set_of({"e1", "e1", "e1"}), doc("o", "orig"), style);
  CHECK(same.combined.expectation == same.combined.max);

  auto b = combine(set_of({"x y z", "x y"}), doc("o", "x y z"), SimilarityMeasure::bleu());
  CHECK(b.combined.max == 1.0);
  CHECK_FALSE(b.combined.aggregate.has_value());
  CHECK_THROWS_AS(b.combined.get(Strategy::aggregate), ConfigError);
  CHECK_FALSE(SimilarityMeasure::bleu().aggregatable());
  CHECK(style.aggregatable());

  CHECK_THROWS_AS(combine(set_of({}), doc("o", "orig"), style), DataError);
  CHECK_THROWS_AS(combine_values(std::vector<double>{}), DataError);

  auto single = score_single("p", doc("c", "e1"), doc("o", "orig"), style);
  CHECK(single.combined.max == 0.0);
  CHECK(single.to_json()["aggregate"] == 0.0);
}

TEST_CASE("combinators: min <= expectation <= max and permutation invariance") {
  testsupport::Rng rng(5);
  for (int t = 0; t < 500; ++t) {
    const std::size_t dim = 2 + rng.below(6);
    const std::size_t n = 1 + rng.below(12);
    std::vector<Vector> inv;
    for (std::size_t i = 0; i < n; ++i) inv.push_back(testsupport::random_unit(rng, dim));
    auto orig = testsupport::random_unit(rng, dim);
    std::vector<double> per;
    auto c = combine_vectors(inv, orig, &per);
    REQUIRE(per.size() == n);
    REQUIRE(c.min <= c.expectation + 1e-12);
    REQUIRE(c.expectation <= c.max + 1e-12);
    REQUIRE(c.single == per[0]);
    REQUIRE(*c.aggregate >= -1.0 - 1e-12);
    REQUIRE(*c.aggregate <= 1.0 + 1e-12);

    auto shuffled = inv;
    rng.shuffle(shuffled);
    auto s = combine_vectors(shuffled, orig);
    CHECK(s.max == doctest::Approx(c.max).epsilon(1e-12));
    CHECK(s.min == doctest::Approx(c.min).epsilon(1e-12));
    CHECK(s.expectation == doctest::Approx(c.expectation).epsilon(1e-12));
    CHECK(*s.aggregate == doctest::Approx(*c.aggregate).epsilon(1e-9));

    std::vector<double> vals;
    for (std::size_t i = 0; i < n; ++i) vals.push_back(rng.uniform());
    auto cv = combine_values(vals);
    REQUIRE(cv.min <= cv.expectation);
    REQUIRE(cv.expectation <= cv.max);
  }
}

TEST_CASE("measure and strategy names") {
  CHECK(parse_measure("bleu") == MeasureKind::bleu);
  CHECK(parse_measure("semantic") == MeasureKind::semantic_cosine);
  CHECK(parse_measure("style") == MeasureKind::stylistic_cosine);
  CHECK(parse_strategy("expectation") == Strategy::expectation);
  CHECK_THROWS_AS(parse_measure("rouge"), ConfigError);
  CHECK_THROWS_AS(parse_strategy("median"), ConfigError);
  for (auto s : {Strategy::single, Strategy::max, Strategy::expectation, Strategy::aggregate}) {
    CHECK(parse_strategy(to_string(s)) == s);
  }
}
