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

#include <set>
#include <sstream>

#include "doctest.h"
#include "test_support.hpp"

#include "inverscribe/alignment/tokenize.hpp"
#include "inverscribe/corpus/corpus.hpp"
#include "inverscribe/corpus/stats.hpp"

using namespace inverscribe;
using namespace inverscribe::corpus;
using testsupport::TempDir;

namespace {

Document doc(std::string id, std::string author, std::string text) {
  Document d;
  d.id = std::move(id);
  d.author_id = std::move(author);
  d.text = std::move(text);
  return d;
}

std::string words(std::size_t n) {
  std::string s;
  for (std::size_t i = 0; i < n; ++i) s += (i ? " w" : "w") + std::to_string(i);
  return s;
}

Corpus authors_with_docs(const std::map<std::string, std::size_t>& counts) {
  Corpus c;
  for (const auto& [author, n] : counts) {
    for (std::size_t i = 0; i < n; ++i) c.documents.push_back(doc(author + "_" + std::to_string(i), author, "text"));
  }
  return c;
}

}  // namespace

TEST_CASE("ingest: empty file gives an empty corpus") {
  TempDir dir;
  testsupport::write_file(dir / "empty.jsonl", "");
  auto c = ingest(dir / "empty.jsonl");
  CHECK(c.empty());
}

TEST_CASE("ingest: three records keep their ids and optional fields") {
  std::istringstream in(
      R"({"id":"a","author_id":"u1","text":"one"})"
      "\n"
      R"({"id":"b","author_id":"u1","text":"two","source_kind":"paraphrase","origin_id":"a"})"
      "\n\n"
      R"({"id":"c","author_id":"u2","text":"three","meta":{"k":"v"}})"
      "\n");
  auto c = parse_jsonl(in);
  REQUIRE(c.size() == 3);
  CHECK(c.documents[0].id == "a");
  CHECK(c.documents[1].id == "b");
  CHECK(c.documents[2].id == "c");
  CHECK(c.documents[1].source_kind == SourceKind::paraphrase);
  CHECK(c.documents[1].origin_id == std::optional<std::string>("a"));
  CHECK(c.documents[2].meta.at("k") == "v");
}

TEST_CASE("ingest: errors name the line") {
  std::istringstream in(R"({"id":"a","author_id":"u1","text":"one"})"
                        "\n"
                        R"({"id":"b","text":"two"})"
                        "\n");
  try {
    parse_jsonl(in);
    FAIL("expected DataError");
  } catch (const DataError& e) {
    CHECK(std::string(e.what()).find("line 2: missing author_id") != std::string::npos);
  }

  std::istringstream bad_json("{not json}\n");
  CHECK_THROWS_AS(parse_jsonl(bad_json), DataError);
  std::istringstream dup(R"({"id":"a","author_id":"u","text":"x"})"
                         "\n"
                         R"({"id":"a","author_id":"u","text":"y"})"
                         "\n");
  CHECK_THROWS_AS(parse_jsonl(dup), DataError);
  std::istringstream kind(R"({"id":"a","author_id":"u","text":"x","source_kind":"robot"})"
                          "\n");
  CHECK_THROWS_AS(parse_jsonl(kind), DataError);
  CHECK_THROWS_AS(ingest("/nonexistent/inverscribe/file.jsonl"), DataError);
}

TEST_CASE("manifest round trip is the identity") {
  testsupport::Rng rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    Corpus c;
    const auto n = rng.below(15);
    for (std::uint64_t i = 0; i < n; ++i) {
      Document d = doc("d" + std::to_string(i), "a" + std::to_string(rng.below(4)),
                       "text \"quoted\" \xC3\xA9 \n line " + std::to_string(rng.next()));
      if (i > 0 && rng.below(2)) {
        d.source_kind = SourceKind::paraphrase;
        d.origin_id = "d0";
      }
      if (rng.below(2)) d.meta["seed"] = std::to_string(rng.below(100));
      c.documents.push_back(d);
    }
    c = c.with_step("ingest", "trial " + std::to_string(trial));
    ManifestStamp stamp{"abc123", 17, "0.1.0"};
    std::stringstream buf;
    write_manifest(buf, c, stamp);
    ManifestStamp back_stamp;
    auto back = parse_jsonl(buf, &back_stamp);
    CHECK(back == c);
    CHECK(back_stamp == stamp);
  }
  TempDir dir;
  Corpus c{{doc("x", "u", "hello")}, {}};
  save_manifest(dir / "m.jsonl", c, {"h", 1, "v"});
  ManifestStamp s;
  CHECK(load_manifest(dir / "m.jsonl", &s) == c);
  CHECK(s.config_hash == "h");
}

TEST_CASE("filter_by_token_length keeps inclusive bounds") {
  Corpus c;
  for (std::size_t n : {10u, 64u, 128u, 129u, 200u}) c.documents.push_back(doc("n" + std::to_string(n), "u", words(n)));
  auto kept = filter_by_token_length(c, 64, 128);
  REQUIRE(kept.size() == 2);
  CHECK(kept.documents[0].id == "n64");
  CHECK(kept.documents[1].id == "n128");
  CHECK(filter_by_token_length(kept, 64, 128).documents == kept.documents);  // idempotent
  CHECK(kept.provenance.back().step == "filter_by_token_length");
  CHECK_THROWS_AS(filter_by_token_length(c, 10, 5), ConfigError);

  // Custom counter is honoured.
  auto chars = [](std::string_view s) { return s.size(); };
  CHECK(filter_by_token_length(Corpus{{doc("a", "u", "abc")}, {}}, 3, 3, chars).size() == 1);
}

TEST_CASE("cap_per_author thresholds and sampling") {
  auto c = authors_with_docs({{"few", 9}, {"exact", 10}, {"many", 25}});
  auto a = cap_per_author(c, 10, 10, 1);
  auto b = cap_per_author(c, 10, 10, 2);
  std::map<std::string, std::set<std::string>> per_a, per_b;
  for (const auto& d : a.documents) per_a[d.author_id].insert(d.id);
  for (const auto& d : b.documents) per_b[d.author_id].insert(d.id);
  CHECK(per_a.count("few") == 0);
  CHECK(per_a["exact"].size() == 10);
  CHECK(per_a["exact"] == per_b["exact"]);
  CHECK(per_a["many"].size() == 10);
  CHECK(per_b["many"].size() == 10);
  for (const auto& id : per_a["many"]) CHECK(id.rfind("many_", 0) == 0);
  CHECK(per_a["many"] != per_b["many"]);  // differs for these two seeds
  CHECK(cap_per_author(c, 10, 10, 1) == a);  // deterministic

  // Input order preserved.
  std::vector<std::string> ids;
  for (const auto& d : a.documents) ids.push_back(d.id);
  std::vector<std::string> sorted_by_input;
  for (const auto& d : c.documents) {
    if (std::find(ids.begin(), ids.end(), d.id) != ids.end()) sorted_by_input.push_back(d.id);
  }
  CHECK(ids == sorted_by_input);

  CHECK_THROWS_AS(cap_per_author(c, 5, 10, 0), ConfigError);
}

TEST_CASE("clean_artifacts examples") {
  CHECK(clean_artifacts("Rephrased passage: Hello there.") == "Hello there.");
  CHECK(clean_artifacts("Hello there.") == "Hello there.");
  CHECK(clean_artifacts("X. Note: I changed the tone.") == "X.");
  CHECK(clean_artifacts("Sure, here is the rephrased passage: Hi.") == "Hi.");
  CHECK(clean_artifacts("Body text. This rephrased passage keeps the meaning.") == "Body text.");
  CHECK(clean_artifacts("REPHRASED PASSAGE: Loud.") == "Loud.");
  CHECK_THROWS_AS(clean_artifacts("Note: only a note."), DataError);
  CHECK_THROWS_AS(clean_artifacts("x", {}), ConfigError);
}

TEST_CASE("clean_artifacts is idempotent on a fuzz corpus") {
  const std::vector<std::string> pieces = {"Rephrased passage:", "Sure,", "Note:", "note: ", "This rephrased passage",
                                           "here is the rephrased", "Hello", "world.", " ", "\n", ".", "I changed it.",
                                           "sure", "text", "!", "passage:"};
  testsupport::Rng rng(99);
  int checked = 0;
  for (int t = 0; t < 2000; ++t) {
    std::string s;
    const auto n = 1 + rng.below(8);
    for (std::uint64_t i = 0; i < n; ++i) s += pieces[rng.below(pieces.size())] + (rng.below(2) ? " " : "");
    std::string once;
    try {
      once = clean_artifacts(s);
    } catch (const DataError&) {
      continue;
    }
    ++checked;
    CHECK(clean_artifacts(once) == once);
  }
  CHECK(checked > 500);
}

TEST_CASE("corpus_stats counts per split") {
  const auto empty = corpus_stats(Corpus{}, styling::SplitManifest{});
  CHECK(empty.n_examples == 0);
  CHECK(empty.n_authors == 0);
  REQUIRE(empty.per_split.size() == 3);  // every split is always reported
  for (const auto& [name, counts] : empty.per_split) {
    CHECK(counts.n_examples == 0);
    CHECK(counts.n_authors == 0);
  }

  std::map<std::string, std::size_t> counts;
  styling::SplitManifest split;
  for (int a = 0; a < 100; ++a) {
    std::string id = "a" + std::to_string(a);
    counts[id] = 10;
    split.splits[id] = a < 80 ? styling::Split::train : a < 90 ? styling::Split::valid : styling::Split::test;
  }
  auto c = authors_with_docs(counts);
  auto stats = corpus_stats(c, split);
  CHECK(stats.n_examples == 1000);
  CHECK(stats.n_authors == 100);
  CHECK(stats.per_split.at("train") == SplitCounts{800, 80});
  CHECK(stats.per_split.at("valid") == SplitCounts{100, 10});
  CHECK(stats.per_split.at("test") == SplitCounts{100, 10});

  split.splits["ghost"] = styling::Split::test;
  CHECK_THROWS_AS(corpus_stats(c, split), DataError);
}

TEST_CASE("validate checks ids, text and origins") {
  Corpus c{{doc("a", "u", "x")}, {}};
  CHECK_NOTHROW(validate(c));
  Document p = doc("p", "u", "y");
  p.source_kind = SourceKind::paraphrase;
  c.documents.push_back(p);
  CHECK_THROWS_AS(validate(c), DataError);  // no origin
  c.documents.back().origin_id = "missing";
  CHECK_THROWS_AS(validate(c), DataError);
  c.documents.back().origin_id = "a";
  CHECK_NOTHROW(validate(c));
  c.documents.push_back(doc("e", "u", ""));
  CHECK_THROWS_AS(validate(c), DataError);
}
