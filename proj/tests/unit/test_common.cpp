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

#include <atomic>
#include <cmath>
#include <set>
#include <stdexcept>

#include "doctest.h"
#include "test_support.hpp"

#include "inverscribe/common/error.hpp"
#include "inverscribe/common/parallel.hpp"
#include "inverscribe/common/rng.hpp"
#include "inverscribe/common/utf8.hpp"
#include "inverscribe/common/vec.hpp"

using namespace inverscribe;

TEST_CASE("FNV-1a 64 reference vectors") {
  CHECK(stable_hash("") == 0xcbf29ce484222325ULL);
  CHECK(stable_hash("a") == 0xaf63dc4c8601ec8cULL);
  CHECK(stable_hash("foobar") == 0x85944171f73967e8ULL);
  CHECK(hex64(0xcbf29ce484222325ULL) == "cbf29ce484222325");
  CHECK(hex64(1) == "0000000000000001");
}

TEST_CASE("Rng is deterministic and sub-streams are independent of call order") {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) CHECK(a.next() == b.next());

  auto x1 = Rng::derive(7, {"paraphrase", "doc1"}).next();
  auto y1 = Rng::derive(7, {"paraphrase", "doc2"}).next();
  auto x2 = Rng::derive(7, {"paraphrase", "doc1"}).next();
  CHECK(x1 == x2);
  CHECK(x1 != y1);
  CHECK(Rng::derive(8, {"paraphrase", "doc1"}).next() != x1);
}

TEST_CASE("Rng distributions") {
  Rng rng(1);
  double sum_u = 0, sum_z = 0, sum_n = 0, sum_n2 = 0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    double u = rng.uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    sum_u += u;
    double z = rng.beta21();
    REQUIRE(z > 0.0);
    REQUIRE(z <= 1.0);
    sum_z += z;
    double g = rng.normal();
    sum_n += g;
    sum_n2 += g * g;
  }
  CHECK(sum_u / n == doctest::Approx(0.5).epsilon(0.01));
  CHECK(sum_z / n == doctest::Approx(2.0 / 3.0).epsilon(0.01));
  CHECK(std::abs(sum_n / n) < 0.02);
  CHECK(sum_n2 / n == doctest::Approx(1.0).epsilon(0.02));

  std::vector<int> counts(5, 0);
  for (int i = 0; i < 50000; ++i) ++counts[rng.below(5)];
  for (int c : counts) CHECK(std::abs(c - 10000) < 400);
}

TEST_CASE("sample_indices returns distinct in-range indices") {
  Rng rng(3);
  for (std::size_t n = 0; n < 20; ++n) {
    for (std::size_t k = 0; k <= n; ++k) {
      auto idx = rng.sample_indices(n, k);
      CHECK(idx.size() == k);
      std::set<std::size_t> uniq(idx.begin(), idx.end());
      CHECK(uniq.size() == k);
      for (auto i : idx) CHECK(i < n);
    }
  }
}

TEST_CASE("utf8 decoding covers the input and maps malformed bytes to U+FFFD") {
  const std::string text = "a\xC3\xA9\xE2\x82\xAC\xF0\x9F\x98\x80";  // a é € 😀
  auto cps = utf8::decode(text);
  REQUIRE(cps.size() == 4);
  CHECK(cps[0].value == U'a');
  CHECK(cps[1].value == U'é');
  CHECK(cps[2].value == U'€');
  CHECK(cps[3].value == U'\U0001F600');
  CHECK(cps[3].offset == 6);
  CHECK(cps[3].length == 4);

  auto bad = utf8::decode("x\xFF\xC3");
  REQUIRE(bad.size() == 3);
  CHECK(bad[1].value == 0xFFFD);
  CHECK(bad[2].value == 0xFFFD);

  std::string round;
  for (const auto& cp : cps) utf8::append(round, cp.value);
  CHECK(round == text);

  CHECK(utf8::lowercase("HeLLo \xC3\x89\xCE\xA3") == "hello \xC3\xA9\xCF\x83");
  CHECK(utf8::is_upper(U'Q'));
  CHECK_FALSE(utf8::is_upper(U'q'));
}

TEST_CASE("utf8 decode never fails on random bytes") {
  Rng rng(11);
  for (int t = 0; t < 500; ++t) {
    std::string s;
    auto len = rng.below(40);
    for (std::uint64_t i = 0; i < len; ++i) s.push_back(static_cast<char>(rng.below(256)));
    auto cps = utf8::decode(s);
    std::size_t covered = 0;
    for (const auto& cp : cps) {
      CHECK(cp.offset == covered);
      covered += cp.length;
    }
    CHECK(covered == s.size());
  }
}

TEST_CASE("vector helpers") {
  Vector v{3.0, 4.0};
  auto u = normalized(v);
  CHECK(u[0] == doctest::Approx(0.6));
  CHECK(u[1] == doctest::Approx(0.8));
  CHECK(l2_norm(u) == doctest::Approx(1.0));
  CHECK(dot(v, v) == doctest::Approx(25.0));
  CHECK_THROWS_AS(normalized(Vector{0.0, 0.0}), DataError);

  std::vector<Vector> pool{{1.0, 0.0}, {0.0, 1.0}};
  auto m = mean_pool(pool);
  CHECK(m[0] == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(m[1] == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK_THROWS(mean_pool(std::vector<Vector>{}));
}

TEST_CASE("parallel_for visits every index once and rethrows") {
  for (std::size_t workers : {1u, 2u, 8u}) {
    std::vector<std::atomic<int>> hits(1000);
    parallel_for(hits.size(), workers, [&](std::size_t i) { ++hits[i]; });
    for (auto& h : hits) CHECK(h.load() == 1);
  }
  CHECK_THROWS_AS(parallel_for(100, 4,
                               [](std::size_t i) {
                                 if (i == 37) throw DataError("boom");
                               }),
                  DataError);
  parallel_for(0, 4, [](std::size_t) { FAIL("no work expected"); });
}

TEST_CASE("error kinds map to exit codes") {
  CHECK(ConfigError("x").exit_code() == 2);
  CHECK(BackendError("x").exit_code() == 3);
  CHECK(DataError("x").exit_code() == 4);
  try {
    throw DataError("bad record");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::data);
    CHECK(std::string(e.what()) == "bad record");
  }
}
