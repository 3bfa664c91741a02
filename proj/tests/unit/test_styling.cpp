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

#include <algorithm>
#include <set>

#include "doctest.h"
#include "test_support.hpp"

#include "inverscribe/backends/mock.hpp"
#include "inverscribe/styling/styling.hpp"

using namespace inverscribe;
using namespace inverscribe::styling;
using testsupport::basis;
using testsupport::TableEmbedding;

namespace {

corpus::Document doc(std::string id, std::string author, std::string text) {
  corpus::Document d;
  d.id = std::move(id);
  d.author_id = std::move(author);
  d.text = std::move(text);
  return d;
}

// Exhaustive minimum inertia over all two-cluster partitions (both non-empty).
double best_two_partition(const std::vector<Vector>& pts) {
  const std::size_t n = pts.size();
  double best = 1e300;
  for (std::uint64_t mask = 1; mask + 1 < (1ULL << n); ++mask) {
    std::vector<std::size_t> assign(n);
    for (std::size_t i = 0; i < n; ++i) assign[i] = (mask >> i) & 1;
    std::vector<Vector> cents(2, Vector(pts[0].size(), 0.0));
    std::vector<double> cnt(2, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t d = 0; d < pts[i].size(); ++d) cents[assign[i]][d] += pts[i][d];
      cnt[assign[i]] += 1;
    }
    for (int c = 0; c < 2; ++c) {
      for (auto& x : cents[c]) x /= cnt[c];
    }
    best = std::min(best, inertia(pts, assign, cents));
  }
  return best;
}

std::vector<Vector> two_blobs(testsupport::Rng& rng, std::size_t per_blob, std::size_t dim = 2) {
  std::vector<Vector> pts;
  for (int blob = 0; blob < 2; ++blob) {
    for (std::size_t i = 0; i < per_blob; ++i) {
      Vector p(dim);
      for (std::size_t d = 0; d < dim; ++d) p[d] = (blob ? 10.0 : -10.0) + 0.5 * rng.normal();
      pts.push_back(p);
    }
  }
  return pts;
}

void check_inertia_non_increasing(const KMeansResult& r) {
  for (std::size_t i = 1; i < r.inertia_history.size(); ++i) {
    REQUIRE(r.inertia_history[i] <= r.inertia_history[i - 1] + 1e-12 * std::max(1.0, r.inertia_history[i - 1]));
  }
}

}  // namespace

TEST_CASE("author_embedding examples") {
  TableEmbedding emb(4);
  emb.set("one", basis(4, 0));
  emb.set("two", basis(4, 1));
  emb.set("same", basis(4, 2));

  std::vector<corpus::Document> single{doc("d1", "a", "one")};
  auto p = author_embedding(single, emb);
  CHECK(p.embedding == basis(4, 0));
  CHECK(p.author_id == "a");
  CHECK(p.doc_ids == std::vector<std::string>{"d1"});

  std::vector<corpus::Document> equal{doc("d1", "a", "same"), doc("d2", "a", "same")};
  CHECK(author_embedding(equal, emb).embedding == basis(4, 2));

  std::vector<corpus::Document> ortho{doc("d1", "a", "one"), doc("d2", "a", "two")};
  auto o = author_embedding(ortho, emb).embedding;
  CHECK(o[0] == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
  CHECK(o[1] == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));

  std::vector<corpus::Document> mixed{doc("d1", "a", "one"), doc("d2", "b", "two")};
  CHECK_THROWS_AS(author_embedding(mixed, emb), DataError);
  CHECK_THROWS_AS(author_embedding(std::vector<corpus::Document>{}, emb), DataError);
}

TEST_CASE("author_embedding is invariant to document order") {
  backends::MockEmbeddingBackend emb(64, false);
  std::vector<corpus::Document> docs;
  for (int i = 0; i < 7; ++i) docs.push_back(doc("d" + std::to_string(i), "a", "Text number " + std::to_string(i * 31)));
  auto base = author_embedding(docs, emb).embedding;
  testsupport::Rng rng(3);
  for (int t = 0; t < 10; ++t) {
    rng.shuffle(docs);
    auto e = author_embedding(docs, emb).embedding;
    for (std::size_t d = 0; d < e.size(); ++d) CHECK(e[d] == doctest::Approx(base[d]).epsilon(1e-12));
  }
}

TEST_CASE("author_profiles orders by author id") {
  backends::MockEmbeddingBackend emb(32);
  corpus::Corpus c{{doc("1", "zed", "z text"), doc("2", "amy", "a text"), doc("3", "zed", "more")}, {}};
  auto profiles = author_profiles(c, emb);
  REQUIRE(profiles.size() == 2);
  CHECK(profiles[0].author_id == "amy");
  CHECK(profiles[1].doc_ids == std::vector<std::string>{"1", "3"});
}

TEST_CASE("kmeans trivial cases") {
  testsupport::Rng rng(10);
  std::vector<Vector> pts;
  for (int i = 0; i < 9; ++i) pts.push_back({rng.normal(), rng.normal(), rng.normal()});

  auto each = kmeans(pts, {.k = pts.size(), .seed = 1});
  CHECK(each.inertia() == doctest::Approx(0.0));
  CHECK(std::set<std::size_t>(each.assignments.begin(), each.assignments.end()).size() == pts.size());

  auto one = kmeans(pts, {.k = 1, .seed = 1});
  Vector mean(3, 0.0);
  for (const auto& p : pts) {
    for (int d = 0; d < 3; ++d) mean[d] += p[d] / 9.0;
  }
  for (int d = 0; d < 3; ++d) CHECK(one.centroids[0][d] == doctest::Approx(mean[d]).epsilon(1e-12));

  CHECK_THROWS_AS(kmeans(pts, {.k = 10}), DataError);
  CHECK_THROWS_AS(kmeans(pts, {.k = 0}), ConfigError);
}

TEST_CASE("kmeans recovers two blobs and matches the exhaustive optimum") {
  testsupport::Rng rng(12);
  for (int t = 0; t < 20; ++t) {
    const std::size_t per_blob = 3 + rng.below(4);  // 6..12 points
    auto pts = two_blobs(rng, per_blob);
    auto r = kmeans(pts, {.k = 2, .seed = static_cast<std::uint64_t>(t)});
    check_inertia_non_increasing(r);
    for (std::size_t i = 1; i < per_blob; ++i) CHECK(r.assignments[i] == r.assignments[0]);
    for (std::size_t i = per_blob + 1; i < 2 * per_blob; ++i) CHECK(r.assignments[i] == r.assignments[per_blob]);
    CHECK(r.assignments[0] != r.assignments[per_blob]);
    CHECK(r.inertia() == doctest::Approx(best_two_partition(pts)).epsilon(1e-9));
  }
}

TEST_CASE("kmeans inertia is non-increasing and runs are seed-deterministic") {
  testsupport::Rng rng(13);
  for (int t = 0; t < 30; ++t) {
    const std::size_t n = 20 + rng.below(80);
    const std::size_t dim = 2 + rng.below(6);
    std::vector<Vector> pts;
    for (std::size_t i = 0; i < n; ++i) pts.push_back(testsupport::random_unit(rng, dim));
    const std::size_t k = 1 + rng.below(std::min<std::size_t>(n, 12));
    KMeansOptions opt{.k = k, .seed = rng.next(), .workers = static_cast<std::size_t>(1 + t % 3)};
    auto a = kmeans(pts, opt);
    auto b = kmeans(pts, opt);
    check_inertia_non_increasing(a);
    CHECK(a.assignments == b.assignments);
    CHECK(a.centroids == b.centroids);
    CHECK(a.inertia_history == b.inertia_history);
    CHECK(a.inertia() == doctest::Approx(inertia(pts, a.assignments, a.centroids)).epsilon(1e-9));
  }
}

TEST_CASE("cluster_quota uses largest-remainder rounding") {
  auto q10 = cluster_quota(10, 0.8, 0.1);
  CHECK(q10.train == 8);
  CHECK(q10.valid == 1);
  CHECK(q10.remainder == 1);
  // 2.4, 0.3, 0.3: floors give 2/0/0 and the one leftover seat goes to the
  // largest remainder (train, 0.4).
  auto q3 = cluster_quota(3, 0.8, 0.1);
  CHECK(q3.train + q3.valid + q3.remainder == 3);
  CHECK(q3.train == 3);
  CHECK(q3.valid == 0);
  CHECK(q3.remainder == 0);
  // 5.6, 0.7, 0.7: floors 5/0/0, leftovers to valid then the remainder class.
  auto q7 = cluster_quota(7, 0.8, 0.1);
  CHECK(q7.train == 5);
  CHECK(q7.valid == 1);
  CHECK(q7.remainder == 1);
  auto q1 = cluster_quota(1, 0.8, 0.1);
  CHECK(q1.train == 1);
  for (std::size_t n = 0; n < 200; ++n) {
    auto q = cluster_quota(n, 0.8, 0.1);
    CHECK(q.train + q.valid + q.remainder == n);
    CHECK(std::abs(static_cast<double>(q.train) - 0.8 * n) <= 1.0);
    CHECK(std::abs(static_cast<double>(q.valid) - 0.1 * n) <= 1.0);
  }
}

TEST_CASE("stratified_split examples") {
  std::map<std::string, std::size_t> one_cluster;
  for (int i = 0; i < 10; ++i) one_cluster["a" + std::to_string(i)] = 0;
  auto m = stratified_split(one_cluster, 1, {.seed = 3});
  CHECK(m.authors_in(Split::train).size() == 8);
  CHECK(m.authors_in(Split::valid).size() == 1);
  CHECK(m.authors_in(Split::test).size() == 1);
  CHECK(m.warnings.size() == 1);  // pool of 1 < test_count 100

  std::map<std::string, std::size_t> big;
  for (int i = 0; i < 400; ++i) big["a" + std::to_string(i)] = 0;
  auto b = stratified_split(big, 1, {.test_count = 100, .seed = 1});
  CHECK(b.authors_in(Split::test).size() == 40);
  REQUIRE(b.warnings.size() == 1);
  CHECK(b.warnings[0].find("40") != std::string::npos);

  auto c = stratified_split(big, 1, {.test_count = 10, .seed = 1});
  CHECK(c.authors_in(Split::test).size() == 10);
  CHECK(c.unassigned.size() == 30);
  CHECK(c.warnings.empty());

  CHECK_THROWS_AS(stratified_split(big, 1, {.train_frac = 0.8, .valid_frac = 0.3}), ConfigError);
}

TEST_CASE("stratified_split stratifies, partitions and is deterministic") {
  testsupport::Rng rng(21);
  for (int t = 0; t < 50; ++t) {
    const std::size_t k = 1 + rng.below(8);
    std::map<std::string, std::size_t> assign;
    const std::size_t n = 5 + rng.below(200);
    for (std::size_t i = 0; i < n; ++i) assign["auth" + std::to_string(i)] = rng.below(k);
    SplitOptions opt{.test_count = rng.below(30), .seed = rng.next()};
    auto m = stratified_split(assign, k, opt);
    auto again = stratified_split(assign, k, opt);
    CHECK(m == again);
    CHECK(m.to_json().dump() == again.to_json().dump());
    CHECK(SplitManifest::from_json(m.to_json()) == m);

    std::map<std::size_t, std::size_t> size, train, valid;
    for (const auto& [a, c] : assign) ++size[c];
    std::set<std::string> seen;
    for (const auto& [a, s] : m.splits) {
      CHECK(assign.count(a) == 1);
      CHECK(seen.insert(a).second);
      if (s == Split::train) ++train[assign.at(a)];
      if (s == Split::valid) ++valid[assign.at(a)];
    }
    for (const auto& a : m.unassigned) {
      CHECK(m.splits.count(a) == 0);
      CHECK(seen.insert(a).second);
    }
    CHECK(seen.size() == assign.size());
    for (const auto& [c, sz] : size) {
      CHECK(std::abs(static_cast<double>(train[c]) - 0.8 * sz) <= 1.0);
      CHECK(std::abs(static_cast<double>(valid[c]) - 0.1 * sz) <= 1.0);
    }
  }
}
