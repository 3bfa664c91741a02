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

#include "inverscribe/styling/styling.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>

#include "inverscribe/common/error.hpp"
#include "inverscribe/common/parallel.hpp"
#include "inverscribe/common/rng.hpp"

namespace inverscribe::styling {

AuthorProfile author_embedding(std::span<const corpus::Document> docs, backends::EmbeddingBackend& backend) {
  if (docs.empty()) throw DataError("author_embedding needs at least one document");
  if (backend.dimension() < 2) throw ConfigError("embedding dimension must be at least 2");
  AuthorProfile profile;
  profile.author_id = docs.front().author_id;
  std::vector<std::string> texts;
  for (const auto& d : docs) {
    if (d.author_id != profile.author_id) {
      throw DataError("author_embedding: documents from '" + profile.author_id + "' and '" + d.author_id + "'");
    }
    profile.doc_ids.push_back(d.id);
    texts.push_back(d.text);
  }
  std::vector<Vector> vectors;
  try {
    vectors = backend.embed(texts);
  } catch (const BackendError& e) {
    std::string ids;
    for (const auto& id : profile.doc_ids) ids += (ids.empty() ? "" : ",") + id;
    throw BackendError(std::string(e.what()) + " (documents: " + ids + ")");
  }
  profile.embedding = mean_pool(vectors);
  return profile;
}

std::vector<AuthorProfile> author_profiles(const corpus::Corpus& corpus, backends::EmbeddingBackend& backend) {
  std::map<std::string, std::vector<corpus::Document>> by_author;
  for (const auto& d : corpus.documents) by_author[d.author_id].push_back(d);
  std::vector<AuthorProfile> out;
  out.reserve(by_author.size());
  for (const auto& [author, docs] : by_author) out.push_back(author_embedding(docs, backend));
  return out;
}

namespace {

double squared_distance(const Vector& a, const Vector& b) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    sum += d * d;
  }
  return sum;
}

std::vector<Vector> kmeanspp(std::span<const Vector> points, std::size_t k, Rng& rng) {
  std::vector<Vector> centroids;
  centroids.reserve(k);
  std::vector<bool> chosen(points.size(), false);
  std::size_t first = static_cast<std::size_t>(rng.below(points.size()));
  centroids.push_back(points[first]);
  chosen[first] = true;
  std::vector<double> best(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) best[i] = squared_distance(points[i], centroids[0]);
  while (centroids.size() < k) {
    const double total = std::accumulate(best.begin(), best.end(), 0.0);
    std::size_t pick = points.size();
    if (total > 0.0) {
      double target = rng.uniform() * total;
      for (std::size_t i = 0; i < points.size(); ++i) {
        if (best[i] <= 0.0) continue;
        pick = i;
        target -= best[i];
        if (target < 0.0) break;
      }
    } else {
      // Every point coincides with a centroid; fall back to an unused index.
      std::vector<std::size_t> unused;
      for (std::size_t i = 0; i < points.size(); ++i) {
        if (!chosen[i]) unused.push_back(i);
      }
      pick = unused[static_cast<std::size_t>(rng.below(unused.size()))];
    }
    chosen[pick] = true;
    centroids.push_back(points[pick]);
    for (std::size_t i = 0; i < points.size(); ++i) {
      best[i] = std::min(best[i], squared_distance(points[i], centroids.back()));
    }
  }
  return centroids;
}

void assign(std::span<const Vector> points, const std::vector<Vector>& centroids, std::vector<std::size_t>& out,
            std::size_t workers) {
  parallel_for(points.size(), workers, [&](std::size_t i) {
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < centroids.size(); ++c) {
      const double d = squared_distance(points[i], centroids[c]);
      if (d < best_d) {
        best_d = d;
        best = c;
      }
    }
    out[i] = best;
  });
}

}  // namespace

double inertia(std::span<const Vector> points, std::span<const std::size_t> assignments,
               std::span<const Vector> centroids) {
  double sum = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) sum += squared_distance(points[i], centroids[assignments[i]]);
  return sum;
}

KMeansResult kmeans(std::span<const Vector> points, const KMeansOptions& options) {
  if (options.k < 1) throw ConfigError("kmeans needs k >= 1");
  if (points.size() < options.k) {
    throw DataError("kmeans: " + std::to_string(points.size()) + " points for k=" + std::to_string(options.k));
  }
  const std::size_t dim = points.front().size();
  for (const auto& p : points) {
    if (p.size() != dim) throw DataError("kmeans: points differ in dimension");
  }

  Rng rng = Rng::derive(options.seed, {"kmeans"});
  KMeansResult result;
  result.centroids = kmeanspp(points, options.k, rng);
  result.assignments.assign(points.size(), 0);

  for (std::size_t iter = 0; iter < options.max_iters; ++iter) {
    assign(points, result.centroids, result.assignments, options.workers);
    result.inertia_history.push_back(inertia(points, result.assignments, result.centroids));
    ++result.iterations;

    std::vector<Vector> next(options.k, Vector(dim, 0.0));
    std::vector<std::size_t> counts(options.k, 0);
    for (std::size_t i = 0; i < points.size(); ++i) {
      auto& c = next[result.assignments[i]];
      for (std::size_t d = 0; d < dim; ++d) c[d] += points[i][d];
      ++counts[result.assignments[i]];
    }
    for (std::size_t c = 0; c < options.k; ++c) {
      if (counts[c] == 0) continue;
      for (double& x : next[c]) x /= static_cast<double>(counts[c]);
    }
    for (std::size_t c = 0; c < options.k; ++c) {
      if (counts[c] != 0) continue;
      std::size_t far = 0;
      double far_d = -1.0;
      for (std::size_t i = 0; i < points.size(); ++i) {
        const double d = squared_distance(points[i], next[result.assignments[i]]);
        if (d > far_d) {
          far_d = d;
          far = i;
        }
      }
      next[c] = points[far];
      result.assignments[far] = c;
      counts[c] = 1;
    }

    double shift = 0.0;
    for (std::size_t c = 0; c < options.k; ++c) {
      shift = std::max(shift, std::sqrt(squared_distance(next[c], result.centroids[c])));
    }
    result.centroids = std::move(next);
    if (shift < options.tol) {
      result.converged = true;
      break;
    }
  }
  assign(points, result.centroids, result.assignments, options.workers);
  result.inertia_history.push_back(inertia(points, result.assignments, result.centroids));
  return result;
}

std::string_view to_string(Split split) noexcept {
  switch (split) {
    case Split::train:
      return "train";
    case Split::valid:
      return "valid";
    case Split::test:
      return "test";
  }
  return "train";
}

ClusterQuota cluster_quota(std::size_t n, double train_frac, double valid_frac) {
  const double nd = static_cast<double>(n);
  const std::array<double, 3> exact = {train_frac * nd, valid_frac * nd, (1.0 - train_frac - valid_frac) * nd};
  std::array<std::size_t, 3> counts{};
  std::size_t assigned = 0;
  for (std::size_t i = 0; i < 3; ++i) {
    counts[i] = static_cast<std::size_t>(std::floor(exact[i] + 1e-9));
    assigned += counts[i];
  }
  std::array<std::size_t, 3> order = {0, 1, 2};
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const double ra = exact[a] - std::floor(exact[a] + 1e-9);
    const double rb = exact[b] - std::floor(exact[b] + 1e-9);
    return ra > rb + 1e-9;
  });
  for (std::size_t i = 0; assigned < n; i = (i + 1) % 3, ++assigned) ++counts[order[i]];
  return {counts[0], counts[1], counts[2]};
}

std::vector<std::string> SplitManifest::authors_in(Split split) const {
  std::vector<std::string> out;
  for (const auto& [author, s] : splits) {
    if (s == split) out.push_back(author);
  }
  return out;
}

nlohmann::json SplitManifest::to_json() const {
  nlohmann::json splits_json = nlohmann::json::object();
  for (const auto& [author, s] : splits) splits_json[author] = to_string(s);
  return {{"schema", "inverscribe.split"}, {"version", 1},          {"k", k},
          {"seed", seed},                  {"assignments", assignments}, {"splits", splits_json},
          {"unassigned", unassigned},      {"warnings", warnings}};
}

SplitManifest SplitManifest::from_json(const nlohmann::json& j) {
  try {
    SplitManifest m;
    m.k = j.at("k").get<std::size_t>();
    m.seed = j.at("seed").get<std::uint64_t>();
    m.assignments = j.at("assignments").get<std::map<std::string, std::size_t>>();
    for (const auto& [author, name] : j.at("splits").items()) {
      const auto s = name.get<std::string>();
      if (s == "train") {
        m.splits[author] = Split::train;
      } else if (s == "valid") {
        m.splits[author] = Split::valid;
      } else if (s == "test") {
        m.splits[author] = Split::test;
      } else {
        throw DataError("unknown split '" + s + "'");
      }
    }
    m.unassigned = j.value("unassigned", std::vector<std::string>{});
    m.warnings = j.value("warnings", std::vector<std::string>{});
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed split manifest: ") + e.what());
  }
}

SplitManifest stratified_split(const std::map<std::string, std::size_t>& assignments, std::size_t k,
                               const SplitOptions& options) {
  if (options.train_frac < 0.0 || options.valid_frac < 0.0 || options.train_frac + options.valid_frac >= 1.0) {
    throw ConfigError("split fractions must be non-negative and sum to less than 1");
  }
  SplitManifest manifest;
  manifest.k = k;
  manifest.seed = options.seed;
  manifest.assignments = assignments;

  std::map<std::size_t, std::vector<std::string>> clusters;
  for (const auto& [author, cluster] : assignments) clusters[cluster].push_back(author);

  std::vector<std::string> pool;
  for (auto& [cluster, authors] : clusters) {
    Rng rng = Rng::derive(options.seed, {"stratified_split", std::to_string(cluster)});
    rng.shuffle(authors);
    const auto quota = cluster_quota(authors.size(), options.train_frac, options.valid_frac);
    std::size_t i = 0;
    for (; i < quota.train; ++i) manifest.splits[authors[i]] = Split::train;
    for (; i < quota.train + quota.valid; ++i) manifest.splits[authors[i]] = Split::valid;
    for (; i < authors.size(); ++i) pool.push_back(authors[i]);
  }

  std::sort(pool.begin(), pool.end());
  if (pool.size() < options.test_count) {
    manifest.warnings.push_back("remainder pool has " + std::to_string(pool.size()) + " authors, fewer than test_count " +
                                std::to_string(options.test_count));
  }
  Rng rng = Rng::derive(options.seed, {"stratified_split", "test"});
  std::vector<bool> drawn(pool.size(), false);
  for (std::size_t idx : rng.sample_indices(pool.size(), options.test_count)) drawn[idx] = true;
  for (std::size_t i = 0; i < pool.size(); ++i) {
    if (drawn[i]) {
      manifest.splits[pool[i]] = Split::test;
    } else {
      manifest.unassigned.push_back(pool[i]);
    }
  }
  return manifest;
}

}  // namespace inverscribe::styling
