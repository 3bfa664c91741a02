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
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "inverscribe/backends/embedding.hpp"
#include "inverscribe/common/vec.hpp"
#include "inverscribe/corpus/document.hpp"

namespace inverscribe::styling {

struct AuthorProfile {
  std::string author_id;
  std::vector<std::string> doc_ids;
  Vector embedding;  // unit norm
};

// L2-normalized mean of the backend's per-document vectors. All documents must
// share one author. Backend failures are rethrown with the document ids.
AuthorProfile author_embedding(std::span<const corpus::Document> docs, backends::EmbeddingBackend& backend);

// One profile per author in the corpus, ordered by author id.
std::vector<AuthorProfile> author_profiles(const corpus::Corpus& corpus, backends::EmbeddingBackend& backend);

struct KMeansOptions {
  std::size_t k = 100;
  std::uint64_t seed = 0;
  std::size_t max_iters = 100;
  double tol = 1e-6;
  std::size_t workers = 1;
};

struct KMeansResult {
  std::vector<std::size_t> assignments;
  std::vector<Vector> centroids;
  // Inertia after every assignment step, in order.
  std::vector<double> inertia_history;
  std::size_t iterations = 0;
  bool converged = false;

  double inertia() const { return inertia_history.empty() ? 0.0 : inertia_history.back(); }
};

// Lloyd's algorithm from k-means++ seeding, Euclidean distance. Stops when no
// centroid moves by tol or more, or after max_iters. An empty cluster is
// reseeded at the point farthest from its own centroid.
KMeansResult kmeans(std::span<const Vector> points, const KMeansOptions& options);

double inertia(std::span<const Vector> points, std::span<const std::size_t> assignments,
               std::span<const Vector> centroids);

enum class Split { train, valid, test };

std::string_view to_string(Split split) noexcept;

struct SplitOptions {
  double train_frac = 0.8;
  double valid_frac = 0.1;
  std::size_t test_count = 100;
  std::uint64_t seed = 0;
};

struct SplitManifest {
  std::size_t k = 0;
  std::uint64_t seed = 0;
  std::map<std::string, std::size_t> assignments;
  std::map<std::string, Split> splits;
  // Remainder-pool authors not drawn into the test split.
  std::vector<std::string> unassigned;
  std::vector<std::string> warnings;

  std::vector<std::string> authors_in(Split split) const;

  nlohmann::json to_json() const;
  static SplitManifest from_json(const nlohmann::json& j);

  bool operator==(const SplitManifest&) const = default;
};

// Per cluster, train/valid/remainder counts come from largest-remainder
// rounding of (train_frac, valid_frac, rest) * n; ties go to train, then
// valid. The test split is drawn uniformly from the pooled remainders.
SplitManifest stratified_split(const std::map<std::string, std::size_t>& assignments, std::size_t k,
                               const SplitOptions& options);

// Per-cluster (train, valid, remainder) counts for a cluster of n authors.
struct ClusterQuota {
  std::size_t train = 0;
  std::size_t valid = 0;
  std::size_t remainder = 0;
};
ClusterQuota cluster_quota(std::size_t n, double train_frac, double valid_frac);

}  // namespace inverscribe::styling
