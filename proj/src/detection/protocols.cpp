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

#include "inverscribe/detection/protocols.hpp"

#include <algorithm>
#include <unordered_map>
#include <unordered_set>

#include "inverscribe/common/error.hpp"

namespace inverscribe::detection {

using scoring::Strategy;

channel::InversionSet as_single_set(const corpus::Document& doc) {
  channel::InversionSet set;
  set.paraphrase_id = doc.id;
  set.params.n = 1;
  set.inversions.push_back(doc);
  return set;
}

namespace {

std::vector<Vector> embed_set(const channel::InversionSet& set, backends::EmbeddingBackend& style) {
  if (set.inversions.empty()) throw DataError("inversion set '" + set.paraphrase_id + "' is empty");
  std::vector<std::string> texts;
  texts.reserve(set.inversions.size());
  for (const auto& d : set.inversions) texts.push_back(d.text);
  return style.embed(texts);
}

// Score of a pool of inversion vectors against one reference under a strategy.
double pooled_score(std::span<const Vector> inversions, const Vector& reference, Strategy strategy) {
  return scoring::combine_vectors(inversions, reference).get(strategy);
}

void check_candidates(std::span<const styling::AuthorProfile> candidates) {
  std::unordered_set<std::string> seen;
  for (const auto& c : candidates) {
    if (!seen.insert(c.author_id).second) throw DataError("duplicate candidate '" + c.author_id + "'");
  }
}

QueryRanking rank(const std::string& query, std::vector<std::pair<std::string, double>> scores) {
  std::stable_sort(scores.begin(), scores.end(), [](const auto& a, const auto& b) {
    return a.second > b.second || (a.second == b.second && a.first < b.first);
  });
  QueryRanking r{query, std::move(scores), 0};
  for (std::size_t i = 0; i < r.ranked.size(); ++i) {
    if (r.ranked[i].first == query) r.true_rank = i + 1;
  }
  return r;
}

}  // namespace

TrialSet plagiarism_trials(std::span<const channel::InversionSet> sets, std::span<const corpus::Document> sources,
                           std::span<const corpus::Document> lineage, backends::EmbeddingBackend& style,
                           Strategy strategy) {
  std::unordered_map<std::string, std::size_t> source_index;
  for (std::size_t i = 0; i < sources.size(); ++i) source_index[sources[i].id] = i;
  std::unordered_map<std::string, const corpus::Document*> links;
  for (const auto& d : lineage) links[d.id] = &d;

  auto resolve = [&](const std::string& start) -> std::size_t {
    std::string id = start;
    for (std::size_t hops = 0; hops <= lineage.size() + 1; ++hops) {
      if (auto it = source_index.find(id); it != source_index.end()) return it->second;
      auto link = links.find(id);
      if (link == links.end() || !link->second->origin_id) break;
      id = *link->second->origin_id;
    }
    throw DataError("inversion set '" + start + "' does not resolve to a source document");
  };

  std::vector<std::string> source_texts;
  for (const auto& s : sources) source_texts.push_back(s.text);
  const auto source_vecs = style.embed(source_texts);

  TrialSet trials;
  trials.protocol = Protocol::plagiarism;
  for (const auto& set : sets) {
    const std::size_t truth = resolve(set.paraphrase_id);
    const auto vectors = embed_set(set, style);
    for (std::size_t j = 0; j < sources.size(); ++j) {
      trials.add({set.paraphrase_id, sources[j].id, pooled_score(vectors, source_vecs[j], strategy), j == truth});
    }
  }
  return trials;
}

AuthorshipResult authorship_trials(std::span<const QueryAuthor> queries,
                                   std::span<const styling::AuthorProfile> candidates,
                                   backends::EmbeddingBackend& style, Strategy strategy) {
  check_candidates(candidates);
  AuthorshipResult result;
  result.trials.protocol = Protocol::authorship;
  for (const auto& q : queries) {
    const bool present = std::any_of(candidates.begin(), candidates.end(),
                                     [&](const auto& c) { return c.author_id == q.author_id; });
    if (!present) throw DataError("query author '" + q.author_id + "' is not in the candidate line-up");
    if (q.sets.empty()) throw DataError("query author '" + q.author_id + "' has no inversion sets");

    std::vector<Vector> pool;
    for (const auto& set : q.sets) {
      auto vecs = embed_set(set, style);
      pool.insert(pool.end(), std::make_move_iterator(vecs.begin()), std::make_move_iterator(vecs.end()));
    }
    std::vector<std::pair<std::string, double>> scores;
    for (const auto& c : candidates) {
      const double s = pooled_score(pool, c.embedding, strategy);
      scores.emplace_back(c.author_id, s);
      result.trials.add({q.author_id, c.author_id, s, c.author_id == q.author_id});
    }
    result.rankings.push_back(rank(q.author_id, std::move(scores)));
  }
  return result;
}

AuthorshipResult authorship_trials_targeted(std::span<const TargetedQuery> queries,
                                            std::span<const styling::AuthorProfile> candidates,
                                            backends::EmbeddingBackend& style, Strategy strategy) {
  check_candidates(candidates);
  AuthorshipResult result;
  result.trials.protocol = Protocol::authorship;
  for (const auto& q : queries) {
    const bool present = std::any_of(candidates.begin(), candidates.end(),
                                     [&](const auto& c) { return c.author_id == q.author_id; });
    if (!present) throw DataError("query author '" + q.author_id + "' is not in the candidate line-up");
    std::vector<std::pair<std::string, double>> scores;
    for (const auto& c : candidates) {
      auto it = q.per_candidate.find(c.author_id);
      if (it == q.per_candidate.end() || it->second.empty()) {
        throw DataError("query '" + q.author_id + "' has no targeted inversions for candidate '" + c.author_id + "'");
      }
      std::vector<Vector> pool;
      for (const auto& set : it->second) {
        auto vecs = embed_set(set, style);
        pool.insert(pool.end(), std::make_move_iterator(vecs.begin()), std::make_move_iterator(vecs.end()));
      }
      const double s = pooled_score(pool, c.embedding, strategy);
      scores.emplace_back(c.author_id, s);
      result.trials.add({q.author_id, c.author_id, s, c.author_id == q.author_id});
    }
    result.rankings.push_back(rank(q.author_id, std::move(scores)));
  }
  return result;
}

corpus::Document farthest_inversion(const channel::InversionSet& set, const corpus::Document& paraphrase,
                                    backends::EmbeddingBackend& style) {
  const auto vectors = embed_set(set, style);
  const Vector anchor = style.embed_one(paraphrase.text);
  std::size_t best = 0;
  double best_sim = scoring::cosine(vectors[0], anchor);
  for (std::size_t i = 1; i < vectors.size(); ++i) {
    const double sim = scoring::cosine(vectors[i], anchor);
    if (sim < best_sim || (sim == best_sim && set.inversions[i].id < set.inversions[best].id)) {
      best = i;
      best_sim = sim;
    }
  }
  return set.inversions[best];
}

}  // namespace inverscribe::detection
