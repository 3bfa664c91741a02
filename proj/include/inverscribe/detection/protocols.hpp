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
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "inverscribe/backends/embedding.hpp"
#include "inverscribe/channel/channel.hpp"
#include "inverscribe/corpus/document.hpp"
#include "inverscribe/detection/det.hpp"
#include "inverscribe/scoring/scoring.hpp"
#include "inverscribe/styling/styling.hpp"

namespace inverscribe::detection {

// Wraps a document as a one-element set, for scoring raw paraphrases with the
// same protocols as inversions.
channel::InversionSet as_single_set(const corpus::Document& doc);

// Each set is scored against every source in style space with `strategy`;
// the source its origin chain resolves to is genuine, the rest impostors.
// `lineage` supplies the intermediate documents (paraphrases) of each chain.
TrialSet plagiarism_trials(std::span<const channel::InversionSet> sets, std::span<const corpus::Document> sources,
                           std::span<const corpus::Document> lineage, backends::EmbeddingBackend& style,
                           scoring::Strategy strategy);

struct QueryAuthor {
  std::string author_id;
  std::vector<channel::InversionSet> sets;  // one per paraphrased query document
};

struct QueryRanking {
  std::string query_author;
  std::vector<std::pair<std::string, double>> ranked;  // candidates, best first
  std::size_t true_rank = 0;                           // 1-based
};

struct AuthorshipResult {
  TrialSet trials;
  std::vector<QueryRanking> rankings;
};

// Scores every query against every candidate profile. With the aggregate
// strategy the query is the normalized mean of all inversion embeddings of all
// its sets; max/expectation pool per-inversion cosines; single uses the first
// inversion of the first set.
AuthorshipResult authorship_trials(std::span<const QueryAuthor> queries,
                                   std::span<const styling::AuthorProfile> candidates,
                                   backends::EmbeddingBackend& style,
                                   scoring::Strategy strategy = scoring::Strategy::aggregate);

// Targeted arm: each candidate is scored with the inversions generated under
// that candidate's context.
struct TargetedQuery {
  std::string author_id;
  std::map<std::string, std::vector<channel::InversionSet>> per_candidate;
};

AuthorshipResult authorship_trials_targeted(std::span<const TargetedQuery> queries,
                                            std::span<const styling::AuthorProfile> candidates,
                                            backends::EmbeddingBackend& style,
                                            scoring::Strategy strategy = scoring::Strategy::aggregate);

// The inversion least similar to the paraphrase in style space; ties go to
// the smallest inversion id.
corpus::Document farthest_inversion(const channel::InversionSet& set, const corpus::Document& paraphrase,
                                    backends::EmbeddingBackend& style);

}  // namespace inverscribe::detection
