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

#include "inverscribe/channel/channel.hpp"

#include <cmath>
#include <map>
#include <optional>
#include <sstream>
#include <unordered_map>

#include "inverscribe/common/error.hpp"
#include "inverscribe/common/parallel.hpp"
#include "inverscribe/common/rng.hpp"

namespace inverscribe::channel {

using corpus::Corpus;
using corpus::Document;
using corpus::SourceKind;

namespace {

std::string format_real(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

std::optional<std::string> try_clean(const std::string& text) {
  try {
    return corpus::clean_artifacts(text);
  } catch (const DataError&) {
    return std::nullopt;
  }
}

}  // namespace

corpus::Corpus paraphrase_corpus(const Corpus& originals, backends::GenerationBackend& generator,
                                 backends::EmbeddingBackend& semantic, const ParaphraseOptions& options) {
  if (options.max_retries < 1) throw ConfigError("max_retries must be at least 1");
  for (const auto& d : originals.documents) {
    if (d.source_kind != SourceKind::human && d.source_kind != SourceKind::machine) {
      throw DataError("paraphrase_corpus: '" + d.id + "' is not a human or machine document");
    }
  }

  struct Outcome {
    std::optional<Document> paraphrase;
    std::size_t attempts = 0;
    double best_similarity = -1.0;
  };
  std::vector<Outcome> outcomes(originals.size());

  parallel_for(originals.size(), options.workers, [&](std::size_t i) {
    const Document& original = originals.documents[i];
    const std::string prompt = build_prompt(PromptKind::paraphrase, {.passage = original.text});
    const Vector original_vec = semantic.embed_one(original.text);
    Outcome& out = outcomes[i];
    for (std::size_t attempt = 0; attempt < options.max_retries; ++attempt) {
      ++out.attempts;
      backends::GenerationRequest req;
      req.prompt = prompt;
      req.n = 1;
      req.temperature = options.temperature;
      req.max_new_tokens = options.max_new_tokens;
      req.seed = combine_seed(combine_seed(options.seed, "paraphrase:" + original.id), std::to_string(attempt));
      const auto completions = generator.generate(req);
      const auto cleaned = try_clean(completions.front());
      if (!cleaned) continue;
      const double sim = dot(original_vec, semantic.embed_one(*cleaned));
      out.best_similarity = std::max(out.best_similarity, sim);
      if (sim >= options.sim_threshold) {
        Document p;
        p.id = original.id + "/para";
        p.author_id = original.author_id;
        p.text = *cleaned;
        p.source_kind = SourceKind::paraphrase;
        p.origin_id = original.id;
        p.meta = {{"generator", generator.name()},
                  {"temperature", format_real(options.temperature)},
                  {"similarity", format_real(sim)},
                  {"attempts", std::to_string(out.attempts)}};
        out.paraphrase = std::move(p);
        return;
      }
    }
  });

  Corpus result;
  result.provenance = originals.provenance;
  std::size_t dropped = 0;
  std::string dropped_ids;
  for (std::size_t i = 0; i < originals.size(); ++i) {
    if (!outcomes[i].paraphrase) {
      ++dropped;
      if (dropped <= 20) dropped_ids += (dropped_ids.empty() ? "" : ",") + originals.documents[i].id;
      continue;
    }
    result.documents.push_back(originals.documents[i]);
    result.documents.push_back(std::move(*outcomes[i].paraphrase));
  }
  result.provenance.push_back(
      {"paraphrase_corpus", "generator " + generator.name() + ", temperature " + format_real(options.temperature) +
                                ", threshold " + format_real(options.sim_threshold) + ", kept " +
                                std::to_string(originals.size() - dropped) + " of " +
                                std::to_string(originals.size()) +
                                (dropped ? ", dropped " + dropped_ids + (dropped > 20 ? ",..." : "") : "")});
  if (!originals.empty() && 2 * dropped > originals.size()) {
    result.provenance.push_back({"warning", "paraphrase drop rate above 50% (" + std::to_string(dropped) + " of " +
                                                std::to_string(originals.size()) + ")"});
  }
  return result;
}

std::vector<ParaphrasePair> paraphrase_pairs(const Corpus& corpus) {
  std::unordered_map<std::string, const Document*> by_id;
  for (const auto& d : corpus.documents) by_id[d.id] = &d;
  std::vector<ParaphrasePair> pairs;
  for (const auto& d : corpus.documents) {
    if (d.source_kind != SourceKind::paraphrase) continue;
    if (!d.origin_id) throw DataError("paraphrase '" + d.id + "' has no origin_id");
    auto it = by_id.find(*d.origin_id);
    if (it == by_id.end()) throw DataError("paraphrase '" + d.id + "' references unknown origin '" + *d.origin_id + "'");
    pairs.push_back({*it->second, d});
  }
  return pairs;
}

corpus::Corpus generate_machine_responses(const Corpus& comments,
                                          std::span<backends::GenerationBackend* const> generators,
                                          const MachineResponseOptions& options) {
  if (generators.empty()) throw ConfigError("generate_machine_responses needs at least one generator");
  std::vector<std::optional<Document>> responses(comments.size());
  std::vector<std::string> failures(comments.size());

  parallel_for(comments.size(), options.workers, [&](std::size_t i) {
    const Document& comment = comments.documents[i];
    Rng pick = Rng::derive(options.seed, {"machine_respond", comment.id});
    backends::GenerationBackend& gen = *generators[static_cast<std::size_t>(pick.below(generators.size()))];
    backends::GenerationRequest req;
    req.prompt = build_prompt(PromptKind::reddit_response, {.comment = comment.text});
    req.temperature = options.temperature;
    req.max_new_tokens = options.max_new_tokens;
    req.seed = combine_seed(options.seed, "machine_respond:" + comment.id);
    try {
      const auto text = try_clean(gen.generate(req).front());
      if (!text) {
        failures[i] = comment.id + ": empty response";
        return;
      }
      Document d;
      d.id = comment.id + "/resp";
      d.author_id = gen.name();
      d.text = *text;
      d.source_kind = SourceKind::machine;
      d.origin_id = comment.id;
      d.meta = {{"generator", gen.name()}};
      responses[i] = std::move(d);
    } catch (const BackendError& e) {
      failures[i] = comment.id + ": " + e.what();
    }
  });

  Corpus out;
  out.provenance = comments.provenance;
  std::size_t skipped = 0;
  for (std::size_t i = 0; i < comments.size(); ++i) {
    if (responses[i]) {
      out.documents.push_back(std::move(*responses[i]));
    } else {
      ++skipped;
      out.provenance.push_back({"machine_respond_skip", failures[i]});
    }
  }
  std::string names;
  for (auto* g : generators) names += (names.empty() ? "" : ",") + g->name();
  out.provenance.push_back({"generate_machine_responses", "generators " + names + ", produced " +
                                                              std::to_string(out.size()) + ", skipped " +
                                                              std::to_string(skipped)});
  return out;
}

std::size_t context_size(double z, std::size_t candidates) {
  if (candidates == 0) return 0;
  const double scaled = std::ceil(z * static_cast<double>(candidates));
  std::size_t m = scaled < 1.0 ? 1 : static_cast<std::size_t>(scaled);
  return std::min(m, candidates);
}

std::vector<Document> context_candidates(const Corpus& corpus, const Document& target) {
  std::vector<Document> out;
  for (const auto& d : corpus.documents) {
    if (d.author_id != target.author_id || d.id == target.id) continue;
    if (d.source_kind != SourceKind::human && d.source_kind != SourceKind::machine) continue;
    out.push_back(d);
  }
  return out;
}

ContextSample sample_context(std::span<const Document> candidates, std::uint64_t seed, std::string_view stream) {
  if (candidates.empty()) throw DataError("sample_context: no candidate documents");
  Rng rng = Rng::derive(seed, {"sample_context", stream});
  ContextSample sample;
  sample.author_id = candidates.front().author_id;
  sample.z = rng.beta21();
  sample.m = context_size(sample.z, candidates.size());
  for (std::size_t idx : rng.sample_indices(candidates.size(), sample.m)) {
    sample.example_doc_ids.push_back(candidates[idx].id);
  }
  return sample;
}

TargetContext make_target_context(std::span<const Document> candidates, const ContextSample& sample) {
  std::unordered_map<std::string, const Document*> by_id;
  for (const auto& d : candidates) by_id[d.id] = &d;
  TargetContext ctx{sample, {}};
  for (const auto& id : sample.example_doc_ids) {
    auto it = by_id.find(id);
    if (it == by_id.end()) throw DataError("context example '" + id + "' not among candidates");
    ContextExample ex{it->second->text, std::nullopt};
    if (auto p = it->second->meta.find("paraphrase"); p != it->second->meta.end()) ex.paraphrase = p->second;
    ctx.examples.push_back(std::move(ex));
  }
  return ctx;
}

InversionSet invert(const Document& paraphrase, const TargetContext* context, backends::GenerationBackend& generator,
                    const SamplingParams& params) {
  if (params.n < 1) throw ConfigError("invert needs n >= 1");
  InversionSet set;
  set.paraphrase_id = paraphrase.id;
  set.params = params;

  PromptSlots slots;
  slots.generation = paraphrase.text;
  std::string mode = "untargeted";
  if (context) {
    slots.examples = context->examples;
    set.target_author = context->sample.author_id;
    mode = "targeted:" + context->sample.author_id;
  }
  const PromptKind kind = context ? PromptKind::targeted_inversion : PromptKind::untargeted_inversion;
  const std::string prompt = build_prompt(kind, slots, generator.prompt_style());
  const std::string id_stem = paraphrase.id + (context ? "/inv@" + context->sample.author_id : "/inv");

  const std::size_t chunk = std::max<std::size_t>(params.chunk, 1);
  for (std::size_t start = 0; start < params.n; start += chunk) {
    backends::GenerationRequest req;
    req.prompt = prompt;
    req.n = std::min(chunk, params.n - start);
    req.temperature = params.temperature;
    req.max_new_tokens = params.max_new_tokens;
    req.seed = combine_seed(combine_seed(params.seed, "invert:" + mode + ":" + paraphrase.id), std::to_string(start));
    std::vector<std::string> completions;
    try {
      completions = generator.generate(req);
    } catch (const BackendError& e) {
      set.errors.push_back("completions " + std::to_string(start) + ".." + std::to_string(start + req.n) + ": " +
                           e.what());
      continue;
    }
    for (std::size_t k = 0; k < completions.size(); ++k) {
      Document inv;
      inv.id = id_stem + "/" + std::to_string(start + k);
      inv.author_id = paraphrase.author_id;
      inv.source_kind = SourceKind::inversion;
      inv.origin_id = paraphrase.id;
      inv.meta = {{"generator", generator.name()},
                  {"mode", mode},
                  {"temperature", format_real(params.temperature)},
                  {"index", std::to_string(start + k)}};
      if (auto cleaned = try_clean(completions[k])) {
        inv.text = std::move(*cleaned);
      } else {
        inv.meta["empty"] = "true";
      }
      set.inversions.push_back(std::move(inv));
    }
  }
  return set;
}

nlohmann::json inversion_set_record(const InversionSet& set) {
  nlohmann::json inversions = nlohmann::json::array();
  for (const auto& d : set.inversions) inversions.push_back(corpus::document_record(d));
  nlohmann::json rec = {{"paraphrase_id", set.paraphrase_id},
                        {"params",
                         {{"n", set.params.n},
                          {"temperature", set.params.temperature},
                          {"seed", set.params.seed},
                          {"max_new_tokens", set.params.max_new_tokens}}},
                        {"inversions", std::move(inversions)},
                        {"errors", set.errors}};
  if (set.target_author) rec["target_author"] = *set.target_author;
  return rec;
}

InversionSet parse_inversion_set(const nlohmann::json& rec) {
  try {
    InversionSet set;
    set.paraphrase_id = rec.at("paraphrase_id").get<std::string>();
    const auto& p = rec.at("params");
    set.params.n = p.at("n").get<std::size_t>();
    set.params.temperature = p.at("temperature").get<double>();
    set.params.seed = p.at("seed").get<std::uint64_t>();
    set.params.max_new_tokens = p.value("max_new_tokens", std::size_t{192});
    for (const auto& d : rec.at("inversions")) set.inversions.push_back(corpus::parse_document(d));
    set.errors = rec.value("errors", std::vector<std::string>{});
    if (auto it = rec.find("target_author"); it != rec.end() && it->is_string()) set.target_author = it->get<std::string>();
    return set;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed inversion set: ") + e.what());
  }
}

}  // namespace inverscribe::channel
