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

#include "inverscribe/pipeline/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <unordered_map>

#include "inverscribe/alignment/alignment.hpp"
#include "inverscribe/alignment/mask_io.hpp"
#include "inverscribe/alignment/tokenize.hpp"
#include "inverscribe/channel/channel.hpp"
#include "inverscribe/common/error.hpp"
#include "inverscribe/common/parallel.hpp"
#include "inverscribe/common/rng.hpp"
#include "inverscribe/corpus/corpus.hpp"
#include "inverscribe/corpus/stats.hpp"
#include "inverscribe/detection/det.hpp"
#include "inverscribe/detection/export.hpp"
#include "inverscribe/detection/protocols.hpp"
#include "inverscribe/scoring/scoring.hpp"
#include "inverscribe/styling/styling.hpp"
#include "inverscribe/tokenpred/tokenpred.hpp"

namespace inverscribe::pipeline {

using nlohmann::json;
namespace fs = std::filesystem;
using corpus::Corpus;
using corpus::Document;

namespace {

constexpr int kArtifactVersion = 1;

struct StageInfo {
  Stage stage;
  std::string_view name;
};

constexpr StageInfo kStages[] = {
    {Stage::ingest, "ingest"},     {Stage::machine_respond, "machine_respond"},
    {Stage::paraphrase, "paraphrase"}, {Stage::split, "split"},
    {Stage::align, "align"},       {Stage::invert, "invert"},
    {Stage::score, "score"},       {Stage::detect, "detect"},
    {Stage::tokenpred, "tokenpred"}, {Stage::report, "report"},
};

const std::string kCodeVersion = INVERSCRIBE_VERSION;

// ---------------------------------------------------------------------------
// Stage-scoped configuration hashes

std::vector<Stage> upstream(const RunConfig& c, Stage s) {
  switch (s) {
    case Stage::ingest:
      return {};
    case Stage::machine_respond:
      return {Stage::ingest};
    case Stage::paraphrase:
      if (c.backends.responders.empty()) return {Stage::ingest};
      return {Stage::ingest, Stage::machine_respond};
    case Stage::split:
      return {Stage::ingest};
    case Stage::align:
      return {Stage::paraphrase};
    case Stage::invert:
      return {Stage::paraphrase, Stage::split};
    case Stage::score:
    case Stage::detect:
      return {Stage::invert};
    case Stage::tokenpred:
      return {Stage::align};
    case Stage::report:
      return {};
  }
  return {};
}

// Config keys ("section" or "backends/name") read by a stage itself.
std::vector<std::string> own_sections(Stage s) {
  switch (s) {
    case Stage::ingest:
      return {"seed", "input", "corpus"};
    case Stage::machine_respond:
      return {"machine", "backends/responders"};
    case Stage::paraphrase:
      return {"paraphrase", "backends/paraphraser", "backends/semantic"};
    case Stage::split:
      return {"split", "backends/style"};
    case Stage::align:
      return {};
    case Stage::invert:
      return {"invert", "backends/inverter"};
    case Stage::score:
      return {"score", "backends/semantic", "backends/style"};
    case Stage::detect:
      return {"detect", "backends/style"};
    case Stage::tokenpred:
      return {"tokenpred"};
    case Stage::report:
      return {};
  }
  return {};
}

void collect_sections(const RunConfig& c, Stage s, std::set<std::string>& out) {
  for (auto& k : own_sections(s)) out.insert(k);
  for (Stage u : upstream(c, s)) collect_sections(c, u, out);
}

// ---------------------------------------------------------------------------
// Small helpers

std::string fmt(double v, int decimals = 3) {
  if (std::isnan(v)) return "-";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

std::string pad(std::string s, std::size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

double mean(const std::vector<double>& v) {
  if (v.empty()) return std::nan("");
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

json number_or_null(double v) { return std::isnan(v) ? json(nullptr) : json(v); }

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  out << text;
}

constexpr scoring::Strategy kStrategies[] = {scoring::Strategy::single, scoring::Strategy::max,
                                              scoring::Strategy::expectation, scoring::Strategy::aggregate};

// ---------------------------------------------------------------------------
// Workspace: stamped artifacts inside out_dir

class Workspace {
 public:
  explicit Workspace(const RunConfig& config) : config_(config), root_(config.out_dir) {
    if (config.out_dir.empty()) throw ConfigError("out_dir is not set");
    fs::create_directories(root_);
  }

  const RunConfig& config() const { return config_; }
  fs::path file(const std::string& name) const { return root_ / name; }
  bool exists(const std::string& name) const { return fs::exists(file(name)); }

  json header(Stage producer, std::string_view kind) const {
    return {{"schema", "inverscribe." + std::string(kind)},
            {"version", kArtifactVersion},
            {"stage", to_string(producer)},
            {"config_hash", stage_hash(config_, producer)},
            {"seed", config_.seed},
            {"code_version", kCodeVersion}};
  }

  void save_corpus(Stage producer, const std::string& name, const Corpus& c) const {
    corpus::save_manifest(file(name), c, {stage_hash(config_, producer), config_.seed, kCodeVersion});
  }

  Corpus load_corpus(Stage producer, const std::string& name) const {
    require(producer, name);
    corpus::ManifestStamp stamp;
    Corpus c = corpus::load_manifest(file(name), &stamp);
    check(producer, name, stamp.config_hash);
    return c;
  }

  void save_json(Stage producer, const std::string& name, std::string_view kind, json payload) const {
    json doc = header(producer, kind);
    doc["payload"] = std::move(payload);
    write_text(file(name), doc.dump(1) + "\n");
  }

  json load_json(Stage producer, const std::string& name) const {
    require(producer, name);
    std::ifstream in(file(name));
    json doc;
    try {
      doc = json::parse(in);
    } catch (const json::exception& e) {
      throw DataError(name + " is not valid JSON: " + e.what());
    }
    check(producer, name, doc.value("config_hash", std::string()));
    return doc.at("payload");
  }

  void save_jsonl(Stage producer, const std::string& name, std::string_view kind,
                  const std::vector<json>& records) const {
    std::ofstream out(file(name), std::ios::binary);
    if (!out) throw DataError("cannot write " + file(name).string());
    out << header(producer, kind).dump() << '\n';
    for (const auto& r : records) out << r.dump() << '\n';
  }

  std::vector<json> load_jsonl(Stage producer, const std::string& name) const {
    require(producer, name);
    std::ifstream in(file(name));
    std::string line;
    std::vector<json> out;
    std::size_t n = 0;
    while (std::getline(in, line)) {
      ++n;
      if (line.empty()) continue;
      json j;
      try {
        j = json::parse(line);
      } catch (const json::exception& e) {
        throw DataError(name + " line " + std::to_string(n) + ": " + e.what());
      }
      if (n == 1) {
        check(producer, name, j.value("config_hash", std::string()));
        continue;
      }
      out.push_back(std::move(j));
    }
    if (n == 0) throw DataError(name + " is empty; rerun stage '" + std::string(to_string(producer)) + "'");
    return out;
  }

  void require(Stage producer, const std::string& name) const {
    if (!exists(name)) {
      throw DataError("missing " + file(name).string() + "; run stage '" + std::string(to_string(producer)) +
                      "' first");
    }
  }

 private:
  void check(Stage producer, const std::string& name, const std::string& found) const {
    const std::string expected = stage_hash(config_, producer);
    if (found != expected) {
      throw DataError(name + " was written under config hash " + (found.empty() ? "<none>" : found) +
                      " but the current configuration implies " + expected + "; rerun stage '" +
                      std::string(to_string(producer)) + "'");
    }
  }

  const RunConfig& config_;
  fs::path root_;
};

// ---------------------------------------------------------------------------
// Evaluation query plan shared by invert, detect and the sweep

struct AuthorPlan {
  std::vector<std::string> queries;       // paraphrase ids, draw order
  std::vector<std::string> profile_docs;  // original ids, corpus order
};

struct QueryPlan {
  std::map<std::string, AuthorPlan> authors;  // every evaluation author
  std::vector<std::string> warnings;

  json to_json() const {
    json a = json::object();
    for (const auto& [id, p] : authors) a[id] = {{"queries", p.queries}, {"profile_docs", p.profile_docs}};
    return {{"authors", a}, {"warnings", warnings}};
  }
  static QueryPlan from_json(const json& j) {
    QueryPlan p;
    for (const auto& [id, v] : j.at("authors").items()) {
      p.authors[id] = {v.at("queries").get<std::vector<std::string>>(),
                       v.at("profile_docs").get<std::vector<std::string>>()};
    }
    p.warnings = j.at("warnings").get<std::vector<std::string>>();
    return p;
  }
  std::vector<std::string> candidates() const {
    std::vector<std::string> out;
    for (const auto& [id, p] : authors) {
      if (!p.profile_docs.empty()) out.push_back(id);
    }
    return out;
  }
};

std::vector<std::string> evaluation_authors(const RunConfig& c, const styling::SplitManifest& split) {
  std::vector<std::string> out;
  if (c.split.eval_split == "all") {
    for (const auto& [author, cluster] : split.assignments) out.push_back(author);
  } else {
    out = split.authors_in(styling::Split::test);
  }
  std::sort(out.begin(), out.end());
  return out;
}

QueryPlan plan_queries(const RunConfig& c, const Corpus& paraphrased, const styling::SplitManifest& split) {
  const auto pairs = channel::paraphrase_pairs(paraphrased);
  std::map<std::string, std::vector<const channel::ParaphrasePair*>> by_author;
  for (const auto& p : pairs) by_author[p.original.author_id].push_back(&p);

  QueryPlan plan;
  for (const auto& author : evaluation_authors(c, split)) {
    AuthorPlan ap;
    auto it = by_author.find(author);
    if (it == by_author.end() || it->second.empty()) {
      plan.warnings.push_back("author '" + author + "' has no paraphrased documents");
      plan.authors[author] = ap;
      continue;
    }
    auto list = it->second;
    std::sort(list.begin(), list.end(), [](auto* a, auto* b) { return a->paraphrase.id < b->paraphrase.id; });
    const std::size_t q = std::min(c.invert.queries_per_author, list.size() - 1);
    Rng rng = Rng::derive(c.seed, {"query_sample", author});
    std::set<std::string> chosen_originals;
    for (auto idx : rng.sample_indices(list.size(), q)) {
      ap.queries.push_back(list[idx]->paraphrase.id);
      chosen_originals.insert(list[idx]->original.id);
    }
    for (const auto& d : paraphrased.documents) {
      if (d.author_id == author && d.source_kind == corpus::SourceKind::human && !chosen_originals.contains(d.id)) {
        ap.profile_docs.push_back(d.id);
      }
    }
    if (q == 0) plan.warnings.push_back("author '" + author + "' has one paraphrase; used as candidate only");
    plan.authors[author] = std::move(ap);
  }
  return plan;
}

// Lookup tables over a paraphrase corpus.
struct PairIndex {
  std::unordered_map<std::string, const Document*> by_id;
  std::unordered_map<std::string, std::string> paraphrase_of;  // original id -> paraphrase text

  explicit PairIndex(const Corpus& c) {
    for (const auto& d : c.documents) {
      by_id[d.id] = &d;
      if (d.source_kind == corpus::SourceKind::paraphrase && d.origin_id) paraphrase_of[*d.origin_id] = d.text;
    }
  }
  const Document& at(const std::string& id) const {
    auto it = by_id.find(id);
    if (it == by_id.end()) throw DataError("document '" + id + "' not found in the paraphrase corpus");
    return *it->second;
  }
  // Profile documents with their paraphrase attached for targeted prompts.
  std::vector<Document> context_docs(const AuthorPlan& plan) const {
    std::vector<Document> out;
    for (const auto& id : plan.profile_docs) {
      Document d = at(id);
      if (auto p = paraphrase_of.find(id); p != paraphrase_of.end()) d.meta["paraphrase"] = p->second;
      out.push_back(std::move(d));
    }
    return out;
  }
};

struct QueryRef {
  std::string author;
  std::string paraphrase_id;
};

std::vector<QueryRef> query_list(const QueryPlan& plan) {
  std::vector<QueryRef> out;
  for (const auto& [author, p] : plan.authors) {
    for (const auto& q : p.queries) out.push_back({author, q});
  }
  return out;
}

channel::SamplingParams sampling(const RunConfig& c, std::size_t n, double temperature) {
  channel::SamplingParams p;
  p.n = n;
  p.temperature = temperature;
  p.seed = c.seed;
  p.max_new_tokens = c.invert.max_new_tokens;
  return p;
}

bool has_mode(const RunConfig& c, std::string_view mode) {
  return std::find(c.invert.modes.begin(), c.invert.modes.end(), mode) != c.invert.modes.end();
}

// Inversion stage output, in memory.
struct InversionRecords {
  struct Entry {
    std::string arm;  // untargeted | targeted
    std::string query_author;
    channel::InversionSet set;
    std::optional<channel::ContextSample> context;
  };
  std::vector<Entry> entries;
};

json entry_record(const InversionRecords::Entry& e) {
  json r = {{"arm", e.arm}, {"query_author", e.query_author}, {"set", channel::inversion_set_record(e.set)}};
  if (e.context) {
    r["context"] = {{"author_id", e.context->author_id},
                    {"example_doc_ids", e.context->example_doc_ids},
                    {"z", e.context->z},
                    {"m", e.context->m}};
  }
  return r;
}

InversionRecords::Entry parse_entry(const json& r) {
  InversionRecords::Entry e;
  try {
    e.arm = r.at("arm").get<std::string>();
    e.query_author = r.at("query_author").get<std::string>();
    e.set = channel::parse_inversion_set(r.at("set"));
    if (r.contains("context")) {
      const auto& c = r.at("context");
      e.context = channel::ContextSample{c.at("author_id").get<std::string>(),
                                         c.at("example_doc_ids").get<std::vector<std::string>>(),
                                         c.at("z").get<double>(), c.at("m").get<std::size_t>()};
    }
  } catch (const json::exception& ex) {
    throw DataError(std::string("malformed inversion record: ") + ex.what());
  }
  return e;
}

// ---------------------------------------------------------------------------
// Stages

struct Context {
  const RunConfig& config;
  Backends& backends;
  Workspace ws;
  std::map<std::string, double> seconds;
};

void stage_ingest(Context& ctx) {
  const auto& c = ctx.config;
  if (c.input.empty()) throw ConfigError("input is not set");
  if (!fs::exists(c.input)) throw DataError("input file " + c.input + " does not exist");
  Corpus raw = corpus::ingest(c.input);
  Corpus filtered = corpus::filter_by_token_length(raw, c.corpus.min_tokens, c.corpus.max_tokens);
  Corpus capped = corpus::cap_per_author(filtered, c.corpus.min_docs, c.corpus.sample_to, c.seed);
  corpus::validate(capped);
  ctx.ws.save_corpus(Stage::ingest, "ingest.jsonl", capped);
}

void stage_machine_respond(Context& ctx) {
  const auto& c = ctx.config;
  if (ctx.backends.responders.empty()) throw ConfigError("machine_respond needs at least one backends.responders entry");
  Corpus comments = ctx.ws.load_corpus(Stage::ingest, "ingest.jsonl");
  std::vector<backends::GenerationBackend*> gens;
  for (auto& g : ctx.backends.responders) gens.push_back(g.get());
  channel::MachineResponseOptions opts;
  opts.temperature = c.machine.temperature;
  opts.max_new_tokens = c.machine.max_new_tokens;
  opts.seed = c.seed;
  opts.workers = c.workers;
  Corpus machine = channel::generate_machine_responses(comments, gens, opts);
  ctx.ws.save_corpus(Stage::machine_respond, "machine.jsonl", machine);
}

channel::ParaphraseOptions paraphrase_options(const RunConfig& c) {
  channel::ParaphraseOptions o;
  o.temperature = c.paraphrase.temperature;
  o.sim_threshold = c.paraphrase.threshold;
  o.max_retries = c.paraphrase.max_retries;
  o.max_new_tokens = c.paraphrase.max_new_tokens;
  o.seed = c.seed;
  o.workers = c.workers;
  return o;
}

void stage_paraphrase(Context& ctx) {
  const auto& c = ctx.config;
  Corpus human = ctx.ws.load_corpus(Stage::ingest, "ingest.jsonl");
  Corpus out = channel::paraphrase_corpus(human, *ctx.backends.paraphraser, *ctx.backends.semantic,
                                          paraphrase_options(c));
  ctx.ws.save_corpus(Stage::paraphrase, "paraphrase.jsonl", out);
  if (!c.backends.responders.empty()) {
    Corpus machine = ctx.ws.load_corpus(Stage::machine_respond, "machine.jsonl");
    Corpus mout = channel::paraphrase_corpus(machine, *ctx.backends.paraphraser, *ctx.backends.semantic,
                                             paraphrase_options(c));
    ctx.ws.save_corpus(Stage::paraphrase, "paraphrase_machine.jsonl", mout);
  }
}

void stage_split(Context& ctx) {
  const auto& c = ctx.config;
  Corpus human = ctx.ws.load_corpus(Stage::ingest, "ingest.jsonl");
  const auto profiles = styling::author_profiles(human, *ctx.backends.style);
  if (profiles.size() < c.split.k) {
    throw DataError("split needs at least k=" + std::to_string(c.split.k) + " authors, corpus has " +
                    std::to_string(profiles.size()));
  }
  std::vector<Vector> points;
  for (const auto& p : profiles) points.push_back(p.embedding);
  styling::KMeansOptions ko;
  ko.k = c.split.k;
  ko.seed = c.seed;
  ko.workers = c.workers;
  const auto km = styling::kmeans(points, ko);
  std::map<std::string, std::size_t> assignments;
  for (std::size_t i = 0; i < profiles.size(); ++i) assignments[profiles[i].author_id] = km.assignments[i];
  styling::SplitOptions so{c.split.train_frac, c.split.valid_frac, c.split.test_count, c.seed};
  const auto manifest = styling::stratified_split(assignments, c.split.k, so);
  const auto stats = corpus::corpus_stats(human, manifest);
  json per_split = json::object();
  for (const auto& [name, s] : stats.per_split) per_split[name] = {{"examples", s.n_examples}, {"authors", s.n_authors}};
  ctx.ws.save_json(Stage::split, "split.json", "split",
                   {{"manifest", manifest.to_json()},
                    {"kmeans",
                     {{"iterations", km.iterations},
                      {"converged", km.converged},
                      {"inertia_history", km.inertia_history}}},
                    {"stats", {{"examples", stats.n_examples}, {"authors", stats.n_authors}, {"per_split", per_split}}}});
}

void align_corpus(Context& ctx, const std::string& in, const std::string& out) {
  Corpus c = ctx.ws.load_corpus(Stage::paraphrase, in);
  const auto pairs = channel::paraphrase_pairs(c);
  std::vector<json> records(pairs.size());
  parallel_for(pairs.size(), ctx.config.workers, [&](std::size_t i) {
    const auto mask =
        alignment::align(alignment::tokenize(pairs[i].original.text), alignment::tokenize(pairs[i].paraphrase.text));
    records[i] = alignment::mask_record(pairs[i].paraphrase.id, mask);
  });
  ctx.ws.save_jsonl(Stage::align, out, "masks", records);
}

void stage_align(Context& ctx) {
  align_corpus(ctx, "paraphrase.jsonl", "masks.jsonl");
  if (!ctx.config.backends.responders.empty()) align_corpus(ctx, "paraphrase_machine.jsonl", "masks_machine.jsonl");
}

styling::SplitManifest load_split(const Workspace& ws) {
  return styling::SplitManifest::from_json(ws.load_json(Stage::split, "split.json").at("manifest"));
}

InversionRecords run_inversions(const RunConfig& c, backends::GenerationBackend& inverter, const Corpus& paraphrased,
                                const QueryPlan& plan, double temperature, bool targeted) {
  const PairIndex index(paraphrased);
  const auto queries = query_list(plan);
  InversionRecords out;

  std::vector<InversionRecords::Entry> untargeted(queries.size());
  parallel_for(queries.size(), c.workers, [&](std::size_t i) {
    const auto& q = queries[i];
    untargeted[i] = {"untargeted", q.author,
                     channel::invert(index.at(q.paraphrase_id), nullptr, inverter, sampling(c, c.invert.n, temperature)),
                     std::nullopt};
  });
  out.entries = std::move(untargeted);
  if (!targeted) return out;

  const auto candidates = plan.candidates();
  std::map<std::string, std::vector<Document>> context_docs;
  for (const auto& cand : candidates) context_docs[cand] = index.context_docs(plan.authors.at(cand));
  std::vector<InversionRecords::Entry> tgt(queries.size() * candidates.size());
  parallel_for(tgt.size(), c.workers, [&](std::size_t k) {
    const auto& q = queries[k / candidates.size()];
    const auto& cand = candidates[k % candidates.size()];
    const auto& docs = context_docs.at(cand);
    const auto sample = channel::sample_context(docs, c.seed, q.paraphrase_id + "@" + cand);
    const auto tc = channel::make_target_context(docs, sample);
    tgt[k] = {"targeted", q.author,
              channel::invert(index.at(q.paraphrase_id), &tc, inverter, sampling(c, c.invert.per_candidate, temperature)),
              sample};
  });
  for (auto& e : tgt) out.entries.push_back(std::move(e));
  return out;
}

void stage_invert(Context& ctx) {
  const auto& c = ctx.config;
  Corpus paraphrased = ctx.ws.load_corpus(Stage::paraphrase, "paraphrase.jsonl");
  const auto split = load_split(ctx.ws);
  const QueryPlan plan = plan_queries(c, paraphrased, split);
  if (query_list(plan).empty()) throw DataError("no evaluation queries: the evaluation split has no paraphrases");
  const auto records =
      run_inversions(c, *ctx.backends.inverter, paraphrased, plan, c.invert.temperature, has_mode(c, "targeted"));

  std::vector<json> lines;
  std::vector<double> zs, ms;
  std::size_t partial = 0, empty = 0, total = 0;
  for (const auto& e : records.entries) {
    lines.push_back(entry_record(e));
    if (!e.set.complete()) ++partial;
    for (const auto& inv : e.set.inversions) {
      ++total;
      if (inv.meta.contains("empty")) ++empty;
    }
    if (e.context) {
      zs.push_back(e.context->z);
      ms.push_back(static_cast<double>(e.context->m));
    }
  }
  ctx.ws.save_json(Stage::invert, "queries.json", "queries", plan.to_json());
  ctx.ws.save_jsonl(Stage::invert, "inversions.jsonl", "inversions", lines);
  ctx.ws.save_json(Stage::invert, "invert_summary.json", "invert_summary",
                   {{"queries", query_list(plan).size()},
                    {"sets", records.entries.size()},
                    {"inversions", total},
                    {"empty_inversions", empty},
                    {"partial_sets", partial},
                    {"context_mean_z", number_or_null(mean(zs))},
                    {"context_mean_m", number_or_null(mean(ms))}});
}

InversionRecords load_inversions(const Workspace& ws) {
  InversionRecords r;
  for (const auto& line : ws.load_jsonl(Stage::invert, "inversions.jsonl")) r.entries.push_back(parse_entry(line));
  return r;
}

// Scores of one arm: per measure, per strategy, one value per query.
using ArmScores = std::map<std::string, std::map<std::string, std::vector<double>>>;

struct ScoreTables {
  std::map<std::string, ArmScores> arms;           // paraphrase | untargeted | targeted
  std::map<std::string, double> bleu_min;          // min per-inversion BLEU, per arm
  std::map<std::string, std::vector<int>> style_wins;  // per inversion arm: expectation style > paraphrase style
  std::vector<json> records;
};

ScoreTables score_sets(const RunConfig& c, Backends& b, const Corpus& paraphrased, const InversionRecords& inv,
                       const std::vector<std::string>& measures_in) {
  const PairIndex index(paraphrased);
  std::vector<scoring::SimilarityMeasure> measures;
  for (const auto& m : measures_in) {
    switch (scoring::parse_measure(m)) {
      case scoring::MeasureKind::bleu:
        measures.push_back(scoring::SimilarityMeasure::bleu());
        break;
      case scoring::MeasureKind::semantic_cosine:
        measures.push_back(scoring::SimilarityMeasure::semantic(*b.semantic));
        break;
      case scoring::MeasureKind::stylistic_cosine:
        measures.push_back(scoring::SimilarityMeasure::stylistic(*b.style));
        break;
    }
  }
  // Scored sets: every untargeted set and the targeted set conditioned on the
  // query's own author.
  std::vector<const InversionRecords::Entry*> scored;
  for (const auto& e : inv.entries) {
    if (e.arm == "untargeted" || (e.set.target_author && *e.set.target_author == e.query_author)) scored.push_back(&e);
  }
  struct Result {
    std::vector<scoring::ScoreReport> reports;
    std::vector<scoring::ScoreReport> baseline;
  };
  std::vector<Result> results(scored.size());
  parallel_for(scored.size(), c.workers, [&](std::size_t i) {
    const auto& e = *scored[i];
    const Document& para = index.at(e.set.paraphrase_id);
    const Document& orig = index.at(*para.origin_id);
    for (const auto& m : measures) {
      const auto usable = [&] {
        channel::InversionSet s = e.set;
        std::erase_if(s.inversions, [](const Document& d) { return d.meta.contains("empty"); });
        return s;
      }();
      if (usable.inversions.empty()) throw DataError("inversion set " + e.set.paraphrase_id + " has no usable inversions");
      results[i].reports.push_back(scoring::combine(usable, orig, m));
      if (e.arm == "untargeted") results[i].baseline.push_back(scoring::score_single(para.id, para, orig, m));
    }
  });

  ScoreTables t;
  std::map<std::string, double> style_para;  // paraphrase id -> style single
  for (std::size_t i = 0; i < scored.size(); ++i) {
    const auto& e = *scored[i];
    for (std::size_t k = 0; k < measures.size(); ++k) {
      const auto& r = results[i].reports[k];
      const std::string mname = measures_in[k];
      for (auto s : kStrategies) {
        if (s == scoring::Strategy::aggregate && !r.combined.aggregate) continue;
        t.arms[e.arm][mname][std::string(scoring::to_string(s))].push_back(r.combined.get(s));
      }
      if (measures[k].kind() == scoring::MeasureKind::bleu) {
        double lo = *std::min_element(r.per_inversion.begin(), r.per_inversion.end());
        auto [it, fresh] = t.bleu_min.try_emplace(e.arm, lo);
        if (!fresh) it->second = std::min(it->second, lo);
      }
      t.records.push_back({{"arm", e.arm}, {"query_author", e.query_author}, {"report", r.to_json()}});
      if (e.arm == "untargeted") {
        const auto& base = results[i].baseline[k];
        t.arms["paraphrase"][mname]["single"].push_back(base.combined.single);
        if (measures[k].kind() == scoring::MeasureKind::bleu) {
          auto [it, fresh] = t.bleu_min.try_emplace("paraphrase", base.combined.single);
          if (!fresh) it->second = std::min(it->second, base.combined.single);
        }
        if (measures[k].kind() == scoring::MeasureKind::stylistic_cosine) style_para[e.set.paraphrase_id] = base.combined.single;
        t.records.push_back({{"arm", "paraphrase"}, {"query_author", e.query_author}, {"report", base.to_json()}});
      }
    }
  }
  for (std::size_t i = 0; i < scored.size(); ++i) {
    const auto& e = *scored[i];
    for (std::size_t k = 0; k < measures.size(); ++k) {
      if (measures[k].kind() != scoring::MeasureKind::stylistic_cosine) continue;
      auto it = style_para.find(e.set.paraphrase_id);
      if (it == style_para.end()) continue;
      t.style_wins[e.arm].push_back(results[i].reports[k].combined.expectation > it->second ? 1 : 0);
    }
  }
  return t;
}

json score_summary(const ScoreTables& t) {
  json table = json::object();
  for (const auto& [arm, measures] : t.arms) {
    for (const auto& [m, strategies] : measures) {
      for (const auto& [s, values] : strategies) table[arm][m][s] = number_or_null(mean(values));
    }
  }
  json wins = json::object();
  for (const auto& [arm, w] : t.style_wins) {
    wins[arm] = w.empty() ? 0.0 : static_cast<double>(std::accumulate(w.begin(), w.end(), 0)) / static_cast<double>(w.size());
  }
  std::size_t n = 0;
  if (auto it = t.arms.find("paraphrase"); it != t.arms.end() && !it->second.empty()) {
    n = it->second.begin()->second.at("single").size();
  }
  return {{"queries", n}, {"table", table}, {"bleu_min", t.bleu_min}, {"style_win_rate", wins}};
}

void stage_score(Context& ctx) {
  Corpus paraphrased = ctx.ws.load_corpus(Stage::paraphrase, "paraphrase.jsonl");
  const auto inv = load_inversions(ctx.ws);
  const auto tables = score_sets(ctx.config, ctx.backends, paraphrased, inv, ctx.config.score.measures);
  ctx.ws.save_jsonl(Stage::score, "scores.jsonl", "scores", tables.records);
  ctx.ws.save_json(Stage::score, "scores_summary.json", "score_summary", score_summary(tables));
}

void write_trials_csv(const fs::path& path, const detection::TrialSet& t) {
  std::ostringstream out;
  out << "query,candidate,score,genuine\n";
  char buf[64];
  for (const auto& tr : t.trials) {
    std::snprintf(buf, sizeof buf, "%.17g", tr.score);
    out << tr.query << ',' << tr.candidate << ',' << buf << ',' << (tr.genuine ? 1 : 0) << '\n';
  }
  write_text(path, out.str());
}

void stage_detect(Context& ctx) {
  const auto& c = ctx.config;
  Corpus paraphrased = ctx.ws.load_corpus(Stage::paraphrase, "paraphrase.jsonl");
  const QueryPlan plan = QueryPlan::from_json(ctx.ws.load_json(Stage::invert, "queries.json"));
  const auto inv = load_inversions(ctx.ws);
  const PairIndex index(paraphrased);
  auto& style = *ctx.backends.style;
  const fs::path dir = ctx.ws.file("detect");
  fs::create_directories(dir);

  // Arms: the paraphrase itself, untargeted inversions and (when present) the
  // targeted inversions.
  std::map<std::string, std::vector<channel::InversionSet>> plag_sets;  // arm -> sets
  std::map<std::string, std::map<std::string, std::vector<channel::InversionSet>>> by_author;  // arm -> author -> sets
  std::map<std::string, detection::TargetedQuery> targeted;
  for (const auto& e : inv.entries) {
    if (e.arm == "untargeted") {
      plag_sets["untargeted"].push_back(e.set);
      by_author["untargeted"][e.query_author].push_back(e.set);
      const auto single = detection::as_single_set(index.at(e.set.paraphrase_id));
      plag_sets["paraphrase"].push_back(single);
      by_author["paraphrase"][e.query_author].push_back(single);
    } else if (e.set.target_author) {
      if (*e.set.target_author == e.query_author) plag_sets["targeted"].push_back(e.set);
      auto& tq = targeted[e.query_author];
      tq.author_id = e.query_author;
      tq.per_candidate[*e.set.target_author].push_back(e.set);
    }
  }
  for (auto& [arm, sets] : plag_sets) {
    for (auto& s : sets) std::erase_if(s.inversions, [](const Document& d) { return d.meta.contains("empty"); });
  }

  json eer = json::object();
  json counts = json::object();
  json ranking = json::object();
  auto record_curve = [&](const std::string& protocol, const std::string& arm, const detection::TrialSet& t,
                          std::vector<std::pair<std::string, detection::DETCurve>>& curves) {
    const auto curve = detection::det_curve(t);
    detection::save_det_csv(dir / ("det_" + protocol + "_" + arm + ".csv"), curve);
    write_trials_csv(dir / ("trials_" + protocol + "_" + arm + ".csv"), t);
    counts[protocol][arm] = {{"genuine", t.genuine.size()}, {"impostor", t.impostor.size()}};
    curves.emplace_back(arm, curve);
  };
  auto wants = [&](std::string_view p) {
    return std::find(c.detect.protocols.begin(), c.detect.protocols.end(), p) != c.detect.protocols.end();
  };

  if (wants("plagiarism")) {
    std::vector<Document> sources, lineage;
    std::set<std::string> eval_authors;
    for (const auto& [a, p] : plan.authors) eval_authors.insert(a);
    for (const auto& d : paraphrased.documents) {
      if (!eval_authors.contains(d.author_id)) continue;
      (d.source_kind == corpus::SourceKind::paraphrase ? lineage : sources).push_back(d);
    }
    const auto chosen = scoring::parse_strategy(c.detect.plagiarism_strategy);
    std::vector<std::pair<std::string, detection::DETCurve>> curves;
    for (const auto& [arm, sets] : plag_sets) {
      for (auto s : kStrategies) {
        if (arm == "paraphrase" && s != scoring::Strategy::single) continue;
        const auto t = detection::plagiarism_trials(sets, sources, lineage, style, s);
        eer["plagiarism"][arm][std::string(scoring::to_string(s))] = detection::equal_error_rate(t.genuine, t.impostor);
        if (s == chosen || arm == "paraphrase") record_curve("plagiarism", arm, t, curves);
      }
    }
    write_text(dir / "det_plagiarism.svg",
               detection::render_det_svg(curves, "Plagiarism detection (" + c.detect.plagiarism_strategy + ")"));

    std::vector<json> farthest;
    for (const auto& e : inv.entries) {
      if (e.arm != "untargeted") continue;
      channel::InversionSet s = e.set;
      std::erase_if(s.inversions, [](const Document& d) { return d.meta.contains("empty"); });
      if (s.inversions.empty()) continue;
      const auto doc = detection::farthest_inversion(s, index.at(e.set.paraphrase_id), style);
      farthest.push_back(corpus::document_record(doc));
    }
    std::ostringstream fj;
    for (const auto& f : farthest) fj << f.dump() << '\n';
    write_text(dir / "farthest.jsonl", fj.str());
  }

  if (wants("authorship")) {
    std::vector<styling::AuthorProfile> profiles;
    for (const auto& cand : plan.candidates()) {
      std::vector<Document> docs;
      for (const auto& id : plan.authors.at(cand).profile_docs) docs.push_back(index.at(id));
      profiles.push_back(styling::author_embedding(docs, style));
    }
    const auto chosen = scoring::parse_strategy(c.detect.authorship_strategy);
    std::vector<std::pair<std::string, detection::DETCurve>> curves;
    auto rank_summary = [](const detection::AuthorshipResult& r) {
      std::vector<double> ranks;
      std::size_t top1 = 0;
      for (const auto& q : r.rankings) {
        ranks.push_back(static_cast<double>(q.true_rank));
        if (q.true_rank == 1) ++top1;
      }
      return json{{"mean_rank", number_or_null(mean(ranks))},
                  {"top1", r.rankings.empty() ? 0.0 : static_cast<double>(top1) / static_cast<double>(r.rankings.size())}};
    };
    for (const auto& [arm, authors] : by_author) {
      std::vector<detection::QueryAuthor> queries;
      for (const auto& [a, sets] : authors) queries.push_back({a, sets});
      for (auto& q : queries) {
        for (auto& s : q.sets) std::erase_if(s.inversions, [](const Document& d) { return d.meta.contains("empty"); });
      }
      for (auto s : kStrategies) {
        if (arm == "paraphrase" && s != scoring::Strategy::aggregate && s != scoring::Strategy::single) continue;
        const auto r = detection::authorship_trials(queries, profiles, style, s);
        eer["authorship"][arm][std::string(scoring::to_string(s))] =
            detection::equal_error_rate(r.trials.genuine, r.trials.impostor);
        if (s == chosen) {
          record_curve("authorship", arm, r.trials, curves);
          ranking[arm] = rank_summary(r);
        }
      }
    }
    if (!targeted.empty()) {
      std::vector<detection::TargetedQuery> queries;
      for (auto& [a, q] : targeted) queries.push_back(q);
      for (auto s : kStrategies) {
        const auto r = detection::authorship_trials_targeted(queries, profiles, style, s);
        eer["authorship"]["targeted"][std::string(scoring::to_string(s))] =
            detection::equal_error_rate(r.trials.genuine, r.trials.impostor);
        if (s == chosen) {
          record_curve("authorship", "targeted", r.trials, curves);
          ranking["targeted"] = rank_summary(r);
        }
      }
    }
    write_text(dir / "det_authorship.svg",
               detection::render_det_svg(curves, "Authorship identification (" + c.detect.authorship_strategy + ")"));
  }
  ctx.ws.save_json(Stage::detect, "detect/eer.json", "detection",
                   {{"eer", eer},
                    {"counts", counts},
                    {"ranking", ranking},
                    {"plagiarism_strategy", c.detect.plagiarism_strategy},
                    {"authorship_strategy", c.detect.authorship_strategy}});
}

json tokenpred_dataset(Context& ctx, const std::string& para_file, const std::string& mask_file,
                       const Corpus& human_docs, const std::string& tag) {
  const auto& c = ctx.config;
  Corpus paraphrased = ctx.ws.load_corpus(Stage::paraphrase, para_file);
  const auto pairs = channel::paraphrase_pairs(paraphrased);
  std::unordered_map<std::string, alignment::MaskRecord> masks;
  for (const auto& r : ctx.ws.load_jsonl(Stage::align, mask_file)) {
    auto m = alignment::parse_mask_record(r);
    masks[m.paraphrase_id] = std::move(m);
  }
  std::vector<tokenpred::MaskedPair> masked;
  for (const auto& p : pairs) {
    auto it = masks.find(p.paraphrase.id);
    if (it == masks.end()) throw DataError("no mask for " + p.paraphrase.id + "; rerun stage 'align'");
    alignment::AlignmentMask m;
    m.labels = it->second.labels;
    m.distance = it->second.distance;
    masked.push_back({p, std::move(m)});
  }
  const auto examples = tokenpred::build_label_corpus(masked, human_docs, c.tokenpred.fraction, c.seed);
  const fs::path dir = ctx.ws.file("tokenpred");
  fs::create_directories(dir);
  {
    std::ofstream out(dir / ("label_corpus_" + tag + ".jsonl"), std::ios::binary);
    tokenpred::write_label_corpus(out, examples);
  }
  std::size_t machine_tokens = 0, tokens = 0;
  for (const auto& ex : examples) {
    tokens += ex.labels.size();
    machine_tokens += std::count(ex.labels.begin(), ex.labels.end(), tokenpred::TokenLabel::machine);
  }
  json result = {{"examples", examples.size()}, {"tokens", tokens}, {"machine_tokens", machine_tokens}};
  if (machine_tokens == 0 || machine_tokens == tokens) {
    result["status"] = "skipped";
    result["reason"] = "single-class label corpus (every token has the same label)";
    return result;
  }
  auto [train, eval] = tokenpred::train_eval_split(examples, c.tokenpred.train_frac, c.seed);
  tokenpred::TrainOptions opts{c.tokenpred.epochs, c.tokenpred.learning_rate, c.tokenpred.l2, c.seed};
  tokenpred::FeatureConfig fc;
  fc.hash_bits = c.tokenpred.hash_bits;
  const auto model = tokenpred::train_baseline(train, opts, fc);
  write_text(dir / ("checkpoint_" + tag + ".json"), model.checkpoint().dump() + "\n");
  result["status"] = "ok";
  result["train_examples"] = train.size();
  result["eval_examples"] = eval.size();
  result["loss_history"] = model.loss_history;
  result["train_metrics"] = tokenpred::evaluate(model, train).to_json();
  result["eval_metrics"] = tokenpred::evaluate(model, eval).to_json();
  return result;
}

void stage_tokenpred(Context& ctx) {
  Corpus human = ctx.ws.load_corpus(Stage::ingest, "ingest.jsonl");
  json datasets = json::object();
  datasets["human"] = tokenpred_dataset(ctx, "paraphrase.jsonl", "masks.jsonl", human, "human");
  if (!ctx.config.backends.responders.empty()) {
    datasets["machine"] = tokenpred_dataset(ctx, "paraphrase_machine.jsonl", "masks_machine.jsonl", human, "machine");
  }
  ctx.ws.save_json(Stage::tokenpred, "tokenpred/metrics.json", "tokenpred", {{"datasets", datasets}});
}

// ---------------------------------------------------------------------------
// Report

json corpus_summary(const Corpus& c) {
  std::set<std::string> authors;
  std::map<std::string, std::size_t> kinds;
  for (const auto& d : c.documents) {
    authors.insert(d.author_id);
    ++kinds[std::string(corpus::to_string(d.source_kind))];
  }
  json warnings = json::array();
  for (const auto& p : c.provenance) {
    if (p.step == "warning") warnings.push_back(p.detail);
  }
  return {{"documents", c.size()}, {"authors", authors.size()}, {"by_kind", kinds}, {"warnings", warnings}};
}

double mask_copied(const std::vector<json>& masks) {
  std::size_t copied = 0, total = 0;
  for (const auto& r : masks) {
    const auto m = alignment::parse_mask_record(r);
    total += m.labels.size();
    copied += std::count(m.labels.begin(), m.labels.end(), alignment::Label::copied);
  }
  return total ? static_cast<double>(copied) / static_cast<double>(total) : 0.0;
}

std::string render_text(const json& r) {
  std::ostringstream out;
  out << "inverscribe report\n";
  out << "config " << r.at("config_hash").get<std::string>() << "  seed " << r.at("seed").get<std::uint64_t>()
      << "  version " << r.at("code_version").get<std::string>() << "\n\n";
  if (r.contains("corpus")) {
    out << "Corpora\n";
    for (const auto& [name, s] : r.at("corpus").items()) {
      out << "  " << pad(name, 20) << s.at("documents").get<std::size_t>() << " documents, "
          << s.at("authors").get<std::size_t>() << " authors\n";
      for (const auto& w : s.at("warnings")) out << "    warning: " << w.get<std::string>() << "\n";
    }
    out << "\n";
  }
  if (r.contains("split")) {
    out << "Split (k=" << r["split"]["k"].get<std::size_t>() << ")\n";
    for (const auto& [name, s] : r["split"]["per_split"].items()) {
      out << "  " << pad(name, 8) << s.at("examples").get<std::size_t>() << " examples, "
          << s.at("authors").get<std::size_t>() << " authors\n";
    }
    out << "\n";
  }
  if (r.contains("scores")) {
    const auto& t = r["scores"]["table"];
    out << "Inversion quality (mean over " << r["scores"]["queries"].get<std::size_t>() << " queries)\n";
    out << "  " << pad("arm", 12) << pad("strategy", 13) << pad("style", 9) << pad("semantic", 10) << "bleu\n";
    for (const std::string arm : {"paraphrase", "untargeted", "targeted"}) {
      if (!t.contains(arm)) continue;
      for (const std::string s : {"single", "max", "expectation", "aggregate"}) {
        bool any = false;
        std::string row = "  " + pad(arm, 12) + pad(arm == "paraphrase" ? "-" : s, 13);
        for (const std::string m : {"style", "semantic", "bleu"}) {
          const json* v = nullptr;
          if (t[arm].contains(m) && t[arm][m].contains(s)) v = &t[arm][m][s];
          if (v && !v->is_null()) any = true;
          row += pad(v && !v->is_null() ? fmt(v->get<double>()) : "-", m == "bleu" ? 0 : (m == "style" ? 9 : 10));
        }
        if (any) out << row << "\n";
      }
    }
    out << "\n";
  }
  if (r.contains("detection")) {
    const auto& e = r["detection"]["eer"];
    for (const std::string protocol : {"plagiarism", "authorship"}) {
      if (!e.contains(protocol)) continue;
      out << "EER: " << protocol << "\n";
      out << "  " << pad("arm", 12) << pad("single", 9) << pad("max", 9) << pad("expect.", 9) << "aggregate\n";
      for (const std::string arm : {"paraphrase", "untargeted", "targeted"}) {
        if (!e[protocol].contains(arm)) continue;
        std::string row = "  " + pad(arm, 12);
        for (const std::string s : {"single", "max", "expectation", "aggregate"}) {
          const auto& a = e[protocol][arm];
          row += pad(a.contains(s) ? fmt(a[s].get<double>()) : "-", s == "aggregate" ? 0 : 9);
        }
        out << row << "\n";
      }
      out << "\n";
    }
  }
  if (r.contains("tokenpred")) {
    out << "Paraphrased-token prediction (machine class, held-out)\n";
    for (const auto& [name, d] : r["tokenpred"]["datasets"].items()) {
      if (d.at("status") != "ok") {
        out << "  " << pad(name, 10) << "skipped: " << d.at("reason").get<std::string>() << "\n";
        continue;
      }
      const auto& m = d.at("eval_metrics");
      out << "  " << pad(name, 10) << "P " << fmt(m.at("precision").get<double>()) << "  R "
          << fmt(m.at("recall").get<double>()) << "  F1 " << fmt(m.at("f1").get<double>()) << "\n";
    }
    out << "\n";
  }
  return out.str();
}

RunReport stage_report(Context& ctx) {
  const auto& c = ctx.config;
  const auto& ws = ctx.ws;
  json r = {{"config_hash", c.hash()}, {"seed", c.seed}, {"code_version", kCodeVersion}};
  r["corpus"]["ingest"] = corpus_summary(ws.load_corpus(Stage::ingest, "ingest.jsonl"));
  if (ws.exists("machine.jsonl")) r["corpus"]["machine"] = corpus_summary(ws.load_corpus(Stage::machine_respond, "machine.jsonl"));
  if (ws.exists("paraphrase.jsonl")) {
    r["corpus"]["paraphrase"] = corpus_summary(ws.load_corpus(Stage::paraphrase, "paraphrase.jsonl"));
  }
  if (ws.exists("paraphrase_machine.jsonl")) {
    r["corpus"]["paraphrase_machine"] = corpus_summary(ws.load_corpus(Stage::paraphrase, "paraphrase_machine.jsonl"));
  }
  if (ws.exists("split.json")) {
    const auto s = ws.load_json(Stage::split, "split.json");
    r["split"] = {{"k", s.at("manifest").at("k")},
                  {"per_split", s.at("stats").at("per_split")},
                  {"unassigned", s.at("manifest").at("unassigned").size()},
                  {"warnings", s.at("manifest").at("warnings")},
                  {"kmeans_iterations", s.at("kmeans").at("iterations")}};
  }
  if (ws.exists("masks.jsonl")) r["alignment"]["copied_fraction"] = mask_copied(ws.load_jsonl(Stage::align, "masks.jsonl"));
  if (ws.exists("invert_summary.json")) {
    r["invert"] = ws.load_json(Stage::invert, "invert_summary.json");
    r["invert"]["warnings"] = ws.load_json(Stage::invert, "queries.json").at("warnings");
  }
  if (ws.exists("scores_summary.json")) r["scores"] = ws.load_json(Stage::score, "scores_summary.json");
  if (ws.exists("detect/eer.json")) r["detection"] = ws.load_json(Stage::detect, "detect/eer.json");
  if (ws.exists("tokenpred/metrics.json")) r["tokenpred"] = ws.load_json(Stage::tokenpred, "tokenpred/metrics.json");

  RunReport report;
  report.data = r;
  report.text = render_text(r);
  report.hash = hex64(stable_hash(r.dump()));
  write_text(ws.file("report.json"), r.dump(1) + "\n");
  write_text(ws.file("report.txt"), report.text);
  return report;
}

json request_accounting(const backends::RequestLog& log) {
  std::size_t ok = 0, failed = 0, in = 0, out = 0;
  double latency = 0.0;
  for (const auto& e : log.entries()) {
    (e.ok ? ok : failed)++;
    in += e.input_tokens;
    out += e.output_tokens;
    latency += e.latency_ms;
  }
  return {{"requests", ok + failed}, {"failed", failed}, {"input_tokens", in}, {"output_tokens", out},
          {"latency_ms", latency}};
}

}  // namespace

std::string_view to_string(Stage stage) noexcept {
  for (const auto& s : kStages) {
    if (s.stage == stage) return s.name;
  }
  return "?";
}

Stage parse_stage(std::string_view name) {
  for (const auto& s : kStages) {
    if (s.name == name) return s.stage;
  }
  throw ConfigError("unknown stage '" + std::string(name) + "'");
}

const std::vector<Stage>& all_stages() {
  static const std::vector<Stage> stages = [] {
    std::vector<Stage> v;
    for (const auto& s : kStages) v.push_back(s.stage);
    return v;
  }();
  return stages;
}

std::vector<Stage> parse_stages(std::string_view list) {
  if (list == "all") return all_stages();
  std::set<Stage> chosen;
  std::size_t start = 0;
  while (start <= list.size()) {
    std::size_t end = list.find(',', start);
    if (end == std::string_view::npos) end = list.size();
    auto name = list.substr(start, end - start);
    if (!name.empty()) chosen.insert(parse_stage(name));
    start = end + 1;
  }
  if (chosen.empty()) throw ConfigError("no stages given");
  return {chosen.begin(), chosen.end()};
}

std::string stage_hash(const RunConfig& config, Stage stage) {
  if (stage == Stage::report) return config.hash();
  std::set<std::string> keys;
  collect_sections(config, stage, keys);
  const json full = config.to_json();
  json picked = json::object();
  for (const auto& k : keys) {
    if (auto slash = k.find('/'); slash != std::string::npos) {
      const auto outer = k.substr(0, slash), inner = k.substr(slash + 1);
      picked[outer][inner] = full.at(outer).at(inner);
    } else {
      picked[k] = full.at(k);
    }
  }
  return hex64(stable_hash(picked.dump()));
}

RunReport run_pipeline(const RunConfig& config, std::span<const Stage> stages, Backends* backends) {
  config.validate();
  std::optional<Backends> owned;
  if (!backends) {
    owned.emplace(make_backends(config));
    backends = &*owned;
  }
  Context ctx{config, *backends, Workspace(config), {}};
  std::vector<Stage> order(stages.begin(), stages.end());
  std::sort(order.begin(), order.end());
  order.erase(std::unique(order.begin(), order.end()), order.end());

  RunReport report;
  for (Stage s : order) {
    if (s == Stage::machine_respond && backends->responders.empty()) {
      report.stages_run.emplace_back("machine_respond (skipped: no responders configured)");
      continue;
    }
    const auto t0 = std::chrono::steady_clock::now();
    switch (s) {
      case Stage::ingest: stage_ingest(ctx); break;
      case Stage::machine_respond: stage_machine_respond(ctx); break;
      case Stage::paraphrase: stage_paraphrase(ctx); break;
      case Stage::split: stage_split(ctx); break;
      case Stage::align: stage_align(ctx); break;
      case Stage::invert: stage_invert(ctx); break;
      case Stage::score: stage_score(ctx); break;
      case Stage::detect: stage_detect(ctx); break;
      case Stage::tokenpred: stage_tokenpred(ctx); break;
      case Stage::report: {
        auto done = std::move(report.stages_run);
        report = stage_report(ctx);
        report.stages_run = std::move(done);
        break;
      }
    }
    ctx.seconds[std::string(to_string(s))] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    report.stages_run.emplace_back(to_string(s));
  }
  report.runtime = {{"stage_seconds", ctx.seconds}, {"backend", request_accounting(*backends->log)}};
  write_text(ctx.ws.file("runtime.json"), report.runtime.dump(1) + "\n");
  return report;
}

std::vector<SweepRow> temperature_sweep(const RunConfig& config, std::span<const double> temperatures,
                                        Backends* backends) {
  if (temperatures.empty()) throw ConfigError("temperature sweep needs at least one temperature");
  config.validate();
  std::optional<Backends> owned;
  if (!backends) {
    owned.emplace(make_backends(config));
    backends = &*owned;
  }
  Workspace ws(config);
  Corpus paraphrased = ws.load_corpus(Stage::paraphrase, "paraphrase.jsonl");
  const auto split = styling::SplitManifest::from_json(ws.load_json(Stage::split, "split.json").at("manifest"));
  const QueryPlan plan = plan_queries(config, paraphrased, split);
  if (query_list(plan).empty()) throw DataError("no evaluation queries for the temperature sweep");

  std::vector<SweepRow> rows;
  for (double t : temperatures) {
    if (t < 0) throw ConfigError("sweep temperatures must be non-negative");
    const auto inv = run_inversions(config, *backends->inverter, paraphrased, plan, t, false);
    const auto tables = score_sets(config, *backends, paraphrased, inv, {"style", "semantic", "bleu"});
    const auto& u = tables.arms.at("untargeted");
    rows.push_back({t, mean(u.at("style").at("max")), mean(u.at("semantic").at("max")), mean(u.at("bleu").at("max"))});
  }

  const fs::path dir = ws.file("sweep");
  fs::create_directories(dir);
  std::ostringstream csv;
  csv << "temperature,style_max,semantic_max,bleu_max\n";
  json j = json::array();
  detection::Series style{"style sim. (max)", {}, {}}, bleu{"BLEU (max)", {}, {}};
  char buf[128];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n", r.temperature, r.style_max, r.semantic_max, r.bleu_max);
    csv << buf;
    j.push_back({{"temperature", r.temperature}, {"style_max", r.style_max}, {"semantic_max", r.semantic_max},
                 {"bleu_max", r.bleu_max}});
    style.xs.push_back(r.temperature);
    style.ys.push_back(r.style_max);
    bleu.xs.push_back(r.temperature);
    bleu.ys.push_back(r.bleu_max);
  }
  write_text(dir / "sweep.csv", csv.str());
  ws.save_json(Stage::invert, "sweep/sweep.json", "sweep", j);
  write_text(dir / "sweep.txt", format_sweep_table(rows));
  detection::ChartOptions opts;
  opts.title = "Untargeted inversion quality vs temperature";
  opts.x_label = "temperature";
  opts.y_label = "similarity (max strategy)";
  opts.auto_range = true;
  write_text(dir / "sweep.svg", detection::render_line_chart({style, bleu}, opts));
  return rows;
}

std::string format_sweep_table(std::span<const SweepRow> rows) {
  std::ostringstream out;
  out << pad("temperature", 14) << pad("style sim.", 12) << pad("semantic", 10) << "BLEU\n";
  for (const auto& r : rows) {
    out << pad(fmt(r.temperature, 2), 14) << pad(fmt(r.style_max), 12) << pad(fmt(r.semantic_max), 10)
        << fmt(r.bleu_max) << "\n";
  }
  return out.str();
}

}  // namespace inverscribe::pipeline
