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

#include "inverscribe/pipeline/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include "inverscribe/backends/http.hpp"
#include "inverscribe/backends/mock.hpp"
#include "inverscribe/backends/synonyms.hpp"
#include "inverscribe/common/error.hpp"
#include "inverscribe/common/rng.hpp"
#include "inverscribe/scoring/scoring.hpp"

namespace inverscribe::pipeline {

using nlohmann::json;

namespace {

// Reads the keys of one JSON object into fields, rejecting unknown keys.
class ObjectReader {
 public:
  ObjectReader(const json& j, std::string where) : j_(j), where_(std::move(where)) {
    if (!j_.is_object()) throw ConfigError(where_ + " must be an object");
  }

  template <class T>
  void get(const char* key, T& out) {
    seen_.insert(key);
    if (!j_.contains(key)) return;
    try {
      out = j_.at(key).get<T>();
    } catch (const json::exception&) {
      throw ConfigError(where_ + "." + key + " has the wrong type");
    }
  }

  template <class Fn>
  void object(const char* key, Fn&& fn) {
    seen_.insert(key);
    if (!j_.contains(key)) return;
    ObjectReader child(j_.at(key), where_ + "." + key);
    fn(child);
    child.finish();
  }

  const json* raw(const char* key) {
    seen_.insert(key);
    return j_.contains(key) ? &j_.at(key) : nullptr;
  }

  const std::string& where() const { return where_; }

  void finish() const {
    for (const auto& [key, value] : j_.items()) {
      if (!seen_.contains(key)) throw ConfigError("unknown config key " + where_ + "." + key);
    }
  }

 private:
  const json& j_;
  std::string where_;
  std::set<std::string> seen_;
};

json generator_json(const GeneratorConfig& g) {
  return {{"type", g.type},         {"name", g.name},   {"style", g.style},
          {"behavior", g.behavior}, {"rate", g.rate},   {"rate_per_temperature", g.rate_per_temperature},
          {"table", g.table},       {"script", g.script}, {"url", g.url},
          {"model", g.model},       {"max_in_flight", g.max_in_flight}};
}

GeneratorConfig read_generator(ObjectReader& r) {
  GeneratorConfig g;
  r.get("type", g.type);
  r.get("name", g.name);
  r.get("style", g.style);
  r.get("behavior", g.behavior);
  r.get("rate", g.rate);
  r.get("rate_per_temperature", g.rate_per_temperature);
  r.get("table", g.table);
  r.get("script", g.script);
  r.get("url", g.url);
  r.get("model", g.model);
  r.get("max_in_flight", g.max_in_flight);
  return g;
}

json embedder_json(const EmbedderConfig& e) {
  return {{"type", e.type},           {"name", e.name}, {"dimension", e.dimension},
          {"lowercase", e.lowercase}, {"batch_limit", e.batch_limit},
          {"url", e.url},             {"model", e.model}, {"max_in_flight", e.max_in_flight}};
}

EmbedderConfig read_embedder(ObjectReader& r, EmbedderConfig e) {
  r.get("type", e.type);
  r.get("name", e.name);
  r.get("dimension", e.dimension);
  r.get("lowercase", e.lowercase);
  r.get("batch_limit", e.batch_limit);
  r.get("url", e.url);
  r.get("model", e.model);
  r.get("max_in_flight", e.max_in_flight);
  return e;
}

void check_generator(const GeneratorConfig& g, const std::string& where) {
  if (g.type != "mock" && g.type != "http") throw ConfigError(where + ".type must be mock or http");
  if (g.style != "plain" && g.style != "instruct") throw ConfigError(where + ".style must be plain or instruct");
  if (g.type == "mock") {
    if (g.behavior != "echo" && g.behavior != "synonym_noise" && g.behavior != "scripted") {
      throw ConfigError(where + ".behavior must be echo, synonym_noise or scripted");
    }
    if (g.table != "forward" && g.table != "inverse") throw ConfigError(where + ".table must be forward or inverse");
    if (g.rate < 0.0 || g.rate > 1.0) throw ConfigError(where + ".rate must be in [0, 1]");
  }
  if (g.max_in_flight < 1) throw ConfigError(where + ".max_in_flight must be at least 1");
}

void check_embedder(const EmbedderConfig& e, const std::string& where) {
  if (e.type != "mock" && e.type != "http") throw ConfigError(where + ".type must be mock or http");
  if (e.dimension < 2) throw ConfigError(where + ".dimension must be at least 2");
  if (e.batch_limit < 1) throw ConfigError(where + ".batch_limit must be at least 1");
  if (e.max_in_flight < 1) throw ConfigError(where + ".max_in_flight must be at least 1");
}

backends::PromptStyle parse_style(const std::string& s) {
  return s == "instruct" ? backends::PromptStyle::instruct : backends::PromptStyle::plain;
}

backends::HttpOptions http_options(const std::string& url, const std::string& model, std::size_t max_in_flight) {
  auto opts = backends::HttpOptions::from_env(model);
  if (!url.empty()) opts.base_url = url;
  if (opts.base_url.empty()) throw ConfigError("http backend '" + model + "' needs a url or INVERSCRIBE_BACKEND_URL");
  opts.max_in_flight = max_in_flight;
  return opts;
}

}  // namespace

json RunConfig::to_json() const {
  json responders = json::array();
  for (const auto& g : backends.responders) responders.push_back(generator_json(g));
  return {
      {"input", input},
      {"out_dir", out_dir},
      {"seed", seed},
      {"workers", workers},
      {"corpus",
       {{"min_tokens", corpus.min_tokens},
        {"max_tokens", corpus.max_tokens},
        {"min_docs", corpus.min_docs},
        {"sample_to", corpus.sample_to}}},
      {"paraphrase",
       {{"temperature", paraphrase.temperature},
        {"threshold", paraphrase.threshold},
        {"max_retries", paraphrase.max_retries},
        {"max_new_tokens", paraphrase.max_new_tokens}}},
      {"machine", {{"temperature", machine.temperature}, {"max_new_tokens", machine.max_new_tokens}}},
      {"split",
       {{"k", split.k},
        {"train_frac", split.train_frac},
        {"valid_frac", split.valid_frac},
        {"test_count", split.test_count},
        {"eval_split", split.eval_split}}},
      {"invert",
       {{"modes", invert.modes},
        {"n", invert.n},
        {"temperature", invert.temperature},
        {"per_candidate", invert.per_candidate},
        {"queries_per_author", invert.queries_per_author},
        {"max_new_tokens", invert.max_new_tokens}}},
      {"score", {{"measures", score.measures}}},
      {"detect",
       {{"protocols", detect.protocols},
        {"plagiarism_strategy", detect.plagiarism_strategy}, {"authorship_strategy", detect.authorship_strategy}}},
      {"tokenpred",
       {{"fraction", tokenpred.fraction},
        {"train_frac", tokenpred.train_frac},
        {"epochs", tokenpred.epochs},
        {"learning_rate", tokenpred.learning_rate},
        {"l2", tokenpred.l2},
        {"hash_bits", tokenpred.hash_bits}}},
      {"backends",
       {{"paraphraser", generator_json(backends.paraphraser)},
        {"inverter", generator_json(backends.inverter)},
        {"responders", responders},
        {"style", embedder_json(backends.style)},
        {"semantic", embedder_json(backends.semantic)}}},
      {"sweep", {{"temperatures", sweep_temperatures}}},
  };
}

RunConfig RunConfig::from_json(const json& j) {
  RunConfig c;
  ObjectReader r(j, "config");
  r.get("input", c.input);
  r.get("out_dir", c.out_dir);
  r.get("seed", c.seed);
  r.get("workers", c.workers);
  r.object("corpus", [&](ObjectReader& o) {
    o.get("min_tokens", c.corpus.min_tokens);
    o.get("max_tokens", c.corpus.max_tokens);
    o.get("min_docs", c.corpus.min_docs);
    o.get("sample_to", c.corpus.sample_to);
  });
  r.object("paraphrase", [&](ObjectReader& o) {
    o.get("temperature", c.paraphrase.temperature);
    o.get("threshold", c.paraphrase.threshold);
    o.get("max_retries", c.paraphrase.max_retries);
    o.get("max_new_tokens", c.paraphrase.max_new_tokens);
  });
  r.object("machine", [&](ObjectReader& o) {
    o.get("temperature", c.machine.temperature);
    o.get("max_new_tokens", c.machine.max_new_tokens);
  });
  r.object("split", [&](ObjectReader& o) {
    o.get("k", c.split.k);
    o.get("train_frac", c.split.train_frac);
    o.get("valid_frac", c.split.valid_frac);
    o.get("test_count", c.split.test_count);
    o.get("eval_split", c.split.eval_split);
  });
  r.object("invert", [&](ObjectReader& o) {
    o.get("modes", c.invert.modes);
    o.get("n", c.invert.n);
    o.get("temperature", c.invert.temperature);
    o.get("per_candidate", c.invert.per_candidate);
    o.get("queries_per_author", c.invert.queries_per_author);
    o.get("max_new_tokens", c.invert.max_new_tokens);
  });
  r.object("score", [&](ObjectReader& o) { o.get("measures", c.score.measures); });
  r.object("detect", [&](ObjectReader& o) {
    o.get("protocols", c.detect.protocols);
    o.get("plagiarism_strategy", c.detect.plagiarism_strategy);
    o.get("authorship_strategy", c.detect.authorship_strategy);
  });
  r.object("tokenpred", [&](ObjectReader& o) {
    o.get("fraction", c.tokenpred.fraction);
    o.get("train_frac", c.tokenpred.train_frac);
    o.get("epochs", c.tokenpred.epochs);
    o.get("learning_rate", c.tokenpred.learning_rate);
    o.get("l2", c.tokenpred.l2);
    o.get("hash_bits", c.tokenpred.hash_bits);
  });
  r.object("backends", [&](ObjectReader& o) {
    o.object("paraphraser", [&](ObjectReader& g) { c.backends.paraphraser = read_generator(g); });
    o.object("inverter", [&](ObjectReader& g) { c.backends.inverter = read_generator(g); });
    if (const json* list = o.raw("responders")) {
      if (!list->is_array()) throw ConfigError("config.backends.responders must be an array");
      for (std::size_t i = 0; i < list->size(); ++i) {
        ObjectReader g((*list)[i], "config.backends.responders[" + std::to_string(i) + "]");
        c.backends.responders.push_back(read_generator(g));
        g.finish();
      }
    }
    o.object("style", [&](ObjectReader& e) { c.backends.style = read_embedder(e, c.backends.style); });
    o.object("semantic", [&](ObjectReader& e) { c.backends.semantic = read_embedder(e, c.backends.semantic); });
  });
  r.object("sweep", [&](ObjectReader& o) { o.get("temperatures", c.sweep_temperatures); });
  r.finish();
  c.validate();
  return c;
}

RunConfig RunConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("config " + path.string() + " is not valid JSON: " + e.what());
  }
  RunConfig c = from_json(j);
  // A relative input path is read relative to the config file.
  if (!c.input.empty() && std::filesystem::path(c.input).is_relative()) {
    c.input = (std::filesystem::absolute(path).parent_path() / c.input).lexically_normal().string();
  }
  return c;
}

std::string RunConfig::hash() const {
  json j = to_json();
  j.erase("out_dir");
  j.erase("workers");
  return hex64(stable_hash(j.dump()));
}

void RunConfig::validate() const {
  if (workers < 1) throw ConfigError("workers must be at least 1");
  if (corpus.min_tokens > corpus.max_tokens) throw ConfigError("corpus.min_tokens exceeds corpus.max_tokens");
  if (corpus.min_docs < 1 || corpus.sample_to > corpus.min_docs) {
    throw ConfigError("corpus needs min_docs >= 1 and sample_to <= min_docs");
  }
  if (paraphrase.temperature < 0 || machine.temperature < 0 || invert.temperature < 0) {
    throw ConfigError("temperatures must be non-negative");
  }
  if (paraphrase.max_retries < 1) throw ConfigError("paraphrase.max_retries must be at least 1");
  if (split.k < 1) throw ConfigError("split.k must be at least 1");
  if (split.train_frac < 0 || split.valid_frac < 0 || split.train_frac + split.valid_frac >= 1.0) {
    throw ConfigError("split fractions must be non-negative and sum below 1");
  }
  if (split.eval_split != "test" && split.eval_split != "all") throw ConfigError("split.eval_split must be test or all");
  if (invert.modes.empty()) throw ConfigError("invert.modes must not be empty");
  for (const auto& m : invert.modes) {
    if (m != "untargeted" && m != "targeted") throw ConfigError("invert mode '" + m + "' is not untargeted|targeted");
  }
  if (invert.n < 1 || invert.per_candidate < 1 || invert.queries_per_author < 1) {
    throw ConfigError("invert.n, per_candidate and queries_per_author must be at least 1");
  }
  for (const auto& m : score.measures) scoring::parse_measure(m);
  for (const auto& p : detect.protocols) {
    if (p != "plagiarism" && p != "authorship") throw ConfigError("detect protocol '" + p + "' is not plagiarism|authorship");
  }
  scoring::parse_strategy(detect.plagiarism_strategy);
  scoring::parse_strategy(detect.authorship_strategy);
  if (!(tokenpred.fraction > 0 && tokenpred.fraction <= 1)) throw ConfigError("tokenpred.fraction must be in (0, 1]");
  if (!(tokenpred.train_frac > 0 && tokenpred.train_frac < 1)) throw ConfigError("tokenpred.train_frac must be in (0, 1)");
  if (tokenpred.hash_bits < 4 || tokenpred.hash_bits > 24) throw ConfigError("tokenpred.hash_bits must be in [4, 24]");
  if (tokenpred.learning_rate <= 0 || tokenpred.l2 < 0) throw ConfigError("tokenpred needs learning_rate > 0, l2 >= 0");
  check_generator(backends.paraphraser, "backends.paraphraser");
  check_generator(backends.inverter, "backends.inverter");
  for (const auto& g : backends.responders) check_generator(g, "backends.responders");
  check_embedder(backends.style, "backends.style");
  check_embedder(backends.semantic, "backends.semantic");
  for (double t : sweep_temperatures) {
    if (t < 0) throw ConfigError("sweep temperatures must be non-negative");
  }
}

std::unique_ptr<backends::GenerationBackend> make_generator(const GeneratorConfig& g,
                                                            std::shared_ptr<backends::RequestLog> log) {
  check_generator(g, "generator");
  if (g.type == "http") {
    auto opts = http_options(g.url, g.model.empty() ? g.name : g.model, g.max_in_flight);
    opts.style = parse_style(g.style);
    return std::make_unique<backends::HttpGenerationBackend>(std::move(opts), std::move(log));
  }
  backends::MockGenerationOptions opts;
  opts.name = g.name;
  opts.style = parse_style(g.style);
  opts.behavior = g.behavior == "echo"            ? backends::MockBehavior::echo
                  : g.behavior == "synonym_noise" ? backends::MockBehavior::synonym_noise
                                                  : backends::MockBehavior::scripted;
  opts.rate = g.rate;
  opts.rate_per_temperature = g.rate_per_temperature;
  opts.table = g.table == "inverse" ? backends::default_synonyms().inverse() : backends::default_synonyms();
  opts.script = g.script;
  return std::make_unique<backends::MockGenerationBackend>(std::move(opts));
}

std::unique_ptr<backends::EmbeddingBackend> make_embedder(const EmbedderConfig& e,
                                                          std::shared_ptr<backends::RequestLog> log) {
  check_embedder(e, "embedder");
  if (e.type == "http") {
    auto opts = http_options(e.url, e.model.empty() ? e.name : e.model, e.max_in_flight);
    opts.dimension = e.dimension;
    opts.batch_limit = e.batch_limit;
    return std::make_unique<backends::HttpEmbeddingBackend>(std::move(opts), std::move(log));
  }
  return std::make_unique<backends::MockEmbeddingBackend>(e.dimension, e.lowercase, e.name, e.batch_limit);
}

Backends make_backends(const RunConfig& config) {
  Backends b;
  b.paraphraser = make_generator(config.backends.paraphraser, b.log);
  b.inverter = make_generator(config.backends.inverter, b.log);
  for (const auto& g : config.backends.responders) b.responders.push_back(make_generator(g, b.log));
  b.style = make_embedder(config.backends.style, b.log);
  b.semantic = make_embedder(config.backends.semantic, b.log);
  return b;
}

}  // namespace inverscribe::pipeline
