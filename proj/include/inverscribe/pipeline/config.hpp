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
#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "json.hpp"
#include "inverscribe/backends/embedding.hpp"
#include "inverscribe/backends/generation.hpp"
#include "inverscribe/backends/request_log.hpp"

namespace inverscribe::pipeline {

// A generation backend. type "mock" uses behavior/rate/table/script;
// type "http" uses url/model (url falls back to INVERSCRIBE_BACKEND_URL).
struct GeneratorConfig {
  std::string type = "mock";
  std::string name = "mock-generate";
  std::string style = "plain";  // plain | instruct
  // mock
  std::string behavior = "echo";  // echo | synonym_noise | scripted
  double rate = 0.0;
  double rate_per_temperature = 0.0;
  std::string table = "forward";  // forward | inverse (of the bundled synonym table)
  std::map<std::string, std::vector<std::string>> script;
  // http
  std::string url;
  std::string model;
  std::size_t max_in_flight = 8;
};

struct EmbedderConfig {
  std::string type = "mock";
  std::string name = "mock-embed";
  std::size_t dimension = 256;
  bool lowercase = true;  // mock only
  std::size_t batch_limit = 64;
  std::string url;
  std::string model;
  std::size_t max_in_flight = 8;
};

struct RunConfig {
  std::string input;    // raw JSONL corpus
  std::string out_dir;  // not part of the config hash
  std::uint64_t seed = 0;
  std::size_t workers = 8;

  struct {
    std::size_t min_tokens = 64, max_tokens = 128, min_docs = 10, sample_to = 10;
  } corpus;
  struct {
    double temperature = 0.7;
    double threshold = 0.7;
    std::size_t max_retries = 3;
    std::size_t max_new_tokens = 192;
  } paraphrase;
  struct {
    double temperature = 0.7;
    std::size_t max_new_tokens = 192;
  } machine;
  struct {
    std::size_t k = 100;
    double train_frac = 0.8, valid_frac = 0.1;
    std::size_t test_count = 100;
    std::string eval_split = "test";  // test | all: which authors form the evaluation line-up
  } split;
  struct {
    std::vector<std::string> modes{"untargeted", "targeted"};
    std::size_t n = 100;
    double temperature = 0.7;
    std::size_t per_candidate = 5;
    std::size_t queries_per_author = 5;
    std::size_t max_new_tokens = 192;
  } invert;
  struct {
    std::vector<std::string> measures{"bleu", "semantic", "style"};
  } score;
  struct {
    std::vector<std::string> protocols{"plagiarism", "authorship"};
    std::string plagiarism_strategy = "max";
    std::string authorship_strategy = "aggregate";
  } detect;
  struct {
    double fraction = 0.5;
    double train_frac = 0.9;
    std::size_t epochs = 10;
    double learning_rate = 0.1;
    double l2 = 1e-6;
    unsigned hash_bits = 16;
  } tokenpred;
  struct {
    GeneratorConfig paraphraser;
    GeneratorConfig inverter;
    std::vector<GeneratorConfig> responders;
    EmbedderConfig style{"mock", "mock-style", 256, false, 64, {}, {}, 8};
    EmbedderConfig semantic{"mock", "mock-semantic", 256, true, 64, {}, {}, 8};
  } backends;
  std::vector<double> sweep_temperatures;

  nlohmann::json to_json() const;
  // Unknown keys and ill-typed values throw ConfigError. Missing keys keep
  // their defaults.
  static RunConfig from_json(const nlohmann::json& j);
  // A relative "input" is resolved against the config file's directory.
  static RunConfig load(const std::filesystem::path& path);
  // FNV-1a of the canonical JSON dump without out_dir and workers (neither
  // affects results), in hex.
  std::string hash() const;
  // Throws ConfigError describing the first invalid setting.
  void validate() const;
};

// Live backends for a run. Tests may build one by hand with custom backends.
struct Backends {
  std::shared_ptr<backends::RequestLog> log = std::make_shared<backends::RequestLog>();
  std::unique_ptr<backends::GenerationBackend> paraphraser;
  std::unique_ptr<backends::GenerationBackend> inverter;
  std::vector<std::unique_ptr<backends::GenerationBackend>> responders;
  std::unique_ptr<backends::EmbeddingBackend> style;
  std::unique_ptr<backends::EmbeddingBackend> semantic;
};

std::unique_ptr<backends::GenerationBackend> make_generator(const GeneratorConfig& config,
                                                            std::shared_ptr<backends::RequestLog> log);
std::unique_ptr<backends::EmbeddingBackend> make_embedder(const EmbedderConfig& config,
                                                          std::shared_ptr<backends::RequestLog> log);
Backends make_backends(const RunConfig& config);

}  // namespace inverscribe::pipeline
