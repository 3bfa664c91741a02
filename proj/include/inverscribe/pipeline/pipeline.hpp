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

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "inverscribe/pipeline/config.hpp"

namespace inverscribe::pipeline {

enum class Stage { ingest, machine_respond, paraphrase, split, align, invert, score, detect, tokenpred, report };

std::string_view to_string(Stage stage) noexcept;
Stage parse_stage(std::string_view name);  // throws ConfigError
// Every stage in execution order.
const std::vector<Stage>& all_stages();
// Comma-separated names or "all"; returned in execution order without repeats.
std::vector<Stage> parse_stages(std::string_view list);

// Hash of the configuration sections a stage and everything upstream of it
// read. Each artifact is stamped with its stage's hash, and every loader
// rejects an artifact whose stamp differs from what the current
// configuration implies. The report stage's hash is RunConfig::hash().
std::string stage_hash(const RunConfig& config, Stage stage);

struct RunReport {
  nlohmann::json data;      // deterministic content; written to report.json
  std::string text;         // report.txt
  std::string hash;         // FNV-1a of data.dump()
  nlohmann::json runtime;   // timings and request accounting; runtime.json
  std::vector<std::string> stages_run;
};

// Runs `stages` in execution order inside config.out_dir. Missing inputs
// raise DataError naming the stage to run first. When `backends` is null
// they are built from the configuration.
RunReport run_pipeline(const RunConfig& config, std::span<const Stage> stages, Backends* backends = nullptr);

struct SweepRow {
  double temperature = 0.0;
  double style_max = 0.0;
  double semantic_max = 0.0;
  double bleu_max = 0.0;
  bool operator==(const SweepRow&) const = default;
};

// Untargeted invert + score of the evaluation queries at each temperature,
// with shared seeds; max strategy, mean over queries. Needs the paraphrase
// and split stages. Writes sweep/sweep.{csv,svg,txt,json}. Throws
// ConfigError on an empty list.
std::vector<SweepRow> temperature_sweep(const RunConfig& config, std::span<const double> temperatures,
                                        Backends* backends = nullptr);
std::string format_sweep_table(std::span<const SweepRow> rows);

}  // namespace inverscribe::pipeline
