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

// inverscribe command-line entry point.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "inverscribe/common/error.hpp"
#include "inverscribe/pipeline/config.hpp"
#include "inverscribe/pipeline/pipeline.hpp"

namespace fs = std::filesystem;
using namespace inverscribe;
using pipeline::RunConfig;
using pipeline::Stage;

namespace {

struct Common {
  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> workers;
};

void add_common(CLI::App* cmd, Common& c, bool out_required = true) {
  cmd->add_option("--config", c.config_path, "run configuration (JSON)");
  auto* out = cmd->add_option("--out", c.out_dir, "run directory holding every stage's artifacts");
  if (out_required) out->required();
  cmd->add_option("--seed", c.seed, "root seed");
  cmd->add_option("--workers", c.workers, "worker threads");
}

// --config wins, then <out>/config.json from a previous command, then defaults.
RunConfig resolve(const Common& c) {
  RunConfig cfg;
  const fs::path saved = fs::path(c.out_dir) / "config.json";
  if (!c.config_path.empty()) {
    cfg = RunConfig::load(c.config_path);
  } else if (!c.out_dir.empty() && fs::exists(saved)) {
    cfg = RunConfig::load(saved);
  }
  if (!c.out_dir.empty()) cfg.out_dir = c.out_dir;
  if (c.seed) cfg.seed = *c.seed;
  if (c.workers) cfg.workers = *c.workers;
  return cfg;
}

void persist(const RunConfig& cfg) {
  cfg.validate();
  fs::create_directories(cfg.out_dir);
  std::ofstream out(fs::path(cfg.out_dir) / "config.json");
  if (!out) throw DataError("cannot write config to " + cfg.out_dir);
  out << cfg.to_json().dump(2) << '\n';
}

template <class T>
void set_if(const std::optional<T>& v, T& target) {
  if (v) target = *v;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"inverscribe: paraphrase inversion toolkit"};
  app.set_version_flag("--version", std::string(INVERSCRIBE_VERSION));
  app.require_subcommand(1);

  // ingest
  Common ingest_c;
  std::string in_path;
  std::optional<std::size_t> min_tokens, max_tokens, min_docs, sample_to;
  auto* ingest = app.add_subcommand("ingest", "read, filter and cap a JSONL corpus");
  add_common(ingest, ingest_c);
  ingest->add_option("--in", in_path, "input JSONL (default: the configuration's input)");
  ingest->add_option("--min-tokens", min_tokens, "minimum tokens per document (inclusive, default 64)");
  ingest->add_option("--max-tokens", max_tokens, "maximum tokens per document (inclusive, default 128)");
  ingest->add_option("--min-docs", min_docs, "drop authors with fewer documents (default 10)");
  ingest->add_option("--sample-to", sample_to, "documents kept per author (default 10)");

  // machine responses
  Common respond_c;
  auto* respond = app.add_subcommand("respond", "generate machine responses to every comment");
  add_common(respond, respond_c);

  // paraphrase
  Common para_c;
  std::optional<double> para_temp, para_threshold;
  std::optional<std::size_t> para_retries;
  auto* paraphrase = app.add_subcommand("paraphrase", "paraphrase the corpus through the similarity gate");
  add_common(paraphrase, para_c);
  paraphrase->add_option("--temp", para_temp, "paraphrase temperature (default 0.7)");
  paraphrase->add_option("--threshold", para_threshold, "minimum semantic similarity (default 0.7)");
  paraphrase->add_option("--max-retries", para_retries, "attempts per document (default 3)");

  // split
  Common split_c;
  std::optional<std::size_t> split_k, split_test;
  std::optional<double> split_train, split_valid;
  std::optional<std::string> split_eval;
  auto* split = app.add_subcommand("split", "cluster author styles and split authors");
  add_common(split, split_c);
  split->add_option("--k", split_k, "number of clusters (default 100)");
  split->add_option("--train-frac", split_train, "per-cluster training fraction (default 0.8)");
  split->add_option("--valid-frac", split_valid, "per-cluster validation fraction (default 0.1)");
  split->add_option("--test-count", split_test, "test authors (default 100)");
  split->add_option("--eval-split", split_eval, "evaluation line-up: test or all")->check(CLI::IsMember({"test", "all"}));

  // align
  Common align_c;
  auto* align = app.add_subcommand("align", "label paraphrase tokens as copied or paraphrased");
  add_common(align, align_c);

  // invert
  Common inv_c;
  std::optional<std::string> inv_mode;
  std::optional<std::size_t> inv_n, inv_per_candidate;
  std::optional<double> inv_temp;
  auto* invert = app.add_subcommand("invert", "sample inversions of the evaluation paraphrases");
  add_common(invert, inv_c);
  invert->add_option("--mode", inv_mode, "untargeted, targeted or both")
      ->check(CLI::IsMember({"untargeted", "targeted", "both"}));
  invert->add_option("--n", inv_n, "untargeted inversions per paraphrase (default 100)");
  invert->add_option("--temp", inv_temp, "inversion temperature (default 0.7)");
  invert->add_option("--per-candidate", inv_per_candidate, "targeted inversions per candidate author (default 5)");

  // score
  Common score_c;
  std::optional<std::string> score_measure;
  std::string score_strategy = "max";
  auto* score = app.add_subcommand("score", "score inversions against their originals");
  add_common(score, score_c);
  score->add_option("--measure", score_measure, "bleu, semantic or style (default: all three)")
      ->check(CLI::IsMember({"bleu", "semantic", "style"}));
  score->add_option("--strategy", score_strategy, "strategy to print")
      ->check(CLI::IsMember({"single", "max", "expectation", "aggregate"}));

  // detect
  Common det_c;
  std::string det_protocol;
  std::optional<std::string> det_strategy;
  auto* detect = app.add_subcommand("detect", "run a detection protocol and export DET curves");
  add_common(detect, det_c);
  detect->add_option("protocol", det_protocol, "plagiarism or authorship")
      ->required()
      ->check(CLI::IsMember({"plagiarism", "authorship"}));
  detect->add_option("--strategy", det_strategy, "single, max, expectation or aggregate")
      ->check(CLI::IsMember({"single", "max", "expectation", "aggregate"}));

  // tokenpred
  Common tp_c;
  std::optional<std::size_t> tp_epochs;
  std::optional<double> tp_lr, tp_l2;
  auto* tokenpred = app.add_subcommand("tokenpred", "train and evaluate the paraphrased-token baseline");
  add_common(tokenpred, tp_c);
  tokenpred->add_option("--epochs", tp_epochs, "SGD epochs");
  tokenpred->add_option("--learning-rate", tp_lr, "SGD learning rate");
  tokenpred->add_option("--l2", tp_l2, "L2 penalty");

  // report
  Common rep_c;
  auto* report = app.add_subcommand("report", "collect every stage's results into a report");
  add_common(report, rep_c);

  // run
  Common run_c;
  std::string run_stages = "all";
  auto* run = app.add_subcommand("run", "run several stages from a config file");
  add_common(run, run_c, false);
  run->add_option("--stages", run_stages, "comma-separated stages or 'all'");

  // sweep
  Common sweep_c;
  std::vector<double> sweep_temps;
  auto* sweep = app.add_subcommand("sweep", "untargeted inversion quality across temperatures");
  add_common(sweep, sweep_c, false);
  sweep->add_option("--temps", sweep_temps, "temperatures, e.g. --temps 0.3 0.5 0.7")->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    auto run_stage = [](const RunConfig& cfg, std::vector<Stage> stages) {
      persist(cfg);
      return pipeline::run_pipeline(cfg, stages);
    };
    auto print_artifacts = [](const RunConfig& cfg, const std::string& what) {
      std::cout << what << " written to " << cfg.out_dir << "\n";
    };

    if (*ingest) {
      RunConfig cfg = resolve(ingest_c);
      if (!in_path.empty()) cfg.input = fs::absolute(in_path).string();
      if (cfg.input.empty()) throw ConfigError("ingest needs --in or an 'input' in the configuration");
      set_if(min_tokens, cfg.corpus.min_tokens);
      set_if(max_tokens, cfg.corpus.max_tokens);
      set_if(min_docs, cfg.corpus.min_docs);
      set_if(sample_to, cfg.corpus.sample_to);
      run_stage(cfg, {Stage::ingest});
      print_artifacts(cfg, "ingest.jsonl");
    } else if (*respond) {
      RunConfig cfg = resolve(respond_c);
      run_stage(cfg, {Stage::machine_respond});
      print_artifacts(cfg, "machine.jsonl");
    } else if (*paraphrase) {
      RunConfig cfg = resolve(para_c);
      set_if(para_temp, cfg.paraphrase.temperature);
      set_if(para_threshold, cfg.paraphrase.threshold);
      set_if(para_retries, cfg.paraphrase.max_retries);
      run_stage(cfg, {Stage::paraphrase});
      print_artifacts(cfg, "paraphrase.jsonl");
    } else if (*split) {
      RunConfig cfg = resolve(split_c);
      set_if(split_k, cfg.split.k);
      set_if(split_train, cfg.split.train_frac);
      set_if(split_valid, cfg.split.valid_frac);
      set_if(split_test, cfg.split.test_count);
      set_if(split_eval, cfg.split.eval_split);
      run_stage(cfg, {Stage::split});
      print_artifacts(cfg, "split.json");
    } else if (*align) {
      RunConfig cfg = resolve(align_c);
      run_stage(cfg, {Stage::align});
      print_artifacts(cfg, "masks.jsonl");
    } else if (*invert) {
      RunConfig cfg = resolve(inv_c);
      if (inv_mode) {
        cfg.invert.modes = *inv_mode == "both" ? std::vector<std::string>{"untargeted", "targeted"}
                                               : std::vector<std::string>{*inv_mode};
      }
      set_if(inv_n, cfg.invert.n);
      set_if(inv_temp, cfg.invert.temperature);
      set_if(inv_per_candidate, cfg.invert.per_candidate);
      run_stage(cfg, {Stage::invert});
      print_artifacts(cfg, "inversions.jsonl");
    } else if (*score) {
      RunConfig cfg = resolve(score_c);
      if (score_measure) cfg.score.measures = {*score_measure};
      auto r = run_stage(cfg, {Stage::score, Stage::report});
      const auto& table = r.data.at("scores").at("table");
      std::cout << "strategy " << score_strategy << "\n";
      for (const auto& [arm, measures] : table.items()) {
        for (const auto& [m, strategies] : measures.items()) {
          const std::string s = arm == "paraphrase" ? "single" : score_strategy;
          if (!strategies.contains(s) || strategies[s].is_null()) continue;
          std::cout << "  " << arm << " " << m << " " << strategies[s].get<double>() << "\n";
        }
      }
    } else if (*detect) {
      RunConfig cfg = resolve(det_c);
      cfg.detect.protocols = {det_protocol};
      if (det_strategy) {
        (det_protocol == "plagiarism" ? cfg.detect.plagiarism_strategy : cfg.detect.authorship_strategy) = *det_strategy;
      }
      auto r = run_stage(cfg, {Stage::detect, Stage::report});
      for (const auto& [arm, strategies] : r.data.at("detection").at("eer").at(det_protocol).items()) {
        for (const auto& [s, v] : strategies.items()) std::cout << det_protocol << " " << arm << " " << s << " EER " << v << "\n";
      }
      std::cout << "DET curves in " << (fs::path(cfg.out_dir) / "detect").string() << "\n";
    } else if (*tokenpred) {
      RunConfig cfg = resolve(tp_c);
      set_if(tp_epochs, cfg.tokenpred.epochs);
      set_if(tp_lr, cfg.tokenpred.learning_rate);
      set_if(tp_l2, cfg.tokenpred.l2);
      auto r = run_stage(cfg, {Stage::tokenpred, Stage::report});
      std::cout << r.data.at("tokenpred").dump(2) << "\n";
    } else if (*report) {
      RunConfig cfg = resolve(rep_c);
      auto r = run_stage(cfg, {Stage::report});
      std::cout << r.text << "report hash " << r.hash << "\n";
    } else if (*run) {
      RunConfig cfg = resolve(run_c);
      if (cfg.out_dir.empty()) throw ConfigError("set --out or out_dir in the config");
      auto r = run_stage(cfg, pipeline::parse_stages(run_stages));
      if (!r.text.empty()) std::cout << r.text << "report hash " << r.hash << "\n";
      else print_artifacts(cfg, "stage artifacts");
    } else if (*sweep) {
      RunConfig cfg = resolve(sweep_c);
      if (cfg.out_dir.empty()) throw ConfigError("set --out or out_dir in the config");
      if (!sweep_temps.empty()) cfg.sweep_temperatures = sweep_temps;
      persist(cfg);
      const auto rows = pipeline::temperature_sweep(cfg, cfg.sweep_temperatures);
      std::cout << pipeline::format_sweep_table(rows);
    }
  } catch (const Error& e) {
    std::cerr << "inverscribe: " << e.what() << "\n";
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "inverscribe: internal error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
