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

#include "inverscribe/corpus/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <unordered_map>
#include <unordered_set>

#include "json.hpp"

#include "inverscribe/alignment/tokenize.hpp"
#include "inverscribe/common/error.hpp"
#include "inverscribe/common/rng.hpp"

namespace inverscribe::corpus {

using nlohmann::json;

namespace {

std::string line_error(std::size_t line, const std::string& what) {
  return "line " + std::to_string(line) + ": " + what;
}

std::string required_string(const json& rec, const char* key, std::size_t line) {
  auto it = rec.find(key);
  if (it == rec.end() || it->is_null()) throw DataError(line_error(line, std::string("missing ") + key));
  if (!it->is_string()) throw DataError(line_error(line, std::string(key) + " must be a string"));
  return it->get<std::string>();
}

std::string ascii_lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

bool is_ascii_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; }

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && is_ascii_space(s[b])) ++b;
  while (e > b && is_ascii_space(s[e - 1])) --e;
  return std::string(s.substr(b, e - b));
}

std::string strip_prefix(const std::string& text, const std::string& phrase) {
  const std::string lower = ascii_lower(text);
  if (!lower.starts_with(phrase)) return text;
  std::size_t cut = phrase.size();
  const char last = phrase.back();
  if (last != ':' && last != ',') {
    // An open-ended lead-in such as "here is the rephrased ..." runs to the
    // first colon or line break, else to the end of its sentence.
    std::size_t stop = text.find_first_of(":\n", cut);
    if (stop == std::string::npos) stop = text.find_first_of(".!?", cut);
    cut = stop == std::string::npos ? text.size() : stop + 1;
  }
  return text.substr(cut);
}

bool at_sentence_start(const std::string& text, std::size_t pos) {
  if (pos == 0) return true;
  std::size_t k = pos;
  bool saw_space = false, saw_newline = false;
  while (k > 0 && is_ascii_space(text[k - 1])) {
    saw_space = true;
    saw_newline = saw_newline || text[k - 1] == '\n';
    --k;
  }
  if (k == 0 || saw_newline) return true;
  const char prev = text[k - 1];
  return saw_space && (prev == '.' || prev == '!' || prev == '?' || prev == ')' || prev == '"');
}

std::string strip_suffix_sentence(const std::string& text, const std::string& phrase) {
  const std::string lower = ascii_lower(text);
  for (std::size_t pos = lower.find(phrase); pos != std::string::npos; pos = lower.find(phrase, pos + 1)) {
    if (at_sentence_start(text, pos)) return text.substr(0, pos);
  }
  return text;
}

}  // namespace

Document parse_document(const json& rec, std::size_t line) {
  if (!rec.is_object()) throw DataError(line_error(line, "record is not an object"));
  Document d;
  d.id = required_string(rec, "id", line);
  d.author_id = required_string(rec, "author_id", line);
  d.text = required_string(rec, "text", line);
  if (auto it = rec.find("source_kind"); it != rec.end() && !it->is_null()) {
    if (!it->is_string()) throw DataError(line_error(line, "source_kind must be a string"));
    auto kind = parse_source_kind(it->get<std::string>());
    if (!kind) throw DataError(line_error(line, "unknown source_kind '" + it->get<std::string>() + "'"));
    d.source_kind = *kind;
  }
  if (auto it = rec.find("origin_id"); it != rec.end() && !it->is_null()) {
    if (!it->is_string()) throw DataError(line_error(line, "origin_id must be a string"));
    d.origin_id = it->get<std::string>();
  }
  if (auto it = rec.find("meta"); it != rec.end() && !it->is_null()) {
    if (!it->is_object()) throw DataError(line_error(line, "meta must be an object"));
    for (const auto& [k, v] : it->items()) {
      d.meta[k] = v.is_string() ? v.get<std::string>() : v.dump();
    }
  }
  return d;
}

json document_record(const Document& d) {
  json rec = {{"id", d.id}, {"author_id", d.author_id}, {"text", d.text},
              {"source_kind", to_string(d.source_kind)}};
  if (d.origin_id) rec["origin_id"] = *d.origin_id;
  if (!d.meta.empty()) rec["meta"] = d.meta;
  return rec;
}

Corpus parse_jsonl(std::istream& in, ManifestStamp* stamp) {
  Corpus corpus;
  std::unordered_set<std::string> ids;
  std::string line;
  std::size_t line_no = 0;
  bool first_record = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    json rec;
    try {
      rec = json::parse(line);
    } catch (const json::parse_error& e) {
      throw DataError(line_error(line_no, std::string("malformed JSON: ") + e.what()));
    }
    if (first_record && rec.is_object() && rec.contains("schema")) {
      first_record = false;
      if (rec["schema"] != kManifestSchema) throw DataError(line_error(line_no, "unknown manifest schema"));
      if (rec.value("version", 0) != kManifestVersion) {
        throw DataError(line_error(line_no, "unsupported manifest version"));
      }
      for (const auto& p : rec.value("provenance", json::array())) {
        corpus.provenance.push_back({p.at("step").get<std::string>(), p.at("detail").get<std::string>()});
      }
      if (stamp) {
        stamp->config_hash = rec.value("config_hash", "");
        stamp->seed = rec.value("seed", std::uint64_t{0});
        stamp->code_version = rec.value("code_version", "");
      }
      continue;
    }
    first_record = false;
    Document d = parse_document(rec, line_no);
    if (!ids.insert(d.id).second) throw DataError(line_error(line_no, "duplicate id '" + d.id + "'"));
    corpus.documents.push_back(std::move(d));
  }
  return corpus;
}

Corpus ingest(const std::filesystem::path& path, InputFormat) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  return parse_jsonl(in);
}

void write_manifest(std::ostream& out, const Corpus& corpus, const ManifestStamp& stamp) {
  json provenance = json::array();
  for (const auto& p : corpus.provenance) provenance.push_back({{"step", p.step}, {"detail", p.detail}});
  json header = {{"schema", kManifestSchema},       {"version", kManifestVersion},
                 {"config_hash", stamp.config_hash}, {"seed", stamp.seed},
                 {"code_version", stamp.code_version}, {"provenance", std::move(provenance)}};
  out << header.dump() << '\n';
  for (const auto& d : corpus.documents) out << document_record(d).dump() << '\n';
}

void save_manifest(const std::filesystem::path& path, const Corpus& corpus, const ManifestStamp& stamp) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  write_manifest(out, corpus, stamp);
}

Corpus load_manifest(const std::filesystem::path& path, ManifestStamp* stamp) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  return parse_jsonl(in, stamp);
}

TokenCounter word_token_counter() {
  return [](std::string_view text) { return alignment::count_tokens(text); };
}

Corpus filter_by_token_length(const Corpus& corpus, std::size_t min_tokens, std::size_t max_tokens,
                              const TokenCounter& counter) {
  if (min_tokens > max_tokens) throw ConfigError("min_tokens must not exceed max_tokens");
  const TokenCounter count = counter ? counter : word_token_counter();
  Corpus out;
  out.provenance = corpus.provenance;
  for (const auto& d : corpus.documents) {
    const std::size_t t = count(d.text);
    if (t >= min_tokens && t <= max_tokens) out.documents.push_back(d);
  }
  out.provenance.push_back(
      {"filter_by_token_length", "bounds " + std::to_string(min_tokens) + ".." + std::to_string(max_tokens) +
                                     ", removed " + std::to_string(corpus.size() - out.size()) + " of " +
                                     std::to_string(corpus.size())});
  return out;
}

Corpus cap_per_author(const Corpus& corpus, std::size_t min_docs, std::size_t sample_to, std::uint64_t seed) {
  if (min_docs < 1) throw ConfigError("min_docs must be at least 1");
  if (sample_to > min_docs) throw ConfigError("sample_to must not exceed min_docs");

  std::unordered_map<std::string, std::vector<std::size_t>> by_author;
  std::vector<std::string> author_order;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    auto& slot = by_author[corpus.documents[i].author_id];
    if (slot.empty()) author_order.push_back(corpus.documents[i].author_id);
    slot.push_back(i);
  }

  std::vector<bool> keep(corpus.size(), false);
  std::size_t dropped_authors = 0;
  for (const auto& author : author_order) {
    const auto& docs = by_author[author];
    if (docs.size() < min_docs) {
      ++dropped_authors;
      continue;
    }
    Rng rng = Rng::derive(seed, {"cap_per_author", author});
    for (std::size_t k : rng.sample_indices(docs.size(), sample_to)) keep[docs[k]] = true;
  }

  Corpus out;
  out.provenance = corpus.provenance;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    if (keep[i]) out.documents.push_back(corpus.documents[i]);
  }
  out.provenance.push_back({"cap_per_author", "min_docs " + std::to_string(min_docs) + ", sample_to " +
                                                  std::to_string(sample_to) + ", seed " + std::to_string(seed) +
                                                  ", dropped " + std::to_string(dropped_authors) + " authors"});
  return out;
}

const std::vector<ArtifactPattern>& default_artifact_patterns() {
  using W = ArtifactPattern::Where;
  static const std::vector<ArtifactPattern> patterns = {
      {W::prefix, "sure,"},
      {W::prefix, "here is the rephrased"},
      {W::prefix, "rephrased passage:"},
      {W::suffix_sentence, "note:"},
      {W::suffix_sentence, "(note:"},
      {W::suffix_sentence, "this rephrased passage"},
  };
  return patterns;
}

std::string clean_artifacts(std::string_view text, const std::vector<ArtifactPattern>& patterns) {
  if (patterns.empty()) throw ConfigError("artifact pattern list is empty");
  std::string current = trim(text);
  for (;;) {
    std::string next = current;
    for (const auto& p : patterns) {
      const std::string phrase = ascii_lower(p.phrase);
      next = p.where == ArtifactPattern::Where::prefix ? strip_prefix(next, phrase)
                                                       : strip_suffix_sentence(next, phrase);
      next = trim(next);
    }
    if (next == current) break;
    current = std::move(next);
  }
  if (current.empty()) throw DataError("document reduced to empty");
  return current;
}

}  // namespace inverscribe::corpus
