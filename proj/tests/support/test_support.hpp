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

// Shared helpers for the unit and acceptance suites: generators for random
// inputs, independent oracles, and test doubles for the backends.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include <arpa/inet.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include "inverscribe/backends/embedding.hpp"
#include "inverscribe/backends/generation.hpp"
#include "inverscribe/common/error.hpp"
#include "inverscribe/common/rng.hpp"
#include "inverscribe/common/vec.hpp"

namespace testsupport {

using inverscribe::Rng;
using inverscribe::Vector;

inline std::string data_path(const std::string& name) { return std::string(INVERSCRIBE_TEST_DATA) + "/" + name; }

// A loopback port with nothing listening on it: bound to pick a free number,
// then closed, so connections are refused immediately.
inline int closed_port() {
  const int fd = ::socket(AF_INET, SOCK_STREAM, 0);
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
  addr.sin_port = 0;
  socklen_t len = sizeof(addr);
  if (fd < 0 || ::bind(fd, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0 ||
      ::getsockname(fd, reinterpret_cast<sockaddr*>(&addr), &len) != 0) {
    throw std::runtime_error("closed_port: cannot bind a loopback socket");
  }
  ::close(fd);
  return ntohs(addr.sin_port);
}

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

inline void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

// Unique scratch directory removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("inverscribe_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

// Token sequence of length [0, max_len] over an alphabet of `alphabet` symbols.
inline std::vector<std::string> random_tokens(Rng& rng, std::size_t max_len, std::size_t alphabet,
                                              std::size_t min_len = 0) {
  const std::size_t n = min_len + static_cast<std::size_t>(rng.below(max_len - min_len + 1));
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back("t" + std::to_string(rng.below(alphabet)));
  return out;
}

inline Vector random_unit(Rng& rng, std::size_t dim) {
  Vector v(dim);
  for (auto& x : v) x = rng.normal();
  return inverscribe::normalized(v);
}

inline Vector basis(std::size_t dim, std::size_t i) {
  Vector v(dim, 0.0);
  v[i] = 1.0;
  return v;
}

// ---------------------------------------------------------------------------
// Oracles

// Plain exhaustive recursion over the three edit choices, memoized on the
// (i, j) suffix pair. Written independently of the DP in the library.
inline std::size_t edit_distance_oracle(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> memo;
  std::function<std::size_t(std::size_t, std::size_t)> go = [&](std::size_t i, std::size_t j) -> std::size_t {
    if (i == a.size()) return b.size() - j;
    if (j == b.size()) return a.size() - i;
    auto key = std::make_pair(i, j);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    std::size_t best = std::min(go(i + 1, j) + 1, go(i, j + 1) + 1);
    best = std::min(best, go(i + 1, j + 1) + (a[i] == b[j] ? 0 : 1));
    memo[key] = best;
    return best;
  };
  return go(0, 0);
}

// Unmemoized recursion, for very short inputs only.
inline std::size_t edit_distance_naive(const std::vector<std::string>& a, std::size_t i,
                                       const std::vector<std::string>& b, std::size_t j) {
  if (i == a.size()) return b.size() - j;
  if (j == b.size()) return a.size() - i;
  std::size_t best = edit_distance_naive(a, i + 1, b, j) + 1;
  best = std::min(best, edit_distance_naive(a, i, b, j + 1) + 1);
  return std::min(best, edit_distance_naive(a, i + 1, b, j + 1) + (a[i] == b[j] ? 0 : 1));
}

// Sentence BLEU by direct n-gram counting, following the documented
// definition: orders 1..min(4, |c|), clipped precision, add-one smoothing on
// zero-match orders >= 2, zero when no unigram matches, brevity penalty with
// the closest reference length (shorter on ties).
inline double bleu_oracle(const std::vector<std::string>& cand, const std::vector<std::vector<std::string>>& refs) {
  if (cand.empty()) return 0.0;
  auto grams = [](const std::vector<std::string>& s, std::size_t n) {
    std::map<std::vector<std::string>, int> m;
    for (std::size_t i = 0; i + n <= s.size(); ++i) ++m[std::vector<std::string>(s.begin() + i, s.begin() + i + n)];
    return m;
  };
  const std::size_t max_n = std::min<std::size_t>(4, cand.size());
  double log_sum = 0.0;
  for (std::size_t n = 1; n <= max_n; ++n) {
    auto cg = grams(cand, n);
    std::map<std::vector<std::string>, int> best;
    for (const auto& r : refs) {
      for (const auto& [g, c] : grams(r, n)) best[g] = std::max(best[g], c);
    }
    double matches = 0, total = 0;
    for (const auto& [g, c] : cg) {
      total += c;
      auto it = best.find(g);
      matches += std::min(c, it == best.end() ? 0 : it->second);
    }
    double p;
    if (matches == 0) {
      if (n == 1) return 0.0;
      p = 1.0 / (total + 1.0);
    } else {
      p = matches / total;
    }
    log_sum += std::log(p);
  }
  double geo = std::exp(log_sum / static_cast<double>(max_n));
  const double c = static_cast<double>(cand.size());
  double r = -1;
  for (const auto& ref : refs) {
    double len = static_cast<double>(ref.size());
    if (r < 0 || std::abs(len - c) < std::abs(r - c) || (std::abs(len - c) == std::abs(r - c) && len < r)) r = len;
  }
  const double bp = c < r ? std::exp(1.0 - r / c) : 1.0;
  return bp * geo;
}

// ---------------------------------------------------------------------------
// Backend doubles

// Embeds by table lookup; unknown texts get a deterministic random unit vector.
class TableEmbedding final : public inverscribe::backends::EmbeddingBackend {
 public:
  explicit TableEmbedding(std::size_t dim, std::size_t batch = 64) : dim_(dim), batch_(batch) {}
  void set(const std::string& text, Vector v) { table_[text] = std::move(v); }
  std::string name() const override { return "table-embed"; }
  std::size_t dimension() const override { return dim_; }
  std::size_t batch_limit() const override { return batch_; }
  std::size_t calls() const { return calls_; }

 protected:
  std::vector<Vector> embed_batch(std::span<const std::string> texts) override {
    ++calls_;
    std::vector<Vector> out;
    for (const auto& t : texts) {
      if (auto it = table_.find(t); it != table_.end()) {
        out.push_back(it->second);
      } else {
        Rng rng(inverscribe::stable_hash(t));
        out.push_back(random_unit(rng, dim_));
      }
    }
    return out;
  }

 private:
  std::size_t dim_;
  std::size_t batch_;
  std::unordered_map<std::string, Vector> table_;
  std::atomic<std::size_t> calls_{0};
};

// Returns whatever the callback produces; raw output is what the backend
// "sent", before the base class strips prompt echoes.
class LambdaGenerator final : public inverscribe::backends::GenerationBackend {
 public:
  using Fn = std::function<std::vector<std::string>(const inverscribe::backends::GenerationRequest&)>;
  explicit LambdaGenerator(Fn fn, std::string name = "lambda-gen") : fn_(std::move(fn)), name_(std::move(name)) {}
  std::string name() const override { return name_; }
  std::size_t calls() const { return calls_; }

 protected:
  std::vector<std::string> generate_raw(const inverscribe::backends::GenerationRequest& r) override {
    ++calls_;
    return fn_(r);
  }

 private:
  Fn fn_;
  std::string name_;
  std::atomic<std::size_t> calls_{0};
};

}  // namespace testsupport
