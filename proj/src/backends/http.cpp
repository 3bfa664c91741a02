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

#include "inverscribe/backends/http.hpp"

#include <cstdlib>
#include <thread>

#include "httplib.h"

#include "inverscribe/alignment/tokenize.hpp"
#include "inverscribe/common/error.hpp"
#include "inverscribe/common/rng.hpp"

namespace inverscribe::backends {

using nlohmann::json;

HttpOptions HttpOptions::from_env(std::string model) {
  HttpOptions options;
  if (const char* url = std::getenv("INVERSCRIBE_BACKEND_URL")) options.base_url = url;
  if (const char* token = std::getenv("INVERSCRIBE_BACKEND_TOKEN")) options.token = token;
  options.model = std::move(model);
  return options;
}

namespace {

// Splits "http://host:port/prefix" into the client address and path prefix.
std::pair<std::string, std::string> split_url(const std::string& url) {
  const std::size_t scheme = url.find("://");
  if (scheme == std::string::npos) throw ConfigError("backend URL needs a scheme: '" + url + "'");
  if (url.compare(0, scheme, "http") != 0) throw ConfigError("only http:// backend URLs are supported");
  const std::size_t slash = url.find('/', scheme + 3);
  if (slash == std::string::npos) return {url, ""};
  std::string prefix = url.substr(slash);
  while (!prefix.empty() && prefix.back() == '/') prefix.pop_back();
  return {url.substr(0, slash), prefix};
}

class SlotGuard {
 public:
  explicit SlotGuard(std::counting_semaphore<1024>& sem) : sem_(sem) { sem_.acquire(); }
  ~SlotGuard() { sem_.release(); }
  SlotGuard(const SlotGuard&) = delete;
  SlotGuard& operator=(const SlotGuard&) = delete;

 private:
  std::counting_semaphore<1024>& sem_;
};

}  // namespace

HttpTransport::HttpTransport(HttpOptions options, std::shared_ptr<RequestLog> log)
    : options_(std::move(options)),
      log_(log ? std::move(log) : std::make_shared<RequestLog>()),
      in_flight_(static_cast<std::ptrdiff_t>(std::clamp<std::size_t>(options_.max_in_flight, 1, 1024))),
      sleeper_([](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); }) {
  if (options_.base_url.empty()) throw ConfigError("backend URL is not set (INVERSCRIBE_BACKEND_URL)");
  std::tie(host_, path_prefix_) = split_url(options_.base_url);
  if (options_.retry.attempts < 1) throw ConfigError("retry attempts must be at least 1");
}

json HttpTransport::post(const std::string& path, const json& body, std::size_t input_tokens) {
  SlotGuard slot(in_flight_);
  const std::string payload = body.dump();
  RequestLogEntry entry;
  entry.request_id = log_->next_id();
  entry.endpoint = path;
  entry.payload_hash = hex64(stable_hash(payload));
  entry.input_tokens = input_tokens;

  const auto started = std::chrono::steady_clock::now();
  auto backoff = options_.retry.initial_backoff;
  std::string last_error;
  for (int attempt = 1; attempt <= options_.retry.attempts; ++attempt) {
    entry.attempts = attempt;
    httplib::Client client(host_);
    client.set_connection_timeout(options_.timeout);
    client.set_read_timeout(options_.timeout);
    client.set_write_timeout(options_.timeout);
    httplib::Headers headers;
    if (!options_.token.empty()) headers.emplace("Authorization", "Bearer " + options_.token);

    auto res = client.Post(path_prefix_ + path, headers, payload, "application/json");
    bool retryable = true;
    if (!res) {
      last_error = "transport error: " + httplib::to_string(res.error());
    } else if (res->status >= 500) {
      last_error = "HTTP " + std::to_string(res->status);
    } else if (res->status >= 400) {
      last_error = "HTTP " + std::to_string(res->status) + ": " + res->body;
      retryable = false;
    } else {
      json reply;
      try {
        reply = json::parse(res->body);
      } catch (const json::parse_error& e) {
        throw BackendError(path + ": malformed response: " + e.what());
      }
      entry.ok = true;
      entry.latency_ms =
          std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
      if (auto meta = reply.find("meta"); meta != reply.end() && meta->is_object()) {
        entry.input_tokens = meta->value("input_tokens", entry.input_tokens);
        entry.output_tokens = meta->value("output_tokens", std::size_t{0});
      } else if (auto comps = reply.find("completions"); comps != reply.end() && comps->is_array()) {
        for (const auto& c : *comps) {
          if (c.is_string()) entry.output_tokens += alignment::count_tokens(c.get<std::string>());
        }
      }
      log_->append(entry);
      return reply;
    }
    if (!retryable) break;
    if (attempt < options_.retry.attempts) {
      sleeper_(backoff);
      backoff = std::chrono::milliseconds(static_cast<long long>(backoff.count() * options_.retry.multiplier));
    }
  }
  entry.latency_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
  log_->append(entry);
  throw BackendError(path + " failed after " + std::to_string(entry.attempts) + " attempt(s): " + last_error);
}

HttpEmbeddingBackend::HttpEmbeddingBackend(HttpOptions options, std::shared_ptr<RequestLog> log)
    : transport_(std::move(options), std::move(log)) {
  if (transport_.options().dimension < 2) throw ConfigError("HTTP embedding backend must declare its dimension");
}

std::vector<Vector> HttpEmbeddingBackend::embed_batch(std::span<const std::string> texts) {
  std::size_t tokens = 0;
  for (const auto& t : texts) tokens += alignment::count_tokens(t);
  const json body = {{"model", transport_.options().model}, {"texts", std::vector<std::string>(texts.begin(), texts.end())}};
  const json reply = transport_.post("/embed", body, tokens);
  try {
    return reply.at("vectors").get<std::vector<Vector>>();
  } catch (const json::exception& e) {
    throw BackendError(std::string("/embed: unexpected response shape: ") + e.what());
  }
}

HttpGenerationBackend::HttpGenerationBackend(HttpOptions options, std::shared_ptr<RequestLog> log)
    : transport_(std::move(options), std::move(log)) {}

std::vector<std::string> HttpGenerationBackend::generate_raw(const GenerationRequest& request) {
  json body = {{"model", transport_.options().model},
               {"prompt", request.prompt},
               {"n", request.n},
               {"temperature", request.temperature},
               {"max_new_tokens", request.max_new_tokens}};
  if (request.seed) body["seed"] = *request.seed;
  const json reply = transport_.post("/generate", body, alignment::count_tokens(request.prompt));
  try {
    return reply.at("completions").get<std::vector<std::string>>();
  } catch (const json::exception& e) {
    throw BackendError(std::string("/generate: unexpected response shape: ") + e.what());
  }
}

}  // namespace inverscribe::backends
