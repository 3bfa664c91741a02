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

#include <chrono>
#include <cstddef>
#include <functional>
#include <memory>
#include <semaphore>
#include <string>

#include "json.hpp"

#include "inverscribe/backends/embedding.hpp"
#include "inverscribe/backends/generation.hpp"
#include "inverscribe/backends/request_log.hpp"

namespace inverscribe::backends {

struct RetryPolicy {
  int attempts = 3;
  std::chrono::milliseconds initial_backoff{250};
  double multiplier = 2.0;
};

struct HttpOptions {
  std::string base_url;  // e.g. http://127.0.0.1:8080
  std::string token;     // sent as a Bearer token when non-empty
  std::string model;
  std::chrono::milliseconds timeout{120000};
  RetryPolicy retry;
  std::size_t max_in_flight = 8;
  std::size_t batch_limit = 32;
  std::size_t dimension = 0;  // embedding only; must be declared
  PromptStyle style = PromptStyle::plain;

  // Reads INVERSCRIBE_BACKEND_URL and INVERSCRIBE_BACKEND_TOKEN.
  static HttpOptions from_env(std::string model);
};

// JSON-over-HTTP transport shared by both backends. POSTs `body` to `path`
// with retries on connection failures and 5xx replies; 4xx fails at once.
class HttpTransport {
 public:
  using Sleeper = std::function<void(std::chrono::milliseconds)>;

  explicit HttpTransport(HttpOptions options, std::shared_ptr<RequestLog> log = nullptr);

  nlohmann::json post(const std::string& path, const nlohmann::json& body, std::size_t input_tokens);

  const HttpOptions& options() const noexcept { return options_; }
  RequestLog& log() noexcept { return *log_; }
  void set_sleeper(Sleeper sleeper) { sleeper_ = std::move(sleeper); }

 private:
  HttpOptions options_;
  std::string host_;
  std::string path_prefix_;
  std::shared_ptr<RequestLog> log_;
  std::counting_semaphore<1024> in_flight_;
  Sleeper sleeper_;
};

class HttpEmbeddingBackend final : public EmbeddingBackend {
 public:
  explicit HttpEmbeddingBackend(HttpOptions options, std::shared_ptr<RequestLog> log = nullptr);

  std::string name() const override { return transport_.options().model; }
  std::size_t dimension() const override { return transport_.options().dimension; }
  std::size_t batch_limit() const override { return transport_.options().batch_limit; }
  HttpTransport& transport() noexcept { return transport_; }

 protected:
  std::vector<Vector> embed_batch(std::span<const std::string> texts) override;

 private:
  HttpTransport transport_;
};

class HttpGenerationBackend final : public GenerationBackend {
 public:
  explicit HttpGenerationBackend(HttpOptions options, std::shared_ptr<RequestLog> log = nullptr);

  std::string name() const override { return transport_.options().model; }
  PromptStyle prompt_style() const override { return transport_.options().style; }
  HttpTransport& transport() noexcept { return transport_; }

 protected:
  std::vector<std::string> generate_raw(const GenerationRequest& request) override;

 private:
  HttpTransport transport_;
};

}  // namespace inverscribe::backends
