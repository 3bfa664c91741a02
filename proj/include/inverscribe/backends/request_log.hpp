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
#include <mutex>
#include <string>
#include <vector>

namespace inverscribe::backends {

struct RequestLogEntry {
  std::uint64_t request_id = 0;
  std::string endpoint;
  std::string payload_hash;
  double latency_ms = 0.0;
  std::size_t input_tokens = 0;
  std::size_t output_tokens = 0;
  int attempts = 0;
  bool ok = false;
};

// Append-only, thread-safe.
class RequestLog {
 public:
  std::uint64_t next_id();
  void append(RequestLogEntry entry);
  std::vector<RequestLogEntry> entries() const;
  std::size_t size() const;

 private:
  mutable std::mutex mu_;
  std::uint64_t next_id_ = 1;
  std::vector<RequestLogEntry> entries_;
};

}  // namespace inverscribe::backends
