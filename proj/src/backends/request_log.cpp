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

#include "inverscribe/backends/request_log.hpp"

namespace inverscribe::backends {

std::uint64_t RequestLog::next_id() {
  std::lock_guard lock(mu_);
  return next_id_++;
}

void RequestLog::append(RequestLogEntry entry) {
  std::lock_guard lock(mu_);
  entries_.push_back(std::move(entry));
}

std::vector<RequestLogEntry> RequestLog::entries() const {
  std::lock_guard lock(mu_);
  return entries_;
}

std::size_t RequestLog::size() const {
  std::lock_guard lock(mu_);
  return entries_.size();
}

}  // namespace inverscribe::backends
