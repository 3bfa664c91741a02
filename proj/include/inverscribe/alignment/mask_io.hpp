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

#include <string>

#include "json.hpp"

#include "inverscribe/alignment/alignment.hpp"

namespace inverscribe::alignment {

// {"paraphrase_id": ..., "labels": [0|1, ...], "distance": n}; 1 = copied.
nlohmann::json mask_record(const std::string& paraphrase_id, const AlignmentMask& mask);

struct MaskRecord {
  std::string paraphrase_id;
  std::vector<Label> labels;
  std::size_t distance = 0;
};

MaskRecord parse_mask_record(const nlohmann::json& record);

}  // namespace inverscribe::alignment
