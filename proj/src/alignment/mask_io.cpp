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

#include "inverscribe/alignment/mask_io.hpp"

#include "inverscribe/common/error.hpp"

namespace inverscribe::alignment {

nlohmann::json mask_record(const std::string& paraphrase_id, const AlignmentMask& mask) {
  nlohmann::json labels = nlohmann::json::array();
  for (Label l : mask.labels) labels.push_back(l == Label::copied ? 1 : 0);
  return {{"paraphrase_id", paraphrase_id}, {"labels", std::move(labels)}, {"distance", mask.distance}};
}

MaskRecord parse_mask_record(const nlohmann::json& record) {
  try {
    MaskRecord out;
    out.paraphrase_id = record.at("paraphrase_id").get<std::string>();
    out.distance = record.at("distance").get<std::size_t>();
    for (const auto& v : record.at("labels")) {
      const int bit = v.get<int>();
      if (bit != 0 && bit != 1) throw DataError("mask label must be 0 or 1");
      out.labels.push_back(bit == 1 ? Label::copied : Label::paraphrased);
    }
    return out;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed mask record: ") + e.what());
  }
}

}  // namespace inverscribe::alignment
