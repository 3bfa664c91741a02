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

#include "inverscribe/detection/det.hpp"

#include <algorithm>
#include <limits>

#include "inverscribe/common/error.hpp"

namespace inverscribe::detection {

void TrialSet::add(Trial trial) {
  (trial.genuine ? genuine : impostor).push_back(trial.score);
  trials.push_back(std::move(trial));
}

DETCurve det_curve(std::span<const double> genuine, std::span<const double> impostor) {
  if (genuine.empty() || impostor.empty()) throw DataError("det_curve needs genuine and impostor scores");
  std::vector<double> gen(genuine.begin(), genuine.end());
  std::vector<double> imp(impostor.begin(), impostor.end());
  std::sort(gen.begin(), gen.end());
  std::sort(imp.begin(), imp.end());
  std::vector<double> thresholds;
  thresholds.reserve(gen.size() + imp.size());
  std::merge(gen.begin(), gen.end(), imp.begin(), imp.end(), std::back_inserter(thresholds));
  thresholds.erase(std::unique(thresholds.begin(), thresholds.end()), thresholds.end());

  const double g = static_cast<double>(gen.size());
  const double n = static_cast<double>(imp.size());
  DETCurve curve;
  curve.points.reserve(thresholds.size() + 1);
  std::size_t gen_below = 0, imp_below = 0;
  for (double t : thresholds) {
    while (gen_below < gen.size() && gen[gen_below] < t) ++gen_below;
    while (imp_below < imp.size() && imp[imp_below] < t) ++imp_below;
    curve.points.push_back({t, static_cast<double>(imp.size() - imp_below) / n, static_cast<double>(gen_below) / g});
  }
  curve.points.push_back({std::numeric_limits<double>::infinity(), 0.0, 1.0});

  for (std::size_t i = 0; i < curve.points.size(); ++i) {
    const auto& p = curve.points[i];
    const double d = p.fnr - p.fpr;
    if (d < 0.0) continue;
    if (d == 0.0 || i == 0) {
      curve.eer = p.fpr;
    } else {
      const auto& q = curve.points[i - 1];
      const double dq = q.fnr - q.fpr;
      const double alpha = -dq / (d - dq);
      curve.eer = q.fpr + alpha * (p.fpr - q.fpr);
    }
    break;
  }
  return curve;
}

DETCurve det_curve(const TrialSet& trials) { return det_curve(trials.genuine, trials.impostor); }

double equal_error_rate(std::span<const double> genuine, std::span<const double> impostor) {
  return det_curve(genuine, impostor).eer;
}

}  // namespace inverscribe::detection
