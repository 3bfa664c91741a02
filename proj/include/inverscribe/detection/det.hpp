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

#include <span>
#include <string>
#include <vector>

namespace inverscribe::detection {

enum class Protocol { plagiarism, authorship };

// One scored (query, candidate) pairing.
struct Trial {
  std::string query;
  std::string candidate;
  double score = 0.0;
  bool genuine = false;
};

// Score polarity: higher means more similar.
struct TrialSet {
  Protocol protocol = Protocol::plagiarism;
  std::vector<double> genuine;
  std::vector<double> impostor;
  std::vector<Trial> trials;

  void add(Trial trial);
};

struct OperatingPoint {
  double threshold;
  double fpr;  // impostor scores >= threshold
  double fnr;  // genuine scores < threshold
};

struct DETCurve {
  std::vector<OperatingPoint> points;  // ascending threshold, ending at +inf
  double eer = 0.0;
};

// Sweeps every distinct observed score plus a final +inf threshold. The EER is
// read off the first pair of neighbouring points where FNR - FPR turns
// non-negative, interpolating linearly between them.
DETCurve det_curve(std::span<const double> genuine, std::span<const double> impostor);
DETCurve det_curve(const TrialSet& trials);

double equal_error_rate(std::span<const double> genuine, std::span<const double> impostor);

}  // namespace inverscribe::detection
