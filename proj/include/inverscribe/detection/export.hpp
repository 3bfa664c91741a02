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

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include "inverscribe/detection/det.hpp"

namespace inverscribe::detection {

// "threshold,fpr,fnr" header then one row per operating point; the final
// +inf threshold is written as "inf". Values use 17 significant digits.
void write_det_csv(std::ostream& out, const DETCurve& curve);
void save_det_csv(const std::filesystem::path& path, const DETCurve& curve);

struct Series {
  std::string label;
  std::vector<double> xs;
  std::vector<double> ys;
};

struct ChartOptions {
  std::string title;
  std::string x_label;
  std::string y_label;
  double x_min = 0.0, x_max = 1.0;
  double y_min = 0.0, y_max = 1.0;
  bool auto_range = false;  // fit the axes to the data instead
  int width = 480;
  int height = 360;
};

// Self-contained SVG line chart. Output depends only on the inputs.
std::string render_line_chart(const std::vector<Series>& series, const ChartOptions& options);

// DET plot: FPR on x, FNR on y, one series per curve.
std::string render_det_svg(const std::vector<std::pair<std::string, DETCurve>>& curves, const std::string& title);

}  // namespace inverscribe::detection
