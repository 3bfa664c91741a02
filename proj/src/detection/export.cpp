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

#include "inverscribe/detection/export.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "inverscribe/common/error.hpp"

namespace inverscribe::detection {

namespace {

std::string number(double v, int precision = 17) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", precision, v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

}  // namespace

void write_det_csv(std::ostream& out, const DETCurve& curve) {
  out << "threshold,fpr,fnr\n";
  for (const auto& p : curve.points) out << number(p.threshold) << ',' << number(p.fpr) << ',' << number(p.fnr) << '\n';
}

void save_det_csv(const std::filesystem::path& path, const DETCurve& curve) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  write_det_csv(out, curve);
}

std::string render_line_chart(const std::vector<Series>& series, const ChartOptions& options) {
  double x0 = options.x_min, x1 = options.x_max, y0 = options.y_min, y1 = options.y_max;
  if (options.auto_range) {
    x0 = y0 = std::numeric_limits<double>::infinity();
    x1 = y1 = -std::numeric_limits<double>::infinity();
    for (const auto& s : series) {
      for (double x : s.xs) x0 = std::min(x0, x), x1 = std::max(x1, x);
      for (double y : s.ys) y0 = std::min(y0, y), y1 = std::max(y1, y);
    }
    if (!std::isfinite(x0)) x0 = 0, x1 = 1, y0 = 0, y1 = 1;
    if (x1 - x0 < 1e-12) x0 -= 0.5, x1 += 0.5;
    if (y1 - y0 < 1e-12) y0 -= 0.5, y1 += 0.5;
    const double pad = 0.05 * (y1 - y0);
    y0 -= pad;
    y1 += pad;
  }
  const int w = options.width, h = options.height;
  const double left = 56, right = 16, top = 32, bottom = 44;
  const double pw = w - left - right, ph = h - top - bottom;
  auto px = [&](double x) { return left + (std::clamp(x, x0, x1) - x0) / (x1 - x0) * pw; };
  auto py = [&](double y) { return top + ph - (std::clamp(y, y0, y1) - y0) / (y1 - y0) * ph; };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h << "\" viewBox=\"0 0 " << w
      << ' ' << h << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text x=\"" << w / 2 << "\" y=\"18\" text-anchor=\"middle\" font-size=\"13\">" << escape(options.title)
      << "</text>\n";
  svg << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
      << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double fx = x0 + (x1 - x0) * i / 4.0, fy = y0 + (y1 - y0) * i / 4.0;
    svg << "<text x=\"" << number(px(fx), 6) << "\" y=\"" << top + ph + 14 << "\" text-anchor=\"middle\">"
        << number(fx, 3) << "</text>\n";
    svg << "<text x=\"" << left - 4 << "\" y=\"" << number(py(fy) + 4, 6) << "\" text-anchor=\"end\">"
        << number(fy, 3) << "</text>\n";
  }
  svg << "<text x=\"" << left + pw / 2 << "\" y=\"" << h - 8 << "\" text-anchor=\"middle\">"
      << escape(options.x_label) << "</text>\n";
  svg << "<text transform=\"translate(14," << top + ph / 2 << ") rotate(-90)\" text-anchor=\"middle\">"
      << escape(options.y_label) << "</text>\n";
  for (std::size_t s = 0; s < series.size(); ++s) {
    const auto& ser = series[s];
    const char* colour = kPalette[s % std::size(kPalette)];
    svg << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1.5\" points=\"";
    const std::size_t n = std::min(ser.xs.size(), ser.ys.size());
    for (std::size_t i = 0; i < n; ++i) {
      svg << (i ? " " : "") << number(px(ser.xs[i]), 6) << ',' << number(py(ser.ys[i]), 6);
    }
    svg << "\"/>\n";
    svg << "<text x=\"" << left + pw - 4 << "\" y=\"" << top + 14 + 14 * s << "\" text-anchor=\"end\" fill=\""
        << colour << "\">" << escape(ser.label) << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

std::string render_det_svg(const std::vector<std::pair<std::string, DETCurve>>& curves, const std::string& title) {
  std::vector<Series> series;
  for (const auto& [label, curve] : curves) {
    Series s{label + " (EER " + number(curve.eer, 3) + ")", {}, {}};
    for (const auto& p : curve.points) {
      s.xs.push_back(p.fpr);
      s.ys.push_back(p.fnr);
    }
    series.push_back(std::move(s));
  }
  ChartOptions opts;
  opts.title = title;
  opts.x_label = "false positive rate";
  opts.y_label = "false negative rate";
  return render_line_chart(series, opts);
}

}  // namespace inverscribe::detection
