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

// Analytic distribution of the targeted-context size M = max(1, ceil(z * c))
// with z ~ Beta(2, 1), computed by numerically integrating the density, and a
// chi-squared goodness-of-fit test against observed counts.

#include <cmath>
#include <cstddef>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>

namespace testsupport {

// Composite Simpson integration of the Beta(2, 1) density f(z) = 2z on [a, b].
inline double beta21_mass(double a, double b, int intervals = 64) {
  const double h = (b - a) / intervals;
  double s = 0.0;
  for (int i = 0; i <= intervals; ++i) {
    const double z = a + i * h;
    const double w = (i == 0 || i == intervals) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    s += w * 2.0 * z;
  }
  return s * h / 3.0;
}

// P(M = m) for m = 1..c; index 0 unused.
inline std::vector<double> context_size_probabilities(std::size_t c) {
  std::vector<double> p(c + 1, 0.0);
  for (std::size_t m = 1; m <= c; ++m) {
    p[m] = beta21_mass(static_cast<double>(m - 1) / c, static_cast<double>(m) / c);
  }
  return p;
}

// Upper-tail p-value of Pearson's statistic; cells with zero expectation
// are skipped.
inline double chi_squared_p_value(const std::vector<std::size_t>& observed, const std::vector<double>& probs,
                                  std::size_t draws) {
  double stat = 0.0;
  int cells = 0;
  for (std::size_t m = 0; m < probs.size(); ++m) {
    const double expected = probs[m] * static_cast<double>(draws);
    if (expected <= 0.0) continue;
    const double d = static_cast<double>(observed[m]) - expected;
    stat += d * d / expected;
    ++cells;
  }
  if (cells < 2) return 1.0;  // degenerate: a single possible outcome
  boost::math::chi_squared dist(cells - 1);
  return boost::math::cdf(boost::math::complement(dist, stat));
}

}  // namespace testsupport
