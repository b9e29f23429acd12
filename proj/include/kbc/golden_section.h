// Copyright 2026 The KBC Privacy Lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Golden-section search for the maximum of a unimodal function on [lo, hi].

#ifndef KBC_GOLDEN_SECTION_H_
#define KBC_GOLDEN_SECTION_H_

#include <cmath>
#include <stdexcept>

namespace kbc {

struct GoldenSectionResult {
  double argmax;
  int iterations;
};

// `better(a, b)` returns true when f(a) > f(b). Comparing through a
// difference lets callers evaluate f(a) - f(b) directly, which stays accurate
// near the optimum where f itself is flat to within rounding.
template <typename Better>
GoldenSectionResult golden_section_maximize_by(Better better, double lo,
                                               double hi, double tolerance,
                                               int max_iterations = 500) {
  if (!(hi >= lo)) throw std::invalid_argument("golden section: hi < lo");
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo;
  double b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  int it = 0;
  while (b - a > tolerance && it < max_iterations) {
    if (better(c, d)) {
      b = d;
      d = c;
      c = b - inv_phi * (b - a);
    } else {
      a = c;
      c = d;
      d = a + inv_phi * (b - a);
    }
    ++it;
  }
  return {0.5 * (a + b), it};
}

template <typename F>
GoldenSectionResult golden_section_maximize(F f, double lo, double hi,
                                            double tolerance,
                                            int max_iterations = 500) {
  return golden_section_maximize_by(
      [&f](double a, double b) { return f(a) > f(b); }, lo, hi, tolerance,
      max_iterations);
}

}  // namespace kbc

#endif  // KBC_GOLDEN_SECTION_H_
