/*
 * Copyright 2026 The vaelime Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef VAELIME_ANALYTIC_H_
#define VAELIME_ANALYTIC_H_

#include <cstddef>
#include <span>

#include "vaelime/linalg.h"

namespace vaelime {

// f(x) = c1 sin(x1) + c2 x2 x3 + c3 x4^2 + sum_{j>=5} b_j x_j
// (1-based feature numbering), with known exact partial derivatives.
struct AnalyticSpec {
  double c1 = 1.0;
  double c2 = 1.0;
  double c3 = 0.5;
  // b_5 .. b_d; its length fixes input_dim = 4 + linear.size().
  Vector linear;

  std::size_t input_dim() const { return 4 + linear.size(); }
  bool is_linear() const { return c1 == 0.0 && c2 == 0.0 && c3 == 0.0; }

  friend bool operator==(const AnalyticSpec&, const AnalyticSpec&) = default;
};

// Default target for `input_dim` features: c = (1, 1, 0.5) and linear
// coefficients cycling through (0.8, -0.6, 0.4, -0.2). Requires input_dim >= 5.
AnalyticSpec DefaultAnalyticSpec(std::size_t input_dim);

// Same linear coefficients, with the nonlinear terms switched off.
AnalyticSpec LinearAnalyticSpec(std::size_t input_dim);

double EvaluateAnalytic(const AnalyticSpec& spec, std::span<const double> x);
Vector AnalyticGradient(const AnalyticSpec& spec, std::span<const double> x);

}  // namespace vaelime

#endif  // VAELIME_ANALYTIC_H_
