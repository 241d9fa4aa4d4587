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

#include "vaelime/analytic.h"

#include <cmath>
#include <string>

#include "vaelime/errors.h"

namespace vaelime {

namespace {

void CheckInput(const AnalyticSpec& spec, std::span<const double> x) {
  if (x.size() != spec.input_dim()) {
    throw DimensionMismatch("analytic black box expects " +
                            std::to_string(spec.input_dim()) +
                            " features, got " + std::to_string(x.size()));
  }
}

}  // namespace

AnalyticSpec DefaultAnalyticSpec(std::size_t input_dim) {
  if (input_dim < 5) {
    throw ConfigError("analytic target needs at least 5 features, got " +
                      std::to_string(input_dim));
  }
  static constexpr double kCycle[] = {0.8, -0.6, 0.4, -0.2};
  AnalyticSpec spec;
  spec.linear.resize(input_dim - 4);
  for (std::size_t j = 0; j < spec.linear.size(); ++j) {
    spec.linear[j] = kCycle[j % 4];
  }
  return spec;
}

AnalyticSpec LinearAnalyticSpec(std::size_t input_dim) {
  AnalyticSpec spec = DefaultAnalyticSpec(input_dim);
  spec.c1 = spec.c2 = spec.c3 = 0.0;
  return spec;
}

double EvaluateAnalytic(const AnalyticSpec& spec, std::span<const double> x) {
  CheckInput(spec, x);
  double y = spec.c1 * std::sin(x[0]) + spec.c2 * x[1] * x[2] +
             spec.c3 * x[3] * x[3];
  for (std::size_t j = 0; j < spec.linear.size(); ++j) {
    y += spec.linear[j] * x[4 + j];
  }
  return y;
}

Vector AnalyticGradient(const AnalyticSpec& spec, std::span<const double> x) {
  CheckInput(spec, x);
  Vector g(spec.input_dim());
  g[0] = spec.c1 * std::cos(x[0]);
  g[1] = spec.c2 * x[2];
  g[2] = spec.c2 * x[1];
  g[3] = 2.0 * spec.c3 * x[3];
  for (std::size_t j = 0; j < spec.linear.size(); ++j) g[4 + j] = spec.linear[j];
  return g;
}

}  // namespace vaelime
