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

#include "vaelime/standardization.h"

#include <string>

#include "vaelime/errors.h"

namespace vaelime {

Standardization Standardization::Fit(const Vector& means, const Vector& stds) {
  if (means.size() != stds.size()) {
    throw DimensionMismatch("standardization: means and stds differ in length");
  }
  Standardization s{means, stds};
  for (double& v : s.stds) {
    if (!(v > 1e-12)) v = 1.0;
  }
  return s;
}

Vector Standardization::Apply(std::span<const double> x) const {
  if (x.size() != dim()) {
    throw DimensionMismatch("standardization expects " + std::to_string(dim()) +
                            " features, got " + std::to_string(x.size()));
  }
  Vector z(x.size());
  for (std::size_t j = 0; j < z.size(); ++j) z[j] = (x[j] - means[j]) / stds[j];
  return z;
}

Vector Standardization::Invert(std::span<const double> z) const {
  if (z.size() != dim()) {
    throw DimensionMismatch("standardization expects " + std::to_string(dim()) +
                            " features, got " + std::to_string(z.size()));
  }
  Vector x(z.size());
  for (std::size_t j = 0; j < x.size(); ++j) x[j] = z[j] * stds[j] + means[j];
  return x;
}

}  // namespace vaelime
