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

#ifndef VAELIME_STANDARDIZATION_H_
#define VAELIME_STANDARDIZATION_H_

#include <span>

#include "vaelime/linalg.h"

namespace vaelime {

// Per-feature affine map to zero mean and unit variance. Stds must be > 0.
struct Standardization {
  Vector means;
  Vector stds;

  // Stats of the given columns; a zero std is replaced by 1.
  static Standardization Fit(const Vector& means, const Vector& stds);

  std::size_t dim() const { return means.size(); }
  Vector Apply(std::span<const double> x) const;
  Vector Invert(std::span<const double> z) const;

  friend bool operator==(const Standardization&,
                         const Standardization&) = default;
};

}  // namespace vaelime

#endif  // VAELIME_STANDARDIZATION_H_
