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

#ifndef VAELIME_SURROGATE_H_
#define VAELIME_SURROGATE_H_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vaelime/blackbox.h"
#include "vaelime/linalg.h"
#include "vaelime/sampler.h"
#include "vaelime/vae.h"

namespace vaelime {

// Local linear model g(x) = intercept + coefficients . x in original feature
// units. The coefficients are the variable importances.
struct LinearSurrogate {
  double intercept = 0.0;
  Vector coefficients;
  double fit_lambda = 0.0;
  double condition_hint = 0.0;

  double Predict(std::span<const double> x) const;
};

struct FidelityReport {
  double local_mse = 0.0;
  double r2 = 0.0;
  double abs_error_at_x = 0.0;
};

struct RankedFeature {
  std::string name;
  std::size_t index = 0;
  double coefficient = 0.0;
};

struct WeightsSummary {
  double min = 0.0;
  double mean = 0.0;
  double max = 0.0;
};

enum class Method { kVaeLime, kLime };

std::string MethodName(Method method);
// Accepts "vae-lime" or "lime"; throws ConfigError otherwise.
Method ParseMethod(const std::string& name);

struct Explanation {
  Method method = Method::kVaeLime;
  std::size_t instance_id = 0;
  LinearSurrogate surrogate;
  // coefficient_j * training std_j, comparable across features.
  Vector standardized_coefficients;
  std::vector<RankedFeature> top_k;
  WeightsSummary weights_summary;
  FidelityReport fidelity;
};

// Weighted ridge fit on the intercept-augmented design. Requires
// N >= d + 2 and at least one positive weight; throws DegenerateSystem.
LinearSurrogate FitSurrogate(const Matrix& samples, std::span<const double> y,
                             std::span<const double> weights, double lambda);

// Unweighted agreement over the samples plus the pointwise error at x_test.
// `outputs` are the black-box predictions on `samples`; `output_at_x` is the
// black-box prediction at x_test.
FidelityReport FidelityFromOutputs(const LinearSurrogate& surrogate,
                                   const Matrix& samples,
                                   std::span<const double> outputs,
                                   std::span<const double> x_test,
                                   double output_at_x);

// Queries the black box on every sample and on x_test.
FidelityReport Fidelity(const LinearSurrogate& surrogate,
                        const BlackBox& blackbox, const Matrix& samples,
                        std::span<const double> x_test);

// Top min(k, d) features by |coefficient|, ties broken by lower index.
std::vector<RankedFeature> RankImportance(
    const LinearSurrogate& surrogate,
    const std::vector<std::string>& feature_names, std::size_t k);

WeightsSummary SummarizeWeights(std::span<const double> weights);

struct ExplainResult {
  Explanation explanation;
  WeightedSampleSet samples;
};

inline constexpr std::size_t kDefaultTopK = 10;

// Full explanation of one instance. `vae` is required for VAE-LIME;
// `feature_stds` are the training stds (LIME perturbation scale and the
// standardized-coefficient view).
ExplainResult ExplainInstance(Method method, const VaeModel* vae,
                              const BlackBox& blackbox,
                              std::span<const double> x_test,
                              std::span<const double> feature_stds,
                              const std::vector<std::string>& feature_names,
                              const ExplainConfig& config,
                              std::size_t instance_id,
                              std::size_t top_k = kDefaultTopK);

// Mean absolute off-diagonal Pearson correlation between columns.
double MeanAbsOffDiagonalCorrelation(const Matrix& samples);

}  // namespace vaelime

#endif  // VAELIME_SURROGATE_H_
